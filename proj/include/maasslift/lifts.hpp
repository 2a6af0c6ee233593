#pragma once
// Lift operators between integral and half-integral weight: the divisor-sum
// lifts from weight 2-2k models to weight 3/2-k (lower lift) and weight
// k+1/2 (upper lift), the fractional derivative obtained by inverting the
// lower lift and applying the upper one, Shintani lifts of cusp forms and of
// weakly holomorphic forms, the xi/shadow plumbing, the pairing of a weakly
// holomorphic form against a model, and the Hecke eigenform defect check.

#include "maasslift/harmonic.hpp"
#include "maasslift/numerics.hpp"
#include "maasslift/qseries.hpp"
#include "maasslift/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ml {

enum class LiftKind { zd, zD, dd, shintani, shintani_weak };

struct LiftResult {
  LiftKind kind = LiftKind::zd;
  int k = 0;
  i64 d = 0;  // lower-lift discriminant when applicable
  i64 D = 0;  // upper-lift discriminant when applicable
  // exact holomorphic output; in the numeric regime it carries only the
  // principal part and constant (horizon 0)
  std::optional<QSeries> exact;
  // numerically computed holomorphic coefficients, keyed by exponent
  std::map<i64, EvalReport> numeric;
  // nonholomorphic coefficients c^-(n), keyed by the (negative) exponent n
  std::map<i64, EvalReport> nonholo;
  // requested output exponents skipped because delta*d is a square
  std::vector<i64> skipped;
};

// the stored shadow (exact cusp form; zero for weakly holomorphic models)
QSeries xi_image(const HarmonicModel& m);

// c^-(-n) of the model for n >= 1, recovered from the shadow coefficient
// a(n) = (4 pi n)^{2k-1} c^-(-n)
double c_minus_from_shadow(const HarmonicModel& m, i64 n);

// (1/6) sum over n of c^+(n) a_g(-n); g weakly holomorphic of weight 2k.
// Exact; throws HorizonError when a horizon cannot cover a needed pairing.
Rational pairing(const QSeries& g, const HarmonicModel& m);

// Upper lift into weight k+1/2: principal part
//   sum_m c^+(-m) m^{2k-1} sum_{n|m} chi_D(n) n^{-k} q^{-(m/n)^2 |D|};
// positive coefficients exact through the plus-space basis when S_{2k} = 0,
// otherwise numeric through the Kloosterman-Bessel coefficient chain.
// Requires (-1)^k D < 0, D fundamental.
LiftResult zagier_D(const HarmonicModel& m, i64 D, int k, i64 horizon,
                    const NumBudget* budget = nullptr);

// route for the nonholomorphic coefficients of the lower lift when the
// shadow is nonzero: none skips them, cycle uses the raised-model cycle
// trace, shadow_shintani uses the Shintani lift of the shadow
enum class NonholoRoute { none, cycle, shadow_shintani };

// Lower lift into weight 3/2-k: principal part
//   sum_m c^+(-m) sum_{n|m} chi_d(n) n^{k-1} q^{-(m/n)^2 |d|},
// constant (1/2) L_d(1-k) c^+(0). Exact weakly holomorphic output when the
// shadow is zero and S_{2k} = 0; otherwise the exact part carries principal
// and constant only, and c^-(-|delta|) values are produced for
// |delta| <= horizon by the chosen route. Requires (-1)^k d > 0, d
// fundamental.
LiftResult zagier_d(const HarmonicModel& m, i64 d, int k, i64 horizon,
                    NonholoRoute route = NonholoRoute::cycle,
                    const NumBudget* budget = nullptr);

// Lifts at non-fundamental discriminants delta = fund * f^2 via the Hecke
// composition T(f^2) (half-integral side) of the fundamental lift. Exact
// regime only. upper selects between the k+1/2 and 3/2-k lifts.
LiftResult zagier_composite(const HarmonicModel& m, i64 delta, int k,
                            i64 horizon, bool upper);

// The composite upper-lift-after-inverse-lower-lift: the input must be a
// lower-lift image (principal part supported on exponents -|d| m^2); the
// preimage is recovered by the triangular divisor-sum system, then the
// upper lift is applied.
LiftResult fractional_derivative(const LiftResult& g, i64 d, i64 D, int k,
                                 i64 horizon,
                                 const NumBudget* budget = nullptr);

// Shintani lift of an exact cusp form f of weight 2k: coefficient at
// q^{|delta|} is (delta*d)^{(k-1)/2} sum_classes chi(Q) C(f;Q) for each
// requested delta with delta*d > 0; square delta*d lands in skipped.
// Requires (-1)^k d > 0.
LiftResult shintani_cusp(const QSeries& f, i64 d,
                         const std::vector<i64>& deltas,
                         const NumBudget& budget);

// Shintani lift of f in S^!_{2k} (zero constant term): the cuspidal
// component f0 contributes the scaled cusp Shintani lift, the orthogonal
// complement f1 contributes the upper lift of the preimage of f1 under the
// (2k-1)-fold derivative q d/dq. Exact with f0 = 0 when S_{2k} = 0.
LiftResult shintani_weak(const QSeries& f, i64 d, i64 D, int k, i64 horizon,
                         const NumBudget* budget = nullptr);

struct DefectReport {
  QSeries defect;
  bool member = false;  // defect lies in the span of upper lifts
  Rational lambda;
};

// defect = F|T(p^2) - lambda F for the weight k+1/2 plus form F with
// principal part q^{-|D|}. Upper lifts of zero-constant inputs have zero
// constant term and no Cohen-Eisenstein component, so lambda is pinned by
// whichever of those two linear conditions is nondegenerate (hint overrides).
// Membership is decided exactly by matching the defect against the span of
// upper lifts of the integral-weight basis plus the Eisenstein line test.
DefectReport eigenform_defect(const QSeries& F, i64 p,
                              const std::optional<Rational>& lambda_hint = {});

}  // namespace ml
