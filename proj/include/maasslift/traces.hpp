#pragma once
// Twisted traces over classes of binary quadratic forms: CM-value traces for
// negative discriminant products, cycle-integral traces for positive ones,
// the modified traces Tr* built from either route, and the Kloosterman-series
// route for traces of Niebur series.

#include "maasslift/bqf.hpp"
#include "maasslift/harmonic.hpp"
#include "maasslift/numerics.hpp"
#include "maasslift/qseries.hpp"

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace ml {

enum class TraceRoute { cm_values, cycle_integrals, kloosterman_series };

struct TraceSpec {
  i64 d1 = 0;
  i64 d2 = 0;
  int k = 2;
  TraceRoute route = TraceRoute::cm_values;
};

// Point evaluator of an SL2(Z)-invariant function on the upper half-plane,
// tagged with its weight. eval returns the value at tau together with an
// honest truncation estimate under the given budget.
struct Evaluator {
  int twice_weight = 0;
  std::function<EvalReport(std::complex<double>, const NumBudget&)> eval;
};

// F == 1, weight 0
Evaluator constant_evaluator();

// literal q-expansion evaluation, no tau reduction; the estimate is a
// geometric tail bound driven by the horizon and the principal-part depth
Evaluator series_evaluator(const QSeries& f);

// F_m(s; tau), weight 0; wraps niebur_eval
Evaluator niebur_evaluator(i64 m, double s);

// sum of coef * part, all parts of equal weight
Evaluator combine(
    const std::vector<std::pair<std::complex<double>, Evaluator>>& parts);

// Sum over enumerate_classes(d1*d2) of chi(Q) F(tau_Q) / omega_Q.
// Requires d1 d2 < 0, both = 0,1 mod 4.
EvalReport cm_trace(const Evaluator& F, i64 d1, i64 d2,
                    const NumBudget& budget);

// disc^{(1-kappa)/2} * integral of F(tau) Q(tau,1)^{kappa-1} dtau over the
// arc of S_Q from tau0 to g_Q tau0, counterclockwise iff a > 0, where
// 2*kappa = F.twice_weight / 2 (requires twice_weight = 0 mod 4).
// theta0 is the start angle on the circle |tau - center| = radius; the
// result is independent of it. Adaptive Gauss-Legendre along the arc.
EvalReport cycle_integral(const Evaluator& F, const BQForm& q,
                          const NumBudget& budget);
EvalReport cycle_integral(const Evaluator& F, const BQForm& q, double theta0,
                          const NumBudget& budget);

// prefactor * sum over classes of disc delta*d of chi(Q) C(F;Q);
// shintani: -(-1)^k 2^{k-2} / (3 sqrt(pi)); tilde: Gamma((k+1)/2) /
// (2 sqrt(pi) Gamma(k/2)). Requires delta*d > 0 non-square.
enum class CycleVariant { shintani, tilde };
EvalReport cycle_trace(const Evaluator& F, i64 delta, i64 d, int k,
                       CycleVariant variant, const NumBudget& budget);

// Modified trace Tr*_{d1,d2}(M).
// d1 d2 < 0: defined when (-1)^k d1 > 0; the opposite sign pattern is the
//   antisymmetric extension Tr*_{d2,d1} = -Tr*_{d1,d2}. Realized as
//   (-1)^{floor((k+1)/2)} (4pi)^{1-k} |d1|^{(k-1)/2} |d2|^{-k/2} times the
//   cm_trace of the raised holomorphic part, with the raising of each
//   principal-part term q^{-m} realized exactly as (4pi)^{k-1} F_{-m}(k;.).
//   Requires a zero shadow (the principal part then determines M).
// d1 d2 > 0: requires (-1)^k d1 > 0 and (-1)^k d2 > 0. Zero for zero shadow;
//   otherwise (-1)^{floor(1-k/2)} (4pi)^{1-k} |d2|^{(k-1)/2} |d1|^{-k/2}
//   times the plain cycle trace of the shadow over classes of disc d1*d2.
EvalReport modified_trace(const HarmonicModel& m, i64 d1, i64 d2, int k,
                          const NumBudget& budget);

// Trace of the Niebur series F_m(s;.) for d1 d2 < 0 or d1 d2 > 0 non-square
// as a divisor sum of Kloosterman-Bessel series:
//   sum_{n | m} (d2/n) a_n(s),
//   a_n(s) = 2 pi |m|^{s-1/2} |d1 d2|^{1/4} |n|^{-1/2} *
//            sum_{c>0} K_{1/2}(d1, (m/n)^2 d2; c) / (4c) *
//            Bessel_{s-1/2}(pi |m/n| sqrt(|d1 d2|) / c),
// Bessel = I for d1 d2 < 0 and J for d1 d2 > 0. Requires s > 1, m != 0,
// d1, d2 = 0,1 mod 4, d1 d2 non-square, not both negative.
EvalReport kloosterman_trace(i64 m, double s, i64 d1, i64 d2,
                             const NumBudget& budget);

}  // namespace ml
