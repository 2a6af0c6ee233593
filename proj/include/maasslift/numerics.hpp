#pragma once
// Floating-point kernels: Bessel and incomplete-gamma evaluation, exponential
// sums over residues, coefficient series for the indexed Poincare families,
// point evaluation of the weight-0 series, and Petersson norms by quadrature.
// All budgeted results carry an error estimate produced by a doubling test.

#include "maasslift/qseries.hpp"

#include <complex>
#include <vector>

namespace ml {

struct NumBudget {
  i64 kloosterman_c_max = 3000;
  i64 coset_c_max = 40;  // cutoff on |c tau + d| in coset sums
  int series_terms = 200;
  int quad_depth = 48;  // Gauss-Legendre nodes per axis or panel
  double tol = 1e-9;    // absolute
};

struct EvalReport {
  std::complex<double> value{0.0, 0.0};
  double est_error = 0.0;
  NumBudget budget_used;
};

// cylindrical Bessel J_nu, I_nu; nu >= 0, x >= 0
double bessel_J(double nu, double x);
double bessel_I(double nu, double x);

// upper incomplete gamma int_y^inf t^{s-1}e^{-t}dt; y > 0, any real s
double inc_gamma(double s, double y);

// Gauss-Legendre rule on [-1,1]; nodes/weights cached per n
struct QuadRule {
  std::vector<double> nodes, weights;
};
const QuadRule& gauss_legendre(int n);

// coefficient profiles of the harmonic special points: holomorphic_branch has
// e^{-2pi n y} decay for n > 0 and kills n <= 0; decaying_branch keeps n < 0
// alive through an incomplete gamma factor
enum class WhitBranch { holomorphic_branch, decaying_branch };
double whittaker_special(double kappa, i64 n, double y, WhitBranch branch);

// exponential sum over residues v mod 4c coprime to 4c, with quadratic-symbol
// and eighth-root-of-unity weights fixed by the half-integral weight kappa
std::complex<double> kloosterman_half(double kappa, i64 m, i64 n, i64 c);
// the same sum for many n sharing one pass over v; ns need not be sorted
std::vector<std::complex<double>> kloosterman_half_row(
    double kappa, i64 m, const std::vector<i64>& ns, i64 c);

// weight-kappa coefficient series: sum over c of kloosterman_half(m,n;c)
// against an I- or J-Bessel kernel (sign of mn selects), scaled 2 pi times a
// fourth-root-of-unity sign; n = 0 uses the closed power term. The series is
// evaluated literally for any m != 0; it carries Fourier-coefficient meaning
// for the index signs produced by the lift families.
EvalReport poincare_coeff_half(i64 m, double kappa, double s, i64 n,
                               const NumBudget& budget);
std::vector<EvalReport> poincare_coeff_half_row(i64 m, double kappa, double s,
                                                const std::vector<i64>& ns,
                                                const NumBudget& budget);

// weight-0 point evaluation: seed 2 pi |m|^{s-1/2} y^{1/2} I_{s-1/2}(2pi|m|y)
// times e^{2 pi i m x}, summed over coprime bottom rows with |c tau + d|
// bounded by coset_c_max; tau is moved to the standard fundamental domain
// first. Requires s > 1.
EvalReport niebur_eval(i64 m, double s, std::complex<double> tau,
                       const NumBudget& budget);

// n-th coefficient of the classical cuspidal family of even weight two_k,
// leading index m: (n/m)^{(two_k-1)/2} (delta_{mn} + 2 pi (-1)^{two_k/2}
// sum_c S(m,n;c)/c J_{two_k-1}(4 pi sqrt(mn)/c)); two_k >= 12, m, n >= 1
double poincare_coeff_integral(i64 m, int two_k, i64 n);

// square Petersson norm of an exact cusp expansion over the level-1
// fundamental domain: exact Fourier-orthogonal strip above y = 1 plus
// Gauss-Legendre quadrature of the two corner pieces below it
EvalReport petersson_norm_sq(const QSeries& f, const NumBudget& budget);

// move tau into |x| <= 1/2, |tau| >= 1 by unimodular steps
std::complex<double> reduce_to_fundamental_domain(std::complex<double> tau);

}  // namespace ml
