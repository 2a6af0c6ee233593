#include "doctest.h"

#include "maasslift/arith.hpp"
#include "maasslift/bases.hpp"
#include "maasslift/hecke.hpp"
#include "maasslift/lifts.hpp"
#include "maasslift/qseries.hpp"

#include <cmath>
#include <complex>

using namespace ml;

namespace {

HarmonicModel model_from(const QSeries& holo, int k) {
  HarmonicModel m;
  m.k = k;
  m.twice_weight = 2 * (2 - 2 * k);
  m.holo_part = holo;
  m.shadow = QSeries::zero(4 * k, Level::sl2z, std::max<i64>(holo.horizon, 1));
  return m;
}

bool same_through(const QSeries& a, const QSeries& b, i64 h) {
  QSeries diff = a.truncated(h) - b.truncated(h);
  return diff.is_zero();
}

}  // namespace

TEST_CASE("lower lift: principal part, constant term") {
  HarmonicModel m1 = poincare_model(2, 1, 40);
  LiftResult z = zagier_d(m1, 5, 2, 40);
  REQUIRE(z.exact.has_value());
  CHECK(z.exact->twice_weight == -1);
  CHECK(z.exact->coeff(-5) == Rational(1));
  CHECK(z.exact->coeff(0) == Rational(48));
  // the two constant-term formulas agree with the constructed value
  Rational via_l = Rational(1, 2) * l_value_neg(5, 2) * m1.holo_part.coeff(0);
  Rational via_sigma = -l_value_neg(5, 2) / l_value_neg(1, 4) *
                       Rational(divisor_sum(1, 3));
  CHECK(via_l == Rational(48));
  CHECK(via_sigma == Rational(48));

  HarmonicModel m4 = poincare_model(2, 4, 90);
  LiftResult z4 = zagier_d(m4, 5, 2, 20);
  CHECK(z4.exact->coeff(-80) == Rational(1));
  CHECK(z4.exact->coeff(-20) == Rational(-2));
  CHECK(z4.exact->coeff(-5) == Rational(4));
  CHECK(z4.exact->coeff(0) == Rational(48 * 73));

  // k = 3 instance: both constant-term formulas again
  HarmonicModel n1 = poincare_model(3, 1, 40);
  LiftResult w = zagier_d(n1, -3, 3, 20);
  Rational c0 = Rational(1, 2) * l_value_neg(-3, 3) * n1.holo_part.coeff(0);
  Rational c0s = -l_value_neg(-3, 3) / l_value_neg(1, 6) *
                 Rational(divisor_sum(1, 5));
  CHECK(w.exact->coeff(0) == c0);
  CHECK(c0 == c0s);
}

TEST_CASE("upper lift matches the plus-space dual form") {
  HarmonicModel m1 = poincare_model(2, 1, 40);
  LiftResult z = zagier_D(m1, -4, 2, 30);
  REQUIRE(z.exact.has_value());
  PrincipalPart pp;
  pp[-4] = Rational(1);
  QSeries want = weakly_holo_plus_basis(5, pp, 30);
  CHECK(same_through(*z.exact, want, 30));
  CHECK(z.exact->coeff(1) == Rational(-108));
  CHECK(z.exact->coeff(5) == Rational(-656800));

  // principal part of the upper lift of a deeper model
  HarmonicModel m2 = poincare_model(2, 2, 90);
  LiftResult z2 = zagier_D(m2, -4, 2, 10);
  // m = 2, divisors 1 and 2: chi_{-4}(2) = 0, so only q^{-16} survives
  CHECK(z2.exact->coeff(-16) == Rational(8));
  CHECK(z2.exact->coeff(-4) == Rational(0));
}

TEST_CASE("duality between the lower and upper lifts") {
  struct Pair {
    int k;
    i64 d, D;
  };
  const Pair pairs[] = {{2, 5, -4}, {2, 8, -3}, {3, -3, 5}, {5, -4, 5}};
  for (const auto& pr : pairs) {
    HarmonicModel m = poincare_model(pr.k, 1, 200);
    i64 ad = std::llabs(pr.d), aD = std::llabs(pr.D);
    Rational a = zagier_d(m, pr.d, pr.k, aD + 1).exact->coeff(aD);
    Rational c = zagier_D(m, pr.D, pr.k, ad + 1).exact->coeff(ad);
    CAPTURE(pr.k);
    CAPTURE(pr.d);
    CAPTURE(pr.D);
    CHECK(a + c == Rational(0));
  }
}

TEST_CASE("pairing vanishes on weakly holomorphic models") {
  // equivalent to the integral-weight coefficient duality
  for (i64 j = 1; j <= 3; ++j) {
    QSeries g = weakly_holo_integral_dual(4, j, 40);
    for (i64 m = 1; m <= 3; ++m) {
      HarmonicModel mm = poincare_model(2, m, 40);
      CHECK(pairing(g, mm) == Rational(0));
    }
  }
  // bilinearity on a synthetic model with a positive-side coefficient
  QSeries h = QSeries::zero(-4, Level::sl2z, 5);
  h.set_coeff(-1, Rational(1));
  h.set_coeff(2, Rational(7));
  HarmonicModel hm = model_from(h, 2);
  QSeries g1 = weakly_holo_integral_dual(4, 1, 10);
  QSeries g2 = weakly_holo_integral_dual(4, 2, 10);
  Rational lhs = pairing(g1 + g2, hm);
  CHECK(lhs == pairing(g1, hm) + pairing(g2, hm));
  // only n = 2 and n = -1 contribute to {g_2, h}
  Rational direct = (Rational(7) * g2.coeff(-2) + Rational(1) * g2.coeff(1)) /
                    Rational(6);
  CHECK(pairing(g2, hm) == direct);
  CHECK(g2.coeff(-2) == Rational(1));
}

TEST_CASE("xi image and shadow coefficient scaling") {
  HarmonicModel m1 = poincare_model(2, 1, 20);
  CHECK(xi_image(m1).is_zero());

  HarmonicModel md;
  md.k = 6;
  md.twice_weight = -20;
  md.holo_part = QSeries::zero(-20, Level::sl2z, 5);
  md.holo_part.set_coeff(-1, Rational(1));
  md.shadow = delta_cusp(10);
  CHECK(!xi_image(md).is_zero());
  double c1 = c_minus_from_shadow(md, 1);
  double want = 1.0 / std::pow(4.0 * 3.141592653589793, 11.0);
  CHECK(std::abs(c1 - want) < 1e-18);
}

TEST_CASE("fractional derivative inverts the lower lift") {
  HarmonicModel m1 = poincare_model(2, 1, 60);
  LiftResult G = zagier_d(m1, 5, 2, 60);
  LiftResult dd = fractional_derivative(G, 5, -4, 2, 20);
  LiftResult direct = zagier_D(m1, -4, 2, 20);
  CHECK(same_through(*dd.exact, *direct.exact, 20));
  CHECK(dd.kind == LiftKind::dd);

  // a two-term model: F_1 + 2 F_2
  QSeries combo = weakly_holo_integral_basis(-2, 1, 60) +
                  Rational(2) * weakly_holo_integral_basis(-2, 2, 60);
  HarmonicModel mc = model_from(combo, 2);
  LiftResult Gc = zagier_d(mc, 5, 2, 60);
  LiftResult ddc = fractional_derivative(Gc, 5, -4, 2, 15);
  LiftResult directc = zagier_D(mc, -4, 2, 15);
  CHECK(same_through(*ddc.exact, *directc.exact, 15));

  // principal exponent not of the form -|d| j^2
  LiftResult bogus;
  QSeries bad = QSeries::zero(-1, Level::gamma0_4, 5);
  bad.set_coeff(-7, Rational(1));
  bad.normalize();
  bogus.exact = bad;
  CHECK_THROWS_AS(fractional_derivative(bogus, 5, -4, 2, 5), std::domain_error);
}

TEST_CASE("weak Shintani lift in the exact regime") {
  QSeries F1 = weakly_holo_integral_basis(-2, 1, 40);
  QSeries f = d_power(F1, 3);
  CHECK(f.twice_weight == 8);
  CHECK(f.coeff(0) == Rational(0));
  LiftResult sw = shintani_weak(f, 5, -4, 2, 20);
  LiftResult direct = zagier_D(poincare_model(2, 1, 40), -4, 2, 20);
  CHECK(same_through(*sw.exact, *direct.exact, 20));

  // the dual-basis input picks up a sign: its derivative preimage is -F_1
  QSeries g1 = weakly_holo_integral_dual(4, 1, 40);
  LiftResult swg = shintani_weak(g1, 5, -4, 2, 20);
  CHECK(same_through(*swg.exact, Rational(-1) * (*direct.exact), 20));
  // consistent with the derivative identity itself
  CHECK(same_through(f, Rational(-1) * g1, 39));

  CHECK_THROWS_AS(shintani_weak(eisenstein(4, 20), 5, -4, 2, 10),
                  std::domain_error);
}

TEST_CASE("Hecke equivariance of the lower lift") {
  QSeries F1 = weakly_holo_integral_basis(-2, 1, 90);
  QSeries F1T2 = hecke_integral(F1, 2);
  HarmonicModel mt = model_from(F1T2, 2);
  LiftResult lhs = zagier_d(mt, 5, 2, 20);
  LiftResult base = zagier_d(model_from(F1, 2), 5, 2, 90);
  QSeries rhs = hecke_half(*base.exact, 2);
  CHECK(same_through(*lhs.exact, rhs, 20));
}

TEST_CASE("composite-discriminant lift agrees with Hecke composition") {
  QSeries F1 = weakly_holo_integral_basis(-2, 1, 90);
  HarmonicModel m1 = model_from(F1, 2);
  LiftResult comp = zagier_composite(m1, 20, 2, 10, false);
  CHECK(comp.d == 20);
  QSeries F1T2 = hecke_integral(F1, 2);
  LiftResult other = zagier_d(model_from(F1T2, 2), 5, 2, 10);
  CHECK(same_through(*comp.exact, *other.exact, 10));
}

TEST_CASE("eigenform defect finds the Eisenstein eigenvalues") {
  HarmonicModel m1 = poincare_model(2, 1, 140);
  LiftResult z = zagier_D(m1, -4, 2, 140);
  const QSeries& F = *z.exact;

  DefectReport r2 = eigenform_defect(F, 2);
  CHECK(r2.lambda == Rational(9));
  CHECK(!r2.defect.is_zero());
  CHECK(r2.member);

  DefectReport r3 = eigenform_defect(F, 3);
  CHECK(r3.lambda == Rational(28));
  CHECK(r3.member);

  // corrupting one coefficient breaks membership
  QSeries Fbad = F;
  Fbad.set_coeff(4, F.coeff(4) + Rational(1));
  DefectReport rb = eigenform_defect(Fbad, 2);
  CHECK(!rb.member);

  // adding the Cohen eigenseries leaves the eigenvalue and defect alone
  QSeries H = cohen_eisenstein(2, 60);
  QSeries FH = F.truncated(60) + Rational(3) * H.truncated(60);
  DefectReport rh = eigenform_defect(FH, 2);
  CHECK(rh.lambda == Rational(9));
  CHECK(rh.member);
}

TEST_CASE("numeric regime: upper lift coefficients carry error bars") {
  // weight 13/2 output; coefficients are Kloosterman-Bessel sums
  QSeries holo = QSeries::zero(-20, Level::sl2z, 1);
  holo.set_coeff(-1, Rational(1));
  HarmonicModel m = model_from(holo, 6);
  NumBudget b;
  b.kloosterman_c_max = 1200;
  LiftResult z = zagier_D(m, -4, 6, 5, &b);
  CHECK(z.exact->coeff(-4) == Rational(1));
  CHECK(z.exact->horizon == 0);
  REQUIRE(z.numeric.count(1) == 1);
  REQUIRE(z.numeric.count(4) == 1);
  const EvalReport& r1 = z.numeric.at(1);
  CHECK(std::isfinite(r1.value.real()));
  CHECK(std::abs(r1.value.imag()) < 1e-3 * std::abs(r1.value.real()) + 1e-6);
  CHECK(r1.est_error < std::abs(r1.value.real()));
}

TEST_CASE("numeric regime: lower lift nonholomorphic coefficients") {
  QSeries holo = QSeries::zero(-20, Level::sl2z, 1);
  holo.set_coeff(-1, Rational(1));
  HarmonicModel m = model_from(holo, 6);
  NumBudget b;
  b.coset_c_max = 14;
  b.quad_depth = 24;
  b.tol = 1e-7;
  LiftResult z = zagier_d(m, 1, 6, 5, NonholoRoute::cycle, &b);
  CHECK(z.exact->coeff(-1) == Rational(1));
  // squares 1 and 4 are skipped, delta = 5 computed
  CHECK(z.skipped.size() == 2);
  REQUIRE(z.nonholo.count(-5) == 1);
  const EvalReport& r = z.nonholo.at(-5);
  CHECK(std::isfinite(r.value.real()));
  CHECK(r.value.real() != 0.0);
  CHECK(std::abs(r.value.imag()) < 10 * r.est_error + 1e-9);

  // shadow route on a shadow-only model
  QSeries zeroholo = QSeries::zero(-20, Level::sl2z, 1);
  HarmonicModel ms = model_from(zeroholo, 6);
  ms.shadow = delta_cusp(40);
  LiftResult zs =
      zagier_d(ms, 1, 6, 5, NonholoRoute::shadow_shintani, &b);
  REQUIRE(zs.nonholo.count(-5) == 1);
  CHECK(std::isfinite(zs.nonholo.at(-5).value.real()));
  CHECK(zs.nonholo.at(-5).value.real() != 0.0);
}

TEST_CASE("Shintani lift of the weight-12 cusp form") {
  NumBudget b;
  b.coset_c_max = 14;
  b.quad_depth = 24;
  b.tol = 1e-7;
  QSeries dlt = delta_cusp(40);
  LiftResult s = shintani_cusp(dlt, 1, {5, 4}, b);
  CHECK(s.skipped.size() == 1);
  CHECK(s.skipped[0] == 4);
  REQUIRE(s.numeric.count(5) == 1);
  const EvalReport& r5 = s.numeric.at(5);
  CHECK(std::isfinite(r5.value.real()));
  CHECK(std::abs(r5.value.imag()) < 10 * r5.est_error + 1e-9);

  LiftResult s2 = shintani_cusp(Rational(2) * dlt, 1, {5}, b);
  CHECK(std::abs(s2.numeric.at(5).value.real() - 2 * r5.value.real()) <
        4 * (s2.numeric.at(5).est_error + r5.est_error) + 1e-10);

  CHECK_THROWS_AS(shintani_cusp(dlt, 1, {7}, b), std::invalid_argument);
  CHECK_THROWS_AS(shintani_cusp(dlt, 1, {-3}, b), std::invalid_argument);
}

TEST_CASE("lift parameter validation") {
  HarmonicModel m1 = poincare_model(2, 1, 20);
  CHECK_THROWS_AS(zagier_d(m1, -3, 2, 10), std::domain_error);   // wrong sign
  CHECK_THROWS_AS(zagier_d(m1, 45, 2, 10), std::domain_error);   // not fundamental
  CHECK_THROWS_AS(zagier_D(m1, 5, 2, 10), std::domain_error);    // wrong sign
  CHECK_THROWS_AS(zagier_D(m1, -12, 2, 10), std::domain_error);  // not fundamental
  HarmonicModel m3 = poincare_model(3, 1, 20);
  CHECK_THROWS_AS(zagier_d(m3, 5, 3, 10), std::domain_error);
  CHECK_THROWS_AS(zagier_D(m3, -4, 3, 10), std::domain_error);
}
