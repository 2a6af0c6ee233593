#include "maasslift/hecke.hpp"

#include "maasslift/arith.hpp"

#include <set>
#include <stdexcept>

namespace ml {

namespace {

void require_prime(i64 p) {
  if (p < 2) throw std::domain_error("p must be prime");
  auto f = factorize(p);
  if (f.size() != 1 || f[0].second != 1)
    throw std::domain_error("p must be prime");
}

// p^e over the integers or their reciprocals
Rational p_pow(i64 p, i64 e) {
  Int q = int_pow(Int(p), static_cast<unsigned>(e < 0 ? -e : e));
  return e >= 0 ? Rational(q) : make_rational(Int(1), q);
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

Rational coeff_or_zero(const QSeries& f, i64 n) {
  auto it = f.coeffs.find(n);
  return it == f.coeffs.end() ? make_rational(0) : it->second;
}

}  // namespace

QSeries hecke_integral(const QSeries& f, i64 p) {
  if (f.twice_weight % 2 != 0)
    throw std::domain_error("hecke_integral needs integral weight");
  require_prime(p);
  int kappa = f.twice_weight / 2;
  i64 alpha = kappa < 0 ? 1 - kappa : 0;
  Rational pa = p_pow(p, alpha);
  Rational pk = p_pow(p, kappa - 1);
  i64 h = floor_div(f.horizon, p);
  QSeries out = QSeries::zero(f.twice_weight, f.level, h);
  std::set<i64> support;
  for (auto& [i, c] : f.coeffs) {
    if (i % p == 0) support.insert(i / p);
    if (i * p <= h) support.insert(i * p);
  }
  for (i64 n : support) {
    if (n > h) continue;
    Rational v = coeff_or_zero(f, n * p);
    if (n % p == 0) v += pk * coeff_or_zero(f, n / p);
    v *= pa;
    if (v != 0) out.coeffs[n] = v;
  }
  out.normalize();
  return out;
}

QSeries hecke_half(const QSeries& f, i64 p) {
  if (f.twice_weight % 2 == 0)
    throw std::domain_error("hecke_half needs half-integral weight");
  require_prime(p);
  int tw = f.twice_weight;
  int lambda = (tw - 1) / 2;
  i64 two_alpha = tw < 0 ? 2 - tw : 0;
  Rational pa = p_pow(p, two_alpha);
  Rational pl = p_pow(p, lambda - 1);
  Rational pll = p_pow(p, 2 * lambda - 1);
  i64 p2 = p * p;
  i64 h = floor_div(f.horizon, p2);
  QSeries out = QSeries::zero(tw, f.level, h);
  int middle_sign = (lambda % 2 != 0) ? -1 : 1;
  std::set<i64> support;
  for (auto& [i, c] : f.coeffs) {
    if (i % p2 == 0) support.insert(i / p2);
    if (i <= h) support.insert(i);
    if (i * p2 <= h) support.insert(i * p2);
  }
  for (i64 n : support) {
    if (n > h) continue;
    // plus-space input: project the image back to supported exponents.
    // For odd p every term vanishes off-support anyway; at p = 2 the c(4n)
    // term leaks and the projection realizes the plus-space operator.
    if (f.plus && !plus_supported(tw, n)) continue;
    Rational v = coeff_or_zero(f, n * p2);
    int chi = kronecker(middle_sign * n, p);
    if (chi != 0) v += Rational(chi) * pl * coeff_or_zero(f, n);
    if (n % p2 == 0) v += pll * coeff_or_zero(f, n / p2);
    v *= pa;
    if (v != 0) out.coeffs[n] = v;
  }
  out.normalize();
  return out;
}

namespace {

// f|T(p^e) (integral) or f|T(p^{2e}) (half-integral) by the three-term
// recursion T(p^{r+1}) = T(p) T(p^r) - p^{c} T(p^{r-1}) with
// c = 2 alpha + kappa - 1 integral, 4 alpha + 2 lambda - 1 half-integral.
QSeries prime_power(const QSeries& f, i64 p, int e) {
  bool half = f.twice_weight % 2 != 0;
  Rational drop;
  if (half) {
    int tw = f.twice_weight;
    i64 four_alpha = tw < 0 ? 2 * (2 - tw) : 0;
    drop = p_pow(p, four_alpha + tw - 2);
  } else {
    int kappa = f.twice_weight / 2;
    i64 alpha = kappa < 0 ? 1 - kappa : 0;
    drop = p_pow(p, 2 * alpha + kappa - 1);
  }
  QSeries prev = f;
  QSeries cur = half ? hecke_half(f, p) : hecke_integral(f, p);
  for (int r = 1; r < e; ++r) {
    QSeries next = half ? hecke_half(cur, p) : hecke_integral(cur, p);
    next = sub(next, scale(prev.truncated(next.horizon), drop));
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

QSeries hecke_composite(const QSeries& f, i64 m) {
  if (m < 1) throw std::domain_error("hecke index must be positive");
  if (m == 1) return f;
  QSeries out = f;
  for (auto& [p, e] : factorize(m)) out = prime_power(out, p, e);
  return out;
}

}  // namespace ml
