#include "maasslift/arith.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace ml {

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int kronecker(i64 a, i64 n) {
  return kronecker(Int(a), Int(n));
}

namespace {

i64 mod4(i64 d) {
  return ((d % 4) + 4) % 4;
}

bool squarefree(i64 n) {
  if (n < 0) n = -n;
  if (n == 0) return false;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

}  // namespace

bool is_fundamental_discriminant(i64 d) {
  if (d == 1) return true;
  if (d == 0) return false;
  if (mod4(d) == 1) return squarefree(d);
  if (d % 4 != 0) return false;
  i64 m = d / 4;
  i64 r = mod4(m);
  return (r == 2 || r == 3) && squarefree(m);
}

DiscriminantSplit split_discriminant(i64 d) {
  if (d == 0 || (mod4(d) != 0 && mod4(d) != 1))
    throw std::domain_error("not a discriminant");
  i64 ad = d < 0 ? -d : d;
  i64 fmax = 1;
  while ((fmax + 1) * (fmax + 1) <= ad) ++fmax;
  for (i64 f = fmax; f >= 1; --f) {
    if (ad % (f * f) != 0) continue;
    i64 d0 = d / (f * f);
    if (is_fundamental_discriminant(d0)) return {d0, f};
  }
  throw std::domain_error("no fundamental part");  // unreachable for valid d
}

Rational bernoulli(unsigned n) {
  static std::vector<Rational> cache{make_rational(1), make_rational(-1, 2)};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) {
    unsigned m = static_cast<unsigned>(cache.size());
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    Rational acc = make_rational(0);
    for (unsigned j = 0; j < m; ++j)
      acc += Rational(binomial(m + 1, j)) * cache[j];
    cache.push_back(-acc / Rational(binomial(m + 1, m)));
  }
  return cache[n];
}

Rational bernoulli_poly(unsigned n, const Rational& x) {
  Rational acc = make_rational(0);
  std::vector<Rational> pow_x(n + 1);
  pow_x[0] = make_rational(1);
  for (unsigned e = 1; e <= n; ++e) pow_x[e] = pow_x[e - 1] * x;
  for (unsigned j = 0; j <= n; ++j)
    acc += Rational(binomial(n, j)) * bernoulli(j) * pow_x[n - j];
  return acc;
}

Rational bernoulli_chi(unsigned n, i64 d) {
  if (!is_fundamental_discriminant(d))
    throw std::domain_error("bernoulli_chi needs a fundamental discriminant");
  i64 f = d < 0 ? -d : d;
  Rational acc = make_rational(0);
  for (i64 a = 1; a <= f; ++a) {
    int chi = kronecker(d, a);
    if (chi == 0) continue;
    acc += Rational(chi) * bernoulli_poly(n, make_rational(a, f));
  }
  Rational scale(int_pow(Int(f), n >= 1 ? n - 1 : 0));
  if (n == 0) scale = make_rational(1, f);
  return acc * scale;
}

Rational l_value_neg(i64 d, unsigned k) {
  if (k == 0) throw std::domain_error("l_value_neg needs k >= 1");
  return -bernoulli_chi(k, d) / Rational(static_cast<long>(k));
}

std::vector<i64> divisors(i64 n) {
  if (n < 1) throw std::domain_error("divisors of nonpositive n");
  std::vector<i64> out;
  for (i64 t = 1; t * t <= n; ++t) {
    if (n % t != 0) continue;
    out.push_back(t);
    if (t != n / t) out.push_back(n / t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Int divisor_sum(i64 n, unsigned v) {
  Int acc = 0;
  for (i64 t : divisors(n)) acc += int_pow(t, v);
  return acc;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 1) throw std::domain_error("factorize needs n >= 1");
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int moebius(i64 n) {
  auto fac = factorize(n);
  for (auto& [p, e] : fac)
    if (e > 1) return 0;
  return fac.size() % 2 == 0 ? 1 : -1;
}

int eps_exponent(i64 v) {
  i64 r = ((v % 4) + 4) % 4;
  if (r == 1) return 0;
  if (r == 3) return 1;
  throw std::domain_error("eps_exponent needs odd v");
}

}  // namespace ml
