#pragma once
// Sparse Laurent q-expansions over Q with a known-coefficient horizon.
//
// Invariants: coeffs holds exactly the nonzero coefficients at exponents
// n <= horizon; every coefficient at n <= horizon is determined. Reading past
// the horizon throws HorizonError. twice_weight keeps half-integral weights
// integral (weight = twice_weight / 2); the plus flag is the support
// condition (-1)^{(tw-1)/2} n == 0, 1 (mod 4) for odd twice_weight on
// Gamma0(4) and is recomputed from the support after every operation.

#include "maasslift/rational.hpp"

#include <map>
#include <stdexcept>

namespace ml {

enum class Level { sl2z, gamma0_4 };

struct HorizonError : std::runtime_error {
  explicit HorizonError(const std::string& what) : std::runtime_error(what) {}
};

class QSeries {
 public:
  int twice_weight = 0;
  Level level = Level::sl2z;
  bool plus = false;
  i64 horizon = 0;
  std::map<i64, Rational> coeffs;

  static QSeries zero(int twice_weight, Level level, i64 horizon);

  Rational coeff(i64 n) const;
  void set_coeff(i64 n, const Rational& value);

  bool is_zero() const { return coeffs.empty(); }
  // horizon + 1 for the zero series (no support at or below the horizon)
  i64 valuation() const;

  QSeries truncated(i64 new_horizon) const;
  QSeries promoted(Level to) const;

  // drops explicit zeros, recomputes the plus flag
  void normalize();
};

QSeries add(const QSeries& a, const QSeries& b);
QSeries sub(const QSeries& a, const QSeries& b);
QSeries scale(const QSeries& a, const Rational& s);
QSeries mul(const QSeries& a, const QSeries& b);
QSeries inverse(const QSeries& a);
QSeries power(const QSeries& a, int e);

// f(tau) -> f(4 tau); horizon 4h + 3, sl2z input acquires the gamma0_4 tag
QSeries dilate4(const QSeries& a);

// (q d/dq)^j; raises twice_weight by 4j
QSeries d_power(const QSeries& a, unsigned j);

inline QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b); }
inline QSeries operator-(const QSeries& a, const QSeries& b) { return sub(a, b); }
inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }
inline QSeries operator*(const Rational& s, const QSeries& a) { return scale(a, s); }
QSeries operator-(const QSeries& a);

// support condition (-1)^{(tw-1)/2} n == 0, 1 (mod 4) for odd tw
bool plus_supported(int twice_weight, i64 n);

// --- generators ---

// theta = 1 + 2 sum q^{n^2}; weight 1/2 on Gamma0(4), plus space
QSeries theta(i64 horizon);

// F = sum_{n >= 1 odd} sigma_1(n) q^n; weight 2 on Gamma0(4)
QSeries level4_weight2(i64 horizon);

// normalized E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n for even weight
// w >= 4; the result carries twice_weight = 2w
QSeries eisenstein(int w, i64 horizon);

QSeries delta_cusp(i64 horizon);

QSeries j_invariant(i64 horizon);

}  // namespace ml
