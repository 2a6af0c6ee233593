#include "maasslift/qseries.hpp"

#include "maasslift/arith.hpp"

#include <mutex>
#include <vector>

namespace ml {

bool plus_supported(int tw, i64 n) {
  int k = (tw - 1) / 2;
  i64 m = (k % 2 == 0) ? n : -n;
  i64 r = ((m % 4) + 4) % 4;
  return r == 0 || r == 1;
}

QSeries QSeries::zero(int twice_weight, Level level, i64 horizon) {
  QSeries out;
  out.twice_weight = twice_weight;
  out.level = level;
  out.horizon = horizon;
  return out;
}

Rational QSeries::coeff(i64 n) const {
  if (n > horizon)
    throw HorizonError("coefficient " + std::to_string(n) +
                       " past horizon " + std::to_string(horizon));
  auto it = coeffs.find(n);
  return it == coeffs.end() ? make_rational(0) : it->second;
}

void QSeries::set_coeff(i64 n, const Rational& value) {
  if (n > horizon)
    throw HorizonError("set past horizon " + std::to_string(horizon));
  if (value == 0)
    coeffs.erase(n);
  else
    coeffs[n] = value;
}

i64 QSeries::valuation() const {
  return coeffs.empty() ? horizon + 1 : coeffs.begin()->first;
}

QSeries QSeries::truncated(i64 new_horizon) const {
  if (new_horizon > horizon)
    throw HorizonError("cannot extend horizon by truncation");
  QSeries out = zero(twice_weight, level, new_horizon);
  for (auto& [n, c] : coeffs) {
    if (n > new_horizon) break;
    out.coeffs[n] = c;
  }
  out.normalize();
  return out;
}

QSeries QSeries::promoted(Level to) const {
  if (to == level) return *this;
  if (level == Level::gamma0_4)
    throw std::domain_error("cannot promote away from gamma0_4");
  QSeries out = *this;
  out.level = to;
  out.normalize();
  return out;
}

void QSeries::normalize() {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->second == 0)
      it = coeffs.erase(it);
    else
      ++it;
  }
  if (level == Level::gamma0_4 && twice_weight % 2 != 0) {
    plus = true;
    for (auto& [n, c] : coeffs)
      if (!plus_supported(twice_weight, n)) {
        plus = false;
        break;
      }
  } else {
    plus = false;
  }
}

namespace {

void check_compatible(const QSeries& a, const QSeries& b, bool same_weight) {
  if (a.level != b.level)
    throw std::invalid_argument("level mismatch; promote first");
  if (same_weight && a.twice_weight != b.twice_weight)
    throw std::invalid_argument("weight mismatch in addition");
}

}  // namespace

QSeries add(const QSeries& a, const QSeries& b) {
  check_compatible(a, b, true);
  QSeries out = QSeries::zero(a.twice_weight, a.level,
                              std::min(a.horizon, b.horizon));
  for (auto& [n, c] : a.coeffs) {
    if (n > out.horizon) break;
    out.coeffs[n] = c;
  }
  for (auto& [n, c] : b.coeffs) {
    if (n > out.horizon) break;
    auto [it, fresh] = out.coeffs.try_emplace(n, c);
    if (!fresh) it->second += c;
  }
  out.normalize();
  return out;
}

QSeries sub(const QSeries& a, const QSeries& b) {
  return add(a, scale(b, make_rational(-1)));
}

QSeries scale(const QSeries& a, const Rational& s) {
  QSeries out = QSeries::zero(a.twice_weight, a.level, a.horizon);
  if (s != 0)
    for (auto& [n, c] : a.coeffs) out.coeffs[n] = c * s;
  out.normalize();
  return out;
}

QSeries operator-(const QSeries& a) {
  return scale(a, make_rational(-1));
}

QSeries mul(const QSeries& a, const QSeries& b) {
  check_compatible(a, b, false);
  i64 va = a.valuation(), vb = b.valuation();
  i64 h = std::min(a.horizon + vb, b.horizon + va);
  QSeries out = QSeries::zero(a.twice_weight + b.twice_weight, a.level, h);
  if (a.is_zero() || b.is_zero()) return out;
  i64 base = va + vb;
  if (h < base) return out;
  std::vector<Rational> acc(static_cast<size_t>(h - base + 1),
                            make_rational(0));
  for (auto& [i, ca] : a.coeffs) {
    i64 jmax = h - i;
    for (auto& [j, cb] : b.coeffs) {
      if (j > jmax) break;
      acc[static_cast<size_t>(i + j - base)] += ca * cb;
    }
  }
  for (i64 n = base; n <= h; ++n) {
    Rational& c = acc[static_cast<size_t>(n - base)];
    if (c != 0) out.coeffs[n] = c;
  }
  out.normalize();
  return out;
}

QSeries inverse(const QSeries& a) {
  if (a.is_zero()) throw std::domain_error("inverse of the zero series");
  i64 v = a.valuation();
  i64 len = a.horizon - v;  // shifted coefficients 0..len are known
  if (len < 0) throw std::domain_error("empty window");
  std::vector<Rational> f(static_cast<size_t>(len + 1), make_rational(0));
  for (auto& [n, c] : a.coeffs) f[static_cast<size_t>(n - v)] = c;
  std::vector<Rational> g(static_cast<size_t>(len + 1), make_rational(0));
  g[0] = make_rational(1) / f[0];
  for (i64 m = 1; m <= len; ++m) {
    Rational acc = make_rational(0);
    for (i64 i = 1; i <= m; ++i)
      if (f[static_cast<size_t>(i)] != 0)
        acc += f[static_cast<size_t>(i)] * g[static_cast<size_t>(m - i)];
    g[static_cast<size_t>(m)] = -acc / f[0];
  }
  QSeries out = QSeries::zero(-a.twice_weight, a.level, a.horizon - 2 * v);
  for (i64 m = 0; m <= len; ++m)
    if (g[static_cast<size_t>(m)] != 0) out.coeffs[m - v] = g[static_cast<size_t>(m)];
  out.normalize();
  return out;
}

QSeries power(const QSeries& a, int e) {
  if (e < 0) return power(inverse(a), -e);
  if (e == 0) {
    QSeries out = QSeries::zero(0, a.level, a.horizon);
    out.coeffs[0] = make_rational(1);
    out.normalize();
    return out;
  }
  QSeries result;
  bool have = false;
  QSeries base = a;
  int rem = e;
  while (rem > 0) {
    if (rem & 1) {
      result = have ? mul(result, base) : base;
      have = true;
    }
    rem >>= 1;
    if (rem > 0) base = mul(base, base);
  }
  return result;
}

QSeries dilate4(const QSeries& a) {
  QSeries out = QSeries::zero(a.twice_weight, Level::gamma0_4,
                              4 * a.horizon + 3);
  for (auto& [n, c] : a.coeffs) out.coeffs[4 * n] = c;
  out.normalize();
  return out;
}

QSeries d_power(const QSeries& a, unsigned j) {
  if (j == 0) return a;
  // q d/dq raises the weight by 2 per application (Bol: weight 2-2k -> 2k
  // under j = 2k-1); the plus-support pattern is invariant mod 4 in tw
  QSeries out =
      QSeries::zero(a.twice_weight + 4 * static_cast<int>(j), a.level, a.horizon);
  for (auto& [n, c] : a.coeffs) {
    if (n == 0) continue;
    out.coeffs[n] = c * Rational(int_pow(Int(n), j));
  }
  out.normalize();
  return out;
}

// --- generators ---

namespace {

// grow-only cache keyed by generator identity
struct SeriesCache {
  std::mutex mu;
  QSeries value;
  bool filled = false;

  QSeries get(i64 horizon, QSeries (*build)(i64)) {
    std::lock_guard<std::mutex> lock(mu);
    if (!filled || value.horizon < horizon) {
      i64 target = horizon;
      if (filled) target = std::max(horizon, 2 * value.horizon);
      value = build(target);
      filled = true;
    }
    return value.horizon == horizon ? value : value.truncated(horizon);
  }
};

QSeries build_theta(i64 horizon) {
  QSeries out = QSeries::zero(1, Level::gamma0_4, horizon);
  if (horizon >= 0) out.coeffs[0] = make_rational(1);
  for (i64 n = 1; n * n <= horizon; ++n)
    out.coeffs[n * n] = make_rational(2);
  out.normalize();
  return out;
}

QSeries build_level4_weight2(i64 horizon) {
  QSeries out = QSeries::zero(4, Level::gamma0_4, horizon);
  for (i64 n = 1; n <= horizon; n += 2)
    out.coeffs[n] = Rational(divisor_sum(n, 1));
  out.normalize();
  return out;
}

QSeries build_delta(i64 horizon) {
  QSeries e4 = eisenstein(4, horizon);
  QSeries e6 = eisenstein(6, horizon);
  QSeries num = sub(power(e4, 3), power(e6, 2));
  return scale(num, make_rational(1, 1728));
}

}  // namespace

QSeries theta(i64 horizon) {
  static SeriesCache cache;
  return cache.get(horizon, build_theta);
}

QSeries level4_weight2(i64 horizon) {
  static SeriesCache cache;
  return cache.get(horizon, build_level4_weight2);
}

QSeries eisenstein(int tw, i64 horizon) {
  if (tw < 4 || tw % 2 != 0)
    throw std::domain_error("eisenstein needs even twice-weight >= 4");
  static std::mutex mu;
  static std::map<int, QSeries> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(tw);
    if (it != cache.end() && it->second.horizon >= horizon)
      return it->second.horizon == horizon ? it->second
                                           : it->second.truncated(horizon);
  }
  QSeries out = QSeries::zero(2 * tw, Level::sl2z, horizon);
  out.coeffs[0] = make_rational(1);
  Rational c = make_rational(-2 * static_cast<i64>(tw)) / bernoulli(tw);
  for (i64 n = 1; n <= horizon; ++n)
    out.coeffs[n] = c * Rational(divisor_sum(n, tw - 1));
  out.normalize();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(tw);
    if (it == cache.end() || it->second.horizon < horizon) cache[tw] = out;
  }
  return out;
}

QSeries delta_cusp(i64 horizon) {
  static SeriesCache cache;
  return cache.get(horizon, build_delta);
}

QSeries j_invariant(i64 horizon) {
  QSeries e4 = eisenstein(4, horizon + 2);
  QSeries delta = delta_cusp(horizon + 2);
  QSeries out = mul(power(e4, 3), inverse(delta));
  return out.horizon == horizon ? out : out.truncated(horizon);
}

}  // namespace ml
