#include "maasslift/bases.hpp"

#include "maasslift/arith.hpp"
#include "maasslift/linalg.hpp"

#include <mutex>

namespace ml {

namespace {

// grow-only power caches shared by every basis build
std::mutex power_mu;
std::map<int, QSeries> theta_powers;   // exponent -> theta^e
std::map<int, QSeries> f_powers;       // exponent -> F^e

QSeries theta_power(int e, i64 h) {
  std::lock_guard<std::mutex> lock(power_mu);
  auto it = theta_powers.find(e);
  if (it != theta_powers.end() && it->second.horizon >= h)
    return it->second.horizon == h ? it->second : it->second.truncated(h);
  // rebuild the chain up to e at this horizon
  QSeries th = theta(h);
  QSeries acc = th;
  for (int r = 1; r <= e; ++r) {
    if (r > 1) acc = mul(acc, th);
    auto jt = theta_powers.find(r);
    if (jt == theta_powers.end() || jt->second.horizon < h)
      theta_powers[r] = acc;
  }
  return theta_powers[e];
}

QSeries f_power(int e, i64 h) {
  if (e == 0) {
    QSeries one = QSeries::zero(0, Level::gamma0_4, h);
    one.set_coeff(0, make_rational(1));
    one.normalize();
    return one;
  }
  std::lock_guard<std::mutex> lock(power_mu);
  auto it = f_powers.find(e);
  if (it != f_powers.end() && it->second.horizon >= h)
    return it->second.horizon == h ? it->second : it->second.truncated(h);
  QSeries f = level4_weight2(h);
  QSeries acc = f;
  for (int r = 1; r <= e; ++r) {
    if (r > 1) acc = mul(acc, f);
    auto jt = f_powers.find(r);
    if (jt == f_powers.end() || jt->second.horizon < h)
      f_powers[r] = acc;
  }
  return f_powers[e];
}

// monomial theta^{tw-4j} F^j of weight tw/2
QSeries plus_monomial(int tw, int j, i64 h) {
  QSeries t = theta_power(tw - 4 * j, h);
  if (j == 0) return t;
  return mul(t, f_power(j, h));
}

std::vector<QSeries> build_plus_basis(int tw, i64 horizon) {
  i64 sturm = (tw + 3) / 2 + 8;
  i64 h = std::max(horizon, sturm);
  int jmax = tw / 4;
  std::vector<QSeries> monomials;
  for (int j = 0; j <= jmax; ++j) {
    // F has valuation 1, so products can carry coefficients past h; the row
    // expansion below indexes [0, h] and needs them clamped
    QSeries m = plus_monomial(tw, j, h);
    if (m.horizon > h) m = m.truncated(h);
    monomials.push_back(std::move(m));
  }

  // kernel of: coefficients at non-plus exponents up to the Sturm bound vanish
  std::vector<i64> bad;
  for (i64 n = 0; n <= sturm; ++n)
    if (!plus_supported(tw, n)) bad.push_back(n);
  QMat a(bad.size(), QVec(monomials.size(), make_rational(0)));
  for (size_t r = 0; r < bad.size(); ++r)
    for (size_t c = 0; c < monomials.size(); ++c)
      a[r][c] = monomials[c].coeff(bad[r]);
  auto kernel = kernel_basis(a);

  // expand kernel vectors into coefficient rows over [0, h] and echelonize
  QMat rows(kernel.size(), QVec(static_cast<size_t>(h + 1), make_rational(0)));
  for (size_t i = 0; i < kernel.size(); ++i)
    for (size_t c = 0; c < monomials.size(); ++c) {
      if (kernel[i][c] == 0) continue;
      for (auto& [n, v] : monomials[c].coeffs)
        rows[i][static_cast<size_t>(n)] += kernel[i][c] * v;
    }
  rref(rows);

  std::vector<QSeries> out;
  for (auto& row : rows) {
    QSeries s = QSeries::zero(tw, Level::gamma0_4, h);
    for (i64 n = 0; n <= h; ++n)
      if (row[static_cast<size_t>(n)] != 0)
        s.coeffs[n] = row[static_cast<size_t>(n)];
    s.normalize();
    if (s.is_zero()) continue;
    if (!s.plus)
      throw std::logic_error("plus-space Sturm bound violated");
    out.push_back(std::move(s));
  }
  return out;
}

std::mutex basis_mu;
std::map<int, std::vector<QSeries>> basis_cache;

}  // namespace

std::vector<QSeries> plus_space_basis(int twice_weight, i64 horizon) {
  if (twice_weight < 1 || twice_weight % 2 == 0)
    throw std::domain_error("plus space needs odd twice_weight >= 1");
  std::lock_guard<std::mutex> lock(basis_mu);
  auto it = basis_cache.find(twice_weight);
  if (it == basis_cache.end() ||
      (!it->second.empty() && it->second.front().horizon < horizon) ||
      (it->second.empty())) {
    basis_cache[twice_weight] = build_plus_basis(twice_weight, horizon);
    it = basis_cache.find(twice_weight);
  }
  std::vector<QSeries> out;
  for (auto& s : it->second)
    out.push_back(s.horizon == horizon ? s : s.truncated(horizon));
  return out;
}

QSeries cohen_eisenstein(int k, i64 horizon) {
  if (k < 2) throw std::domain_error("cohen_eisenstein needs k >= 2");
  QSeries out = QSeries::zero(2 * k + 1, Level::gamma0_4, horizon);
  out.coeffs[0] = l_value_neg(1, 2 * k);  // zeta(1-2k)
  int sign = (k % 2 == 0) ? 1 : -1;
  for (i64 n = 1; n <= horizon; ++n) {
    i64 sn = sign * n;
    i64 r4 = ((sn % 4) + 4) % 4;
    if (r4 != 0 && r4 != 1) continue;
    auto [d, f] = split_discriminant(sn);
    Rational acc = make_rational(0);
    for (i64 r : divisors(f)) {
      int mu = moebius(r);
      if (mu == 0) continue;
      int chi = kronecker(d, r);
      if (chi == 0) continue;
      acc += Rational(Int(mu * chi) * int_pow(Int(r), k - 1) *
                      divisor_sum(f / r, 2 * k - 1));
    }
    Rational c = l_value_neg(d, k) * acc;
    if (c != 0) out.coeffs[n] = c;
  }
  out.normalize();
  return out;
}

namespace {

QSeries solve_plus_principal(int tw, const PrincipalPart& principal, i64 horizon) {
  i64 maxpole = -principal.begin()->first;
  i64 j = (maxpole + 3) / 4;
  i64 sturm = (std::abs(tw) + 3) / 4 + 4 * j + 8;
  i64 t = std::max(horizon, sturm);

  std::vector<QSeries> basis = plus_space_basis(tw + 24 * static_cast<int>(j), t + 4 * j);
  i64 hd = (t + 4 * j) / 4 + 2;
  QSeries shift = power(inverse(dilate4(delta_cusp(hd))), static_cast<int>(j));
  std::vector<QSeries> candidates;
  for (auto& b : basis) {
    QSeries c = mul(b, shift);
    if (c.horizon > t) c = c.truncated(t);
    candidates.push_back(std::move(c));
  }

  // rows: plus-supported exponents in [-4j, 0); plus the constant in
  // positive weight (O(q) normalization); constant free in negative weight
  std::vector<i64> rows_n;
  for (i64 n = -4 * j; n < 0; ++n)
    if (plus_supported(tw, n)) rows_n.push_back(n);
  if (tw > 0) rows_n.push_back(0);

  QMat a(rows_n.size(), QVec(candidates.size(), make_rational(0)));
  QVec b(rows_n.size(), make_rational(0));
  for (size_t r = 0; r < rows_n.size(); ++r) {
    for (size_t c = 0; c < candidates.size(); ++c)
      a[r][c] = candidates[c].coeff(rows_n[r]);
    auto it = principal.find(rows_n[r]);
    b[r] = it == principal.end() ? make_rational(0) : it->second;
  }
  auto sol = solve_affine(a, b);
  if (!sol.consistent)
    throw NoFormError("no weakly holomorphic plus form with this principal part");

  QSeries out = QSeries::zero(tw, Level::gamma0_4, t);
  for (size_t c = 0; c < candidates.size(); ++c) {
    if (sol.particular[c] == 0) continue;
    out = add(out, scale(candidates[c], sol.particular[c]));
  }
  if (out.is_zero() && !principal.empty())
    throw std::logic_error("solver returned zero for a nonzero principal part");
  out.normalize();
  if (!out.plus) throw std::logic_error("weakly holomorphic solve left the plus space");
  return out.horizon == horizon ? out : out.truncated(horizon);
}

// Single-pole family f_P = q^{-P} + O(q) (tw > 0) or q^{-P} + O(1) (tw < 0),
// extended four steps of pole depth at a time by multiplying with j(4 tau) and
// clearing the shallower poles against earlier family members.  j(4 tau) has
// weight 0 and support in 4Z, so plus support survives the product.  Valid
// only where the holomorphic plus cusp subspace vanishes; there the family
// member at each depth is unique and matches the affine solve.
bool family_eligible(int tw) {
  if (tw < 0) return true;
  return tw == 5 || tw == 7 || tw == 9 || tw == 11 || tw == 15;
}

struct PlusFamily {
  i64 serve_h = -1;
  i64 max_p = 0;
  std::map<i64, QSeries> rung;  // pole depth -> family member
  QSeries eis;                  // constant-bearing holomorphic element, tw > 0
};
std::mutex family_mu;
std::map<int, PlusFamily> family_cache;

QSeries j4_ladder(i64 h) {
  i64 hd = h / 4 + 2;
  QSeries e43 = power(dilate4(eisenstein(4, hd)), 3);
  return mul(e43, inverse(dilate4(delta_cusp(hd))));
}

void build_family(int tw, PlusFamily& fam, i64 serve_h, i64 max_p) {
  i64 hc = serve_h + max_p + 16;
  fam.rung.clear();
  fam.serve_h = serve_h;
  fam.max_p = max_p;
  QSeries j4 = j4_ladder(hc);
  if (tw > 0) {
    auto basis = plus_space_basis(tw, hc);
    if (basis.size() != 1 || basis.front().coeff(0) == 0)
      throw std::logic_error("plus family needs a one-dimensional holomorphic space");
    fam.eis = basis.front();
  }
  for (i64 p = 1; p <= max_p; ++p) {
    if (!plus_supported(tw, -p)) continue;
    if (p <= 4) {
      PrincipalPart pp;
      pp[-p] = make_rational(1);
      fam.rung[p] = solve_plus_principal(tw, pp, hc);
      continue;
    }
    QSeries cand = mul(fam.rung.at(p - 4), j4);
    std::vector<std::pair<i64, Rational>> shallow;
    for (auto& [n, c] : cand.coeffs) {
      if (n >= 0) break;
      if (n != -p) shallow.push_back({n, c});
    }
    for (auto& [n, c] : shallow) {
      auto it = fam.rung.find(-n);
      if (it == fam.rung.end())
        throw std::logic_error("plus family ladder missing a rung");
      cand = sub(cand, scale(it->second, c));
    }
    if (tw > 0 && cand.coeff(0) != 0)
      cand = sub(cand, scale(fam.eis, cand.coeff(0) / fam.eis.coeff(0)));
    cand.normalize();
    if (cand.coeff(-p) != 1)
      throw std::logic_error("plus family ladder lost its leading coefficient");
    fam.rung[p] = std::move(cand);
  }
}

QSeries family_form(int tw, i64 p, i64 horizon) {
  std::lock_guard<std::mutex> lock(family_mu);
  PlusFamily& fam = family_cache[tw];
  if (fam.serve_h < horizon || fam.max_p < p)
    build_family(tw, fam, std::max(horizon, fam.serve_h), std::max(p, fam.max_p));
  const QSeries& f = fam.rung.at(p);
  if (f.horizon < horizon)
    throw std::logic_error("plus family horizon shortfall");
  return f.horizon == horizon ? f : f.truncated(horizon);
}

// ladder cost grows cubically in the pole depth; past this the negative-weight
// coefficients are read off duality columns instead
constexpr i64 kLadderPoleMax = 160;

std::mutex eis_mu;
std::map<int, QSeries> eis_cache;  // k -> Cohen-Eisenstein series

QSeries eis_column(int k, i64 horizon) {
  std::lock_guard<std::mutex> lock(eis_mu);
  auto it = eis_cache.find(k);
  if (it == eis_cache.end() || it->second.horizon < horizon)
    it = eis_cache.insert_or_assign(k, cohen_eisenstein(k, horizon)).first;
  return it->second;
}

// c_{f_P}(n) = -c_{g_n}(P) where g_n is the dual-weight family member with
// principal part q^{-n} and g_0 the Eisenstein series normalized to constant
// term 1 (grid duality; cross-checked exactly against the ladder in tests)
QSeries deep_pole_columns(int tw, const PrincipalPart& principal, i64 horizon) {
  int k = (3 - tw) / 2;
  i64 maxpole = -principal.begin()->first;
  QSeries out = QSeries::zero(tw, Level::gamma0_4, horizon);
  for (auto& [e, c] : principal)
    if (c != 0 && e <= horizon) out.coeffs[e] = c;
  QSeries H = eis_column(k, maxpole);
  for (i64 n = 0; n <= horizon; ++n) {
    if (!plus_supported(tw, n)) continue;
    Rational acc = make_rational(0);
    for (auto& [e, c] : principal) {
      if (c == 0) continue;
      i64 P = -e;
      Rational col = n == 0 ? H.coeff(P) / H.coeff(0)
                            : family_form(4 - tw, n, maxpole).coeff(P);
      acc -= c * col;
    }
    if (acc != 0) out.coeffs[n] = acc;
  }
  out.normalize();
  if (!out.plus) throw std::logic_error("duality columns left the plus space");
  return out;
}

}  // namespace

QSeries weakly_holo_plus_basis(int twice_weight, const PrincipalPart& principal,
                               i64 horizon) {
  int tw = twice_weight;
  if (tw % 2 == 0) throw std::domain_error("twice_weight must be odd");
  for (auto& [n, c] : principal) {
    if (n >= 0) throw std::domain_error("principal part must have negative exponents");
    if (c == 0) continue;
    if (!plus_supported(tw, n))
      throw std::domain_error("principal exponent violates the plus condition");
  }
  if (principal.empty()) return QSeries::zero(tw, Level::gamma0_4, horizon);

  if (family_eligible(tw)) {
    if (tw < 0 && -principal.begin()->first > kLadderPoleMax &&
        family_eligible(4 - tw))
      return deep_pole_columns(tw, principal, horizon);
    QSeries out = QSeries::zero(tw, Level::gamma0_4, horizon);
    for (auto& [n, c] : principal) {
      if (c == 0) continue;
      out = add(out, scale(family_form(tw, -n, horizon), c));
    }
    out.normalize();
    if (!out.plus) throw std::logic_error("plus family sum left the plus space");
    return out;
  }
  return solve_plus_principal(tw, principal, horizon);
}

namespace {

// monomials E4^alpha E6^beta of weight w, beta ascending
std::vector<QSeries> eisenstein_monomials(int w, i64 h) {
  std::vector<QSeries> out;
  if (w == 0) {
    QSeries one = QSeries::zero(0, Level::sl2z, h);
    one.set_coeff(0, make_rational(1));
    one.normalize();
    out.push_back(one);
    return out;
  }
  QSeries e4 = eisenstein(4, h), e6 = eisenstein(6, h);
  for (int beta = 0; 6 * beta <= w; ++beta) {
    if ((w - 6 * beta) % 4 != 0) continue;
    int alpha = (w - 6 * beta) / 4;
    QSeries m = power(e6, beta);
    if (alpha > 0) m = mul(m, power(e4, alpha));
    out.push_back(std::move(m));
  }
  return out;
}

QSeries integral_pole_solve(int weight, i64 m, i64 horizon, bool order_q) {
  // weight is the target weight; candidates are Delta^{-m} * M_{12m + weight}
  if (m < 1) throw std::domain_error("pole order m must be positive");
  int w = 12 * static_cast<int>(m) + weight;
  if (w < 0) throw std::domain_error("pole too small for this weight");
  i64 t = std::max(horizon, static_cast<i64>(1));
  i64 hmono = t + m;
  std::vector<QSeries> monomials = eisenstein_monomials(w, hmono);
  QSeries dinv = power(inverse(delta_cusp(hmono + 1)), static_cast<int>(m));
  std::vector<QSeries> candidates;
  for (auto& mono : monomials) {
    QSeries c = mul(mono, dinv);
    if (c.horizon > t) c = c.truncated(t);
    candidates.push_back(std::move(c));
  }
  std::vector<i64> rows_n;
  for (i64 n = -m; n < 0; ++n) rows_n.push_back(n);
  if (order_q) rows_n.push_back(0);
  QMat a(rows_n.size(), QVec(candidates.size(), make_rational(0)));
  QVec b(rows_n.size(), make_rational(0));
  b[0] = make_rational(1);
  for (size_t r = 0; r < rows_n.size(); ++r)
    for (size_t c = 0; c < candidates.size(); ++c)
      a[r][c] = candidates[c].coeff(rows_n[r]);
  auto sol = solve_affine(a, b);
  if (!sol.consistent) throw NoFormError("no such integral-weight form");
  if (!sol.kernel.empty())
    throw std::logic_error("integral-weight pole solve is not unique");
  QSeries out = QSeries::zero(weight * 2, Level::sl2z, t);
  for (size_t c = 0; c < candidates.size(); ++c)
    if (sol.particular[c] != 0)
      out = add(out, scale(candidates[c], sol.particular[c]));
  return out.horizon == horizon ? out : out.truncated(horizon);
}

bool cuspfree_2k(int k2) {
  return k2 == 4 || k2 == 6 || k2 == 8 || k2 == 10 || k2 == 14;
}

}  // namespace

QSeries weakly_holo_integral_basis(int weight, i64 m, i64 horizon) {
  if (weight > 0 || weight % 2 != 0)
    throw std::domain_error("weight must be nonpositive and even");
  int k2 = 2 - weight;
  if (!cuspfree_2k(k2))
    throw std::domain_error("weight 2-2k has cusp forms; exact route unavailable");
  return integral_pole_solve(weight, m, horizon, /*order_q=*/false);
}

QSeries weakly_holo_integral_dual(int weight2k, i64 m, i64 horizon) {
  if (!cuspfree_2k(weight2k))
    throw std::domain_error("weight 2k has cusp forms; exact route unavailable");
  return integral_pole_solve(weight2k, m, horizon, /*order_q=*/true);
}

}  // namespace ml
