#include "maasslift/lifts.hpp"

#include "maasslift/arith.hpp"
#include "maasslift/bases.hpp"
#include "maasslift/bqf.hpp"
#include "maasslift/hecke.hpp"
#include "maasslift/traces.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ml {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// weights with S_{2k} = 0, where the exact plus-space routes apply
bool cusp_space_vanishes(int k) {
  int w = 2 * k;
  return w == 4 || w == 6 || w == 8 || w == 10 || w == 14;
}

bool is_square_i64(i64 v) {
  if (v < 0) return false;
  i64 r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(v))));
  for (i64 t = std::max<i64>(0, r - 2); t <= r + 2; ++t)
    if (t * t == v) return true;
  return false;
}

Rational ipow_rat(i64 base, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r = r * Rational(base);
  return r;
}

// m -> c^+(-m) over the principal exponents, m >= 1
std::map<i64, Rational> principal_of(const HarmonicModel& m) {
  std::map<i64, Rational> out;
  for (const auto& [n, c] : m.holo_part.coeffs)
    if (n < 0) out[-n] = c;
  return out;
}

void drop_zeros(PrincipalPart& p) {
  for (auto it = p.begin(); it != p.end();)
    it = (it->second == 0) ? p.erase(it) : std::next(it);
}

void require_model(const HarmonicModel& m, int k) {
  check_harmonic_model(m);
  if (m.k != k) throw std::invalid_argument("model weight does not match k");
}

i64 checked_sign_disc(i64 x, int k, bool positive, const char* who) {
  if (!is_fundamental_discriminant(x))
    throw std::domain_error(std::string(who) +
                            " needs a fundamental discriminant; compose with "
                            "the Hecke operators for the others");
  bool ok = ((k % 2 == 0) ? x : -x) > 0;
  if (ok != positive)
    throw std::domain_error(std::string(who) +
                            " discriminant has the wrong sign for this weight");
  return x < 0 ? -x : x;
}

}  // namespace

QSeries xi_image(const HarmonicModel& m) {
  check_harmonic_model(m);
  return m.shadow;
}

double c_minus_from_shadow(const HarmonicModel& m, i64 n) {
  check_harmonic_model(m);
  if (n < 1) throw std::invalid_argument("c_minus_from_shadow needs n >= 1");
  Rational a = m.shadow.coeff(n);
  return a.get_d() /
         std::pow(4.0 * kPi * static_cast<double>(n), 2.0 * m.k - 1.0);
}

Rational pairing(const QSeries& g, const HarmonicModel& m) {
  check_harmonic_model(m);
  if (g.twice_weight != 4 * m.k || g.level != Level::sl2z)
    throw std::invalid_argument("pairing needs a weight-2k form on the full group");
  Rational acc = m.holo_part.coeff(0) * g.coeff(0);
  for (const auto& [e, c] : m.holo_part.coeffs) {
    if (e >= 0) break;
    acc += c * g.coeff(-e);
  }
  for (const auto& [e, c] : g.coeffs) {
    if (e >= 0) break;
    acc += m.holo_part.coeff(-e) * c;
  }
  return acc / Rational(6);
}

LiftResult zagier_D(const HarmonicModel& m, i64 D, int k, i64 horizon,
                    const NumBudget* budget) {
  require_model(m, k);
  i64 aD = checked_sign_disc(D, k, false, "upper lift");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");

  auto prin_model = principal_of(m);
  PrincipalPart prin;
  for (const auto& [mm, c] : prin_model) {
    Rational m_pow = c * ipow_rat(mm, 2 * k - 1);
    for (i64 n : divisors(mm)) {
      int chi = kronecker(D, n);
      if (chi == 0) continue;
      i64 md = mm / n;
      prin[-md * md * aD] += m_pow * Rational(chi) / ipow_rat(n, k);
    }
  }
  drop_zeros(prin);

  LiftResult out;
  out.kind = LiftKind::zD;
  out.k = k;
  out.D = D;
  if (m.shadow.is_zero() && cusp_space_vanishes(k)) {
    out.exact = weakly_holo_plus_basis(2 * k + 1, prin, horizon);
    return out;
  }

  // numeric regime: the exact part carries the principal part only
  QSeries ex = QSeries::zero(2 * k + 1, Level::gamma0_4, 0);
  for (const auto& [e, c] : prin) ex.set_coeff(e, c);
  ex.normalize();
  out.exact = ex;

  NumBudget b = budget ? *budget : NumBudget{};
  double kap = k + 0.5;
  std::vector<i64> ns;
  for (i64 n = 1; n <= horizon; ++n)
    if (plus_supported(2 * k + 1, n)) ns.push_back(n);
  if (ns.empty()) return out;

  for (const auto& [mm, c] : prin_model) {
    Rational m_pow = c * ipow_rat(mm, 2 * k - 1);
    for (i64 nn : divisors(mm)) {
      int chi = kronecker(D, nn);
      if (chi == 0) continue;
      i64 md = mm / nn;
      i64 M = md * md * aD;
      double sc = Rational(m_pow * Rational(chi) / ipow_rat(nn, k)).get_d();
      auto row = poincare_coeff_half_row(-M, kap, kap / 2.0, ns, b);
      for (size_t i = 0; i < ns.size(); ++i) {
        double g = std::pow(static_cast<double>(ns[i]) / static_cast<double>(M),
                            kap / 2.0);
        EvalReport& rep = out.numeric[ns[i]];
        rep.value += sc * g * row[i].value;
        rep.est_error += std::abs(sc) * g * row[i].est_error;
        rep.budget_used = b;
      }
    }
  }
  return out;
}

LiftResult zagier_d(const HarmonicModel& m, i64 d, int k, i64 horizon,
                    NonholoRoute route, const NumBudget* budget) {
  require_model(m, k);
  i64 ad = checked_sign_disc(d, k, true, "lower lift");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");

  auto prin_model = principal_of(m);
  PrincipalPart prin;
  for (const auto& [mm, c] : prin_model) {
    for (i64 n : divisors(mm)) {
      int chi = kronecker(d, n);
      if (chi == 0) continue;
      i64 md = mm / n;
      prin[-md * md * ad] += c * Rational(chi) * ipow_rat(n, k - 1);
    }
  }
  drop_zeros(prin);
  Rational c0 = Rational(1, 2) * l_value_neg(d, static_cast<unsigned>(k)) *
                m.holo_part.coeff(0);

  LiftResult out;
  out.kind = LiftKind::zd;
  out.k = k;
  out.d = d;
  if (m.shadow.is_zero() && cusp_space_vanishes(k)) {
    out.exact = weakly_holo_plus_basis(3 - 2 * k, prin, horizon);
    return out;
  }

  // numeric regime: principal part and constant are still exact
  QSeries ex = QSeries::zero(3 - 2 * k, Level::gamma0_4, 0);
  for (const auto& [e, c] : prin) ex.set_coeff(e, c);
  if (c0 != 0) ex.set_coeff(0, c0);
  ex.normalize();
  out.exact = ex;
  if (route == NonholoRoute::none) return out;

  NumBudget b = budget ? *budget : NumBudget{};
  i64 sgn = d > 0 ? 1 : -1;
  for (i64 a = 1; a <= horizon; ++a) {
    i64 delta = sgn * a;
    i64 r = ((delta % 4) + 4) % 4;
    if (r != 0 && r != 1) continue;
    if (is_square_i64(delta * d)) {
      out.skipped.push_back(-a);
      continue;
    }
    EvalReport rep;
    rep.budget_used = b;
    if (route == NonholoRoute::cycle) {
      // raise the model to weight 0 and take the tilde-normalized trace
      std::vector<std::pair<std::complex<double>, Evaluator>> parts;
      double rk = std::pow(4.0 * kPi, k - 1);
      for (const auto& [mm, c] : prin_model)
        parts.push_back({std::complex<double>(c.get_d() * rk, 0.0),
                         niebur_evaluator(-mm, static_cast<double>(k))});
      if (!parts.empty()) {
        EvalReport tr =
            cycle_trace(combine(parts), delta, d, k, CycleVariant::tilde, b);
        int fl = (2 - k) >= 0 ? (2 - k) / 2 : -((k - 2 + 1) / 2);
        double sign = (fl % 2 == 0) ? 1.0 : -1.0;
        double pref = sign * std::pow(4.0 * kPi, 1.0 - k) *
                      std::pow(static_cast<double>(ad), (k - 1) / 2.0) *
                      std::pow(static_cast<double>(a), -k / 2.0);
        rep.value = pref * tr.value;
        rep.est_error = std::abs(pref) * tr.est_error;
      }
    } else {
      // scale of the shadow's Shintani coefficient at q^{|delta|}
      if (!m.shadow.is_zero()) {
        LiftResult sh = shintani_cusp(m.shadow, d, {delta}, b);
        const EvalReport& cs = sh.numeric.at(a);
        double sgn2 = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        double pref = sgn2 * std::pow(2.0, k - 1) / 3.0 /
                      std::pow(4.0 * kPi * static_cast<double>(a), k - 0.5);
        rep.value = pref * cs.value;
        rep.est_error = std::abs(pref) * cs.est_error;
      }
    }
    out.nonholo[-a] = rep;
  }
  return out;
}

LiftResult zagier_composite(const HarmonicModel& m, i64 delta, int k,
                            i64 horizon, bool upper) {
  DiscriminantSplit sp = split_discriminant(delta);
  i64 f = sp.conductor;
  if (f == 1)
    return upper ? zagier_D(m, delta, k, horizon)
                 : zagier_d(m, delta, k, horizon, NonholoRoute::none);
  if (!cusp_space_vanishes(k))
    throw std::domain_error("composite lift is available in the exact regime only");
  i64 inner = horizon * f * f;
  LiftResult base = upper
                        ? zagier_D(m, sp.fundamental, k, inner)
                        : zagier_d(m, sp.fundamental, k, inner, NonholoRoute::none);
  LiftResult out;
  out.kind = base.kind;
  out.k = k;
  if (upper)
    out.D = delta;
  else
    out.d = delta;
  out.exact = hecke_composite(*base.exact, f);
  return out;
}

LiftResult fractional_derivative(const LiftResult& g, i64 d, i64 D, int k,
                                 i64 horizon, const NumBudget* budget) {
  if (!g.exact)
    throw std::invalid_argument("fractional derivative needs an exact lower lift");
  i64 ad = checked_sign_disc(d, k, true, "fractional derivative (lower index)");
  const QSeries& G = *g.exact;

  // read off G(-|d| j^2)
  std::map<i64, Rational> lead;
  i64 jmax = 0;
  for (const auto& [n, c] : G.coeffs) {
    if (n >= 0) break;
    i64 q = -n;
    if (q % ad != 0 || !is_square_i64(q / ad))
      throw std::domain_error(
          "principal exponent is not -|d| j^2; not a lower-lift image");
    i64 j = static_cast<i64>(
        std::llround(std::sqrt(static_cast<double>(q / ad))));
    lead[j] = c;
    jmax = std::max(jmax, j);
  }

  // G(-|d| j^2) = sum_{n >= 1} c^+(-jn) chi_d(n) n^{k-1}; solve descending
  std::map<i64, Rational> cp;
  for (i64 j = jmax; j >= 1; --j) {
    Rational rhs = lead.count(j) ? lead[j] : Rational(0);
    for (i64 n = 2; j * n <= jmax; ++n) {
      int chi = kronecker(d, n);
      if (chi == 0) continue;
      auto it = cp.find(j * n);
      if (it == cp.end()) continue;
      rhs -= it->second * Rational(chi) * ipow_rat(n, k - 1);
    }
    if (rhs != 0) cp[j] = rhs;
  }

  HarmonicModel m;
  m.k = k;
  m.twice_weight = 2 * (2 - 2 * k);
  m.holo_part = QSeries::zero(m.twice_weight, Level::sl2z, 0);
  for (const auto& [t, c] : cp) m.holo_part.set_coeff(-t, c);
  m.holo_part.normalize();
  m.shadow = QSeries::zero(4 * k, Level::sl2z, 1);

  LiftResult out = zagier_D(m, D, k, horizon, budget);
  out.kind = LiftKind::dd;
  out.d = d;
  return out;
}

LiftResult shintani_cusp(const QSeries& f, i64 d,
                         const std::vector<i64>& deltas,
                         const NumBudget& budget) {
  if (f.level != Level::sl2z || f.twice_weight % 4 != 0 || f.twice_weight < 8)
    throw std::invalid_argument("Shintani lift needs an even weight >= 4 form on the full group");
  if (f.valuation() < 1)
    throw std::invalid_argument("Shintani lift needs a cusp expansion");
  int k = f.twice_weight / 4;
  checked_sign_disc(d, k, true, "Shintani lift");

  LiftResult out;
  out.kind = LiftKind::shintani;
  out.k = k;
  out.d = d;
  Evaluator ev = series_evaluator(f);
  for (i64 delta : deltas) {
    i64 r = ((delta % 4) + 4) % 4;
    if (r != 0 && r != 1)
      throw std::invalid_argument("requested index is not a discriminant");
    i64 prod = delta * d;
    if (prod <= 0)
      throw std::invalid_argument("requested index has the wrong sign");
    if (is_square_i64(prod)) {
      out.skipped.push_back(std::llabs(delta));
      continue;
    }
    std::complex<double> acc{0.0, 0.0};
    double err = 0.0;
    for (const auto& q : enumerate_classes(prod).reps) {
      int chi = genus_character(q, delta, d);
      if (chi == 0) continue;
      EvalReport ci = cycle_integral(ev, q, budget);
      acc += static_cast<double>(chi) * ci.value;
      err += ci.est_error;
    }
    double pw = std::pow(static_cast<double>(prod), (k - 1) / 2.0);
    EvalReport rep;
    rep.value = pw * acc;
    rep.est_error = pw * err;
    rep.budget_used = budget;
    out.numeric[std::llabs(delta)] = rep;
  }
  return out;
}

LiftResult shintani_weak(const QSeries& f, i64 d, i64 D, int k, i64 horizon,
                         const NumBudget* budget) {
  if (f.twice_weight != 4 * k || f.level != Level::sl2z)
    throw std::invalid_argument("weak Shintani lift needs a weight-2k input on the full group");
  if (f.coeff(0) != 0)
    throw std::domain_error("weak Shintani lift needs a vanishing constant term");

  // preimage of the orthogonal piece under the (2k-1)-fold q d/dq
  HarmonicModel m;
  m.k = k;
  m.twice_weight = 2 * (2 - 2 * k);
  m.holo_part = QSeries::zero(m.twice_weight, Level::sl2z, 0);
  for (const auto& [n, c] : f.coeffs) {
    if (n >= 0) break;
    m.holo_part.set_coeff(n, c / ipow_rat(n, 2 * k - 1));
  }
  m.holo_part.normalize();
  m.shadow = QSeries::zero(4 * k, Level::sl2z, 1);

  if (cusp_space_vanishes(k)) {
    LiftResult out = zagier_D(m, D, k, horizon, budget);
    out.kind = LiftKind::shintani_weak;
    out.d = d;
    return out;
  }
  if (2 * k != 12)
    throw std::domain_error(
        "weak Shintani lift outside the vanishing cusp weights is implemented for weight 12 only");

  NumBudget b = budget ? *budget : NumBudget{};
  LiftResult out = zagier_D(m, D, k, horizon, &b);
  out.kind = LiftKind::shintani_weak;
  out.d = d;

  // cuspidal component f0 = t Delta via the regularized pairing
  i64 mmax = 0;
  for (const auto& [n, c] : f.coeffs) {
    if (n >= 0) break;
    mmax = std::max(mmax, -n);
  }
  if (mmax == 0) return out;
  QSeries dlt = delta_cusp(std::max<i64>(mmax, 60));
  double inner = 0.0;
  for (const auto& [n, c] : f.coeffs) {
    if (n >= 0) break;
    double am = Rational(dlt.coeff(-n)).get_d();
    inner += c.get_d() * am /
             std::pow(4.0 * kPi * static_cast<double>(-n), 2.0 * k - 1.0);
  }
  inner *= std::tgamma(2.0 * k - 1.0);
  EvalReport nrm = petersson_norm_sq(dlt, b);
  double t = inner / nrm.value.real();
  double t_err = std::abs(inner) * nrm.est_error /
                 (nrm.value.real() * nrm.value.real());

  std::vector<i64> deltas;
  i64 sgn = (k % 2 == 0) ? 1 : -1;
  for (i64 n = 1; n <= horizon; ++n)
    if (plus_supported(2 * k + 1, n)) deltas.push_back(sgn * n);
  if (deltas.empty()) return out;
  LiftResult sh = shintani_cusp(dlt, d, deltas, b);
  double sgn2 = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
  double pref = sgn2 * std::pow(2.0, k - 1) / 3.0;
  for (const auto& [n, cs] : sh.numeric) {
    EvalReport& rep = out.numeric[n];
    rep.value += pref * t * cs.value;
    rep.est_error += std::abs(pref) * (std::abs(t) * cs.est_error +
                                       t_err * std::abs(cs.value));
    rep.budget_used = b;
  }
  out.skipped = sh.skipped;
  return out;
}

DefectReport eigenform_defect(const QSeries& F, i64 p,
                              const std::optional<Rational>& lambda_hint) {
  DefectReport rep;
  if (F.twice_weight % 2 == 0 || F.level != Level::gamma0_4)
    throw std::invalid_argument("eigenform defect needs a half-integral form on Gamma0(4)");
  int k = (F.twice_weight - 1) / 2;
  if (k < 2) throw std::invalid_argument("eigenform defect needs weight >= 5/2");
  if (F.is_zero()) {
    rep.defect = F;
    rep.member = true;
    rep.lambda = lambda_hint ? *lambda_hint : Rational(0);
    return rep;
  }
  i64 e0 = F.coeffs.begin()->first;
  if (e0 >= 0)
    throw std::domain_error("eigenform defect needs a principal part");
  i64 aD = -e0;
  i64 D = (k % 2 == 0) ? -aD : aD;
  if (!is_fundamental_discriminant(D))
    throw std::domain_error("leading exponent is not a fundamental discriminant");
  if (!cusp_space_vanishes(k))
    throw std::domain_error("membership certificate needs the exact regime");

  QSeries FT = hecke_half(F, p);

  // peel a series over the lift images of the single-pole integral forms
  // F_m = q^{-m} + O(1) plus the Eisenstein line; parts[m] collects the
  // coefficient on lift(F_m), eis the Cohen-Eisenstein component
  struct Peel {
    bool ok = false;
    std::map<i64, Rational> parts;
    Rational eis = Rational(0);
  };
  auto peel = [&](const QSeries& s) {
    Peel out;
    QSeries resid = s;
    while (true) {
      if (resid.is_zero()) {
        out.ok = true;
        return out;
      }
      i64 e = resid.coeffs.begin()->first;
      if (e >= 0) break;
      i64 q = -e;
      if (q % aD != 0 || !is_square_i64(q / aD)) return out;
      i64 mm = static_cast<i64>(
          std::llround(std::sqrt(static_cast<double>(q / aD))));
      HarmonicModel pm = poincare_model(k, mm, 1);
      LiftResult zz = zagier_D(pm, D, k, resid.horizon);
      Rational gamma = resid.coeff(e) / zz.exact->coeff(e);
      out.parts[mm] += gamma;
      resid = resid - gamma * (*zz.exact);
      resid.normalize();
    }
    // holomorphic remainder: the plus space is spanned by the Eisenstein
    // series in the cusp-free weights, and it has a nonzero constant term
    QSeries H = cohen_eisenstein(k, resid.horizon);
    out.eis = resid.coeff(0) / H.coeff(0);
    if (out.eis != 0) {
      resid = resid - out.eis * H;
      resid.normalize();
    }
    out.ok = resid.is_zero();
    return out;
  };

  // constant term of the preimage combination; the lift image of the
  // zero-constant forms is exactly where these sums vanish
  std::map<i64, Rational> c0_cache;
  auto model_constant = [&](const Peel& pl) {
    Rational acc(0);
    for (auto& [m, g] : pl.parts) {
      auto it = c0_cache.find(m);
      if (it == c0_cache.end())
        it = c0_cache.emplace(m, weakly_holo_integral_basis(2 - 2 * k, m, 1).coeff(0)).first;
      acc += g * it->second;
    }
    return acc;
  };

  if (lambda_hint) {
    rep.lambda = *lambda_hint;
  } else {
    Peel pF = peel(F), pFT = peel(FT);
    bool solved = false;
    if (pF.ok && pFT.ok) {
      // membership of the defect imposes one linear condition per component
      // outside the lift image: the preimage constant and the Eisenstein line
      std::pair<Rational, Rational> cond[] = {
          {model_constant(pFT), model_constant(pF)},
          {pFT.eis, pF.eis}};
      for (auto& [num, den] : cond) {
        if (den == 0) continue;
        rep.lambda = num / den;
        solved = true;
        break;
      }
    }
    if (!solved) {
      // input already in the lift image (or not a lift at all): the linear
      // conditions are vacuous and the leading coefficient pins the eigenvalue
      rep.lambda = FT.coeff(e0) / F.coeff(e0);
    }
  }
  rep.defect = FT - rep.lambda * F;
  rep.defect.normalize();

  Peel pd = peel(rep.defect);
  rep.member = pd.ok && pd.eis == 0 && model_constant(pd) == 0;
  return rep;
}

}  // namespace ml
