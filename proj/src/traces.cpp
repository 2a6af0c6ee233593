#include "maasslift/traces.hpp"

#include "maasslift/arith.hpp"
#include "maasslift/bases.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace ml {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
using cplx = std::complex<double>;

bool is_square_i64(i64 n) {
  if (n < 0) return false;
  i64 r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(n))));
  for (i64 s = std::max<i64>(0, r - 2); s <= r + 2; ++s)
    if (s * s == n) return true;
  return false;
}

void check_disc_pair(i64 d1, i64 d2) {
  if (d1 == 0 || d2 == 0) throw std::domain_error("discriminant is zero");
  auto m4 = [](i64 d) { return ((d % 4) + 4) % 4; };
  if (m4(d1) > 1 || m4(d2) > 1)
    throw std::domain_error("discriminant not 0,1 mod 4");
}

cplx mobius(const Mat22& g, cplx tau) {
  double a = g.a.get_d(), b = g.b.get_d(), c = g.c.get_d(), d = g.d.get_d();
  return (a * tau + b) / (c * tau + d);
}

// z^e for integer e, exact branch handling (single-valued for integer e)
cplx ipow(cplx z, int e) {
  bool inv = e < 0;
  unsigned n = inv ? static_cast<unsigned>(-static_cast<long long>(e))
                   : static_cast<unsigned>(e);
  cplx r{1.0, 0.0};
  cplx base = z;
  while (n) {
    if (n & 1u) r *= base;
    base *= base;
    n >>= 1u;
  }
  return inv ? 1.0 / r : r;
}

struct PanelResult {
  cplx integral;
  double eval_err;  // integral of the evaluator est_error along the panel
};

}  // namespace

void check_harmonic_model(const HarmonicModel& m) {
  if (m.k < 2) throw std::domain_error("harmonic model needs k >= 2");
  int w = 2 * (2 - 2 * m.k);
  if (m.twice_weight != w || m.holo_part.twice_weight != w)
    throw std::domain_error("harmonic model weight mismatch");
  if (m.holo_part.level != Level::sl2z)
    throw std::domain_error("harmonic model must be level one");
  if (!m.shadow.is_zero()) {
    if (m.shadow.twice_weight != 4 * m.k || m.shadow.level != Level::sl2z)
      throw std::domain_error("shadow weight mismatch");
    for (const auto& [n, a] : m.shadow.coeffs)
      if (n < 1 && a != 0) throw std::domain_error("shadow is not cuspidal");
  }
}

HarmonicModel poincare_model(int k, i64 m, i64 horizon) {
  HarmonicModel h;
  h.k = k;
  h.twice_weight = 2 * (2 - 2 * k);
  h.holo_part = weakly_holo_integral_basis(2 - 2 * k, m, horizon);
  h.shadow = QSeries::zero(4 * k, Level::sl2z, horizon);
  check_harmonic_model(h);
  return h;
}

Evaluator constant_evaluator() {
  Evaluator e;
  e.twice_weight = 0;
  e.eval = [](cplx tau, const NumBudget& budget) {
    if (!(tau.imag() > 0.0))
      throw std::domain_error("evaluation point not in upper half-plane");
    EvalReport r;
    r.value = {1.0, 0.0};
    r.est_error = 0.0;
    r.budget_used = budget;
    return r;
  };
  return e;
}

Evaluator series_evaluator(const QSeries& f) {
  struct Data {
    std::vector<std::pair<i64, double>> terms;
    i64 horizon;
    double edge;   // |a| at the largest stored exponent
    i64 edge_n;    // that exponent
    double depth;  // max(1, -smallest exponent), drives the growth ratio
  };
  auto data = std::make_shared<Data>();
  data->horizon = f.horizon;
  data->edge = 0.0;
  data->edge_n = f.horizon;
  data->depth = 1.0;
  for (const auto& [n, a] : f.coeffs) {
    if (a == 0) continue;
    data->terms.emplace_back(n, Rational(a).get_d());
    if (n < 0) data->depth = std::max(data->depth, static_cast<double>(-n));
  }
  if (!data->terms.empty()) {
    data->edge_n = data->terms.back().first;
    data->edge = std::abs(data->terms.back().second);
  }
  Evaluator e;
  e.twice_weight = f.twice_weight;
  e.eval = [data](cplx tau, const NumBudget& budget) {
    double y = tau.imag();
    if (!(y > 0.0))
      throw std::domain_error("evaluation point not in upper half-plane");
    EvalReport r;
    r.budget_used = budget;
    cplx acc{0.0, 0.0};
    cplx comp{0.0, 0.0};
    for (const auto& [n, a] : data->terms) {
      cplx term = a * std::exp(cplx(0.0, 2.0 * kPi * static_cast<double>(n)) *
                               tau);
      cplx t = acc + term;
      if (std::abs(acc) >= std::abs(term))
        comp += (acc - t) + term;
      else
        comp += (term - t) + acc;
      acc = t;
    }
    r.value = acc + comp;
    // coefficients of weakly holomorphic forms with pole depth m grow like
    // exp(4 pi sqrt(m n)); the term ratio past the horizon is below
    // |q| exp(2 pi sqrt(depth / horizon))
    double absq = std::exp(-2.0 * kPi * y);
    double h = static_cast<double>(std::max<i64>(1, data->horizon));
    double ratio = absq * std::exp(2.0 * kPi * std::sqrt(data->depth / h));
    if (data->terms.empty()) {
      r.est_error = 0.0;
    } else if (ratio >= 0.9) {
      r.est_error = 1e300;
    } else {
      double lead =
          data->edge * std::pow(absq, static_cast<double>(data->edge_n));
      r.est_error = lead * ratio / (1.0 - ratio) +
                    1e-16 * (1.0 + std::abs(r.value));
    }
    return r;
  };
  return e;
}

Evaluator niebur_evaluator(i64 m, double s) {
  if (m == 0) throw std::domain_error("niebur evaluator needs m != 0");
  if (!(s > 1.0)) throw std::domain_error("niebur evaluator needs s > 1");
  Evaluator e;
  e.twice_weight = 0;
  e.eval = [m, s](cplx tau, const NumBudget& budget) {
    return niebur_eval(m, s, tau, budget);
  };
  return e;
}

Evaluator combine(
    const std::vector<std::pair<cplx, Evaluator>>& parts) {
  if (parts.empty()) throw std::domain_error("combine needs at least one part");
  int tw = parts.front().second.twice_weight;
  for (const auto& p : parts)
    if (p.second.twice_weight != tw)
      throw std::domain_error("combine requires equal weights");
  auto data = std::make_shared<std::vector<std::pair<cplx, Evaluator>>>(parts);
  Evaluator e;
  e.twice_weight = tw;
  e.eval = [data](cplx tau, const NumBudget& budget) {
    EvalReport r;
    r.budget_used = budget;
    for (const auto& [coef, part] : *data) {
      EvalReport pr = part.eval(tau, budget);
      r.value += coef * pr.value;
      r.est_error += std::abs(coef) * pr.est_error;
    }
    return r;
  };
  return e;
}

EvalReport cm_trace(const Evaluator& F, i64 d1, i64 d2,
                    const NumBudget& budget) {
  check_disc_pair(d1, d2);
  i64 disc = d1 * d2;
  if (disc >= 0) throw std::domain_error("cm_trace needs d1 d2 < 0");
  ClassSet classes = enumerate_classes(disc);
  EvalReport out;
  out.budget_used = budget;
  cplx acc{0.0, 0.0};
  double est = 0.0;
  for (const BQForm& q : classes.reps) {
    int chi = genus_character(q, d1, d2);
    if (chi == 0) continue;
    HeegnerPoint hp = heegner_point(q);
    EvalReport v = F.eval(hp.tau, budget);
    double w = static_cast<double>(chi) / static_cast<double>(hp.omega);
    acc += w * v.value;
    est += std::abs(w) * v.est_error;
  }
  out.value = acc;
  out.est_error = est + 1e-15 * (1.0 + std::abs(acc));
  return out;
}

EvalReport cycle_integral(const Evaluator& F, const BQForm& q,
                          const NumBudget& budget) {
  return cycle_integral(F, q, kPi / 2.0, budget);
}

EvalReport cycle_integral(const Evaluator& F, const BQForm& q, double theta0,
                          const NumBudget& budget) {
  Int disc_z = q.disc();
  if (disc_z <= 0) throw std::domain_error("cycle integral needs disc > 0");
  i64 disc = disc_z.get_si();
  if (is_square_i64(disc))
    throw std::domain_error("cycle integral excludes square discriminants");
  if (F.twice_weight % 4 != 0)
    throw std::domain_error("cycle integral needs an even integer weight");
  if (!(theta0 > 0.0 && theta0 < kPi))
    throw std::domain_error("start angle must lie in (0, pi)");
  if (budget.quad_depth < 2 || budget.quad_depth > 256)
    throw std::domain_error("quad_depth out of range");
  int kappa = F.twice_weight / 4;

  Geodesic geo = geodesic(q);
  double cen = geo.center.get_d();
  double rad = geo.radius;
  Mat22 g = automorph(q);
  cplx tau0 = cplx(cen, 0.0) + rad * std::exp(cplx(0.0, theta0));
  cplx tau1 = mobius(g, tau0);
  double theta1 = std::atan2(tau1.imag(), tau1.real() - cen);
  if (!(theta1 > 0.0 && theta1 < kPi))
    throw std::runtime_error("automorph image left the arc chart");
  if ((theta1 - theta0) * geo.orientation <= 0.0)
    throw std::runtime_error("arc direction disagrees with orientation");

  double qa = q.a.get_d(), qb = q.b.get_d(), qc = q.c.get_d();
  const QuadRule& rule = gauss_legendre(budget.quad_depth);

  auto panel = [&](double u0, double u1) {
    PanelResult res{cplx{0.0, 0.0}, 0.0};
    double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      double th = mid + half * rule.nodes[i];
      cplx ei = std::exp(cplx(0.0, th));
      cplx tau = cplx(cen, 0.0) + rad * ei;
      cplx qt = (qa * tau + qb) * tau + qc;
      cplx qpow = ipow(qt, kappa - 1);
      EvalReport v = F.eval(tau, budget);
      cplx dtau = cplx(0.0, rad) * ei;  // d tau / d theta
      res.integral += half * rule.weights[i] * v.value * qpow * dtau;
      res.eval_err +=
          std::abs(half) * rule.weights[i] * v.est_error * std::abs(qpow) * rad;
    }
    return res;
  };

  double total_len = std::abs(theta1 - theta0);
  cplx acc{0.0, 0.0};
  double quad_est = 0.0, eval_est = 0.0;
  struct Job {
    double u0, u1;
    int depth;
  };
  std::vector<Job> stack{{theta0, theta1, 0}};
  while (!stack.empty()) {
    Job job = stack.back();
    stack.pop_back();
    PanelResult whole = panel(job.u0, job.u1);
    double mid = 0.5 * (job.u0 + job.u1);
    PanelResult left = panel(job.u0, mid);
    PanelResult right = panel(mid, job.u1);
    cplx refined = left.integral + right.integral;
    double diff = std::abs(whole.integral - refined);
    double frac = std::abs(job.u1 - job.u0) / total_len;
    double eps = std::max(1e-10, 0.25 * budget.tol * frac);
    if (diff <= eps || job.depth >= 20) {
      if (job.depth >= 20 && diff > 64.0 * eps)
        throw std::runtime_error("cycle integral quadrature did not converge");
      acc += refined;
      quad_est += diff;
      eval_est += left.eval_err + right.eval_err;
    } else {
      stack.push_back({job.u0, mid, job.depth + 1});
      stack.push_back({mid, job.u1, job.depth + 1});
    }
  }

  double pref = std::pow(static_cast<double>(disc), 0.5 * (1.0 - kappa));
  EvalReport out;
  out.budget_used = budget;
  out.value = pref * acc;
  out.est_error =
      pref * (quad_est + eval_est) + 1e-14 * (1.0 + std::abs(out.value));
  return out;
}

EvalReport cycle_trace(const Evaluator& F, i64 delta, i64 d, int k,
                       CycleVariant variant, const NumBudget& budget) {
  check_disc_pair(delta, d);
  if (k < 2) throw std::domain_error("cycle_trace needs k >= 2");
  i64 disc = delta * d;
  if (disc <= 0) throw std::domain_error("cycle_trace needs d1 d2 > 0");
  if (is_square_i64(disc))
    throw std::domain_error("cycle_trace excludes square discriminants");
  ClassSet classes = enumerate_classes(disc);
  cplx acc{0.0, 0.0};
  double est = 0.0;
  for (const BQForm& q : classes.reps) {
    int chi = genus_character(q, delta, d);
    if (chi == 0) continue;
    EvalReport v = cycle_integral(F, q, budget);
    acc += static_cast<double>(chi) * v.value;
    est += v.est_error;
  }
  double pref;
  if (variant == CycleVariant::shintani) {
    double sk = (k % 2 == 0) ? 1.0 : -1.0;
    pref = -sk * std::pow(2.0, k - 2) / (3.0 * std::sqrt(kPi));
  } else {
    pref = std::tgamma(0.5 * (k + 1)) /
           (2.0 * std::sqrt(kPi) * std::tgamma(0.5 * k));
  }
  EvalReport out;
  out.budget_used = budget;
  out.value = pref * acc;
  out.est_error = std::abs(pref) * est + 1e-15 * (1.0 + std::abs(out.value));
  return out;
}

EvalReport modified_trace(const HarmonicModel& m, i64 d1, i64 d2, int k,
                          const NumBudget& budget) {
  check_harmonic_model(m);
  if (m.k != k) throw std::domain_error("model k disagrees with trace k");
  check_disc_pair(d1, d2);
  bool pos1 = (k % 2 == 0) ? (d1 > 0) : (d1 < 0);
  bool pos2 = (k % 2 == 0) ? (d2 > 0) : (d2 < 0);
  i64 prod = d1 * d2;
  if (is_square_i64(prod))
    throw std::domain_error("modified trace excludes square d1 d2");
  if (prod < 0) {
    if (!pos1) {
      // antisymmetric extension
      EvalReport r = modified_trace(m, d2, d1, k, budget);
      r.value = -r.value;
      return r;
    }
    if (!m.shadow.is_zero())
      throw std::domain_error(
          "cm route needs a weakly holomorphic model (zero shadow)");
    std::vector<std::pair<cplx, Evaluator>> parts;
    double raise = std::pow(4.0 * kPi, k - 1);
    for (const auto& [n, a] : m.holo_part.coeffs) {
      if (n >= 0 || a == 0) continue;
      parts.emplace_back(cplx(Rational(a).get_d() * raise, 0.0),
                         niebur_evaluator(n, static_cast<double>(k)));
    }
    EvalReport out;
    out.budget_used = budget;
    if (parts.empty()) return out;
    EvalReport tr = cm_trace(combine(parts), d1, d2, budget);
    double sk = ((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    double pref = sk * std::pow(4.0 * kPi, 1 - k) *
                  std::pow(std::abs(static_cast<double>(d1)), 0.5 * (k - 1)) *
                  std::pow(std::abs(static_cast<double>(d2)), -0.5 * k);
    out.value = pref * tr.value;
    out.est_error =
        std::abs(pref) * tr.est_error + 1e-15 * (1.0 + std::abs(out.value));
    return out;
  }
  // d1 d2 > 0
  if (!(pos1 && pos2))
    throw std::domain_error("sign pattern excluded for d1 d2 > 0");
  EvalReport out;
  out.budget_used = budget;
  if (m.shadow.is_zero()) return out;
  EvalReport tr = cycle_trace(series_evaluator(m.shadow), d1, d2, k,
                              CycleVariant::shintani, budget);
  i64 fl = (2 - k) >= 0 ? (2 - k) / 2 : -((k - 2 + 1) / 2);  // floor(1-k/2)
  double sk = ((fl % 2) + 2) % 2 == 0 ? 1.0 : -1.0;
  double pref = sk * std::pow(4.0 * kPi, 1 - k) *
                std::pow(std::abs(static_cast<double>(d2)), 0.5 * (k - 1)) *
                std::pow(std::abs(static_cast<double>(d1)), -0.5 * k);
  out.value = pref * tr.value;
  out.est_error =
      std::abs(pref) * tr.est_error + 1e-15 * (1.0 + std::abs(out.value));
  return out;
}

EvalReport kloosterman_trace(i64 m, double s, i64 d1, i64 d2,
                             const NumBudget& budget) {
  if (m == 0) throw std::domain_error("kloosterman_trace needs m != 0");
  if (!(s > 1.0)) throw std::domain_error("kloosterman_trace needs s > 1");
  check_disc_pair(d1, d2);
  if (d1 < 0 && d2 < 0)
    throw std::domain_error("kloosterman_trace excludes d1, d2 both negative");
  i64 prod = d1 * d2;
  if (is_square_i64(prod) && prod > 0)
    throw std::domain_error("kloosterman_trace excludes square d1 d2");
  if (budget.kloosterman_c_max < 8)
    throw std::domain_error("c budget too small");

  i64 am = std::llabs(m);
  std::vector<i64> divs;
  for (i64 n = 1; n <= am; ++n)
    if (am % n == 0) divs.push_back(n);
  std::vector<i64> ns(divs.size());
  for (size_t j = 0; j < divs.size(); ++j) {
    i64 q = m / divs[j];
    ns[j] = q * q * d2;
  }
  double rootdd = std::sqrt(std::abs(static_cast<double>(prod)));
  double nu = s - 0.5;
  i64 cmax = budget.kloosterman_c_max;

  std::vector<cplx> acc(divs.size()), half(divs.size()), threeq(divs.size());
  for (i64 c = 1; c <= cmax; ++c) {
    std::vector<cplx> row = kloosterman_half_row(0.5, d1, ns, c);
    for (size_t j = 0; j < divs.size(); ++j) {
      double x = kPi * (static_cast<double>(am) / divs[j]) * rootdd /
                 static_cast<double>(c);
      if (x > 650.0)
        throw std::range_error("bessel argument overflows at small c");
      double kern = (prod < 0) ? bessel_I(nu, x) : bessel_J(nu, x);
      acc[j] += row[j] * kern / (4.0 * static_cast<double>(c));
    }
    if (c == cmax / 2) half = acc;
    if (c == (3 * cmax) / 4) threeq = acc;
  }

  EvalReport out;
  out.budget_used = budget;
  cplx total{0.0, 0.0};
  double est = 0.0;
  for (size_t j = 0; j < divs.size(); ++j) {
    int chi = kronecker(d2, divs[j]);
    if (chi == 0) continue;
    double scale = 2.0 * kPi * std::pow(static_cast<double>(am), s - 0.5) *
                   std::pow(std::abs(static_cast<double>(prod)), 0.25) /
                   std::sqrt(static_cast<double>(divs[j]));
    total += static_cast<double>(chi) * scale * acc[j];
    double inc1 = std::abs(acc[j] - half[j]);
    double inc2 = std::abs(acc[j] - threeq[j]);
    est += scale * (2.0 * std::max(inc1, 2.0 * inc2));
  }
  out.value = total;
  out.est_error = est + 1e-12 * (1.0 + std::abs(total));
  return out;
}

}  // namespace ml
