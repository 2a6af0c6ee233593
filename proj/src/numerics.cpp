#include "maasslift/numerics.hpp"

#include "maasslift/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ml {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

i64 floor_div_i64(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// Jacobi symbol (a/n) for odd n > 0; matches the Kronecker symbol there
int jacobi_i64(i64 a, i64 n) {
  a %= n;
  if (a < 0) a += n;
  int r = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 n8 = n % 8;
      if (n8 == 3 || n8 == 5) r = -r;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) r = -r;
    a %= n;
  }
  return n == 1 ? r : 0;
}

i64 inv_mod(i64 a, i64 mod) {
  i64 t = 0, nt = 1, r = mod, nr = ((a % mod) + mod) % mod;
  while (nr != 0) {
    i64 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return t < 0 ? t + mod : t;
}

cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

i64 round_two_kappa(double kappa) {
  double tk = 2 * kappa;
  i64 t = std::llround(tk);
  if (std::abs(tk - static_cast<double>(t)) > 1e-9 || t % 2 == 0)
    throw std::domain_error("half-integral weight required");
  return t;
}

// e^y Gamma(s; y); stable for the e^{c y} Gamma(s; y') products below
double inc_gamma_scaled(double s, double y) {
  if (!(y > 0)) throw std::domain_error("incomplete gamma needs y > 0");
  if (s <= 0) return (inc_gamma_scaled(s + 1, y) - std::pow(y, s)) / s;
  if (y < s + 1) {
    double sum = 1.0 / s, term = sum;
    for (int k = 1; k < 600; ++k) {
      term *= y / (s + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return std::exp(y) * std::tgamma(s) - sum * std::pow(y, s);
  }
  // Lentz continued fraction for the upper function
  const double tiny = 1e-300;
  double b = y + 1 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 600; ++i) {
    double an = -static_cast<double>(i) * (i - s);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::pow(y, s) * h;
}

struct Kahan {
  cplx sum{0, 0}, comp{0, 0};
  void add(cplx v) {
    cplx t = v - comp;
    cplx u = sum + t;
    comp = (u - sum) - t;
    sum = u;
  }
};

}  // namespace

double bessel_J(double nu, double x) {
  if (nu < 0 || x < 0) throw std::domain_error("bessel_J needs nu, x >= 0");
  double v = std::cyl_bessel_j(nu, x);
  if (!std::isfinite(v)) throw std::range_error("bessel_J overflow");
  return v;
}

double bessel_I(double nu, double x) {
  if (nu < 0 || x < 0) throw std::domain_error("bessel_I needs nu, x >= 0");
  double v = std::cyl_bessel_i(nu, x);
  if (!std::isfinite(v)) throw std::range_error("bessel_I overflow");
  return v;
}

double inc_gamma(double s, double y) {
  return std::exp(-y) * inc_gamma_scaled(s, y);
}

const QuadRule& gauss_legendre(int n) {
  if (n < 1 || n > 4096) throw std::domain_error("quadrature order out of range");
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev angle estimate; converges in a few steps
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double whittaker_special(double kappa, i64 n, double y, WhitBranch branch) {
  if (!(y > 0)) throw std::domain_error("whittaker_special needs y > 0");
  if (branch == WhitBranch::holomorphic_branch) {
    if (n <= 0) return 0.0;
    return std::pow(4 * kPi * n, kappa / 2) * std::exp(-2 * kPi * n * y);
  }
  if (n == 0)
    throw std::domain_error("zero index has no decaying-branch profile");
  if (n > 0)
    return std::pow(4 * kPi * n, kappa / 2) * std::exp(-2 * kPi * n * y);
  double a = 4 * kPi * static_cast<double>(-n) * y;
  // e^{a/2} Gamma(1-kappa; a) without overflowing either factor
  double g = std::exp(-a / 2) * inc_gamma_scaled(1 - kappa, a);
  return std::pow(4 * kPi * static_cast<double>(-n), kappa / 2) * g /
         std::tgamma(1 - kappa);
}

std::vector<cplx> kloosterman_half_row(double kappa, i64 m,
                                       const std::vector<i64>& ns, i64 c) {
  if (c < 1) throw std::domain_error("modulus must be positive");
  i64 tk = round_two_kappa(kappa);
  i64 lambda = (tk - 1) / 2;  // exact: tk is odd
  int tk4 = static_cast<int>(((tk % 4) + 4) % 4);
  i64 M = 4 * c;
  std::vector<cplx> table(static_cast<size_t>(M));
  for (i64 j = 0; j < M; ++j)
    table[static_cast<size_t>(j)] = std::polar(1.0, 2 * kPi * j / M);
  cplx eps3 = i_pow(tk4);  // eighth-root weight for residues 3 mod 4
  std::vector<Kahan> acc(ns.size());
  i64 mr = ((m % M) + M) % M;
  std::vector<i64> nr(ns.size());
  for (size_t t = 0; t < ns.size(); ++t) nr[t] = ((ns[t] % M) + M) % M;
  for (i64 v = 1; v < M; v += 2) {
    if (std::gcd(v, M) != 1) continue;
    i64 vb = inv_mod(v, M);
    cplx w = static_cast<double>(jacobi_i64(M, v)) *
             (v % 4 == 3 ? eps3 : cplx{1, 0});
    i64 base = (mr * vb) % M;
    for (size_t t = 0; t < ns.size(); ++t)
      acc[t].add(w * table[static_cast<size_t>((base + nr[t] * v) % M)]);
  }
  // (4/c) is 1 for odd c and 0 for even c
  cplx pre = ((c % 2) ? 2.0 : 1.0) / std::sqrt(2.0) *
             (cplx{1, 0} - (lambda % 2 ? -1.0 : 1.0) * cplx{0, 1});
  std::vector<cplx> out(ns.size());
  for (size_t t = 0; t < ns.size(); ++t) out[t] = pre * acc[t].sum;
  return out;
}

cplx kloosterman_half(double kappa, i64 m, i64 n, i64 c) {
  return kloosterman_half_row(kappa, m, {n}, c)[0];
}

std::vector<EvalReport> poincare_coeff_half_row(i64 m, double kappa, double s,
                                                const std::vector<i64>& ns,
                                                const NumBudget& budget) {
  if (m == 0) throw std::domain_error("zero leading index");
  i64 tk = round_two_kappa(kappa);
  if (2 * s - 1 < 0) throw std::domain_error("Bessel order below zero");
  if (budget.kloosterman_c_max < 4 || !(budget.tol > 0))
    throw std::domain_error("invalid budget");
  double sign = (floor_div_i64(tk + 1, 4) % 2 != 0) ? -1.0 : 1.0;
  i64 C = budget.kloosterman_c_max;
  std::vector<Kahan> acc(ns.size());
  std::vector<cplx> at_half(ns.size()), at_3q(ns.size());
  for (i64 c = 1; c <= C; ++c) {
    std::vector<cplx> row = kloosterman_half_row(kappa, m, ns, c);
    for (size_t t = 0; t < ns.size(); ++t) {
      i64 n = ns[t];
      double kernel;
      if (n == 0) {
        kernel = 2 * std::pow(kPi, s) * std::pow(std::abs((double)m), s) /
                 std::pow(4.0 * c, 2 * s);
      } else if (static_cast<double>(m) * n < 0) {
        kernel = std::sqrt(std::abs((double)m / n)) / (4.0 * c) *
                 bessel_I(2 * s - 1, kPi * std::sqrt(std::abs((double)m * n)) / c);
      } else {
        kernel = std::sqrt((double)m / n) / (4.0 * c) *
                 bessel_J(2 * s - 1, kPi * std::sqrt((double)m * n) / c);
      }
      acc[t].add(row[t] * kernel);
    }
    if (c == C / 2)
      for (size_t t = 0; t < ns.size(); ++t) at_half[t] = acc[t].sum;
    if (c == (3 * C) / 4)
      for (size_t t = 0; t < ns.size(); ++t) at_3q[t] = acc[t].sum;
  }
  std::vector<EvalReport> out(ns.size());
  for (size_t t = 0; t < ns.size(); ++t) {
    cplx v = 2 * kPi * sign * acc[t].sum;
    double inc1 = std::abs(acc[t].sum - at_half[t]) * 2 * kPi;
    double inc2 = std::abs(acc[t].sum - at_3q[t]) * 2 * kPi;
    out[t].value = v;
    out[t].est_error = 2 * std::max(inc1, 2 * inc2) + 1e-12 * (1 + std::abs(v));
    out[t].budget_used = budget;
  }
  return out;
}

EvalReport poincare_coeff_half(i64 m, double kappa, double s, i64 n,
                               const NumBudget& budget) {
  return poincare_coeff_half_row(m, kappa, s, {n}, budget)[0];
}

std::complex<double> reduce_to_fundamental_domain(std::complex<double> tau) {
  if (!(tau.imag() > 0))
    throw std::domain_error("point must lie in the upper half-plane");
  for (int iter = 0; iter < 512; ++iter) {
    tau -= std::round(tau.real());
    if (std::norm(tau) >= 1.0 - 1e-15) break;
    tau = -1.0 / tau;
  }
  tau -= std::round(tau.real());
  return tau;
}

EvalReport niebur_eval(i64 m, double s, std::complex<double> tau,
                       const NumBudget& budget) {
  if (m == 0) throw std::domain_error("zero index");
  if (!(s > 1)) throw std::domain_error("spectral parameter must exceed 1");
  if (budget.coset_c_max < 2) throw std::domain_error("invalid budget");
  tau = reduce_to_fundamental_domain(tau);
  double x = tau.real(), y = tau.imag();
  double am = std::abs(static_cast<double>(m));
  auto phi = [&](double yy) {
    return 2 * kPi * std::pow(am, s - 0.5) * std::sqrt(yy) *
           bessel_I(s - 0.5, 2 * kPi * am * yy);
  };
  double B = static_cast<double>(budget.coset_c_max);
  double Bh = B / 2;
  // smooth radial taper keeps the truncated sum twice differentiable in tau;
  // a sharp cutoff would make finite-difference derivatives jump as cosets
  // cross the boundary
  auto taper = [](double t) {
    if (t <= 0.7) return 1.0;
    if (t >= 1.0) return 0.0;
    double u = (1.0 - t) / 0.3;
    return u * u * u * (10 - 15 * u + 6 * u * u);
  };
  Kahan full, half;
  cplx seed = phi(y) * std::polar(1.0, 2 * kPi * m * x);
  full.add(seed);
  half.add(seed);
  for (i64 c = 1; c * y <= B; ++c) {
    double cy = c * y;
    double R = std::sqrt(B * B - cy * cy);
    i64 dlo = static_cast<i64>(std::ceil(-c * x - R));
    i64 dhi = static_cast<i64>(std::floor(-c * x + R));
    for (i64 d = dlo; d <= dhi; ++d) {
      if (std::gcd(c, std::abs(d)) != 1) continue;
      cplx w = cplx{c * x + d, cy};
      double n2 = std::norm(w);
      double t = std::sqrt(n2) / B;
      if (t >= 1) continue;
      i64 a = (c == 1) ? 0 : inv_mod(((d % c) + c) % c, c);
      double re = static_cast<double>(a) / c - (c * x + d) / (c * n2);
      cplx term = phi(y / n2) * std::polar(1.0, 2 * kPi * m * re);
      full.add(taper(t) * term);
      double th = std::sqrt(n2) / Bh;
      if (th < 1) half.add(taper(th) * term);
    }
  }
  double r = std::pow(2.0, 2 - 2 * s);
  EvalReport rep;
  rep.value = full.sum;
  rep.est_error = 2 * std::abs(full.sum - half.sum) * r / (1 - r) +
                  1e-13 * (1 + std::abs(full.sum));
  rep.budget_used = budget;
  return rep;
}

double poincare_coeff_integral(i64 m, int two_k, i64 n) {
  if (two_k < 12 || two_k % 2 != 0)
    throw std::domain_error("even weight at least 12 required");
  if (m < 1 || n < 1) throw std::domain_error("positive indices required");
  double sign = (two_k / 2) % 2 ? -1.0 : 1.0;
  double arg = 4 * kPi * std::sqrt(static_cast<double>(m) * n);
  Kahan csum;
  int quiet = 0;
  for (i64 c = 1; c <= 4000 && quiet < 24; ++c) {
    double S = 0;
    for (i64 d = 1; d <= c; ++d) {
      if (std::gcd(d, c) != 1) continue;
      i64 db = inv_mod(d, c);
      S += std::cos(2 * kPi * static_cast<double>(m * db % c + n * d % c) / c);
    }
    double term = S / c * bessel_J(two_k - 1, arg / c);
    csum.add(cplx{term, 0});
    quiet = std::abs(term) < 1e-18 * (1 + std::abs(csum.sum.real())) ? quiet + 1 : 0;
  }
  double p = (m == n ? 1.0 : 0.0) + 2 * kPi * sign * csum.sum.real();
  return std::pow(static_cast<double>(n) / m, (two_k - 1) / 2.0) * p;
}

EvalReport petersson_norm_sq(const QSeries& f, const NumBudget& budget) {
  if (f.twice_weight % 4 != 0 || f.twice_weight <= 0)
    throw std::domain_error("even integral weight required");
  if (budget.quad_depth < 2) throw std::domain_error("invalid budget");
  int w = f.twice_weight / 2;
  std::vector<double> a(static_cast<size_t>(f.horizon) + 1, 0.0);
  for (auto& [n, coef] : f.coeffs) {
    if (n <= 0) throw std::domain_error("cusp expansion required");
    a[static_cast<size_t>(n)] = coef.get_d();
  }
  double strip = 0;
  for (size_t n = 1; n < a.size(); ++n) {
    if (a[n] == 0) continue;
    double y4 = 4 * kPi * static_cast<double>(n);
    strip += a[n] * a[n] * inc_gamma(w - 1, y4) / std::pow(y4, w - 1);
  }
  auto fabs2 = [&](double x, double y) {
    cplx q = std::exp(cplx{-2 * kPi * y, 2 * kPi * x});
    cplx v{0, 0};
    for (size_t n = a.size(); n-- > 1;) v = (v + a[n]) * q;
    return std::norm(v);
  };
  auto corner = [&](int depth) {
    const QuadRule& gy = gauss_legendre(depth);
    const QuadRule& gx = gauss_legendre(depth);
    double ylo = std::sqrt(3.0) / 2, yhi = 1.0, total = 0;
    for (int i = 0; i < depth; ++i) {
      double y = (ylo + yhi) / 2 + (yhi - ylo) / 2 * gy.nodes[i];
      double xlo = std::sqrt(std::max(0.0, 1 - y * y)), xhi = 0.5;
      if (xhi <= xlo) continue;
      double row = 0;
      for (int j = 0; j < depth; ++j) {
        double x = (xlo + xhi) / 2 + (xhi - xlo) / 2 * gx.nodes[j];
        row += gx.weights[j] * fabs2(x, y);
      }
      total += gy.weights[i] * row * (xhi - xlo) / 2 * std::pow(y, w - 2);
    }
    // both corners; coefficients are real so |f(-x+iy)| = |f(x+iy)|
    return 2 * total * (yhi - ylo) / 2;
  };
  double c1 = corner(budget.quad_depth), c2 = corner(2 * budget.quad_depth);
  size_t h = a.size() - 1;
  double tail = (h >= 1 ? a[h] * a[h] : 0.0) * std::exp(-2 * kPi * std::sqrt(3.0) * static_cast<double>(h));
  EvalReport rep;
  rep.value = strip + c2;
  rep.est_error = 2 * std::abs(c2 - c1) + tail + 1e-16 * std::abs(strip + c2);
  rep.budget_used = budget;
  return rep;
}

}  // namespace ml
