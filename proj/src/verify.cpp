#include "maasslift/verify.hpp"

#include "maasslift/arith.hpp"
#include "maasslift/bases.hpp"
#include "maasslift/bqf.hpp"
#include "maasslift/harmonic.hpp"
#include "maasslift/hecke.hpp"
#include "maasslift/lifts.hpp"
#include "maasslift/traces.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace ml {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::vector<i64> fundamentals(i64 max_abs, bool positive) {
  std::vector<i64> out;
  for (i64 a = 1; a <= max_abs; ++a) {
    i64 d = positive ? a : -a;
    if (is_fundamental_discriminant(d)) out.push_back(d);
  }
  return out;
}

HarmonicModel series_model(const QSeries& holo, int k) {
  HarmonicModel m;
  m.holo_part = holo;
  m.shadow = QSeries::zero(4 * k, Level::sl2z, 1);
  m.twice_weight = holo.twice_weight;
  m.k = k;
  check_harmonic_model(m);
  return m;
}

std::vector<int> pick_ks(const VerifyOptions& opt, std::vector<int> def) {
  if (opt.ks.empty()) return def;
  std::vector<int> out;
  for (int k : opt.ks)
    for (int d : def)
      if (k == d) out.push_back(k);
  if (out.empty()) throw std::invalid_argument("no supported k selected");
  return out;
}

VerifyReport duality_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.suite = "duality";
  i64 maxabs = opt.max_abs > 0 ? opt.max_abs : 60;
  for (int k : pick_ks(opt, {2, 3, 5})) {
    bool even = k % 2 == 0;
    std::vector<i64> ds = fundamentals(maxabs, even);
    std::vector<i64> Ds = fundamentals(maxabs, !even);
    HarmonicModel m1 = poincare_model(k, 1, 1);
    std::map<i64, QSeries> lower, upper;
    for (i64 d : ds) lower.emplace(d, *zagier_d(m1, d, k, maxabs + 1).exact);
    for (i64 D : Ds) upper.emplace(D, *zagier_D(m1, D, k, maxabs + 1).exact);
    for (i64 d : ds)
      for (i64 D : Ds) {
        Rational a = lower.at(d).coeff(std::llabs(D));
        Rational c = upper.at(D).coeff(std::llabs(d));
        VerifyCase vc;
        vc.label = "k=" + std::to_string(k) + " d=" + std::to_string(d) +
                   " D=" + std::to_string(D);
        vc.pass = a + c == 0;
        vc.fields = {{"k", std::to_string(k)},
                     {"d", std::to_string(d)},
                     {"D", std::to_string(D)},
                     {"a", to_string(a)},
                     {"c", to_string(c)}};
        rep.cases.push_back(std::move(vc));
      }
  }
  return rep;
}

VerifyReport constant_term_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.suite = "constant-term";
  i64 maxabs = opt.max_abs > 0 ? opt.max_abs : 60;
  for (int k : pick_ks(opt, {2, 3, 5})) {
    bool even = k % 2 == 0;
    for (i64 m = 1; m <= 6; ++m) {
      HarmonicModel mo = poincare_model(k, m, 1);
      for (i64 d : fundamentals(maxabs, even)) {
        Rational c = zagier_d(mo, d, k, 0).exact->coeff(0);
        Rational via_sigma =
            -l_value_neg(d, static_cast<unsigned>(k)) /
            l_value_neg(1, static_cast<unsigned>(2 * k)) *
            Rational(divisor_sum(m, 2 * k - 1));
        Rational via_l = Rational(1, 2) *
                         l_value_neg(d, static_cast<unsigned>(k)) *
                         mo.holo_part.coeff(0);
        VerifyCase vc;
        vc.label = "k=" + std::to_string(k) + " m=" + std::to_string(m) +
                   " d=" + std::to_string(d);
        vc.pass = c == via_sigma && c == via_l;
        vc.fields = {{"k", std::to_string(k)},
                     {"m", std::to_string(m)},
                     {"d", std::to_string(d)},
                     {"constant", to_string(c)},
                     {"divisor_formula", to_string(via_sigma)},
                     {"lvalue_formula", to_string(via_l)}};
        rep.cases.push_back(std::move(vc));
      }
    }
  }
  return rep;
}

VerifyReport hecke_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.suite = "hecke-equivariance";
  i64 h = opt.horizon > 0 ? opt.horizon : 40;
  struct Inst {
    int k;
    i64 d, D;
  };
  const Inst insts[] = {{2, 5, -4}, {3, -3, 5}};
  for (const Inst& in : insts) {
    bool wanted = opt.ks.empty();
    for (int k : opt.ks) wanted = wanted || k == in.k;
    if (!wanted) continue;
    for (i64 p : {2, 3, 5}) {
      QSeries f1 = weakly_holo_integral_basis(2 - 2 * in.k, 1, p + 1);
      QSeries f1t = hecke_integral(f1, p);
      HarmonicModel m1 = poincare_model(in.k, 1, 1);
      HarmonicModel mt = series_model(f1t, in.k);
      for (bool lower : {true, false}) {
        QSeries lhs = lower ? *zagier_d(mt, in.d, in.k, h).exact
                            : *zagier_D(mt, in.D, in.k, h).exact;
        QSeries deep = lower ? *zagier_d(m1, in.d, in.k, h * p * p).exact
                             : *zagier_D(m1, in.D, in.k, h * p * p).exact;
        QSeries rhs = hecke_half(deep, p);
        bool equal = sub(lhs.truncated(h), rhs.truncated(h)).is_zero();
        VerifyCase vc;
        vc.label = "k=" + std::to_string(in.k) + " p=" + std::to_string(p) +
                   (lower ? " lower d=" + std::to_string(in.d)
                          : " upper D=" + std::to_string(in.D));
        vc.pass = equal;
        vc.fields = {{"k", std::to_string(in.k)},
                     {"p", std::to_string(p)},
                     {"side", lower ? "lower" : "upper"},
                     {"disc", std::to_string(lower ? in.d : in.D)},
                     {"horizon", std::to_string(h)},
                     {"equal", equal ? "1" : "0"}};
        rep.cases.push_back(std::move(vc));
      }
    }
  }
  return rep;
}

struct ClassSum {
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;
};

// sum over classes of discriminant delta*d of chi_Q times the cycle integral
ClassSum genus_cycle_sum(const Evaluator& F, i64 delta, i64 d,
                         const NumBudget& b) {
  ClassSum out;
  for (const auto& q : enumerate_classes(delta * d).reps) {
    int chi = genus_character(q, delta, d);
    if (chi == 0) continue;
    EvalReport c = cycle_integral(F, q, b);
    out.value += static_cast<double>(chi) * c.value;
    out.err += c.est_error;
  }
  return out;
}

VerifyReport thm1_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.suite = "thm1";
  NumBudget b = opt.budget_set ? opt.budget : NumBudget{};
  if (!opt.budget_set) {
    b.coset_c_max = 25;
    b.quad_depth = 32;
    b.tol = 1e-8;
  }
  const int k = 6;
  const Rational C6(-1, 336);  // proportionality constant at k = 6
  QSeries dl = delta_cusp(220);
  Evaluator ed = series_evaluator(dl);
  EvalReport norm = petersson_norm_sq(dl, b);
  Evaluator en = niebur_evaluator(-1, static_cast<double>(k));
  double r5 = std::pow(4.0 * kPi, k - 1);
  struct Pair {
    i64 d, delta;
  };
  for (const Pair& pr : {Pair{5, 8}, Pair{5, 12}, Pair{1, 5}}) {
    ClassSum L = genus_cycle_sum(ed, pr.delta, pr.d, b);
    ClassSum R = genus_cycle_sum(en, pr.delta, pr.d, b);
    double nrm = norm.value.real();
    std::complex<double> lhs = L.value / nrm;
    std::complex<double> rhs = to_double(C6) * r5 * R.value;
    double err_lhs = L.err / nrm +
                     std::abs(L.value) * norm.est_error / (nrm * nrm);
    double err_rhs = std::abs(to_double(C6)) * r5 * R.err;
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    double diff = std::abs(lhs - rhs);
    bool pass = diff <= 1e-3 * scale + err_lhs + err_rhs;
    VerifyCase vc;
    vc.label = "d=" + std::to_string(pr.d) +
               " delta=" + std::to_string(pr.delta);
    vc.pass = pass;
    vc.fields = {{"d", std::to_string(pr.d)},
                 {"delta", std::to_string(pr.delta)},
                 {"lhs_re", fmt(lhs.real())},
                 {"rhs_re", fmt(rhs.real())},
                 {"rel_diff", fmt(scale > 0 ? diff / scale : 0.0)},
                 {"err", fmt(err_lhs + err_rhs)}};
    rep.cases.push_back(std::move(vc));
  }
  return rep;
}

// weight-13/2 plus-space eigenform with first nonvanishing coefficient 1:
// diagonalize the p = 2 operator on the 2-dimensional space
QSeries cusp_eigenform_13(i64 horizon, Rational* lambda_out) {
  std::vector<QSeries> basis = plus_space_basis(13, std::max<i64>(horizon, 20));
  if (basis.size() != 2)
    throw std::logic_error("expected a 2-dimensional weight-13/2 plus space");
  std::vector<i64> leads;
  for (auto& bs : basis) {
    i64 lead = bs.coeffs.begin()->first;
    leads.push_back(lead);
  }
  auto expand = [&](const QSeries& s) {
    std::vector<Rational> al(2, make_rational(0));
    QSeries r = s;
    for (size_t i = 0; i < 2; ++i) {
      al[i] = r.coeff(leads[i]) / basis[i].coeff(leads[i]);
      if (al[i] != 0) r = sub(r, scale(basis[i], al[i]));
    }
    if (!r.truncated(std::min(r.horizon, horizon)).is_zero())
      throw std::logic_error("operator image left the plus space span");
    return al;
  };
  // columns of the operator matrix
  std::vector<std::array<Rational, 2>> M;
  for (size_t i = 0; i < 2; ++i) {
    auto al = expand(hecke_half(basis[i], 2));
    M.push_back({al[0], al[1]});
  }
  // eigenvalues of the 2x2 matrix; the cusp line is the non-Eisenstein one
  Rational tr = M[0][0] + M[1][1];
  Rational det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
  Rational eis_lambda(2049);  // 1 + 2^11
  // lambda satisfies x^2 - tr x + det = 0 with the Eisenstein root split off
  Rational lambda = tr - eis_lambda;
  if (lambda * eis_lambda != det)
    throw std::logic_error("operator matrix has no Eisenstein eigenvalue");
  if (lambda_out) *lambda_out = lambda;
  // eigenvector A v = lambda v where A[j][i] = M[i][j] (M holds columns)
  Rational v0, v1;
  if (M[1][0] != 0 || M[0][0] - lambda != 0) {
    v0 = -M[1][0];
    v1 = M[0][0] - lambda;
  } else {
    v0 = M[1][1] - lambda;
    v1 = -M[0][1];
  }
  if (v0 == 0 && v1 == 0) throw std::logic_error("degenerate eigenvector");
  QSeries g = add(scale(basis[0], v0), scale(basis[1], v1));
  g.normalize();
  if (g.is_zero()) throw std::logic_error("zero eigenform");
  Rational lead = g.coeffs.begin()->second;
  g = scale(g, Rational(1) / lead);
  return g.truncated(horizon);
}

VerifyReport shintani_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.suite = "shintani-proportionality";
  NumBudget b = opt.budget_set ? opt.budget : NumBudget{};
  if (!opt.budget_set) {
    b.coset_c_max = 25;
    b.quad_depth = 32;
    b.tol = 1e-8;
  }
  Rational lambda;
  QSeries g = cusp_eigenform_13(16, &lambda);
  {
    VerifyCase vc;
    vc.label = "cusp eigenvalue at p=2";
    vc.pass = lambda == Rational(-24);
    vc.fields = {{"lambda", to_string(lambda)}, {"expected", "-24"}};
    rep.cases.push_back(std::move(vc));
  }
  if (g.coeff(5) == 0) throw std::logic_error("eigenform vanishes at 5");
  QSeries dl = delta_cusp(220);
  LiftResult sc = shintani_cusp(dl, 1, {5, 8, 12}, b);
  const EvalReport& base = sc.numeric.at(5);
  for (i64 delta : {8, 12}) {
    const EvalReport& cur = sc.numeric.at(delta);
    std::complex<double> ratio = cur.value / base.value;
    double err = std::abs(ratio) * (cur.est_error / std::abs(cur.value) +
                                    base.est_error / std::abs(base.value));
    Rational exact = g.coeff(delta) / g.coeff(5);
    double diff = std::abs(ratio - std::complex<double>(to_double(exact), 0));
    double scale = std::max(std::abs(ratio), std::abs(to_double(exact)));
    bool pass = diff <= 1e-3 * scale + err;
    VerifyCase vc;
    vc.label = "ratio delta=" + std::to_string(delta) + " over delta=5";
    vc.pass = pass;
    vc.fields = {{"delta", std::to_string(delta)},
                 {"ratio_re", fmt(ratio.real())},
                 {"ratio_im", fmt(ratio.imag())},
                 {"exact", to_string(exact)},
                 {"rel_diff", fmt(scale > 0 ? diff / scale : 0.0)},
                 {"err", fmt(err)}};
    rep.cases.push_back(std::move(vc));
  }
  return rep;
}

VerifyReport eigenform_suite(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.suite = "eigenform";
  (void)opt;
  const int k = 2;
  const i64 D = -4;
  HarmonicModel m1 = poincare_model(k, 1, 200);
  QSeries F = *zagier_D(m1, D, k, 200).exact;
  for (i64 p : {2, 3}) {
    DefectReport dr = eigenform_defect(F, p);
    Rational want = make_rational(1 + p * p * p);
    VerifyCase vc;
    vc.label = "p=" + std::to_string(p);
    vc.pass = dr.lambda == want && dr.member;
    vc.fields = {{"p", std::to_string(p)},
                 {"lambda", to_string(dr.lambda)},
                 {"expected", to_string(want)},
                 {"defect_in_image", dr.member ? "1" : "0"}};
    rep.cases.push_back(std::move(vc));
  }
  return rep;
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

Json VerifyReport::json() const {
  Json jcases = Json::array();
  for (const auto& c : cases) {
    Json fields = Json::object();
    for (auto& [k, v] : c.fields) fields[k] = v;
    jcases.push_back(Json{{"label", c.label}, {"pass", c.pass},
                          {"fields", std::move(fields)}});
  }
  return Json{{"suite", suite}, {"passed", passed()}, {"cases", std::move(jcases)}};
}

std::string VerifyReport::csv() const {
  std::ostringstream os;
  os << "label,pass";
  if (!cases.empty())
    for (auto& [k, v] : cases.front().fields) os << "," << k;
  os << "\n";
  for (const auto& c : cases) {
    os << c.label << "," << (c.pass ? 1 : 0);
    for (auto& [k, v] : c.fields) os << "," << v;
    os << "\n";
  }
  return os.str();
}

VerifyReport run_verify_suite(const std::string& name,
                              const VerifyOptions& opt) {
  if (name == "duality") return duality_suite(opt);
  if (name == "constant-term") return constant_term_suite(opt);
  if (name == "hecke-equivariance") return hecke_suite(opt);
  if (name == "thm1") return thm1_suite(opt);
  if (name == "shintani-proportionality") return shintani_suite(opt);
  if (name == "eigenform") return eigenform_suite(opt);
  throw std::invalid_argument(
      "suite must be duality, constant-term, hecke-equivariance, thm1, "
      "shintani-proportionality, or eigenform");
}

}  // namespace ml
