#include "maasslift/serialize.hpp"

#include <stdexcept>

namespace ml {

namespace {

std::string rat_str(const Rational& r) {
  return Rational(r.get_num()).get_str() + "/" + Rational(r.get_den()).get_str();
}

i64 as_i64(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw std::invalid_argument(std::string(what) + " must be an integer");
  return j.get<i64>();
}

const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("missing key: ") + key);
  return *it;
}

}  // namespace

Json qseries_json(const QSeries& s) {
  Json coeffs = Json::array();
  for (auto& [n, c] : s.coeffs) coeffs.push_back(Json::array({n, rat_str(c)}));
  return Json{{"twice_weight", s.twice_weight},
              {"level", s.level == Level::sl2z ? "sl2z" : "gamma0_4"},
              {"plus", s.plus},
              {"horizon", s.horizon},
              {"coeffs", std::move(coeffs)}};
}

QSeries qseries_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("q-series JSON must be an object");
  int tw = static_cast<int>(as_i64(require(j, "twice_weight"), "twice_weight"));
  const Json& lv = require(j, "level");
  if (!lv.is_string()) throw std::invalid_argument("level must be a string");
  Level level;
  if (lv == "sl2z") level = Level::sl2z;
  else if (lv == "gamma0_4") level = Level::gamma0_4;
  else throw std::invalid_argument("level must be sl2z or gamma0_4");
  i64 horizon = as_i64(require(j, "horizon"), "horizon");
  const Json& rows = require(j, "coeffs");
  if (!rows.is_array()) throw std::invalid_argument("coeffs must be an array");
  QSeries out = QSeries::zero(tw, level, horizon);
  i64 prev = 0;
  bool first = true;
  for (const Json& row : rows) {
    if (!row.is_array() || row.size() != 2 || !row[1].is_string())
      throw std::invalid_argument("coeff rows are [exponent, \"num/den\"]");
    i64 n = as_i64(row[0], "exponent");
    if (!first && n <= prev)
      throw std::invalid_argument("coeff exponents must ascend");
    if (n > horizon)
      throw std::invalid_argument("coeff exponent past the horizon");
    Rational c = parse_rational(row[1].get<std::string>());
    if (c != 0) out.coeffs[n] = c;
    prev = n;
    first = false;
  }
  out.normalize();
  if (j.contains("plus") && require(j, "plus").is_boolean() &&
      j["plus"].get<bool>() != out.plus)
    throw std::invalid_argument("plus flag does not match the support");
  return out;
}

Json principal_json(const PrincipalPart& p) {
  Json out = Json::array();
  for (auto& [n, c] : p) out.push_back(Json::array({n, rat_str(c)}));
  return out;
}

PrincipalPart principal_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("principal part must be an array");
  PrincipalPart out;
  for (const Json& row : j) {
    if (!row.is_array() || row.size() != 2 || !row[1].is_string())
      throw std::invalid_argument("principal rows are [exponent, \"num/den\"]");
    i64 n = as_i64(row[0], "exponent");
    if (n >= 0) throw std::invalid_argument("principal exponents are negative");
    if (out.count(n)) throw std::invalid_argument("duplicate principal exponent");
    Rational c = parse_rational(row[1].get<std::string>());
    if (c != 0) out[n] = c;
  }
  return out;
}

Json model_json(const HarmonicModel& m) {
  Json out{{"k", m.k}, {"holo", qseries_json(m.holo_part)}};
  out["shadow"] = m.shadow.is_zero() ? Json() : qseries_json(m.shadow);
  return out;
}

HarmonicModel model_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("model JSON must be an object");
  HarmonicModel m;
  if (j.contains("holo")) {
    m.holo_part = qseries_from_json(j["holo"]);
    if (j.contains("k") && !j["k"].is_null())
      m.k = static_cast<int>(as_i64(j["k"], "k"));
    else if ((4 - m.holo_part.twice_weight) % 8 == 0)
      m.k = (4 - m.holo_part.twice_weight) / 8;
    else
      throw std::invalid_argument("cannot infer k from the holomorphic weight");
    if (j.contains("shadow") && !j["shadow"].is_null())
      m.shadow = qseries_from_json(j["shadow"]);
    else
      m.shadow = QSeries::zero(4 * m.k, Level::sl2z, 1);
  } else {
    m.holo_part = qseries_from_json(j);
    if ((4 - m.holo_part.twice_weight) % 8 != 0)
      throw std::invalid_argument("cannot infer k from the holomorphic weight");
    m.k = (4 - m.holo_part.twice_weight) / 8;
    m.shadow = QSeries::zero(4 * m.k, Level::sl2z, 1);
  }
  m.twice_weight = m.holo_part.twice_weight;
  check_harmonic_model(m);
  return m;
}

Json budget_json(const NumBudget& b) {
  return Json{{"kloosterman_c_max", b.kloosterman_c_max},
              {"coset_c_max", b.coset_c_max},
              {"series_terms", b.series_terms},
              {"quad_depth", b.quad_depth},
              {"tol", b.tol}};
}

NumBudget budget_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("budget JSON must be an object");
  NumBudget b;
  if (j.contains("kloosterman_c_max"))
    b.kloosterman_c_max = as_i64(j["kloosterman_c_max"], "kloosterman_c_max");
  if (j.contains("coset_c_max"))
    b.coset_c_max = as_i64(j["coset_c_max"], "coset_c_max");
  if (j.contains("series_terms"))
    b.series_terms = static_cast<int>(as_i64(j["series_terms"], "series_terms"));
  if (j.contains("quad_depth"))
    b.quad_depth = static_cast<int>(as_i64(j["quad_depth"], "quad_depth"));
  if (j.contains("tol")) {
    if (!j["tol"].is_number()) throw std::invalid_argument("tol must be a number");
    b.tol = j["tol"].get<double>();
  }
  if (b.kloosterman_c_max < 1 || b.coset_c_max < 1 || b.series_terms < 1 ||
      b.quad_depth < 1 || !(b.tol > 0))
    throw std::invalid_argument("budgets must be positive");
  return b;
}

namespace {

Json eval_rows(const std::map<i64, EvalReport>& rows) {
  Json out = Json::array();
  for (auto& [n, r] : rows)
    out.push_back(Json::array({n, r.value.real(), r.value.imag(), r.est_error}));
  return out;
}

}  // namespace

Json lift_json(const LiftResult& r) {
  Json out{{"lift", lift_kind_name(r.kind)}, {"k", r.k}, {"d", r.d}, {"D", r.D}};
  out["exact"] = r.exact ? qseries_json(*r.exact) : Json();
  out["numeric"] = r.numeric.empty() ? Json() : eval_rows(r.numeric);
  out["nonholo"] = r.nonholo.empty() ? Json() : eval_rows(r.nonholo);
  out["skipped"] = r.skipped;
  return out;
}

Json trace_report_json(const TraceSpec& spec, const EvalReport& rep) {
  return Json{{"spec", Json{{"d1", spec.d1},
                            {"d2", spec.d2},
                            {"k", spec.k},
                            {"route", route_name(spec.route)}}},
              {"value_re", rep.value.real()},
              {"value_im", rep.value.imag()},
              {"est_error", rep.est_error},
              {"budget", budget_json(rep.budget_used)}};
}

const char* route_name(TraceRoute r) {
  switch (r) {
    case TraceRoute::cm_values: return "cm";
    case TraceRoute::cycle_integrals: return "cycle";
    case TraceRoute::kloosterman_series: return "kloosterman";
  }
  throw std::invalid_argument("unknown trace route");
}

TraceRoute route_from_name(const std::string& name) {
  if (name == "cm") return TraceRoute::cm_values;
  if (name == "cycle") return TraceRoute::cycle_integrals;
  if (name == "kloosterman") return TraceRoute::kloosterman_series;
  throw std::invalid_argument("trace route must be cm, cycle, or kloosterman");
}

const char* lift_kind_name(LiftKind k) {
  switch (k) {
    case LiftKind::zd: return "Zd";
    case LiftKind::zD: return "ZD";
    case LiftKind::dd: return "DD";
    case LiftKind::shintani: return "shintani";
    case LiftKind::shintani_weak: return "shintani_weak";
  }
  throw std::invalid_argument("unknown lift kind");
}

LiftKind lift_kind_from_name(const std::string& name) {
  if (name == "Zd" || name == "zd") return LiftKind::zd;
  if (name == "ZD" || name == "zD") return LiftKind::zD;
  if (name == "DD" || name == "dd") return LiftKind::dd;
  if (name == "shintani") return LiftKind::shintani;
  if (name == "shintani_weak" || name == "shintani-weak")
    return LiftKind::shintani_weak;
  throw std::invalid_argument("lift kind must be zd, zD, dd, shintani, or shintani-weak");
}

}  // namespace ml
