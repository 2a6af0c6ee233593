#pragma once
// JSON wire format. Rationals travel as exact "num/den" strings, never as
// floats; doubles appear only where a value is inherently numeric and then
// always next to an est_error field.

#include "maasslift/bases.hpp"
#include "maasslift/harmonic.hpp"
#include "maasslift/lifts.hpp"
#include "maasslift/numerics.hpp"
#include "maasslift/qseries.hpp"
#include "maasslift/traces.hpp"

#include <json.hpp>

#include <string>

namespace ml {

using Json = nlohmann::json;

// {"twice_weight": int, "level": "sl2z"|"gamma0_4", "plus": bool,
//  "horizon": int, "coeffs": [[exponent, "num/den"], ...]} ascending
Json qseries_json(const QSeries& s);
QSeries qseries_from_json(const Json& j);

// [[exponent, "num/den"], ...], negative exponents only
Json principal_json(const PrincipalPart& p);
PrincipalPart principal_from_json(const Json& j);

// bare QSeries JSON (zero shadow, k inferred from the weight) or
// {"k": int, "holo": QSeries, "shadow": QSeries|null}
Json model_json(const HarmonicModel& m);
HarmonicModel model_from_json(const Json& j);

Json budget_json(const NumBudget& b);
NumBudget budget_from_json(const Json& j);  // missing keys keep defaults

// {"lift": "Zd"|"ZD"|"DD"|"shintani"|"shintani_weak", "k", "d", "D",
//  "exact": QSeries|null, "numeric": [[exponent, re, im, err], ...]|null,
//  "nonholo": [[exponent, re, im, err], ...]|null, "skipped": [exponent, ...]}
Json lift_json(const LiftResult& r);

// {"spec": {"d1", "d2", "k", "route"}, "value_re", "value_im",
//  "est_error", "budget"}
Json trace_report_json(const TraceSpec& spec, const EvalReport& rep);

const char* route_name(TraceRoute r);
TraceRoute route_from_name(const std::string& name);
const char* lift_kind_name(LiftKind k);
LiftKind lift_kind_from_name(const std::string& name);

}  // namespace ml
