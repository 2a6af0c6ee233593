#pragma once
// Named verification suites: each runs a fixed battery of identities and
// returns per-case pass/fail with the values involved. Shared between the
// CLI verify subcommand and the acceptance battery.

#include "maasslift/numerics.hpp"
#include "maasslift/serialize.hpp"

#include <string>
#include <vector>

namespace ml {

struct VerifyCase {
  std::string label;
  bool pass = false;
  // ordered columns for the CSV report; values are exact rational strings or
  // decimal values always accompanied by an err column
  std::vector<std::pair<std::string, std::string>> fields;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCase> cases;
  bool passed() const;
  Json json() const;
  std::string csv() const;
};

struct VerifyOptions {
  std::vector<int> ks;  // empty: suite defaults
  i64 max_abs = 0;      // duality / constant-term discriminant bound; 0: 60
  i64 horizon = 0;      // hecke-equivariance comparison depth; 0: 40
  NumBudget budget;
  bool budget_set = false;
};

// suites: duality, constant-term, hecke-equivariance, thm1,
// shintani-proportionality, eigenform
VerifyReport run_verify_suite(const std::string& name, const VerifyOptions& opt);

}  // namespace ml
