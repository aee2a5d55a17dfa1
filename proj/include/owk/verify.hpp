#pragma once

// Acceptance checks grouped into suites.

#include <cstdint>
#include <string>
#include <vector>

#include "owk/io.hpp"

namespace owk {

struct CriterionResult {
  std::string id;  // "1" .. "11", or "poisson.*" for the drift-model extras
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  json details = json::object();
  // Wall time; kept out of the serialized result so outputs stay byte-stable.
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: none
};

struct VerifyBudgets {
  std::int64_t cf_episodes = 1000000;
  std::int64_t cf_horizon = 3000000;
  std::int64_t hitting_episodes = 1000000;
  double hitting_tail = 1e-2;
  std::int64_t death_chain_walks = 1000000;
  std::int64_t gu_walks = 200000;
  std::int64_t martin_mc = 1000000;
  double martin_max_norm = 2500.0;
  std::int64_t opposite_episodes = 100000;
  std::int64_t drift_walks = 2000;
  std::int64_t drift_steps = 2000;
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  QuadratureSpec spec;
  VerifyBudgets budgets;
};

struct SuiteResult {
  std::string suite;
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

// cf: 1-3; embedded: 4, 5; green: 6, 9; full: 7, 8, 10, 11; poisson: drift
// model; all: everything in that order.
const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& suite, const VerifyConfig& cfg);

CriterionResult check_cf_identities(const VerifyConfig& cfg);
CriterionResult check_closed_form(const VerifyConfig& cfg, const CriterionResult* arbitration);
CriterionResult check_cf_arbitration(const VerifyConfig& cfg);
CriterionResult check_singularity(const VerifyConfig& cfg);
CriterionResult check_embedded_martin(const VerifyConfig& cfg);
CriterionResult check_hitting_law(const VerifyConfig& cfg);
CriterionResult check_death_chain(const VerifyConfig& cfg);
CriterionResult check_gu_bound(const VerifyConfig& cfg);
CriterionResult check_directional_green(const VerifyConfig& cfg);
CriterionResult check_full_martin(const VerifyConfig& cfg);
CriterionResult check_opposite_half_plane(const VerifyConfig& cfg);
std::vector<CriterionResult> check_drift_model(const VerifyConfig& cfg);

json to_json(const CriterionResult& c);
json to_json(const SuiteResult& s);

// Expected total variation between a law and its empirical version from n
// samples under pure multinomial noise (Poisson approximation per cell).
double tv_noise_floor(const std::vector<double>& masses, std::int64_t n);

}  // namespace owk
