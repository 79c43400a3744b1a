#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pclass/report.hpp"

namespace pclass {

/// Registered verifier names, in CLI order.
const std::vector<std::string>& check_names();
bool is_check(std::string_view name) noexcept;

/// Runs one check on an explicit instance. The instance is embedded in the
/// report inputs so the report can be replayed.
InequalityReport run_instance(std::string_view check, const nlohmann::json& instance);

/// Draws a random instance for a check. Options override per-check defaults
/// (dim, dim_min, dim_max, fn, window, r, n, kind, mode, F, blocks, ...).
/// The draw depends only on (seed, trial).
nlohmann::json random_instance(std::string_view check, const nlohmann::json& options, std::uint64_t seed,
                               std::uint64_t trial);

/// random_instance followed by run_instance; seed and trial go into inputs.
InequalityReport run_random(std::string_view check, const nlohmann::json& options, std::uint64_t seed,
                            std::uint64_t trial);

struct CampaignSummary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t unverified = 0;
  double max_slack_violation = 0.0;

  void add(const InequalityReport& r);
  bool passed() const noexcept { return failures == 0 && unverified == 0; }
};

nlohmann::json to_json(const CampaignSummary& s);

}  // namespace pclass
