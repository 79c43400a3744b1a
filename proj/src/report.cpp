#include "pclass/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pclass/error.hpp"

namespace pclass {

bool Tolerance::le(double lhs, double rhs) const noexcept {
  return lhs <= rhs + atol + rtol * std::max(std::abs(lhs), std::abs(rhs));
}

const char* to_string(HypothesisStatus s) noexcept {
  return s == HypothesisStatus::all_certified ? "all-certified" : "contains-assumed";
}

InequalityReport::InequalityReport(std::string name, std::vector<ChainEntry> chain, HypothesisStatus status,
                                   Tolerance tol)
    : name_(std::move(name)), chain_(std::move(chain)), tol_(tol), status_(status) {
  if (chain_.size() < 2) fail(ErrorCode::invalid_input, "an inequality chain needs at least two members");
  for (const auto& e : chain_) {
    if (!std::isfinite(e.value))
      fail(ErrorCode::domain, fmt::format("{}: chain member '{}' is not finite", name_, e.label));
  }
  slacks_.reserve(chain_.size() - 1);
  for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
    slacks_.push_back(chain_[i + 1].value - chain_[i].value);
    if (!tol_.le(chain_[i].value, chain_[i + 1].value)) holds_ = false;
  }
}

std::optional<std::size_t> InequalityReport::first_failing_link() const noexcept {
  for (std::size_t i = 0; i + 1 < chain_.size(); ++i)
    if (!tol_.le(chain_[i].value, chain_[i + 1].value)) return i;
  return std::nullopt;
}

double InequalityReport::max_violation() const noexcept {
  double v = 0.0;
  for (double s : slacks_) v = std::max(v, -s);
  return v;
}

InequalityReport& InequalityReport::set_derived(const std::string& key, double v) {
  derived_[key] = v;
  return *this;
}

InequalityReport& InequalityReport::add_note(std::string note) {
  notes_.push_back(std::move(note));
  return *this;
}

InequalityReport& InequalityReport::set_inputs(nlohmann::json inputs) {
  inputs_ = std::move(inputs);
  return *this;
}

nlohmann::json to_json(const InequalityReport& r) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& e : r.chain()) chain.push_back({{"label", e.label}, {"value", e.value}});
  nlohmann::json j = {
      {"schema_version", kReportSchemaVersion},
      {"name", r.name()},
      {"inputs", r.inputs()},
      {"chain", chain},
      {"slacks", r.slacks()},
      {"holds", r.holds()},
      {"tolerance", {{"atol", r.tolerance().atol}, {"rtol", r.tolerance().rtol}}},
      {"hypothesis_status", to_string(r.hypothesis_status())},
  };
  if (!r.derived().empty()) j["derived"] = r.derived();
  if (!r.notes().empty()) j["notes"] = r.notes();
  return j;
}

void HypothesisLedger::require(const ScalarFunction& f, Property p, const char* context) {
  switch (f.flag(p)) {
    case FlagState::certified:
      return;
    case FlagState::assumed:
      status_ = HypothesisStatus::contains_assumed;
      return;
    case FlagState::refuted:
      fail(ErrorCode::hypothesis, fmt::format("{}: '{}' is refuted as {}", context, f.label(), to_string(p)));
    case FlagState::unknown:
      fail(ErrorCode::hypothesis,
           fmt::format("{}: '{}' is not established as {} (certify or assume it)", context, f.label(), to_string(p)));
  }
}

}  // namespace pclass
