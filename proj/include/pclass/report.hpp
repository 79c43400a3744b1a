#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pclass/function_kit.hpp"

namespace pclass {

struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-9;

  /// L <= R within atol + rtol max(|L|, |R|)
  bool le(double lhs, double rhs) const noexcept;
};

enum class HypothesisStatus { all_certified, contains_assumed };

const char* to_string(HypothesisStatus s) noexcept;

struct ChainEntry {
  std::string label;
  double value;
};

/// One evaluated inequality chain v0 <= v1 <= ... . holds is true iff every
/// adjacent pair satisfies the tolerance.
class InequalityReport {
 public:
  InequalityReport(std::string name, std::vector<ChainEntry> chain,
                   HypothesisStatus status = HypothesisStatus::all_certified, Tolerance tol = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<ChainEntry>& chain() const noexcept { return chain_; }
  double value(std::size_t i) const { return chain_.at(i).value; }
  /// chain[i+1] - chain[i]
  const std::vector<double>& slacks() const noexcept { return slacks_; }
  bool holds() const noexcept { return holds_; }
  const Tolerance& tolerance() const noexcept { return tol_; }
  HypothesisStatus hypothesis_status() const noexcept { return status_; }
  std::optional<std::size_t> first_failing_link() const noexcept;
  /// max over links of max(0, L - R); zero when every link is satisfied exactly.
  double max_violation() const noexcept;

  /// Auxiliary derived quantities (lambda constants, measured hypotheses).
  const std::map<std::string, double>& derived() const noexcept { return derived_; }
  InequalityReport& set_derived(const std::string& key, double v);
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  InequalityReport& add_note(std::string note);

  const nlohmann::json& inputs() const noexcept { return inputs_; }
  InequalityReport& set_inputs(nlohmann::json inputs);

 private:
  std::string name_;
  std::vector<ChainEntry> chain_;
  std::vector<double> slacks_;
  bool holds_ = true;
  Tolerance tol_;
  HypothesisStatus status_;
  std::map<std::string, double> derived_;
  std::vector<std::string> notes_;
  nlohmann::json inputs_ = nlohmann::json::object();
};

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const InequalityReport& r);

/// Collects hypothesis flags a verifier relies on. A refuted or unknown flag
/// is a hypothesis error; assumed flags downgrade the report status.
class HypothesisLedger {
 public:
  void require(const ScalarFunction& f, Property p, const char* context);
  HypothesisStatus status() const noexcept { return status_; }

 private:
  HypothesisStatus status_ = HypothesisStatus::all_certified;
};

}  // namespace pclass
