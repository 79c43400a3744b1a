#pragma once

#include <vector>

#include "pclass/report.hpp"

namespace pclass {

/// Positive values with nonnegative weights summing to 1 (within 1e-12).
class WeightedData {
 public:
  WeightedData(std::vector<double> values, std::vector<double> weights);
  /// Rescales the weights to sum to one before validating.
  static WeightedData normalized(std::vector<double> values, std::vector<double> weights);
  static WeightedData uniform(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// (sum w x^r)^(1/r); |r| < 1e-12 gives the weighted geometric mean.
double power_mean(const WeightedData& d, double r);
double arithmetic_mean(const WeightedData& d);
double geometric_mean(const WeightedData& d);
double harmonic_mean(const WeightedData& d);

enum class MeanRegime { sub_one, super_one };

/// sub-one (0<r<1): 2^{-1/r}M[-r] <= H <= M[-r] <= G <= M[r] <= A <= 2^{1/r}M[r]
/// super-one (r>1): H/2 <= M[-r] <= H <= G <= A <= M[r] <= 2A
InequalityReport mean_chain(const WeightedData& d, double r, MeanRegime regime);
/// Regime picked from r.
InequalityReport mean_chain(const WeightedData& d, double r);

}  // namespace pclass
