#include "pclass/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pclass/error.hpp"

namespace pclass {

WeightedData::WeightedData(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.empty()) fail(ErrorCode::invalid_input, "weighted data needs at least one value");
  if (values_.size() != weights_.size())
    fail(ErrorCode::invalid_input,
         fmt::format("{} values but {} weights", values_.size(), weights_.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0)
      fail(ErrorCode::invalid_input, fmt::format("value {} must be positive and finite", values_[i]));
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
      fail(ErrorCode::invalid_input, fmt::format("weight {} must be nonnegative and finite", weights_[i]));
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorCode::invalid_input, fmt::format("weights must sum to 1 within 1e-12, got {}", total));
}

WeightedData WeightedData::normalized(std::vector<double> values, std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) fail(ErrorCode::invalid_input, "weights must have a positive sum");
  for (double& w : weights) w /= total;
  return WeightedData(std::move(values), std::move(weights));
}

WeightedData WeightedData::uniform(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n == 0) fail(ErrorCode::invalid_input, "weighted data needs at least one value");
  return WeightedData(std::move(values), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double geometric_mean(const WeightedData& d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) acc += d.weights()[i] * std::log(d.values()[i]);
  return std::exp(acc);
}

double power_mean(const WeightedData& d, double r) {
  if (!std::isfinite(r)) fail(ErrorCode::invalid_input, "power mean exponent must be finite");
  if (std::abs(r) < 1e-12) return geometric_mean(d);
  double extreme = 0.0;
  for (double x : d.values()) extreme = std::max(extreme, std::abs(r * std::log(x)));
  if (extreme < 600.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) acc += d.weights()[i] * std::pow(d.values()[i], r);
    return std::pow(acc, 1.0 / r);
  }
  // log-sum-exp of log w_i + r log x_i
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.weights()[i] == 0.0) continue;
    terms.push_back(std::log(d.weights()[i]) + r * std::log(d.values()[i]));
    peak = std::max(peak, terms.back());
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - peak);
  return std::exp((peak + std::log(acc)) / r);
}

double arithmetic_mean(const WeightedData& d) { return power_mean(d, 1.0); }
double harmonic_mean(const WeightedData& d) { return power_mean(d, -1.0); }

InequalityReport mean_chain(const WeightedData& d, double r, MeanRegime regime) {
  if (!std::isfinite(r) || r <= 0.0 || r == 1.0)
    fail(ErrorCode::invalid_input, fmt::format("mean-chain: r must lie in (0,1) or (1,inf), got {}", r));
  if ((regime == MeanRegime::sub_one) != (r < 1.0))
    fail(ErrorCode::invalid_input,
         fmt::format("mean-chain: r = {} is outside the {} regime", r, regime == MeanRegime::sub_one ? "sub-one" : "super-one"));
  const double h = harmonic_mean(d);
  const double g = geometric_mean(d);
  const double a = arithmetic_mean(d);
  const double mneg = power_mean(d, -r);
  const double mpos = power_mean(d, r);
  std::vector<ChainEntry> chain;
  if (regime == MeanRegime::sub_one) {
    chain = {{"2^(-1/r) M[-r]", std::pow(2.0, -1.0 / r) * mneg}, {"H", h}, {"M[-r]", mneg}, {"G", g},
             {"M[r]", mpos}, {"A", a}, {"2^(1/r) M[r]", std::pow(2.0, 1.0 / r) * mpos}};
  } else {
    chain = {{"H/2", 0.5 * h}, {"M[-r]", mneg}, {"H", h}, {"G", g}, {"A", a}, {"M[r]", mpos}, {"2A", 2.0 * a}};
  }
  InequalityReport rep("mean-chain", std::move(chain));
  rep.set_derived("r", r);
  return rep;
}

InequalityReport mean_chain(const WeightedData& d, double r) {
  return mean_chain(d, r, r < 1.0 ? MeanRegime::sub_one : MeanRegime::super_one);
}

}  // namespace pclass
