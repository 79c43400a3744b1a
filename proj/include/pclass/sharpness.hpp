#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pclass/hermitian.hpp"

namespace pclass {

/// f(<Cx,x>) / <f(C)x,x> for unit x. Denominators <= 1e-12 are indeterminate
/// (degenerate error).
double jensen_ratio(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f);

struct SearchConfig {
  std::string family = "qcap";  // qcap | power | ln | recip
  double param_lo = 1.0;
  double param_hi = 4.0;
  std::size_t dim_min = 2;
  std::size_t dim_max = 2;
  SpectrumWindow window{-1.0, 1.0};
  std::size_t restarts = 100;
  std::size_t steps = 400;
  double step_scale = 0.25;
  std::uint64_t seed = 0;

  /// Family defaults for window and parameter range.
  static SearchConfig for_family(const std::string& family);
  void validate() const;
};

struct Incumbent {
  std::size_t restart;
  std::size_t step;
  double value;
};

struct SearchResult {
  double best = 0.0;
  std::string family;
  double param = 0.0;
  HermitianOperator c = HermitianOperator::zero(1);
  StateVector x{std::vector<double>{1.0}};
  SpectrumWindow window{0.0, 1.0};
  std::size_t trials = 0;      // objective evaluations
  std::size_t excluded = 0;    // indeterminate denominators skipped
  std::uint64_t seed = 0;
  std::vector<Incumbent> history;
};

/// Family member with its builtin flags.
ScalarFunction family_function(const std::string& family, double param, const SpectrumWindow& window);

/// Random restarts, each followed by accept-if-better coordinate perturbations.
/// The step scale halves after every 50 consecutive non-improving steps.
SearchResult search_max_ratio(const SearchConfig& cfg);

nlohmann::json to_json(const SearchResult& r);

struct LambdaRefutation {
  double lambda;
  double lhs;     // g(<Cx,x>) = 2
  double rhs;     // (1/lambda) <g(C)x,x> = 1/lambda
  double margin;  // lhs - rhs
  bool refuted;
};

/// Evaluates the quadratic-cap instance C = diag(-1,1), x = (1,1)/sqrt 2,
/// g(t) = 2 - t^2 against the candidate constant 1/lambda, lambda in (1/2, 1).
LambdaRefutation refute_lambda(double lambda);

nlohmann::json to_json(const LambdaRefutation& r);

}  // namespace pclass
