#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pclass/window.hpp"

namespace pclass {

enum class Property {
  pclass,
  nonnegative,
  increasing,
  decreasing,
  convex,
  subadditive,
  homogeneous,
};

inline constexpr std::array<Property, 7> kAllProperties = {
    Property::pclass,     Property::nonnegative, Property::increasing, Property::decreasing,
    Property::convex,     Property::subadditive, Property::homogeneous,
};

enum class FlagState { unknown, assumed, certified, refuted };

const char* to_string(Property p) noexcept;
const char* to_string(FlagState s) noexcept;
std::optional<Property> property_from_string(std::string_view name) noexcept;

class PropertyFlags {
 public:
  FlagState get(Property p) const noexcept { return states_[index(p)]; }
  void set(Property p, FlagState s) noexcept { states_[index(p)] = s; }
  /// certified or assumed
  bool holds(Property p) const noexcept {
    auto s = get(p);
    return s == FlagState::certified || s == FlagState::assumed;
  }

 private:
  static constexpr std::size_t index(Property p) noexcept { return static_cast<std::size_t>(p); }
  std::array<FlagState, kAllProperties.size()> states_{};
};

/// Real function on a closed interval with property flags. Immutable and
/// reentrant; copies share the evaluator.
class ScalarFunction {
 public:
  using Evaluator = std::function<double(double)>;

  /// Rejects degenerate domains (width < 1e-8) and evaluators that are not
  /// finite on the 1001-point domain grid.
  ScalarFunction(std::string label, SpectrumWindow domain, Evaluator eval, PropertyFlags flags = {});

  /// Evaluates at t; points within 1e-10 of the domain are clamped onto it,
  /// anything further away is a domain error.
  double operator()(double t) const;
  /// Raw evaluation without the domain check.
  double raw(double t) const { return eval_(t); }

  const std::string& label() const noexcept { return label_; }
  const SpectrumWindow& domain() const noexcept { return domain_; }
  const PropertyFlags& flags() const noexcept { return flags_; }
  FlagState flag(Property p) const noexcept { return flags_.get(p); }

  ScalarFunction with_flag(Property p, FlagState s) const;
  /// Same evaluator on a sub-interval; flags carry over (they restrict).
  ScalarFunction restricted(const SpectrumWindow& sub) const;

 private:
  std::string label_;
  SpectrumWindow domain_;
  Evaluator eval_;
  PropertyFlags flags_;
};

inline constexpr double kDomainSlack = 1e-10;
inline constexpr std::size_t kFlagGridPoints = 1001;

// Builtin families. Labels are the CLI spec strings so a report can be replayed.
ScalarFunction power_function(double r, const SpectrumWindow& domain);
ScalarFunction natural_log(const SpectrumWindow& domain);
/// (2 - t^2) / alpha, alpha >= 1, domain inside [-1, 1].
ScalarFunction quadratic_cap(double alpha, const SpectrumWindow& domain);
ScalarFunction affine(double a, double b, const SpectrumWindow& domain);
ScalarFunction reciprocal(const SpectrumWindow& domain);
/// Tabulated piecewise-linear function; knots strictly increasing, domain is
/// [xs.front(), xs.back()]. Flags start unknown.
ScalarFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys);

/// Dispatch by family name: "power" {r}, "ln" {}, "qcap" {alpha},
/// "affine" {a, b}, "recip" {}, "pwl" {x0, y0, x1, y1, ...}.
ScalarFunction builtin(std::string_view family, std::span<const double> params,
                       const SpectrumWindow& domain);

struct GridSpec {
  std::size_t points_xy = 41;
  std::size_t points_lambda = 21;
};

struct Witness {
  double x = 0.0;
  double y = 0.0;
  double lambda = 0.0;
};

struct Certificate {
  Property property = Property::pclass;
  FlagState verdict = FlagState::certified;  // certified or refuted
  std::optional<Witness> witness;
  GridSpec grid;
  double tolerance = 0.0;
  /// Largest violation found (<= tolerance when certified).
  double worst_violation = 0.0;
};

/// Grid check of f(l x + (1-l) y) <= f(x) + f(y) + tol over points_xy^2 pairs
/// and points_lambda values of l, tol = 1e-10 (1 + max |f| on the grid).
Certificate certify_pclass(const ScalarFunction& f, GridSpec grid = {});

/// Grid check of one defining predicate on the 1001-point domain grid.
/// Property::pclass forwards to certify_pclass with the default grid.
Certificate certify_flag(const ScalarFunction& f, Property property);

/// Replaces every unknown flag by the verdict of its certificate.
ScalarFunction certify_unknown_flags(const ScalarFunction& f);

/// Re-evaluates a refutation witness; returns the violation amount (positive
/// means the predicate fails at the witness).
double witness_violation(const ScalarFunction& f, const Certificate& cert);

/// t -> f(t)^n as an n-fold product. Requires f nonnegative (certified or
/// assumed) and n >= 1; n == 1 returns f unchanged.
ScalarFunction power_compose(const ScalarFunction& f, int n);

struct IntervalMinimum {
  double t_min;
  double f_min;
};

/// 1001-point scan followed by golden-section refinement on the bracketing
/// cells down to width 1e-10.
IntervalMinimum min_on_interval(const ScalarFunction& f, const SpectrumWindow& window);

struct SubadditivePower {
  double lhs;  // (alpha + beta)^r
  double rhs;  // alpha^r + beta^r
  bool holds;
};

SubadditivePower scalar_subadditive_power(double alpha, double beta, double r);

/// Shortest decimal that round-trips the double; used in labels.
std::string format_double(double v);

/// The 1001-point uniform grid on a window (endpoints exact).
std::vector<double> domain_grid(const SpectrumWindow& w, std::size_t points = kFlagGridPoints);

}  // namespace pclass
