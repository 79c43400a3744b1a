#include "pclass/function_kit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <fmt/format.h>

#include "pclass/error.hpp"
#include "pclass/report.hpp"

namespace pclass {

const char* to_string(Property p) noexcept {
  switch (p) {
    case Property::pclass: return "pclass";
    case Property::nonnegative: return "nonnegative";
    case Property::increasing: return "increasing";
    case Property::decreasing: return "decreasing";
    case Property::convex: return "convex";
    case Property::subadditive: return "subadditive";
    case Property::homogeneous: return "homogeneous";
  }
  return "unknown";
}

const char* to_string(FlagState s) noexcept {
  switch (s) {
    case FlagState::unknown: return "unknown";
    case FlagState::assumed: return "assumed";
    case FlagState::certified: return "certified";
    case FlagState::refuted: return "refuted";
  }
  return "unknown";
}

std::optional<Property> property_from_string(std::string_view name) noexcept {
  for (auto p : kAllProperties)
    if (name == to_string(p)) return p;
  return std::nullopt;
}

std::string format_double(double v) { return fmt::format("{}", v); }

std::vector<double> domain_grid(const SpectrumWindow& w, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = w.m();
    return g;
  }
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = w.lerp(static_cast<double>(i) / n);
  g.back() = w.M();
  return g;
}

ScalarFunction::ScalarFunction(std::string label, SpectrumWindow domain, Evaluator eval, PropertyFlags flags)
    : label_(std::move(label)), domain_(domain), eval_(std::move(eval)), flags_(flags) {
  if (domain_.width() < 1e-8)
    fail(ErrorCode::invalid_input,
         fmt::format("degenerate domain [{}, {}] for '{}'", domain_.m(), domain_.M(), label_));
  if (!eval_) fail(ErrorCode::invalid_input, "empty evaluator");
  for (double t : domain_grid(domain_)) {
    if (!std::isfinite(eval_(t)))
      fail(ErrorCode::domain, fmt::format("'{}' is not finite at t = {}", label_, t));
  }
}

double ScalarFunction::operator()(double t) const {
  if (!domain_.contains(t, kDomainSlack))
    fail(ErrorCode::domain, fmt::format("'{}' evaluated at {} outside its domain [{}, {}]", label_, t,
                                        domain_.m(), domain_.M()));
  const double v = eval_(domain_.clamp(t));
  if (!std::isfinite(v)) fail(ErrorCode::domain, fmt::format("'{}' is not finite at t = {}", label_, t));
  return v;
}

ScalarFunction ScalarFunction::with_flag(Property p, FlagState s) const {
  ScalarFunction copy = *this;
  copy.flags_.set(p, s);
  return copy;
}

ScalarFunction ScalarFunction::restricted(const SpectrumWindow& sub) const {
  if (!domain_.contains(sub, kDomainSlack))
    fail(ErrorCode::domain, fmt::format("[{}, {}] is not inside the domain of '{}'", sub.m(), sub.M(), label_));
  return ScalarFunction(label_, sub, eval_, flags_);
}

namespace {

PropertyFlags make_flags(std::initializer_list<Property> certified) {
  PropertyFlags f;
  for (auto p : certified) f.set(p, FlagState::certified);
  return f;
}

bool is_integer(double r) { return std::isfinite(r) && std::floor(r) == r; }

}  // namespace

ScalarFunction power_function(double r, const SpectrumWindow& domain) {
  if (!std::isfinite(r)) fail(ErrorCode::invalid_input, "power exponent must be finite");
  const std::string label = "power:" + format_double(r);
  if (r == 0.0) {
    auto flags = make_flags({Property::pclass, Property::nonnegative, Property::increasing, Property::decreasing,
                             Property::convex, Property::subadditive});
    flags.set(Property::homogeneous, FlagState::refuted);
    return ScalarFunction(label, domain, [](double) { return 1.0; }, flags);
  }
  const bool integral = is_integer(r) && r > 0;
  if (!integral && r > 0 && domain.m() < 0)
    fail(ErrorCode::invalid_input, fmt::format("power {} needs a domain inside [0, inf)", r));
  if (r < 0 && domain.m() <= 0)
    fail(ErrorCode::invalid_input, fmt::format("power {} needs a domain inside (0, inf)", r));

  PropertyFlags flags;
  if (r > 0 && r < 1) {
    flags = make_flags({Property::pclass, Property::nonnegative, Property::increasing, Property::subadditive});
  } else if (r >= 1 && domain.m() >= 0) {
    flags = make_flags({Property::pclass, Property::nonnegative, Property::increasing, Property::convex});
    if (r == 1) {
      flags.set(Property::homogeneous, FlagState::certified);
      flags.set(Property::subadditive, FlagState::certified);
    }
  } else if (r < 0) {
    flags = make_flags({Property::pclass, Property::nonnegative, Property::decreasing, Property::convex});
  } else if (integral && std::fmod(r, 2.0) == 0.0) {
    flags = make_flags({Property::pclass, Property::nonnegative, Property::convex});
  }
  return ScalarFunction(label, domain, [r](double t) { return std::pow(t, r); }, flags);
}

ScalarFunction natural_log(const SpectrumWindow& domain) {
  if (domain.m() <= 0) fail(ErrorCode::invalid_input, "ln needs a domain inside (0, inf)");
  PropertyFlags flags = make_flags({Property::increasing});
  if (domain.m() >= 1) {
    flags.set(Property::pclass, FlagState::certified);
    flags.set(Property::nonnegative, FlagState::certified);
  } else {
    // ln m < 0 gives f(m) > 2 f(m) at x = y = m
    flags.set(Property::pclass, FlagState::refuted);
    flags.set(Property::nonnegative, FlagState::refuted);
  }
  return ScalarFunction("ln", domain, [](double t) { return std::log(t); }, flags);
}

ScalarFunction quadratic_cap(double alpha, const SpectrumWindow& domain) {
  if (!std::isfinite(alpha) || alpha < 1.0)
    fail(ErrorCode::invalid_input, fmt::format("qcap needs alpha >= 1, got {}", alpha));
  if (!SpectrumWindow(-1.0, 1.0).contains(domain))
    fail(ErrorCode::invalid_input, "qcap domain must lie inside [-1, 1]");
  return ScalarFunction("qcap:" + format_double(alpha), domain,
                        [alpha](double t) { return (2.0 - t * t) / alpha; },
                        make_flags({Property::pclass, Property::nonnegative}));
}

ScalarFunction affine(double a, double b, const SpectrumWindow& domain) {
  if (!std::isfinite(a) || !std::isfinite(b)) fail(ErrorCode::invalid_input, "affine coefficients must be finite");
  PropertyFlags flags = make_flags({Property::convex});
  if (a >= 0) flags.set(Property::increasing, FlagState::certified);
  if (a <= 0) flags.set(Property::decreasing, FlagState::certified);
  flags.set(Property::homogeneous, b == 0 ? FlagState::certified : FlagState::refuted);
  flags.set(Property::subadditive, b >= 0 ? FlagState::certified : FlagState::unknown);
  const bool nonneg = std::min(a * domain.m() + b, a * domain.M() + b) >= 0;
  flags.set(Property::nonnegative, nonneg ? FlagState::certified : FlagState::refuted);
  // nonnegative convex functions are P-class; nonzero P-class functions are nonnegative
  flags.set(Property::pclass, nonneg ? FlagState::certified : FlagState::refuted);
  return ScalarFunction("affine:" + format_double(a) + "," + format_double(b), domain,
                        [a, b](double t) { return a * t + b; }, flags);
}

ScalarFunction reciprocal(const SpectrumWindow& domain) {
  if (domain.m() <= 0) fail(ErrorCode::invalid_input, "recip needs a domain inside (0, inf)");
  return ScalarFunction("recip", domain, [](double t) { return 1.0 / t; },
                        make_flags({Property::pclass, Property::nonnegative, Property::decreasing, Property::convex}));
}

ScalarFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    fail(ErrorCode::invalid_input, "pwl needs at least two knots with matching values");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) fail(ErrorCode::invalid_input, "pwl knots must be finite");
    if (i > 0 && !(xs[i] > xs[i - 1])) fail(ErrorCode::invalid_input, "pwl knots must be strictly increasing");
  }
  std::string label = "pwl:";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) label += ',';
    label += format_double(xs[i]) + "," + format_double(ys[i]);
  }
  SpectrumWindow domain(xs.front(), xs.back());
  auto table = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(std::move(xs), std::move(ys));
  return ScalarFunction(label, domain, [table](double t) {
    const auto& [x, y] = *table;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - x.begin()), 1, x.size() - 1);
    std::size_t lo = hi - 1;
    double s = (t - x[lo]) / (x[hi] - x[lo]);
    return y[lo] + s * (y[hi] - y[lo]);
  });
}

ScalarFunction builtin(std::string_view family, std::span<const double> params, const SpectrumWindow& domain) {
  auto want = [&](std::size_t n) {
    if (params.size() != n)
      fail(ErrorCode::invalid_input, fmt::format("family '{}' takes {} parameter(s), got {}", family, n, params.size()));
  };
  if (family == "power") {
    want(1);
    return power_function(params[0], domain);
  }
  if (family == "ln") {
    want(0);
    return natural_log(domain);
  }
  if (family == "qcap") {
    want(1);
    return quadratic_cap(params[0], domain);
  }
  if (family == "affine") {
    want(2);
    return affine(params[0], params[1], domain);
  }
  if (family == "recip") {
    want(0);
    return reciprocal(domain);
  }
  if (family == "pwl") {
    if (params.size() % 2 != 0) fail(ErrorCode::invalid_input, "pwl takes (x, y) pairs");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < params.size(); i += 2) {
      xs.push_back(params[i]);
      ys.push_back(params[i + 1]);
    }
    auto f = piecewise_linear(std::move(xs), std::move(ys));
    return f.domain() == domain ? f : f.restricted(domain);
  }
  fail(ErrorCode::invalid_input, fmt::format("unknown function family '{}'", family));
}

namespace {

double grid_tolerance(std::span<const double> values) {
  double mx = 0.0;
  for (double v : values) mx = std::max(mx, std::abs(v));
  return 1e-10 * (1.0 + mx);
}

std::vector<double> evaluate(const ScalarFunction& f, std::span<const double> grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return v;
}

struct WorstTracker {
  double worst = -std::numeric_limits<double>::infinity();
  Witness at;
  void offer(double violation, Witness w) {
    if (violation > worst) {
      worst = violation;
      at = w;
    }
  }
};

Certificate finish(Property p, const WorstTracker& t, double tol, GridSpec grid) {
  Certificate c;
  c.property = p;
  c.grid = grid;
  c.tolerance = tol;
  c.worst_violation = std::isfinite(t.worst) ? t.worst : 0.0;
  c.verdict = c.worst_violation > tol ? FlagState::refuted : FlagState::certified;
  if (c.verdict == FlagState::refuted) c.witness = t.at;
  return c;
}

}  // namespace

Certificate certify_pclass(const ScalarFunction& f, GridSpec grid) {
  if (grid.points_xy < 2 || grid.points_lambda < 2) fail(ErrorCode::invalid_input, "grid needs >= 2 points per axis");
  const auto pts = domain_grid(f.domain(), grid.points_xy);
  const auto fx = evaluate(f, pts);
  const double tol = grid_tolerance(fx);
  std::vector<double> lambdas(grid.points_lambda);
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    lambdas[k] = static_cast<double>(k) / static_cast<double>(lambdas.size() - 1);

  WorstTracker t;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      for (double l : lambdas) {
        const double z = f.domain().clamp(l * pts[i] + (1.0 - l) * pts[j]);
        t.offer(f(z) - fx[i] - fx[j], {pts[i], pts[j], l});
      }
    }
  }
  return finish(Property::pclass, t, tol, grid);
}

Certificate certify_flag(const ScalarFunction& f, Property property) {
  if (property == Property::pclass) return certify_pclass(f);
  const GridSpec spec{kFlagGridPoints, 0};
  const auto g = domain_grid(f.domain());
  const auto v = evaluate(f, g);
  const double tol = grid_tolerance(v);
  WorstTracker t;
  switch (property) {
    case Property::nonnegative: {
      for (std::size_t i = 0; i < g.size(); ++i) t.offer(-v[i], {g[i], g[i], 1.0});
      return finish(property, t, 1e-12, spec);
    }
    case Property::increasing:
      for (std::size_t i = 0; i + 1 < g.size(); ++i) t.offer(v[i] - v[i + 1], {g[i], g[i + 1], 0.0});
      break;
    case Property::decreasing:
      for (std::size_t i = 0; i + 1 < g.size(); ++i) t.offer(v[i + 1] - v[i], {g[i], g[i + 1], 0.0});
      break;
    case Property::convex:
      for (std::size_t i = 1; i + 1 < g.size(); ++i)
        t.offer(v[i] - 0.5 * (v[i - 1] + v[i + 1]), {g[i - 1], g[i + 1], 0.5});
      break;
    case Property::subadditive:
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i; j < g.size(); ++j) {
          const double s = g[i] + g[j];
          if (!f.domain().contains(s)) continue;
          t.offer(f(s) - v[i] - v[j], {g[i], g[j], 0.0});
        }
      }
      break;
    case Property::homogeneous:
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0.0) {
          // f(2 * 0) = 2 f(0) forces f(0) = 0
          t.offer(std::abs(v[i]) - 0.0, {0.0, 0.0, 2.0});
          continue;
        }
        for (std::size_t j = 0; j < g.size(); ++j) {
          if (j == i || g[j] == 0.0 || (g[i] > 0) != (g[j] > 0)) continue;
          const double l = g[j] / g[i];
          t.offer(std::abs(v[j] - l * v[i]) / std::max(1.0, l), {g[i], g[j], l});
        }
      }
      break;
    case Property::pclass:
      break;
  }
  return finish(property, t, tol, spec);
}

ScalarFunction certify_unknown_flags(const ScalarFunction& f) {
  ScalarFunction out = f;
  for (auto p : kAllProperties) {
    if (f.flag(p) == FlagState::unknown) out = out.with_flag(p, certify_flag(f, p).verdict);
  }
  return out;
}

double witness_violation(const ScalarFunction& f, const Certificate& cert) {
  if (!cert.witness) return 0.0;
  const auto [x, y, l] = *cert.witness;
  switch (cert.property) {
    case Property::pclass: return f(l * x + (1.0 - l) * y) - f(x) - f(y);
    case Property::nonnegative: return -f(x);
    case Property::increasing: return f(x) - f(y);
    case Property::decreasing: return f(y) - f(x);
    case Property::convex: return f(l * x + (1.0 - l) * y) - l * f(x) - (1.0 - l) * f(y);
    case Property::subadditive: return f(x + y) - f(x) - f(y);
    case Property::homogeneous:
      if (x == 0.0) return std::abs(f(0.0));
      return std::abs(f(y) - l * f(x)) / std::max(1.0, l);
  }
  return 0.0;
}

ScalarFunction power_compose(const ScalarFunction& f, int n) {
  if (n < 1) fail(ErrorCode::invalid_input, fmt::format("power_compose needs n >= 1, got {}", n));
  if (!f.flags().holds(Property::nonnegative))
    fail(ErrorCode::hypothesis, fmt::format("power_compose needs '{}' nonnegative", f.label()));
  if (n == 1) return f;

  PropertyFlags flags;
  flags.set(Property::nonnegative, f.flag(Property::nonnegative));
  for (auto p : {Property::increasing, Property::decreasing}) {
    if (f.flags().holds(p)) flags.set(p, f.flag(p));
  }
  const bool inherit = f.flags().holds(Property::subadditive) && f.flags().holds(Property::increasing);
  if (inherit) {
    const bool both = f.flag(Property::subadditive) == FlagState::certified &&
                      f.flag(Property::increasing) == FlagState::certified &&
                      f.flag(Property::nonnegative) == FlagState::certified;
    flags.set(Property::pclass, both ? FlagState::certified : FlagState::assumed);
  }
  return ScalarFunction(f.label() + "^" + std::to_string(n), f.domain(),
                        [f, n](double t) {
                          const double v = f(t);
                          double acc = v;
                          for (int k = 1; k < n; ++k) acc *= v;
                          return acc;
                        },
                        flags);
}

IntervalMinimum min_on_interval(const ScalarFunction& f, const SpectrumWindow& window) {
  if (!f.domain().contains(window, kDomainSlack))
    fail(ErrorCode::domain, fmt::format("window [{}, {}] is not inside the domain of '{}'", window.m(), window.M(),
                                        f.label()));
  const auto g = domain_grid(window);
  const auto v = evaluate(f, g);
  const std::size_t i = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  IntervalMinimum best{g[i], v[i]};

  double lo = g[i == 0 ? 0 : i - 1];
  double hi = g[std::min(i + 1, g.size() - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > 1e-10) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = f(d);
    }
  }
  const double t = 0.5 * (lo + hi);
  const double ft = f(t);
  if (ft < best.f_min) best = {t, ft};
  return best;
}

SubadditivePower scalar_subadditive_power(double alpha, double beta, double r) {
  if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta))
    fail(ErrorCode::invalid_input, "alpha and beta must be positive and finite");
  if (!(r > 0 && r < 1)) fail(ErrorCode::invalid_input, fmt::format("r must lie in (0, 1), got {}", r));
  SubadditivePower out;
  out.lhs = std::pow(alpha + beta, r);
  out.rhs = std::pow(alpha, r) + std::pow(beta, r);
  out.holds = Tolerance{}.le(out.lhs, out.rhs);
  return out;
}

}  // namespace pclass
