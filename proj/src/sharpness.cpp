#include "pclass/sharpness.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pclass/error.hpp"
#include "pclass/ineq_single.hpp"
#include "pclass/rng.hpp"
#include "pclass/serialize.hpp"

namespace pclass {

double jensen_ratio(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f) {
  detail::require_unit(x, "jensen-ratio");
  if (c.dim() != x.dim()) fail(ErrorCode::invalid_input, "jensen-ratio: dimension mismatch");
  const auto d = spectral_decompose(c);
  require_spectrum_in(d, f.domain(), "jensen-ratio");
  const double denom = function_form(d, f, x);
  if (!(denom > 1e-12))
    fail(ErrorCode::degenerate, fmt::format("jensen-ratio: indeterminate, <f(C)x,x> = {} <= 1e-12", denom));
  return f(quadratic_form(c, x)) / denom;
}

namespace {

bool has_param(const std::string& family) { return family == "qcap" || family == "power"; }

}  // namespace

SearchConfig SearchConfig::for_family(const std::string& family) {
  SearchConfig cfg;
  cfg.family = family;
  if (family == "qcap") {
    cfg.param_lo = 1.0, cfg.param_hi = 4.0, cfg.window = SpectrumWindow(-1.0, 1.0);
  } else if (family == "power") {
    cfg.param_lo = 0.01, cfg.param_hi = 0.99, cfg.window = SpectrumWindow(1.0, 4.0);
  } else if (family == "ln") {
    cfg.param_lo = cfg.param_hi = 0.0, cfg.window = SpectrumWindow(1.0, 4.0);
  } else if (family == "recip") {
    cfg.param_lo = cfg.param_hi = 0.0, cfg.window = SpectrumWindow(0.5, 2.0);
  } else {
    fail(ErrorCode::invalid_input, fmt::format("unknown sharpness family '{}' (qcap, power, ln, recip)", family));
  }
  return cfg;
}

void SearchConfig::validate() const {
  if (family != "qcap" && family != "power" && family != "ln" && family != "recip")
    fail(ErrorCode::invalid_input, fmt::format("unknown sharpness family '{}' (qcap, power, ln, recip)", family));
  if (restarts < 1) fail(ErrorCode::invalid_input, "restarts must be >= 1");
  if (!(step_scale > 0.0) || !std::isfinite(step_scale)) fail(ErrorCode::invalid_input, "step scale must be > 0");
  if (dim_min < 1 || dim_min > dim_max) fail(ErrorCode::invalid_input, "dimension range must satisfy 1 <= min <= max");
  if (has_param(family) && !(param_lo <= param_hi))
    fail(ErrorCode::invalid_input, "parameter range must satisfy lo <= hi");
  if (family == "qcap" && (param_lo < 1.0 || !SpectrumWindow(-1.0, 1.0).contains(window)))
    fail(ErrorCode::invalid_input, "qcap needs alpha >= 1 and a window inside [-1, 1]");
  if (family == "power" && (param_lo <= 0.0 || param_hi >= 1.0 || window.m() < 0.0))
    fail(ErrorCode::invalid_input, "power needs r in (0, 1) and a nonnegative window");
  if (family == "ln" && window.m() < 1.0) fail(ErrorCode::invalid_input, "ln needs a window inside [1, inf)");
  if (family == "recip" && window.m() <= 0.0) fail(ErrorCode::invalid_input, "recip needs a positive window");
}

ScalarFunction family_function(const std::string& family, double param, const SpectrumWindow& window) {
  if (family == "qcap") return quadratic_cap(param, window);
  if (family == "power") return power_function(param, window);
  if (family == "ln") return natural_log(window);
  if (family == "recip") return reciprocal(window);
  fail(ErrorCode::invalid_input, fmt::format("unknown sharpness family '{}'", family));
}

namespace {

struct Point {
  double param;
  std::vector<double> eigs;
  std::vector<double> q;  // column-major orthogonal
  std::vector<double> x;
};

struct Evaluation {
  bool admissible;
  double value;
};

HermitianOperator build(const Point& p) { return conjugate_diagonal(p.q, p.eigs); }

Evaluation evaluate(const SearchConfig& cfg, const Point& p) {
  try {
    const auto f = family_function(cfg.family, p.param, cfg.window);
    return {true, jensen_ratio(build(p), StateVector(p.x), f)};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::degenerate) return {false, 0.0};
    throw;
  }
}

Point draw(const SearchConfig& cfg, Rng& rng) {
  Point p;
  const auto dim = static_cast<std::size_t>(
      rng.integer(static_cast<std::int64_t>(cfg.dim_min), static_cast<std::int64_t>(cfg.dim_max)));
  p.param = has_param(cfg.family) ? (cfg.param_lo < cfg.param_hi ? rng.uniform(cfg.param_lo, cfg.param_hi) : cfg.param_lo)
                                  : 0.0;
  for (std::size_t i = 0; i < dim; ++i) p.eigs.push_back(rng.uniform(cfg.window.m(), cfg.window.M()));
  p.q = random_orthogonal(dim, rng.engine()());
  const auto x = random_state(dim, rng.engine()(), true);
  p.x.assign(x.coords().begin(), x.coords().end());
  return p;
}

void normalize(std::vector<double>& x) {
  double n = 0.0;
  for (double v : x) n += v * v;
  n = std::sqrt(n);
  for (double& v : x) v /= n;
}

Point perturb(const SearchConfig& cfg, const Point& base, double scale, Rng& rng) {
  Point p = base;
  const std::size_t dim = p.eigs.size();
  const bool param_move = has_param(cfg.family) && cfg.param_lo < cfg.param_hi;
  const int kinds = 4;
  int kind = static_cast<int>(rng.integer(0, kinds - 1));
  if (kind == 2 && !param_move) kind = 0;
  if (kind == 3 && dim < 2) kind = 1;
  switch (kind) {
    case 0: {
      const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(dim) - 1));
      p.eigs[i] = cfg.window.clamp(p.eigs[i] + scale * cfg.window.width() * rng.normal());
      break;
    }
    case 1: {
      const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(dim) - 1));
      p.x[i] += scale * rng.normal();
      double n = 0.0;
      for (double v : p.x) n += v * v;
      if (n < 1e-24) return base;
      normalize(p.x);
      break;
    }
    case 2:
      p.param = std::clamp(p.param + scale * (cfg.param_hi - cfg.param_lo) * rng.normal(), cfg.param_lo, cfg.param_hi);
      break;
    default: {
      const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(dim) - 1));
      auto j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(dim) - 2));
      if (j >= i) ++j;
      const double theta = scale * std::numbers::pi * rng.normal();
      const double cs = std::cos(theta), sn = std::sin(theta);
      for (std::size_t r = 0; r < dim; ++r) {
        const double a = p.q[i * dim + r], b = p.q[j * dim + r];
        p.q[i * dim + r] = cs * a - sn * b;
        p.q[j * dim + r] = sn * a + cs * b;
      }
      break;
    }
  }
  return p;
}

}  // namespace

SearchResult search_max_ratio(const SearchConfig& cfg) {
  cfg.validate();
  SearchResult out;
  out.family = cfg.family;
  out.window = cfg.window;
  out.seed = cfg.seed;
  bool found = false;
  Point best_point;
  for (std::size_t k = 0; k < cfg.restarts; ++k) {
    Rng rng(derive_seed(cfg.seed, k));
    Point cur;
    Evaluation ev{false, 0.0};
    for (int attempt = 0; attempt < 100 && !ev.admissible; ++attempt) {
      cur = draw(cfg, rng);
      ev = evaluate(cfg, cur);
      ++out.trials;
      if (!ev.admissible) ++out.excluded;
    }
    if (!ev.admissible) continue;
    double value = ev.value;
    auto offer = [&](std::size_t step) {
      if (!found || value > out.best) {
        found = true;
        out.best = value;
        best_point = cur;
        out.history.push_back({k, step, value});
      }
    };
    offer(0);
    double scale = cfg.step_scale;
    std::size_t stale = 0;
    for (std::size_t s = 1; s <= cfg.steps; ++s) {
      Point cand = perturb(cfg, cur, scale, rng);
      const auto ce = evaluate(cfg, cand);
      ++out.trials;
      if (!ce.admissible) ++out.excluded;
      if (ce.admissible && ce.value > value) {
        cur = std::move(cand);
        value = ce.value;
        stale = 0;
        offer(s);
      } else if (++stale >= 50) {
        scale *= 0.5;
        stale = 0;
      }
    }
  }
  if (!found)
    fail(ErrorCode::search_failure,
         fmt::format("family '{}' produced no admissible instance in {} restarts", cfg.family, cfg.restarts));
  out.param = best_point.param;
  out.c = build(best_point);
  out.x = StateVector(best_point.x);
  return out;
}

nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : r.history) history.push_back({{"restart", h.restart}, {"step", h.step}, {"value", h.value}});
  return {{"best", r.best},       {"family", r.family},     {"param", r.param},
          {"window", to_json(r.window)}, {"matrix", to_json(r.c)}, {"state", to_json(r.x)},
          {"trials", r.trials},   {"excluded", r.excluded}, {"seed", r.seed},
          {"history", history}};
}

LambdaRefutation refute_lambda(double lambda) {
  if (!(lambda > 0.5 && lambda < 1.0))
    fail(ErrorCode::invalid_input, fmt::format("refute: lambda must lie in (1/2, 1), got {}", lambda));
  const auto g = quadratic_cap(1.0, SpectrumWindow(-1.0, 1.0));
  const double diag[] = {-1.0, 1.0};
  const auto c = HermitianOperator::diagonal(diag);
  const StateVector x({std::sqrt(0.5), std::sqrt(0.5)});
  const auto d = spectral_decompose(c);
  LambdaRefutation out{};
  out.lambda = lambda;
  out.lhs = g(quadratic_form(c, x));
  out.rhs = function_form(d, g, x) / lambda;
  out.margin = out.lhs - out.rhs;
  out.refuted = out.margin > 0.0;
  return out;
}

nlohmann::json to_json(const LambdaRefutation& r) {
  return {{"lambda", r.lambda}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"refuted", r.refuted}};
}

}  // namespace pclass
