#include "pclass/campaign.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pclass/error.hpp"
#include "pclass/ineq_multi.hpp"
#include "pclass/ineq_single.hpp"
#include "pclass/means.hpp"
#include "pclass/rng.hpp"
#include "pclass/serialize.hpp"
#include "pclass/sharpness.hpp"

namespace pclass {

using nlohmann::json;

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "jensen",         "jensen-raw", "reverse",       "endpoint",    "composite-F",
      "lambda",         "compose",    "hermite-hadamard", "maccarthy", "mean-chain",
      "multi-jensen",   "omega",      "norm-chain",    "norm-power",  "multi-endpoint",
      "multi-F",        "reverse-lemma", "subadditive-power", "weighted-multi-jensen",
  };
  return names;
}

bool is_check(std::string_view name) noexcept {
  const auto& n = check_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

struct CheckDefaults {
  const char* fn;
  double m;
  double M;
};

CheckDefaults defaults_for(std::string_view check, std::string_view direction = "decreasing") {
  if (check == "reverse" || check == "reverse-lemma")
    return direction == "increasing" ? CheckDefaults{"power:0.5", 1.0, 4.0} : CheckDefaults{"recip", 0.5, 2.0};
  if (check == "compose") return {"power:0.5", 0.0, 4.0};
  if (check == "maccarthy" || check == "norm-power") return {"", 0.0, 4.0};
  return {"power:0.5", 1.0, 4.0};
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::parse, fmt::format("instance is missing '{}'", key));
  return j.at(key);
}

double num(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) fail(ErrorCode::parse, fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? num(j, key) : fallback;
}

std::string str_or(const json& j, const char* key, const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(ErrorCode::parse, fmt::format("'{}' must be a string", key));
  return j.at(key).get<std::string>();
}

std::vector<double> nums(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) fail(ErrorCode::parse, fmt::format("'{}' must be an array", key));
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(ErrorCode::parse, fmt::format("'{}' must hold numbers", key));
    out.push_back(e.get<double>());
  }
  return out;
}

SpectrumWindow window_of(const json& inst, std::string_view check) {
  if (inst.contains("window")) return window_from_json(inst.at("window"));
  const auto d = defaults_for(check, str_or(inst, "direction", str_or(inst, "kind", "decreasing")));
  return SpectrumWindow(d.m, d.M);
}

ScalarFunction function_of(const json& inst, std::string_view check) {
  const auto d = defaults_for(check, str_or(inst, "direction", str_or(inst, "kind", "decreasing")));
  ScalarFunction f = parse_function_spec(str_or(inst, "fn", d.fn), window_of(inst, check));
  if (inst.contains("assume")) {
    for (const auto& a : inst.at("assume")) {
      if (!a.is_string()) fail(ErrorCode::parse, "'assume' must list property names");
      const auto p = property_from_string(a.get<std::string>());
      if (!p) fail(ErrorCode::parse, fmt::format("unknown property '{}'", a.get<std::string>()));
      if (f.flag(*p) == FlagState::refuted)
        fail(ErrorCode::hypothesis, fmt::format("cannot assume {}: it is refuted for '{}'", to_string(*p), f.label()));
      if (f.flag(*p) == FlagState::unknown) f = f.with_flag(*p, FlagState::assumed);
    }
  }
  return f;
}

StateVector state_of(const json& inst, const char* key = "state") {
  StateVector x = state_from_json(field(inst, key));
  if (inst.value("normalize_state", false) && std::abs(x.norm_sq() - 1.0) <= 1e-6) x = x.normalized();
  return x;
}

std::vector<HermitianOperator> blocks_of(const json& inst) {
  const auto& b = field(inst, "blocks");
  if (!b.is_array() || b.empty()) fail(ErrorCode::parse, "'blocks' must be a nonempty array");
  std::vector<HermitianOperator> out;
  for (const auto& m : b) out.push_back(operator_from_json(m));
  return out;
}

std::vector<StateVector> states_of(const json& inst) {
  const auto& s = field(inst, "states");
  if (!s.is_array()) fail(ErrorCode::parse, "'states' must be an array");
  std::vector<StateVector> out;
  for (const auto& v : s) out.push_back(state_from_json(v));
  return out;
}

std::vector<std::size_t> subset_of(const json& inst) {
  const auto& s = field(inst, "subset_I");
  if (!s.is_array()) fail(ErrorCode::parse, "'subset_I' must be an array of 0-based indices");
  std::vector<std::size_t> out;
  for (const auto& e : s) {
    if (!e.is_number_integer() || e.get<long long>() < 0)
      fail(ErrorCode::parse, "'subset_I' must hold nonnegative integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

UMonotonicity monotonicity_of(const json& inst, UMonotonicity natural) {
  const auto m = str_or(inst, "monotonicity", "");
  if (m.empty()) return natural;
  if (m == "nondecreasing") return UMonotonicity::nondecreasing;
  if (m == "nonincreasing") return UMonotonicity::nonincreasing;
  fail(ErrorCode::parse, fmt::format("unknown monotonicity '{}'", m));
}

LambdaMode mode_of(const json& inst) {
  const auto m = str_or(inst, "mode", "ratio");
  if (m == "ratio") return LambdaMode::ratio;
  if (m == "difference") return LambdaMode::difference;
  fail(ErrorCode::parse, fmt::format("unknown lambda mode '{}'", m));
}

InequalityReport dispatch(std::string_view check, const json& inst) {
  if (check == "jensen") return jensen_pclass(operator_from_json(field(inst, "matrix")), state_of(inst), function_of(inst, check));
  if (check == "jensen-raw")
    return jensen_pclass_unnormalized(operator_from_json(field(inst, "matrix")), state_from_json(field(inst, "state")),
                                      function_of(inst, check));
  if (check == "reverse") {
    const auto dir = str_or(inst, "direction", "decreasing");
    if (dir != "decreasing" && dir != "increasing") fail(ErrorCode::parse, fmt::format("unknown direction '{}'", dir));
    return reverse_functional(operator_from_json(field(inst, "matrix")), state_from_json(field(inst, "state")),
                              function_of(inst, check), num(inst, "u"), num(inst, "a"),
                              dir == "increasing" ? Monotone::increasing : Monotone::decreasing);
  }
  if (check == "reverse-lemma") {
    const auto kind = str_or(inst, "kind", "decreasing");
    if (kind != "decreasing" && kind != "increasing") fail(ErrorCode::parse, fmt::format("unknown kind '{}'", kind));
    return scalar_reverse_lemma(function_of(inst, check), num(inst, "a"), num(inst, "b"), num(inst, "lambda"),
                                kind == "increasing" ? ReverseKind::increasing_lambda_above_one
                                                     : ReverseKind::decreasing_negative_lambda);
  }
  if (check == "endpoint")
    return endpoint_upper_bound(operator_from_json(field(inst, "matrix")), state_of(inst), function_of(inst, check),
                                window_of(inst, check));
  if (check == "composite-F" || (check == "multi-F" && !inst.contains("mode"))) {
    UMonotonicity natural{};
    const auto F = parse_bivariate(str_or(inst, "F", "diff"), &natural);
    const auto mono = monotonicity_of(inst, natural);
    if (check == "multi-F")
      return multi_F_bound(blocks_of(inst), states_of(inst), function_of(inst, check), window_of(inst, check), F, mono);
    return composite_F_bound(operator_from_json(field(inst, "matrix")), state_of(inst), function_of(inst, check),
                             window_of(inst, check), F, mono);
  }
  if (check == "multi-F")
    return multi_lambda_bounds(blocks_of(inst), states_of(inst), function_of(inst, check), window_of(inst, check),
                               mode_of(inst));
  if (check == "lambda")
    return lambda_bounds(operator_from_json(field(inst, "matrix")), state_of(inst), function_of(inst, check),
                         window_of(inst, check), mode_of(inst));
  if (check == "compose") {
    const double n = num(inst, "n");
    if (n != std::floor(n)) fail(ErrorCode::parse, "'n' must be an integer");
    const auto kind = str_or(inst, "kind", "subadditive");
    if (kind != "homogeneous" && kind != "subadditive") fail(ErrorCode::parse, fmt::format("unknown kind '{}'", kind));
    return composition_bounds(operator_from_json(field(inst, "matrix")), state_of(inst), function_of(inst, check),
                              static_cast<int>(n),
                              kind == "homogeneous" ? CompositionKind::homogeneous : CompositionKind::subadditive);
  }
  if (check == "hermite-hadamard")
    return hermite_hadamard(operator_from_json(field(inst, "matrix")), state_of(inst), function_of(inst, check),
                            window_of(inst, check), num(inst, "p"), num(inst, "q"));
  if (check == "maccarthy")
    return holder_maccarthy_two_sided(operator_from_json(field(inst, "matrix")), state_of(inst), num(inst, "r"));
  if (check == "mean-chain") {
    auto values = nums(inst, "values");
    const auto& w = inst.contains("weights") ? inst.at("weights") : json("uniform");
    const auto data = w.is_string() && w.get<std::string>() == "uniform"
                          ? WeightedData::uniform(std::move(values))
                          : WeightedData::normalized(std::move(values), nums(inst, "weights"));
    return mean_chain(data, num(inst, "r"));
  }
  if (check == "multi-jensen") return multi_jensen(blocks_of(inst), states_of(inst), function_of(inst, check));
  if (check == "multi-endpoint")
    return multi_endpoint_bound(blocks_of(inst), states_of(inst), function_of(inst, check), window_of(inst, check));
  if (check == "weighted-multi-jensen")
    return weighted_multi_jensen(blocks_of(inst), nums(inst, "weights"), state_of(inst), function_of(inst, check));
  if (check == "omega")
    return omega_refinement(blocks_of(inst), nums(inst, "weights"), state_of(inst), function_of(inst, check),
                            subset_of(inst));
  if (check == "norm-chain")
    return norm_chain(blocks_of(inst), nums(inst, "weights"), function_of(inst, check), subset_of(inst));
  if (check == "norm-power") return norm_power_chain(blocks_of(inst), nums(inst, "weights"), num(inst, "r"), subset_of(inst));
  if (check == "subadditive-power") {
    const auto s = scalar_subadditive_power(num(inst, "alpha"), num(inst, "beta"), num(inst, "r"));
    return InequalityReport("subadditive-power", {{"(alpha+beta)^r", s.lhs}, {"alpha^r+beta^r", s.rhs}});
  }
  fail(ErrorCode::unknown_check, fmt::format("unknown check '{}'", check));
}

}  // namespace

InequalityReport run_instance(std::string_view check, const json& instance) {
  if (!is_check(check)) fail(ErrorCode::unknown_check, fmt::format("unknown check '{}'", check));
  if (!instance.is_object()) fail(ErrorCode::parse, "instance must be a JSON object");
  auto report = dispatch(check, instance);
  json inputs = {{"check", std::string(check)}, {"instance", instance}};
  if (instance.contains("matrix")) inputs["dim"] = operator_from_json(instance.at("matrix")).dim();
  if (instance.contains("blocks")) inputs["blocks"] = instance.at("blocks").size();
  if (instance.contains("values")) inputs["dim"] = instance.at("values").size();
  if (instance.contains("fn")) inputs["fn"] = instance.at("fn");
  if (instance.contains("window")) inputs["window"] = instance.at("window");
  json params = json::object();
  for (const auto& [key, value] : instance.items())
    if (value.is_primitive() && key != "fn" && key != "normalize_state") params[key] = value;
  inputs["params"] = params;
  report.set_inputs(std::move(inputs));
  return report;
}

namespace {

struct Draw {
  Rng rng;
  const json& opt;

  std::uint64_t sub() { return rng.engine()(); }

  std::size_t dim() {
    if (opt.contains("dim")) return static_cast<std::size_t>(num(opt, "dim"));
    const auto lo = static_cast<std::int64_t>(num_or(opt, "dim_min", 2));
    const auto hi = static_cast<std::int64_t>(num_or(opt, "dim_max", 6));
    if (lo < 1 || lo > hi) fail(ErrorCode::invalid_input, "dimension range must satisfy 1 <= min <= max");
    return static_cast<std::size_t>(rng.integer(lo, hi));
  }

  std::size_t count(const char* lo_key, const char* hi_key, double lo_default, double hi_default) {
    const auto lo = static_cast<std::int64_t>(num_or(opt, lo_key, lo_default));
    const auto hi = static_cast<std::int64_t>(num_or(opt, hi_key, hi_default));
    if (lo < 1 || lo > hi) fail(ErrorCode::invalid_input, fmt::format("{}..{} range is invalid", lo_key, hi_key));
    return static_cast<std::size_t>(rng.integer(lo, hi));
  }

  json matrix(const SpectrumWindow& w, std::size_t n) { return to_json(random_hermitian(w, n, sub()).op); }

  json unit_state(std::size_t n) { return to_json(random_state(n, sub(), true)); }
};

/// Copies fn/window/assume selection into the instance. "family" draws the
/// parameter uniformly from its range when no explicit fn is given.
void choose_function(json& inst, const json& opt, std::string_view check, Draw& d) {
  const auto dir = str_or(opt, "direction", str_or(opt, "kind", "decreasing"));
  const auto defaults = defaults_for(check, dir);
  std::string fn = str_or(opt, "fn", "");
  json window = opt.contains("window") ? opt.at("window") : json::array({defaults.m, defaults.M});
  if (fn.empty() && opt.contains("family")) {
    const auto family = str_or(opt, "family", "");
    auto cfg = SearchConfig::for_family(family);
    if (!opt.contains("window")) window = to_json(cfg.window);
    const double lo = num_or(opt, "param_lo", cfg.param_lo);
    const double hi = num_or(opt, "param_hi", cfg.param_hi);
    fn = family;
    if (family == "qcap" || family == "power") fn += ":" + format_double(lo < hi ? d.rng.uniform(lo, hi) : lo);
  }
  if (fn.empty()) fn = defaults.fn;
  inst["fn"] = fn;
  inst["window"] = window;
  if (opt.contains("assume")) inst["assume"] = opt.at("assume");
}

/// States x_i = sqrt(w_i) u_i with random positive weights summing to one.
json split_states(Draw& d, const std::vector<std::size_t>& dims) {
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    w.push_back(d.rng.uniform(0.05, 1.0));
    total += w.back();
  }
  json states = json::array();
  for (std::size_t i = 0; i < dims.size(); ++i)
    states.push_back(to_json(random_state(dims[i], d.sub(), true).scaled(std::sqrt(w[i] / total))));
  return states;
}

std::vector<double> random_weights(Draw& d, std::size_t n) {
  std::vector<double> p;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p.push_back(d.rng.uniform(0.05, 1.0));
    total += p.back();
  }
  for (double& v : p) v /= total;
  return p;
}

json random_subset(Draw& d, std::size_t n) {
  const auto mask = static_cast<std::uint64_t>(d.rng.integer(1, (std::int64_t{1} << n) - 2));
  json subset = json::array();
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (std::uint64_t{1} << i)) subset.push_back(i);
  return subset;
}

void copy_if(json& inst, const json& opt, const char* key) {
  if (opt.contains(key)) inst[key] = opt.at(key);
}

}  // namespace

json random_instance(std::string_view check, const json& options, std::uint64_t seed, std::uint64_t trial) {
  if (!is_check(check)) fail(ErrorCode::unknown_check, fmt::format("unknown check '{}'", check));
  const json opt = options.is_object() ? options : json::object();
  Draw d{Rng(derive_seed(seed, trial)), opt};
  json inst = json::object();

  if (check == "mean-chain") {
    const auto n = d.count("n_min", "n_max", 1, 16);
    std::vector<double> values, weights;
    for (std::size_t i = 0; i < n; ++i) values.push_back(std::pow(10.0, d.rng.uniform(-3.0, 3.0)));
    for (std::size_t i = 0; i < n; ++i) weights.push_back(d.rng.uniform(0.0, 1.0) + 1e-12);
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    inst["values"] = values;
    inst["weights"] = weights;
    inst["r"] = num_or(opt, "r", 0.5);
    return inst;
  }
  if (check == "subadditive-power") {
    inst["alpha"] = d.rng.uniform(0.0, 10.0);
    inst["beta"] = d.rng.uniform(0.0, 10.0);
    inst["r"] = opt.contains("r") ? num(opt, "r") : d.rng.uniform(0.01, 0.99);
    return inst;
  }

  if (check == "maccarthy" || check == "norm-power") {
    inst["window"] = opt.contains("window") ? opt.at("window") : json::array({0.0, 4.0});
    inst["r"] = num_or(opt, "r", 0.5);
  } else {
    choose_function(inst, opt, check, d);
  }
  const SpectrumWindow w = window_from_json(inst["window"]);

  if (check == "reverse-lemma") {
    const auto kind = str_or(opt, "kind", "decreasing");
    inst["kind"] = kind;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      double a = d.rng.uniform(w.m(), w.M()), b = d.rng.uniform(w.m(), w.M());
      if (a > b) std::swap(a, b);
      if (!(b - a > 1e-9 * w.width())) continue;
      const double lo = kind == "increasing" ? 1.0 : (w.m() - a) / (b - a);
      const double hi = kind == "increasing" ? (w.M() - a) / (b - a) : 0.0;
      if (!(hi - lo > 1e-9)) continue;
      const double lambda = d.rng.uniform(lo, hi);
      if (lambda <= 0.0 && kind == "increasing") continue;
      if ((kind == "increasing" && !(lambda > 1.0)) || (kind != "increasing" && !(lambda < 0.0))) continue;
      inst["a"] = a;
      inst["b"] = b;
      inst["lambda"] = lambda;
      return inst;
    }
    fail(ErrorCode::unsatisfiable, "reverse-lemma: no admissible (a, b, lambda) found in 10^4 draws");
  }

  if (check == "multi-jensen" || check == "multi-endpoint" || check == "multi-F") {
    const auto k = d.count("blocks_min", "blocks_max", 2, 6);
    std::vector<std::size_t> dims;
    json blocks = json::array();
    for (std::size_t i = 0; i < k; ++i) {
      dims.push_back(d.dim());
      blocks.push_back(d.matrix(w, dims.back()));
    }
    inst["blocks"] = blocks;
    inst["states"] = split_states(d, dims);
    if (check == "multi-F") {
      copy_if(inst, opt, "mode");
      if (!inst.contains("mode")) inst["F"] = str_or(opt, "F", "diff");
      copy_if(inst, opt, "monotonicity");
    }
    return inst;
  }

  if (check == "omega" || check == "norm-chain" || check == "norm-power" || check == "weighted-multi-jensen") {
    const auto k = d.count("blocks_min", "blocks_max", 2, 6);
    const auto n = d.dim();
    json blocks = json::array();
    for (std::size_t i = 0; i < k; ++i) blocks.push_back(d.matrix(w, n));
    inst["blocks"] = blocks;
    inst["weights"] = random_weights(d, k);
    if (check != "weighted-multi-jensen") inst["subset_I"] = random_subset(d, k);
    if (check == "omega" || check == "weighted-multi-jensen") inst["state"] = d.unit_state(n);
    return inst;
  }

  const auto n = d.dim();
  if (check == "reverse") {
    const auto dir = str_or(opt, "direction", "decreasing");
    inst["direction"] = dir;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const auto op = random_hermitian(w, n, d.sub()).op;
      const auto x = random_state(n, d.sub(), true).scaled(d.rng.uniform(0.2, 1.5));
      const double norm = x.norm_sq();
      const double u = norm + d.rng.uniform(0.01, 3.0);
      const double a = d.rng.uniform(w.m(), w.M());
      const double q = quadratic_form(op, x);
      const double arg = (u * a - q) / (u - norm);
      if (!w.contains(arg)) continue;
      if (dir == "increasing" && !(q / norm < a)) continue;
      inst["matrix"] = to_json(op);
      inst["state"] = to_json(x);
      inst["u"] = u;
      inst["a"] = a;
      return inst;
    }
    fail(ErrorCode::unsatisfiable, "reverse: no admissible (C, x, u, a) found in 10^4 draws");
  }

  inst["matrix"] = d.matrix(w, n);
  if (check == "jensen-raw") {
    inst["state"] = to_json(random_state(n, d.sub(), true).scaled(d.rng.uniform(0.1, 3.0)));
    return inst;
  }
  inst["state"] = d.unit_state(n);
  if (check == "maccarthy") return inst;
  if (check == "composite-F") {
    inst["F"] = str_or(opt, "F", "diff");
    copy_if(inst, opt, "monotonicity");
  } else if (check == "lambda") {
    inst["mode"] = str_or(opt, "mode", "ratio");
  } else if (check == "compose") {
    inst["n"] = num_or(opt, "n", 2);
    inst["kind"] = str_or(opt, "kind", "subadditive");
  } else if (check == "hermite-hadamard") {
    const auto op = operator_from_json(inst["matrix"]);
    const double g = w.clamp(quadratic_form(op, state_from_json(inst["state"])));
    inst["p"] = w.M() - g;
    inst["q"] = g - w.m();
  }
  return inst;
}

InequalityReport run_random(std::string_view check, const json& options, std::uint64_t seed, std::uint64_t trial) {
  auto report = run_instance(check, random_instance(check, options, seed, trial));
  json inputs = report.inputs();
  inputs["seed"] = seed;
  inputs["trial"] = trial;
  report.set_inputs(std::move(inputs));
  return report;
}

void CampaignSummary::add(const InequalityReport& r) {
  ++trials;
  if (!r.holds()) ++failures;
  if (r.hypothesis_status() != HypothesisStatus::all_certified) ++unverified;
  max_slack_violation = std::max(max_slack_violation, r.max_violation());
}

json to_json(const CampaignSummary& s) {
  return {{"summary", true},
          {"trials", s.trials},
          {"failures", s.failures},
          {"unverified", s.unverified},
          {"max_slack_violation", s.max_slack_violation},
          {"passed", s.passed()}};
}

}  // namespace pclass
