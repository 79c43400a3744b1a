// pclass-lab: command-line front end over the pclass C API.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pclass/pclass.h"

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { pclass_string_free(p); }
};

struct Report {
  pclass_report* p = nullptr;
  ~Report() { pclass_report_free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// JSON text, or @path to read it from a file.
json parse_json_arg(const std::string& text, const char* what) {
  const std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::vector<double> parse_list(std::string text, const char* what) {
  text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == '(' || c == ')' || c == '[' || c == ']' || c == ' '; }),
             text.end());
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError(std::string(what) + ": cannot parse '" + item + "' as a number");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

/// "(a,b,...)" tuple or JSON.
json parse_state_arg(const std::string& text) {
  if (!text.empty() && (text[0] == '{' || text[0] == '@')) return parse_json_arg(text, "--state");
  return parse_list(text, "--state");
}

json parse_window_arg(const std::string& text) {
  const auto v = parse_list(text, "--window");
  if (v.size() != 2) throw UsageError("--window expects m,M");
  return json::array({v[0], v[1]});
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PCLASS_LAB_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError("PCLASS_LAB_SEED must be a nonnegative integer");
    return v;
  }
  return 0;
}

std::string status_message(pclass_status s) {
  return std::string(pclass_status_name(s)) + ": " + pclass_last_error();
}

bool is_usage_status(pclass_status s) {
  return s == PCLASS_PARSE || s == PCLASS_UNKNOWN_CHECK || s == PCLASS_INVALID_INPUT;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct VerifyArgs {
  std::string check;
  std::string matrix, state, instance, blocks, states, fn, window, kind, mode, F, monotonicity, direction, family, output;
  std::string values, weights, subset;
  std::vector<std::string> assume;
  bool random = false;
  std::optional<std::size_t> dim, dim_min, dim_max, n;
  std::optional<double> r, u, a, b, lambda, p, q, alpha, beta;
  std::size_t trials = 1;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
};

void put_common(json& j, const VerifyArgs& v) {
  if (!v.fn.empty()) j["fn"] = v.fn;
  if (!v.window.empty()) j["window"] = parse_window_arg(v.window);
  if (!v.kind.empty()) j["kind"] = v.kind;
  if (!v.mode.empty()) j["mode"] = v.mode;
  if (!v.F.empty()) j["F"] = v.F;
  if (!v.monotonicity.empty()) j["monotonicity"] = v.monotonicity;
  if (!v.direction.empty()) j["direction"] = v.direction;
  if (!v.assume.empty()) j["assume"] = v.assume;
  if (v.r) j["r"] = *v.r;
  if (v.n) j["n"] = *v.n;
}

json build_instance(const VerifyArgs& v) {
  json j = v.instance.empty() ? json::object() : parse_json_arg(v.instance, "--instance");
  if (!j.is_object()) throw UsageError("--instance must be a JSON object");
  put_common(j, v);
  if (!v.matrix.empty()) j["matrix"] = parse_json_arg(v.matrix, "--matrix");
  if (!v.state.empty()) {
    j["state"] = parse_state_arg(v.state);
    if (v.check != "jensen-raw" && v.check != "reverse") j["normalize_state"] = true;
  }
  if (!v.blocks.empty()) j["blocks"] = parse_json_arg(v.blocks, "--blocks");
  if (!v.states.empty()) j["states"] = parse_json_arg(v.states, "--states");
  if (!v.values.empty()) j["values"] = parse_list(v.values, "--values");
  if (!v.weights.empty()) j["weights"] = v.weights == "uniform" ? json("uniform") : json(parse_list(v.weights, "--weights"));
  if (!v.subset.empty()) {
    json s = json::array();
    for (double i : parse_list(v.subset, "--subset")) s.push_back(static_cast<long long>(i));
    j["subset_I"] = s;
  }
  const std::pair<const char*, const std::optional<double>*> scalars[] = {
      {"u", &v.u}, {"a", &v.a}, {"b", &v.b}, {"lambda", &v.lambda}, {"p", &v.p}, {"q", &v.q},
      {"alpha", &v.alpha}, {"beta", &v.beta}};
  for (const auto& [key, val] : scalars)
    if (*val) j[key] = **val;
  return j;
}

json build_options(const VerifyArgs& v) {
  json j = json::object();
  put_common(j, v);
  if (v.dim) j["dim"] = *v.dim;
  if (v.dim_min) j["dim_min"] = *v.dim_min;
  if (v.dim_max) j["dim_max"] = *v.dim_max;
  if (!v.family.empty()) j["family"] = v.family;
  return j;
}

struct TrialOutcome {
  std::string line;
  bool ok = false;  // report produced
  bool holds = false;
  bool certified = false;
  double violation = 0.0;
};

TrialOutcome run_trial(const VerifyArgs& v, const std::string& payload, std::uint64_t seed, std::size_t trial) {
  TrialOutcome t;
  Report rep;
  const pclass_status s = v.random ? pclass_verify_random(v.check.c_str(), payload.c_str(), seed, trial, &rep.p)
                                   : pclass_verify_instance(v.check.c_str(), payload.c_str(), &rep.p);
  if (s != PCLASS_OK) {
    json err = {{"error", pclass_status_name(s)}, {"message", pclass_last_error()}, {"check", v.check}};
    if (v.random) err["trial"] = trial, err["seed"] = seed;
    t.line = err.dump();
    return t;
  }
  OwnedString js;
  if (pclass_report_to_json(rep.p, &js.p) != PCLASS_OK) {
    t.line = json{{"error", "internal"}, {"message", pclass_last_error()}}.dump();
    return t;
  }
  t.line = js.p;
  t.ok = true;
  t.holds = pclass_report_holds(rep.p) != 0;
  t.certified = pclass_report_hypotheses_certified(rep.p) != 0;
  t.violation = pclass_report_max_violation(rep.p);
  return t;
}

int cmd_verify(const VerifyArgs& v) {
  const std::string names = std::string(",") + pclass_check_names() + ",";
  if (names.find("," + v.check + ",") == std::string::npos)
    throw UsageError("unknown check '" + v.check + "'; known checks: " + pclass_check_names());
  if (v.trials < 1) throw UsageError("--trials must be >= 1");
  const std::uint64_t seed = resolve_seed(v.seed);
  const std::string payload = (v.random ? build_options(v) : build_instance(v)).dump();
  const std::size_t trials = v.random ? v.trials : 1;
  std::vector<TrialOutcome> outcomes(trials);
  const std::size_t jobs = std::max<std::size_t>(1, std::min(v.jobs, trials));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < trials; k += jobs) outcomes[k] = run_trial(v, payload, seed, k);
    });
  for (auto& t : pool) t.join();

  Sink sink(v.output);
  std::size_t failures = 0, unverified = 0, errors = 0;
  double worst = 0.0;
  for (const auto& o : outcomes) {
    sink.out() << o.line << '\n';
    if (!o.ok) {
      ++errors;
      continue;
    }
    failures += o.holds ? 0 : 1;
    unverified += o.certified ? 0 : 1;
    worst = std::max(worst, o.violation);
  }
  sink.out() << json{{"summary", true},
                     {"check", v.check},
                     {"trials", trials},
                     {"failures", failures},
                     {"unverified", unverified},
                     {"errors", errors},
                     {"max_slack_violation", worst},
                     {"seed", seed}}
                    .dump()
             << '\n';
  if (errors > 0) {
    if (!v.random) {
      const json first = json::parse(outcomes.front().line);
      std::cerr << "pclass-lab: " << first.value("error", "") << ": " << first.value("message", "") << '\n';
    }
    return kExitUsage;
  }
  return failures == 0 && unverified == 0 ? kExitPass : kExitFailure;
}

struct SharpnessArgs {
  std::string family = "qcap";
  std::optional<std::size_t> restarts, steps, dim_min, dim_max;
  std::optional<double> step_scale, param_lo, param_hi;
  std::string window, output;
  std::optional<std::uint64_t> seed;
};

int cmd_sharpness(const SharpnessArgs& a) {
  json cfg = {{"family", a.family}, {"seed", resolve_seed(a.seed)}};
  if (a.restarts) cfg["restarts"] = *a.restarts;
  if (a.steps) cfg["steps"] = *a.steps;
  if (a.dim_min) cfg["dim_min"] = *a.dim_min;
  if (a.dim_max) cfg["dim_max"] = *a.dim_max;
  if (a.step_scale) cfg["step_scale"] = *a.step_scale;
  if (a.param_lo) cfg["param_lo"] = *a.param_lo;
  if (a.param_hi) cfg["param_hi"] = *a.param_hi;
  if (!a.window.empty()) cfg["window"] = parse_window_arg(a.window);
  OwnedString out;
  const auto s = pclass_sharpness(cfg.dump().c_str(), &out.p);
  if (s != PCLASS_OK) {
    std::cerr << "pclass-lab: " << status_message(s) << '\n';
    return is_usage_status(s) ? kExitUsage : kExitFailure;
  }
  json result = json::parse(out.p);
  const double ceiling = 2.0;
  const bool within = result["best"].get<double>() <= ceiling + 1e-9;
  result["ceiling"] = ceiling;
  result["within_ceiling"] = within;
  Sink sink(a.output);
  sink.out() << result.dump() << '\n';
  return within ? kExitPass : kExitFailure;
}

struct MeansArgs {
  std::string values, weights = "uniform", format = "json";
  double r = 0.5;
};

int cmd_means(const MeansArgs& a) {
  const auto values = parse_list(a.values, "--values");
  std::vector<double> weights;
  if (a.weights != "uniform") {
    weights = parse_list(a.weights, "--weights");
    if (weights.size() != values.size()) throw UsageError("--weights must match --values in length");
  }
  Report rep;
  const auto s = pclass_check_mean_chain(values.size(), values.data(), weights.empty() ? nullptr : weights.data(), a.r,
                                         &rep.p);
  if (s != PCLASS_OK) throw UsageError(status_message(s));
  const bool holds = pclass_report_holds(rep.p) != 0;
  if (a.format == "text") {
    const std::size_t n = pclass_report_chain_size(rep.p);
    std::size_t width = 0;
    for (std::size_t i = 0; i < n; ++i) width = std::max(width, std::string(pclass_report_chain_label(rep.p, i)).size());
    for (std::size_t i = 0; i < n; ++i) {
      std::printf("%s%-*s  %.12g\n", i == 0 ? "   " : "<= ", static_cast<int>(width), pclass_report_chain_label(rep.p, i),
                  pclass_report_chain_value(rep.p, i));
    }
    std::printf("holds: %s\n", holds ? "true" : "false");
  } else {
    OwnedString js;
    pclass_report_to_json(rep.p, &js.p);
    std::cout << js.p << '\n';
  }
  return holds ? kExitPass : kExitFailure;
}

int cmd_refute(const std::vector<double>& lambdas) {
  bool all = true;
  for (double l : lambdas) {
    OwnedString js;
    const auto s = pclass_refute_lambda(l, &js.p);
    if (s != PCLASS_OK) throw UsageError(status_message(s));
    const json j = json::parse(js.p);
    all = all && j["refuted"].get<bool>();
    std::cout << js.p << '\n';
  }
  return all ? kExitPass : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pclass-lab: numerical verification of P-class operator inequalities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pclass_version());

  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "verify an inequality on one instance or a seeded random campaign");
  verify->add_option("--check", v.check, "check name")->required();
  verify->add_option("--matrix", v.matrix, "operator as JSON {dim, rows} or @file");
  verify->add_option("--state", v.state, "state as (a,b,...) or JSON");
  verify->add_option("--instance", v.instance, "full instance JSON or @file");
  verify->add_option("--blocks", v.blocks, "JSON array of operators");
  verify->add_option("--states", v.states, "JSON array of states");
  verify->add_flag("--random", v.random, "draw random instances");
  verify->add_option("--trials", v.trials, "number of random trials");
  verify->add_option("--dim", v.dim, "fixed dimension for random instances");
  verify->add_option("--dim-min", v.dim_min);
  verify->add_option("--dim-max", v.dim_max);
  verify->add_option("--seed", v.seed, "master seed (default: $PCLASS_LAB_SEED or 0)");
  verify->add_option("--fn", v.fn, "function spec, e.g. power:0.5, qcap:1, ln");
  verify->add_option("--family", v.family, "random function family (power, qcap, ln, recip)");
  verify->add_option("--window", v.window, "window m,M");
  verify->add_option("--assume", v.assume, "flags to assume when not certified");
  verify->add_option("--r", v.r);
  verify->add_option("--n", v.n);
  verify->add_option("--kind", v.kind);
  verify->add_option("--mode", v.mode, "ratio or difference");
  verify->add_option("--F", v.F, "diff, ratio, second, negdiff");
  verify->add_option("--monotonicity", v.monotonicity, "nondecreasing or nonincreasing");
  verify->add_option("--direction", v.direction, "decreasing or increasing");
  verify->add_option("--u", v.u);
  verify->add_option("--a", v.a);
  verify->add_option("--b", v.b);
  verify->add_option("--lambda", v.lambda);
  verify->add_option("--p", v.p);
  verify->add_option("--q", v.q);
  verify->add_option("--alpha", v.alpha);
  verify->add_option("--beta", v.beta);
  verify->add_option("--values", v.values);
  verify->add_option("--weights", v.weights);
  verify->add_option("--subset", v.subset, "0-based indices of I");
  verify->add_option("--output", v.output, "write NDJSON here instead of stdout");
  verify->add_option("--jobs", v.jobs, "worker threads");

  SharpnessArgs s;
  auto* sharp = app.add_subcommand("sharpness", "search for the largest f(<Cx,x>)/<f(C)x,x>");
  sharp->add_option("--family", s.family, "qcap, power, ln, recip");
  sharp->add_option("--restarts", s.restarts);
  sharp->add_option("--steps", s.steps);
  sharp->add_option("--seed", s.seed);
  sharp->add_option("--dim-min", s.dim_min);
  sharp->add_option("--dim-max", s.dim_max);
  sharp->add_option("--step-scale", s.step_scale);
  sharp->add_option("--param-lo", s.param_lo);
  sharp->add_option("--param-hi", s.param_hi);
  sharp->add_option("--window", s.window);
  sharp->add_option("--output", s.output);

  MeansArgs m;
  auto* means = app.add_subcommand("means", "evaluate the weighted power-mean chain");
  means->add_option("--values", m.values)->required();
  means->add_option("--weights", m.weights, "comma list or 'uniform'");
  means->add_option("--r", m.r);
  means->add_option("--format", m.format)->check(CLI::IsMember({"json", "text"}));

  std::vector<double> lambdas;
  auto* refute = app.add_subcommand("refute", "show that 1/lambda fails as a constant for lambda in (1/2, 1)");
  refute->add_option("--lambda", lambdas)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(v);
    if (sharp->parsed()) return cmd_sharpness(s);
    if (means->parsed()) return cmd_means(m);
    if (refute->parsed()) return cmd_refute(lambdas);
  } catch (const UsageError& e) {
    std::cerr << "pclass-lab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "pclass-lab: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
