#include "pclass/serialize.hpp"

#include <charconv>
#include <vector>

#include <fmt/format.h>

#include "pclass/error.hpp"

namespace pclass {

using nlohmann::json;

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(ErrorCode::parse, fmt::format("{}: expected a number, got {}", what, j.dump()));
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::parse, fmt::format("{}: expected an array, got {}", what, j.dump()));
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(number(e, what));
  return out;
}

double parse_double(std::string_view s, std::string_view context) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::parse, fmt::format("'{}': cannot parse '{}' as a number", context, s));
  return v;
}

}  // namespace

HermitianOperator operator_from_json(const json& j) {
  const json* rows = &j;
  if (j.is_object()) {
    if (!j.contains("rows")) fail(ErrorCode::parse, "matrix object needs a 'rows' field");
    rows = &j.at("rows");
  }
  if (!rows->is_array() || rows->empty()) fail(ErrorCode::parse, "matrix rows must be a nonempty array");
  std::vector<std::vector<double>> r;
  for (const auto& row : *rows) r.push_back(numbers(row, "matrix row"));
  if (j.is_object() && j.contains("dim")) {
    const auto dim = j.at("dim");
    if (!dim.is_number_integer() || dim.get<long long>() != static_cast<long long>(r.size()))
      fail(ErrorCode::parse, fmt::format("matrix dim {} does not match {} rows", dim.dump(), r.size()));
  }
  return HermitianOperator::from_rows(r);
}

json to_json(const HermitianOperator& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < a.dim(); ++k) row.push_back(a(i, k));
    rows.push_back(row);
  }
  return {{"dim", a.dim()}, {"rows", rows}};
}

StateVector state_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("coords")) fail(ErrorCode::parse, "state object needs a 'coords' field");
    return StateVector(numbers(j.at("coords"), "state"));
  }
  return StateVector(numbers(j, "state"));
}

json to_json(const StateVector& x) {
  return {{"coords", std::vector<double>(x.coords().begin(), x.coords().end())}};
}

SpectrumWindow window_from_json(const json& j) {
  if (j.is_object() && j.contains("m") && j.contains("M")) return SpectrumWindow(number(j["m"], "window"), number(j["M"], "window"));
  const auto v = numbers(j, "window");
  if (v.size() != 2) fail(ErrorCode::parse, "window must be [m, M]");
  return SpectrumWindow(v[0], v[1]);
}

json to_json(const SpectrumWindow& w) { return json::array({w.m(), w.M()}); }

ScalarFunction parse_function_spec(std::string_view spec, const SpectrumWindow& domain) {
  std::string_view body = spec;
  int power = 1;
  if (const auto caret = body.rfind('^'); caret != std::string_view::npos) {
    const double n = parse_double(body.substr(caret + 1), spec);
    if (n != std::floor(n) || n < 1 || n > 64)
      fail(ErrorCode::parse, fmt::format("'{}': composition power must be an integer in [1, 64]", spec));
    power = static_cast<int>(n);
    body = body.substr(0, caret);
  }
  std::string_view family = body;
  std::vector<double> params;
  if (const auto colon = body.find(':'); colon != std::string_view::npos) {
    family = body.substr(0, colon);
    std::string_view rest = body.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      params.push_back(parse_double(rest.substr(0, comma), spec));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  static const char* const known[] = {"power", "ln", "qcap", "affine", "recip", "pwl"};
  if (std::find(std::begin(known), std::end(known), family) == std::end(known))
    fail(ErrorCode::parse, fmt::format("unknown function family in '{}' (power, ln, qcap, affine, recip, pwl)", spec));
  ScalarFunction f = certify_unknown_flags(builtin(family, params, domain));
  return power == 1 ? f : power_compose(f, power);
}

Bivariate parse_bivariate(std::string_view name, UMonotonicity* natural) {
  auto set = [&](UMonotonicity m) {
    if (natural) *natural = m;
  };
  if (name == "diff") {
    set(UMonotonicity::nondecreasing);
    return {"diff", [](double u, double v) { return u - v; }};
  }
  if (name == "ratio") {
    set(UMonotonicity::nondecreasing);
    return {"ratio", [](double u, double v) { return u / v; }};
  }
  if (name == "second") {
    set(UMonotonicity::nondecreasing);
    return {"second", [](double, double v) { return v; }};
  }
  if (name == "negdiff") {
    set(UMonotonicity::nonincreasing);
    return {"negdiff", [](double u, double v) { return v - u; }};
  }
  fail(ErrorCode::parse, fmt::format("unknown F '{}' (diff, ratio, second, negdiff)", name));
}

}  // namespace pclass
