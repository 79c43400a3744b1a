#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "pclass/error.hpp"
#include "pclass/ineq_single.hpp"
#include "pclass/sharpness.hpp"

using namespace pclass;

namespace {

HermitianOperator diag(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return HermitianOperator::diagonal(v);
}

const StateVector half({oracle::kInvSqrt2, oracle::kInvSqrt2});

SearchConfig quick(const std::string& family, std::uint64_t seed) {
  auto cfg = SearchConfig::for_family(family);
  cfg.restarts = 20;
  cfg.steps = 200;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("jensen ratio on worked instances") {
  for (double a : {1.0, 2.5, 4.0}) {
    const auto cap = quadratic_cap(a, SpectrumWindow(-1, 1));
    CHECK(jensen_ratio(diag({-1, 1}), half, cap) == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK(jensen_ratio(HermitianOperator::scalar(3, 2), StateVector({1, 0, 0}), power_function(0.5, SpectrumWindow(1, 4))) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(jensen_ratio(diag({1, 4}), half, power_function(0.5, SpectrumWindow(1, 4))) ==
        doctest::Approx(1.054093).epsilon(1e-6));
  CHECK_THROWS_AS(jensen_ratio(diag({1, 4}), half, affine(0, 0, SpectrumWindow(1, 4))), Error);
}

TEST_CASE("ratio equals the jensen chain quotient") {
  const auto f = power_function(0.3, SpectrumWindow(1, 4));
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto c = random_hermitian(SpectrumWindow(1, 4), 3, s).op;
    const auto x = random_state(3, s + 7, true);
    const auto r = jensen_pclass(c, x, f);
    CHECK(std::abs(jensen_ratio(c, x, f) - 2 * r.value(0) / r.value(1)) <= 1e-12);
  }
}

TEST_CASE("config defaults and validation") {
  const auto q = SearchConfig::for_family("qcap");
  CHECK(q.window.m() == -1.0);
  CHECK(q.window.M() == 1.0);
  CHECK(q.param_lo == 1.0);
  CHECK(q.param_hi == 4.0);
  CHECK_NOTHROW(q.validate());
  CHECK_THROWS_AS(SearchConfig::for_family("cosine"), Error);
  auto bad = q;
  bad.dim_min = 3;
  bad.dim_max = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = q;
  bad.param_lo = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = SearchConfig::for_family("power");
  bad.param_hi = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = q;
  bad.restarts = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("qcap search reaches the ceiling") {
  const auto r = search_max_ratio(quick("qcap", 1));
  CHECK(r.best >= 2.0 - 1e-6);
  CHECK(r.best <= 2.0 + 1e-10);
  CHECK(r.family == "qcap");
  CHECK(std::abs(jensen_ratio(r.c, r.x, family_function(r.family, r.param, r.window)) - r.best) <= 1e-12);
  REQUIRE_FALSE(r.history.empty());
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].value > r.history[i - 1].value);
  CHECK(r.history.back().value == r.best);
}

TEST_CASE("power search stays below the ceiling") {
  const auto r = search_max_ratio(quick("power", 2));
  CHECK(r.best >= 1.0);
  CHECK(r.best <= 2.0);
}

TEST_CASE("ln search finds ratios above 2") {
  const auto r = search_max_ratio(quick("ln", 3));
  CHECK(r.best > 2.0);
  CHECK(std::abs(jensen_ratio(r.c, r.x, family_function("ln", r.param, r.window)) - r.best) <= 1e-12);
}

TEST_CASE("search is deterministic in the seed") {
  const auto a = to_json(search_max_ratio(quick("power", 11)));
  const auto b = to_json(search_max_ratio(quick("power", 11)));
  const auto c = to_json(search_max_ratio(quick("power", 12)));
  CHECK(a.dump() == b.dump());
  CHECK(a.dump() != c.dump());
}

TEST_CASE("zero-step search only evaluates a restart point") {
  auto cfg = SearchConfig::for_family("qcap");
  cfg.restarts = 1;
  cfg.steps = 0;
  cfg.seed = 5;
  const auto r = search_max_ratio(cfg);
  CHECK(r.trials >= 1);
  CHECK(r.trials <= 100);
  CHECK(r.history.size() == 1);
  CHECK(std::abs(jensen_ratio(r.c, r.x, family_function(r.family, r.param, r.window)) - r.best) <= 1e-12);
}

TEST_CASE("result json") {
  const auto j = to_json(search_max_ratio(quick("qcap", 4)));
  for (const char* k : {"best", "family", "param", "window", "matrix", "state", "trials", "excluded", "seed", "history"})
    CHECK_MESSAGE(j.contains(k), k);
  CHECK(j["seed"] == 4);
}

TEST_CASE("lambda refutation") {
  for (double lambda : {0.51, 0.6, 0.75, 0.99}) {
    const auto r = refute_lambda(lambda);
    CHECK(r.lhs == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.rhs == doctest::Approx(1 / lambda).epsilon(1e-14));
    CHECK(r.margin == doctest::Approx(2 - 1 / lambda).epsilon(1e-12));
    CHECK(r.refuted);
  }
  CHECK_THROWS_AS(refute_lambda(0.5), Error);
  CHECK_THROWS_AS(refute_lambda(1.0), Error);
  CHECK(to_json(refute_lambda(0.6))["refuted"] == true);
}
