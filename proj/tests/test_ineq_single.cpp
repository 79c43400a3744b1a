#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "pclass/error.hpp"
#include "pclass/ineq_single.hpp"
#include "pclass/rng.hpp"
#include "pclass/serialize.hpp"

using namespace pclass;

namespace {

const double s2 = oracle::kInvSqrt2;

HermitianOperator diag(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return HermitianOperator::diagonal(v);
}

void check_chain(const InequalityReport& r, std::initializer_list<double> expect, double tol) {
  REQUIRE(r.chain().size() == expect.size());
  std::size_t i = 0;
  for (double e : expect) {
    CHECK_MESSAGE(std::abs(r.value(i) - e) <= tol, r.name() << " member " << i << ": " << r.value(i) << " vs " << e);
    ++i;
  }
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_input;
}

const SpectrumWindow w14(1, 4);
const auto sqrt14 = power_function(0.5, w14);
const StateVector half({s2, s2});

}  // namespace

TEST_CASE("jensen: worked instances") {
  const auto cap = quadratic_cap(1, SpectrumWindow(-1, 1));
  const auto r = jensen_pclass(diag({-1, 1}), half, cap);
  check_chain(r, {2, 2}, 1e-12);
  CHECK(r.holds());
  CHECK(r.hypothesis_status() == HypothesisStatus::all_certified);

  check_chain(jensen_pclass(HermitianOperator::scalar(2, 1), StateVector({1, 0}), affine(1, 0, SpectrumWindow(0, 2))),
              {1, 2}, 1e-15);
  check_chain(jensen_pclass(diag({1, 4}), half, sqrt14), {std::sqrt(2.5), 3}, 1e-12);
}

TEST_CASE("jensen: rejections") {
  CHECK(code_of([] { jensen_pclass(diag({1, 4}), StateVector({1, 1}), sqrt14); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { jensen_pclass(diag({0.5, 4}), half, sqrt14); }) == ErrorCode::domain);
  CHECK(code_of([] { jensen_pclass(diag({1, 2}), half, affine(1, -1, SpectrumWindow(0, 2))); }) ==
        ErrorCode::hypothesis);
  const double knots[] = {1, 1, 4, 2};
  const auto pwl = builtin("pwl", knots, w14);
  CHECK(code_of([&] { jensen_pclass(diag({1, 4}), half, pwl); }) == ErrorCode::hypothesis);
  const auto assumed = pwl.with_flag(Property::pclass, FlagState::assumed);
  CHECK(jensen_pclass(diag({1, 4}), half, assumed).hypothesis_status() == HypothesisStatus::contains_assumed);
}

TEST_CASE("counterexample: constant 2 fails when f vanishes at a spectral endpoint") {
  const auto f = power_function(0.5, SpectrumWindow(0, 1));
  const StateVector x({std::sqrt(0.99), std::sqrt(0.01)});
  const auto r = jensen_pclass(diag({0, 1}), x, f);
  check_chain(r, {0.1, 0.02}, 1e-12);
  CHECK_FALSE(r.holds());
}

TEST_CASE("counterexample: constant 2 fails for ln with a steep left endpoint") {
  const auto f = natural_log(w14);
  const StateVector x({std::sqrt(0.99), std::sqrt(0.01)});
  const auto r = jensen_pclass(diag({1, 4}), x, f);
  check_chain(r, {std::log(1.03), 0.02 * std::log(4.0)}, 1e-12);
  CHECK_FALSE(r.holds());
}

TEST_CASE("jensen-raw") {
  check_chain(jensen_pclass_unnormalized(diag({1, 4}), StateVector({1, 1}), sqrt14), {std::sqrt(2.5), 3}, 1e-12);
  check_chain(jensen_pclass_unnormalized(diag({1, 4}), StateVector({2, 0}), sqrt14), {1, 2}, 1e-12);
  const auto a = jensen_pclass_unnormalized(diag({1, 4}), half, sqrt14);
  const auto b = jensen_pclass(diag({1, 4}), half, sqrt14);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.value(i) - b.value(i)) <= 1e-12);
  CHECK(code_of([] { jensen_pclass_unnormalized(diag({1, 4}), StateVector({0, 0}), sqrt14); }) ==
        ErrorCode::invalid_input);
}

TEST_CASE("property: jensen-raw is scale invariant") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto c = random_hermitian(w14, 2 + seed % 5, seed).op;
    const auto x = random_state(c.dim(), seed + 1, true);
    const auto base = jensen_pclass_unnormalized(c, x, sqrt14);
    const double s = 0.1 + 0.01 * static_cast<double>(seed);
    const auto scaled = jensen_pclass_unnormalized(c, x.scaled(s), sqrt14);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(scaled.value(i) - base.value(i)) <= 1e-10 * base.value(i));
  }
}

TEST_CASE("property: jensen holds for power and qcap families on random instances") {
  Rng rng(5);
  int failures = 0;
  for (int k = 0; k < 2000; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto f = k % 2 ? power_function(rng.uniform(0.01, 0.99), w14)
                         : quadratic_cap(rng.uniform(1, 4), SpectrumWindow(-1, 1));
    const auto c = random_hermitian(f.domain(), n, rng.engine()()).op;
    const auto x = random_state(n, rng.engine()(), true);
    failures += jensen_pclass(c, x, f).holds() ? 0 : 1;
    failures += endpoint_upper_bound(c, x, f, f.domain()).holds() ? 0 : 1;
    failures += lambda_bounds(c, x, f, f.domain(), LambdaMode::ratio).holds() ? 0 : 1;
    failures += lambda_bounds(c, x, f, f.domain(), LambdaMode::difference).holds() ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("scalar reverse lemma") {
  const auto recip = reciprocal(SpectrumWindow(0.5, 2));
  const auto r1 = scalar_reverse_lemma(recip, 1, 1.5, -0.5, ReverseKind::decreasing_negative_lambda);
  check_chain(r1, {1 - 2.0 / 3.0, 4.0 / 3.0}, 1e-12);
  CHECK(r1.holds());
  const auto ln = natural_log(w14);
  const auto r2 = scalar_reverse_lemma(ln, 1.5, 2, 2, ReverseKind::increasing_lambda_above_one);
  check_chain(r2, {std::log(1.5) - std::log(2), std::log(2.5)}, 1e-12);
  const auto constant = affine(0, 0.7, w14);
  check_chain(scalar_reverse_lemma(constant, 1, 2, 2, ReverseKind::increasing_lambda_above_one), {0, 0.7}, 1e-15);

  CHECK(code_of([&] { scalar_reverse_lemma(recip, 1, 1.5, 0.5, ReverseKind::decreasing_negative_lambda); }) ==
        ErrorCode::invalid_input);
  CHECK(code_of([&] { scalar_reverse_lemma(recip, 1, 1.5, -2, ReverseKind::decreasing_negative_lambda); }) ==
        ErrorCode::domain);
  CHECK(code_of([&] { scalar_reverse_lemma(recip, 1, 1.5, 2, ReverseKind::increasing_lambda_above_one); }) ==
        ErrorCode::hypothesis);
}

TEST_CASE("property: scalar reverse lemma on 10^5 random draws per branch") {
  const auto recip = reciprocal(SpectrumWindow(0.5, 2));
  const auto ln = natural_log(w14);
  Rng rng(99);
  int failures = 0;
  for (int k = 0; k < 100000; ++k) {
    {
      double a = rng.uniform(0.5, 2), b = rng.uniform(0.5, 2);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-9 || a - 0.5 < 1e-9) continue;
      const double lambda = rng.uniform((0.5 - a) / (b - a), 0);
      if (!(lambda < 0)) continue;
      failures += scalar_reverse_lemma(recip, a, b, lambda, ReverseKind::decreasing_negative_lambda).holds() ? 0 : 1;
    }
    {
      double a = rng.uniform(1, 4), b = rng.uniform(1, 4);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-9) continue;
      const double hi = (4 - a) / (b - a);
      if (!(hi > 1 + 1e-12)) continue;
      const double lambda = rng.uniform(1, hi);
      if (!(lambda > 1)) continue;
      failures += scalar_reverse_lemma(ln, a, b, lambda, ReverseKind::increasing_lambda_above_one).holds() ? 0 : 1;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("reverse functional") {
  const auto a = reverse_functional(diag({1, 2}), half, reciprocal(SpectrumWindow(1, 2)), 2, 1.5, Monotone::decreasing);
  check_chain(a, {2.0 / 3.0 - 1.5, 2.0 / 3.0}, 1e-12);
  CHECK(a.holds());
  CHECK(a.derived().at("arg") == doctest::Approx(1.5));
  const auto b = reverse_functional(diag({1, 2}), half, natural_log(SpectrumWindow(1, 2)), 2, 1.6, Monotone::increasing);
  check_chain(b, {std::log(1.5) - std::log(1.6), std::log(1.7)}, 1e-12);
  CHECK(b.holds());
  const auto zero = affine(0, 0, SpectrumWindow(1, 2));
  check_chain(reverse_functional(diag({1, 2}), half, zero, 2, 1.5, Monotone::decreasing), {0, 0}, 1e-15);

  CHECK(code_of([] { reverse_functional(diag({1, 2}), half, reciprocal(SpectrumWindow(1, 2)), 0.5, 1.5, Monotone::decreasing); }) ==
        ErrorCode::hypothesis);
  CHECK(code_of([] { reverse_functional(diag({1, 2}), half, reciprocal(SpectrumWindow(1, 2)), 2, 3, Monotone::decreasing); }) ==
        ErrorCode::hypothesis);
  // <Cx,x>/<x,x> = 1.5 is not below a = 1.2
  CHECK(code_of([] { reverse_functional(diag({1, 2}), half, natural_log(SpectrumWindow(1, 2)), 10, 1.2, Monotone::increasing); }) ==
        ErrorCode::hypothesis);
  CHECK(code_of([] { reverse_functional(diag({1, 2}), half, natural_log(SpectrumWindow(1, 2)), 2, 1.5, Monotone::decreasing); }) ==
        ErrorCode::hypothesis);
}

TEST_CASE("endpoint upper bound") {
  check_chain(endpoint_upper_bound(diag({1, 4}), half, sqrt14, w14), {1.5, 3}, 1e-12);
  const auto cap = quadratic_cap(1, SpectrumWindow(-1, 1));
  check_chain(endpoint_upper_bound(diag({-1, 1}), StateVector({0.6, 0.8}), cap, cap.domain()), {1, 2}, 1e-12);
  check_chain(endpoint_upper_bound(diag({1, 4}), half, affine(0, 0, w14), w14), {0, 0}, 0);
  CHECK(code_of([] { endpoint_upper_bound(diag({1, 4}), half, sqrt14, SpectrumWindow(1, 3)); }) == ErrorCode::domain);
}

TEST_CASE("composite F bound") {
  const auto diff = parse_bivariate("diff");
  const auto r = composite_F_bound(diag({1, 4}), half, sqrt14, w14, diff, UMonotonicity::nondecreasing);
  check_chain(r, {3 - std::sqrt(2.5), 5}, 1e-9);
  const auto ratio = parse_bivariate("ratio");
  check_chain(composite_F_bound(diag({1, 4}), half, sqrt14, w14, ratio, UMonotonicity::nondecreasing),
              {3 / std::sqrt(2.5), 6}, 1e-9);
  const auto second = parse_bivariate("second");
  const auto up = composite_F_bound(diag({1, 4}), half, sqrt14, w14, second, UMonotonicity::nondecreasing);
  const auto down = composite_F_bound(diag({1, 4}), half, sqrt14, w14, second, UMonotonicity::nonincreasing);
  check_chain(up, {std::sqrt(2.5), 2}, 1e-12);
  check_chain(down, {1, std::sqrt(2.5)}, 1e-12);
  UMonotonicity natural{};
  const auto neg = parse_bivariate("negdiff", &natural);
  CHECK(natural == UMonotonicity::nonincreasing);
  check_chain(composite_F_bound(diag({1, 4}), half, sqrt14, w14, neg, natural), {1 - 6, std::sqrt(2.5) - 3}, 1e-9);
  SUBCASE("a wrong monotonicity declaration is rejected") {
    CHECK(code_of([&] { composite_F_bound(diag({1, 4}), half, sqrt14, w14, diff, UMonotonicity::nonincreasing); }) ==
          ErrorCode::hypothesis);
  }
}

TEST_CASE("lambda bounds") {
  const auto d = lambda_bounds(diag({1, 4}), half, sqrt14, w14, LambdaMode::difference);
  CHECK(d.derived().at("lambda") == 5.0);
  CHECK(d.holds());
  const auto r = lambda_bounds(diag({1, 4}), half, sqrt14, w14, LambdaMode::ratio);
  CHECK(r.derived().at("lambda") == 6.0);
  check_chain(r, {0.5, std::sqrt(2.5), 3}, 1e-12);
  const SpectrumWindow w24(2, 4);
  const auto ln = natural_log(w24);
  const auto lr = lambda_bounds(diag({2, 4}), half, ln, w24, LambdaMode::ratio);
  CHECK(std::abs(lr.derived().at("coefficient") - std::log(2.0) / (std::log(4.0) + std::log(2.0))) <= 1e-12);
  const auto cap = quadratic_cap(1, SpectrumWindow(-1, 1));
  CHECK(lambda_bounds(diag({-1, 1}), half, cap, cap.domain(), LambdaMode::ratio).holds());
  const auto zero_at_left = power_function(0.5, SpectrumWindow(0, 4));
  CHECK(code_of([&] { lambda_bounds(diag({0, 4}), half, zero_at_left, zero_at_left.domain(), LambdaMode::ratio); }) ==
        ErrorCode::degenerate);
}

TEST_CASE("composition bounds") {
  const auto id = affine(1, 0, SpectrumWindow(0, 3));
  check_chain(composition_bounds(diag({1, 3}), half, id, 2, CompositionKind::homogeneous), {4, 20}, 1e-12);
  check_chain(composition_bounds(diag({1, 4}), half, sqrt14, 2, CompositionKind::subadditive), {2.5, 5}, 1e-12);
  const auto one = composition_bounds(diag({1, 4}), half, sqrt14, 1, CompositionKind::subadditive);
  const auto j = jensen_pclass(diag({1, 4}), half, sqrt14);
  for (std::size_t i = 0; i < 2; ++i) CHECK(one.value(i) == j.value(i));
  CHECK(code_of([] { composition_bounds(diag({1, 4}), half, sqrt14, 2, CompositionKind::homogeneous); }) ==
        ErrorCode::hypothesis);
  CHECK(code_of([] { composition_bounds(diag({1, 4}), half, sqrt14, 0, CompositionKind::subadditive); }) ==
        ErrorCode::invalid_input);
}

TEST_CASE("hermite-hadamard") {
  check_chain(hermite_hadamard(diag({1, 4}), half, sqrt14, w14, 1, 1), {0.5 * std::sqrt(2.5), 1.5, 3}, 1e-12);
  check_chain(hermite_hadamard(diag({1, 4}), half, affine(0, 0, w14), w14, 1, 1), {0, 0, 0}, 0);
  check_chain(hermite_hadamard(diag({1, 4}), StateVector({1, 0}), sqrt14, w14, 1, 0), {0.5, 1, 3}, 1e-12);
  try {
    hermite_hadamard(diag({1, 4}), half, sqrt14, w14, 1, 0);
    FAIL("expected a hypothesis error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis);
    CHECK(std::string(e.what()).find("differs") != std::string::npos);
  }
  CHECK(code_of([] { hermite_hadamard(diag({1, 4}), half, sqrt14, w14, 0, 0); }) == ErrorCode::invalid_input);
}

TEST_CASE("holder-maccarthy two-sided") {
  check_chain(holder_maccarthy_two_sided(diag({1, 4}), half, 0.5), {1.5, std::sqrt(2.5), 3}, 1e-12);
  check_chain(holder_maccarthy_two_sided(diag({1, 3}), half, 2), {4, 5, 16}, 1e-12);
  for (double r : {0.25, 0.5, 3.0}) {
    const auto c = holder_maccarthy_two_sided(HermitianOperator::scalar(3, 2.0), random_state(3, 4, true), r);
    CHECK(std::abs(c.value(0) - c.value(1)) <= 1e-10);
    CHECK(c.holds());
  }
  CHECK(code_of([] { holder_maccarthy_two_sided(diag({1, 4}), half, 1); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { holder_maccarthy_two_sided(diag({1, 4}), half, -1); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { holder_maccarthy_two_sided(diag({-1, 4}), half, 0.5); }) == ErrorCode::domain);
}

TEST_CASE("counterexample: the upper Holder-MacCarthy bound fails near a zero eigenvalue") {
  const StateVector x({std::sqrt(0.99), std::sqrt(0.01)});
  const auto r = holder_maccarthy_two_sided(diag({0, 1}), x, 0.5);
  check_chain(r, {0.01, 0.1, 0.02}, 1e-12);
  CHECK_FALSE(r.holds());
  CHECK(r.first_failing_link() == std::optional<std::size_t>(1));
}

TEST_CASE("property: classical Holder-MacCarthy comparison holds on random PSD operators") {
  Rng rng(8);
  int failures = 0;
  for (int k = 0; k < 3000; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto c = random_hermitian(SpectrumWindow(0, 4), n, rng.engine()()).op;
    const auto x = random_state(n, rng.engine()(), true);
    const double r = k % 2 ? rng.uniform(0.01, 0.99) : rng.uniform(1.01, 4);
    failures += holder_maccarthy_classical(c, x, r).holds() ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: two-sided Holder-MacCarthy holds when the spectrum stays in [1,4]") {
  Rng rng(12);
  int failures = 0;
  for (int k = 0; k < 3000; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto c = random_hermitian(w14, n, rng.engine()()).op;
    const auto x = random_state(n, rng.engine()(), true);
    const double r = k % 2 ? rng.uniform(0.01, 0.99) : rng.uniform(1.01, 4);
    failures += holder_maccarthy_two_sided(c, x, r).holds() ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: two-sided Holder-MacCarthy on random PSD operators in [0,4]" * doctest::should_fail()) {
  Rng rng(13);
  int failures = 0;
  for (int k = 0; k < 3000; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto c = random_hermitian(SpectrumWindow(0, 4), n, rng.engine()()).op;
    const auto x = random_state(n, rng.engine()(), true);
    const double r = k % 2 ? rng.uniform(0.01, 0.99) : rng.uniform(1.01, 4);
    failures += holder_maccarthy_two_sided(c, x, r).holds() ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: hermite-hadamard with p, q fitted to the instance") {
  Rng rng(31);
  int failures = 0;
  for (int k = 0; k < 2000; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto f = quadratic_cap(rng.uniform(1, 4), SpectrumWindow(-1, 1));
    const auto c = random_hermitian(f.domain(), n, rng.engine()()).op;
    const auto x = random_state(n, rng.engine()(), true);
    const double g = quadratic_form(c, x);
    failures += hermite_hadamard(c, x, f, f.domain(), 1 - g, g + 1).holds() ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("diagonal oracle: every chain member matches scalar arithmetic") {
  Rng rng(77);
  for (int k = 0; k < 200; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 6));
    std::vector<double> d(n), xv(n);
    for (double& v : d) v = rng.uniform(1, 4);
    for (double& v : xv) v = rng.normal();
    const double nrm = std::sqrt(oracle::norm_sq(xv));
    for (double& v : xv) v /= nrm;
    const auto c = HermitianOperator::diagonal(d);
    const StateVector x(xv);
    const oracle::Fn sq = [](double t) { return std::sqrt(t); };
    const double q = oracle::form(d, xv), fq = oracle::fform(d, xv, sq);

    const auto j = jensen_pclass(c, x, sqrt14);
    CHECK(std::abs(j.value(0) - std::sqrt(q)) <= 1e-12);
    CHECK(std::abs(j.value(1) - 2 * fq) <= 1e-12);
    const auto e = endpoint_upper_bound(c, x, sqrt14, w14);
    CHECK(std::abs(e.value(0) - fq) <= 1e-12);
    const auto lr = lambda_bounds(c, x, sqrt14, w14, LambdaMode::ratio);
    CHECK(std::abs(lr.value(0) - fq / 3) <= 1e-12);
    const auto hm = holder_maccarthy_two_sided(c, x, 0.5);
    CHECK(std::abs(hm.value(0) - fq) <= 1e-12);
    CHECK(std::abs(hm.value(1) - std::sqrt(q)) <= 1e-12);
    const auto hm3 = holder_maccarthy_two_sided(c, x, 3);
    CHECK(std::abs(hm3.value(1) - oracle::fform(d, xv, [](double t) { return t * t * t; })) <= 1e-12 * 64);
  }
}

TEST_CASE("report json schema") {
  const auto r = jensen_pclass(diag({1, 4}), half, sqrt14);
  const auto j = to_json(r);
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["name"] == "jensen");
  CHECK(j["chain"].size() == 2);
  CHECK(j["slacks"].size() == 1);
  CHECK(j["holds"] == true);
  CHECK(j["tolerance"]["atol"] == 1e-10);
  CHECK(j["hypothesis_status"] == "all-certified");
}

TEST_CASE("tolerance policy") {
  const Tolerance t;
  CHECK(t.le(1.0, 1.0));
  CHECK(t.le(1.0 + 5e-10, 1.0));
  CHECK_FALSE(t.le(1.0 + 5e-9, 1.0));
  CHECK(t.le(5e-11, 0.0));
  CHECK_FALSE(t.le(2e-10, 0.0));
  CHECK_THROWS_AS(InequalityReport("x", {{"a", 1.0}, {"b", NAN}}), Error);
}
