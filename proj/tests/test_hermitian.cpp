#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "pclass/error.hpp"
#include "pclass/hermitian.hpp"
#include "pclass/rng.hpp"

using namespace pclass;

namespace {

ScalarFunction square_on(double m, double M) {
  return ScalarFunction("sq", SpectrumWindow(m, M), [](double t) { return t * t; });
}

ScalarFunction identity_on(double m, double M) {
  return ScalarFunction("id", SpectrumWindow(m, M), [](double t) { return t; });
}

double frob_diff(const HermitianOperator& a, const HermitianOperator& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("construction validates symmetry and finiteness") {
  CHECK_NOTHROW(HermitianOperator(2, {1, 2, 2, 3}));
  CHECK_THROWS_AS(HermitianOperator(2, {1, 2, 2.1, 3}), Error);
  CHECK_THROWS_AS(HermitianOperator(2, {1, NAN, NAN, 3}), Error);
  CHECK_THROWS_AS(HermitianOperator(2, {1, 2, 3}), Error);
  const HermitianOperator near(2, {1, 2, 2 + 1e-13, 3});
  CHECK(near(0, 1) == near(1, 0));
}

TEST_CASE("spectral decomposition of small known matrices") {
  SUBCASE("diag(-1,1) is already diagonal") {
    const double d[] = {-1, 1};
    const auto s = spectral_decompose(HermitianOperator::diagonal(d));
    CHECK(s.eigenvalues == std::vector<double>{-1, 1});
    CHECK(std::abs(s.eigenvector(0, 0)) == 1.0);
    CHECK(std::abs(s.eigenvector(1, 1)) == 1.0);
  }
  SUBCASE("[[2,1],[1,2]] has eigenvalues 1 and 3") {
    const auto s = spectral_decompose(HermitianOperator(2, {2, 1, 1, 2}));
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("identity") {
    const auto s = spectral_decompose(HermitianOperator::scalar(3, 1.0));
    for (double v : s.eigenvalues) CHECK(v == 1.0);
  }
}

TEST_CASE("decomposition residuals on random matrices") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + seed % 8;
    Rng rng(seed);
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = rng.uniform(-5, 5);
    const HermitianOperator op(n, a);
    const auto d = spectral_decompose(op);
    CHECK(d.reconstruction_residual(op) <= 1e-9 * std::max(1.0, op.frobenius_norm()));
    CHECK(d.orthonormality_residual() <= 1e-10);
    for (std::size_t k = 1; k < n; ++k) CHECK(d.eigenvalues[k - 1] <= d.eigenvalues[k]);
  }
}

TEST_CASE("decomposition is deterministic") {
  const auto a = random_hermitian(SpectrumWindow(-2, 3), 5, 9).op;
  const auto d1 = spectral_decompose(a);
  const auto d2 = spectral_decompose(a);
  CHECK(d1.eigenvalues == d2.eigenvalues);
  CHECK(d1.eigenvectors == d2.eigenvectors);
}

TEST_CASE("functional calculus") {
  SUBCASE("2 - t^2 on diag(-1,1) gives the identity") {
    const double d[] = {-1, 1};
    const ScalarFunction g("cap", SpectrumWindow(-1, 1), [](double t) { return 2 - t * t; });
    const auto fa = apply_function(HermitianOperator::diagonal(d), g);
    CHECK(fa(0, 0) == doctest::Approx(1.0));
    CHECK(fa(1, 1) == doctest::Approx(1.0));
    CHECK(fa(0, 1) == 0.0);
    const StateVector x({oracle::kInvSqrt2, oracle::kInvSqrt2});
    CHECK(std::abs(function_form(spectral_decompose(HermitianOperator::diagonal(d)), g, x) - 1.0) <= 1e-12);
  }
  SUBCASE("identity returns the matrix") {
    const HermitianOperator a(2, {2, 1, 1, 2});
    CHECK(frob_diff(apply_function(a, identity_on(0, 4)), a) <= 1e-12);
  }
  SUBCASE("square of [[2,1],[1,2]]") {
    const HermitianOperator a(2, {2, 1, 1, 2});
    const auto sq = apply_function(a, square_on(0, 4));
    const HermitianOperator expect(2, {5, 4, 4, 5});
    CHECK(frob_diff(sq, expect) <= 1e-12);
  }
  SUBCASE("eigenvalue outside the domain is a domain error") {
    const double d[] = {0.5, 2};
    try {
      apply_function(HermitianOperator::diagonal(d), square_on(1, 4));
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::domain);
      CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
  }
}

TEST_CASE("property: f(A) = A*A for t^2 on random matrices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const auto a = random_hermitian(SpectrumWindow(-3, 3), n, seed).op;
    CHECK(frob_diff(apply_function(a, square_on(-3.1, 3.1)), a.squared()) <= 1e-9);
  }
}

TEST_CASE("property: diagonal functional calculus matches scalar evaluation") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d(4);
    for (double& v : d) v = rng.uniform(1, 4);
    const ScalarFunction f("sqrt", SpectrumWindow(1, 4), [](double t) { return std::sqrt(t); });
    const auto fa = apply_function(HermitianOperator::diagonal(d), f);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(fa(i, i) == std::sqrt(d[i]));
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) CHECK(fa(i, j) == 0.0);
    }
  }
}

TEST_CASE("quadratic forms") {
  const StateVector x({oracle::kInvSqrt2, oracle::kInvSqrt2});
  const double a[] = {-1, 1};
  const double b[] = {1, 4};
  CHECK(std::abs(quadratic_form(HermitianOperator::diagonal(a), x)) <= 1e-15);
  CHECK(quadratic_form(HermitianOperator::scalar(2, 1.0), x) == doctest::Approx(1.0));
  CHECK(quadratic_form(HermitianOperator::diagonal(b), x) == doctest::Approx(2.5));
  CHECK_THROWS_AS(quadratic_form(HermitianOperator::scalar(3, 1.0), x), Error);
}

TEST_CASE("property: unit quadratic forms stay inside the spectral window") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto a = random_hermitian(SpectrumWindow(1, 4), 2 + seed % 5, seed);
    const auto x = random_state(a.op.dim(), seed + 1000, true);
    const double q = quadratic_form(a.op, x);
    CHECK(q >= 1 - 1e-10);
    CHECK(q <= 4 + 1e-10);
  }
}

TEST_CASE("sup_form_norm") {
  const double d1[] = {1.5, 3};
  CHECK(sup_form_norm(HermitianOperator::diagonal(d1)) == doctest::Approx(3.0));
  CHECK(sup_form_norm(HermitianOperator::zero(3)) == 0.0);
  const double s[] = {1 + std::sqrt(2.0), std::sqrt(2.0) + 2};
  CHECK(sup_form_norm(HermitianOperator::diagonal(s)) == doctest::Approx(std::sqrt(2.0) + 2));
  const double neg[] = {-1, 2};
  try {
    sup_form_norm(HermitianOperator::diagonal(neg));
    FAIL("expected negative-spectrum error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_spectrum);
  }
}

TEST_CASE("property: sup_form_norm dominates sampled forms") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = random_hermitian(SpectrumWindow(0, 2), 2 + seed % 3, seed).op;
    const double norm = sup_form_norm(a);
    double best = 0.0;
    for (std::uint64_t k = 0; k < 10000; ++k) best = std::max(best, quadratic_form(a, random_state(a.dim(), derive_seed(seed, k), true)));
    CHECK(best <= norm + 1e-12);
    CHECK(norm - best <= 1e-2);
  }
}

TEST_CASE("block lifting") {
  const double d1[] = {1, 2};
  const double d2[] = {3, 4};
  const std::vector<HermitianOperator> blocks = {HermitianOperator::diagonal(d1), HermitianOperator::diagonal(d2)};
  const std::vector<StateVector> xs = {StateVector({0.5, 0.5}), StateVector({0.5, 0.5})};
  const auto big = block_diag(blocks);
  const auto xx = stack(xs);
  CHECK(big.dim() == 4);
  CHECK(quadratic_form(big, xx) == doctest::Approx(2.5));
  CHECK(xx.norm_sq() == doctest::Approx(xs[0].norm_sq() + xs[1].norm_sq()));
  const auto single = block_diag(std::span(blocks).first(1));
  CHECK(frob_diff(single, blocks[0]) == 0.0);
  CHECK_THROWS_AS(block_diag(std::span<const HermitianOperator>()), Error);
  CHECK_THROWS_AS(stack(std::span<const StateVector>()), Error);
}

TEST_CASE("property: lifted form equals the sum of block forms") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    std::vector<HermitianOperator> cs;
    std::vector<StateVector> xs;
    double sum = 0.0;
    for (int i = 0; i < 1 + static_cast<int>(seed % 4); ++i) {
      const auto n = static_cast<std::size_t>(rng.integer(1, 4));
      cs.push_back(random_hermitian(SpectrumWindow(-2, 2), n, rng.engine()()).op);
      xs.push_back(random_state(n, rng.engine()(), false));
      sum += quadratic_form(cs.back(), xs.back());
    }
    CHECK(std::abs(quadratic_form(block_diag(cs), stack(xs)) - sum) <= 1e-12 * std::max(1.0, std::abs(sum)));
  }
}

TEST_CASE("random generation") {
  const SpectrumWindow w(1, 4);
  const auto a = random_hermitian(w, 4, 42);
  const auto b = random_hermitian(w, 4, 42);
  CHECK(std::vector<double>(a.op.data().begin(), a.op.data().end()) ==
        std::vector<double>(b.op.data().begin(), b.op.data().end()));
  const auto d = spectral_decompose(a.op);
  CHECK(d.min_eigenvalue() >= 1 - 1e-10);
  CHECK(d.max_eigenvalue() <= 4 + 1e-10);
  for (std::size_t k = 0; k < 4; ++k) CHECK(d.eigenvalues[k] == doctest::Approx(a.eigenvalues[k]).epsilon(1e-12));
  const auto one = random_hermitian(w, 1, 5);
  CHECK(one.op.dim() == 1);
  CHECK(w.contains(one.op(0, 0)));

  const auto x = random_state(5, 11, true);
  CHECK(std::abs(x.norm_sq() - 1.0) <= 1e-12);
  const auto y = random_state(5, 11, true);
  CHECK(std::vector<double>(x.coords().begin(), x.coords().end()) == std::vector<double>(y.coords().begin(), y.coords().end()));
  const auto z = random_state(2, 3, false);
  CHECK(z.norm_sq() > 0.0);
}

TEST_CASE("state vectors") {
  const StateVector x({3, 4});
  CHECK(x.norm_sq() == 25.0);
  CHECK_FALSE(x.is_unit());
  CHECK(x.normalized().is_unit());
  CHECK_THROWS_AS(StateVector({0, 0}).normalized(), Error);
  CHECK_THROWS_AS(StateVector({1, INFINITY}), Error);
}

TEST_CASE("window inference widens by 1e-12") {
  const double d[] = {1, 4};
  const auto w = infer_window(spectral_decompose(HermitianOperator::diagonal(d)));
  CHECK(w.m() < 1.0);
  CHECK(w.M() > 4.0);
  CHECK(w.m() >= 1.0 - 2e-12);
  CHECK_THROWS_AS(SpectrumWindow(2, 1), Error);
  CHECK_THROWS_AS(SpectrumWindow(0, INFINITY), Error);
}
