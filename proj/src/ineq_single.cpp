#include "pclass/ineq_single.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pclass/error.hpp"
#include "pclass/rng.hpp"

namespace pclass {

namespace detail {

void require_unit(const StateVector& x, const char* what) {
  if (!x.is_unit(1e-10))
    fail(ErrorCode::invalid_input,
         fmt::format("{}: state must be a unit vector (|<x,x> - 1| <= 1e-10), got <x,x> = {}", what, x.norm_sq()));
}

void require_window_in_domain(const SpectrumWindow& w, const ScalarFunction& f) {
  if (!f.domain().contains(w, kDomainSlack))
    fail(ErrorCode::domain, fmt::format("window [{}, {}] is not inside the domain [{}, {}] of '{}'", w.m(), w.M(),
                                        f.domain().m(), f.domain().M(), f.label()));
}

double grid_extremum_F(const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F, double u,
                       UMonotonicity monotonicity) {
  const bool want_max = monotonicity == UMonotonicity::nondecreasing;
  double best = want_max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (double t : domain_grid(window)) {
    const double v = F.eval(u, f(t));
    if (!std::isfinite(v))
      fail(ErrorCode::domain, fmt::format("F '{}' is not finite at (u, f({})) = ({}, {})", F.label, t, u, f(t)));
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

void spot_check_monotonicity(const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F,
                             UMonotonicity monotonicity) {
  const auto grid = domain_grid(window);
  double fmin = std::numeric_limits<double>::infinity();
  std::vector<double> fv;
  fv.reserve(grid.size());
  for (double t : grid) {
    fv.push_back(f(t));
    fmin = std::min(fmin, fv.back());
  }
  const double uhi = 2.0 * (f(window.m()) + f(window.M()));
  const double ulo = std::min({0.0, 2.0 * fmin, uhi});
  Rng rng(0x5eedf00dULL);
  const Tolerance tol;
  for (int k = 0; k < 100; ++k) {
    double u1 = rng.uniform(ulo, uhi > ulo ? uhi : ulo + 1.0);
    double u2 = rng.uniform(ulo, uhi > ulo ? uhi : ulo + 1.0);
    if (u1 > u2) std::swap(u1, u2);
    const double v = fv[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(fv.size()) - 1))];
    const double a = F.eval(u1, v);
    const double b = F.eval(u2, v);
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    const bool ok = monotonicity == UMonotonicity::nondecreasing ? tol.le(a, b) : tol.le(b, a);
    if (!ok)
      fail(ErrorCode::hypothesis,
           fmt::format("F '{}' is not {} in u: F({}, {}) = {} vs F({}, {}) = {}", F.label,
                       monotonicity == UMonotonicity::nondecreasing ? "nondecreasing" : "nonincreasing", u1, v, a,
                       u2, v, b));
  }
}

InequalityReport composite_F_from_terms(const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F,
                                        UMonotonicity monotonicity, double form_fc, double form_c,
                                        HypothesisStatus status, const std::string& name) {
  const double endpoints = 2.0 * (f(window.m()) + f(window.M()));
  const double lhs = F.eval(2.0 * form_fc, f(form_c));
  if (!std::isfinite(lhs)) fail(ErrorCode::domain, fmt::format("F '{}' is not finite at the instance", F.label));
  const double bound = grid_extremum_F(f, window, F, endpoints, monotonicity);
  std::vector<ChainEntry> chain;
  if (monotonicity == UMonotonicity::nondecreasing) {
    chain = {{"F(2<f(C)x,x>, f(<Cx,x>))", lhs}, {"max_t F(2(f(m)+f(M)), f(t))", bound}};
  } else {
    chain = {{"min_t F(2(f(m)+f(M)), f(t))", bound}, {"F(2<f(C)x,x>, f(<Cx,x>))", lhs}};
  }
  InequalityReport r(name, std::move(chain), status);
  r.set_derived("two_endpoint_sum", endpoints);
  return r;
}

InequalityReport lambda_from_terms(const ScalarFunction& f, const SpectrumWindow& window, LambdaMode mode,
                                   double form_fc, double form_c, HypothesisStatus status, const std::string& name) {
  const auto minimum = min_on_interval(f, window);
  const double endpoints = 2.0 * (f(window.m()) + f(window.M()));
  const double fq = f(form_c);
  if (mode == LambdaMode::ratio) {
    if (!(minimum.f_min > 1e-12))
      fail(ErrorCode::degenerate,
           fmt::format("ratio lambda needs min f > 1e-12 on [{}, {}], got {}", window.m(), window.M(), minimum.f_min));
    const double lambda = endpoints / minimum.f_min;
    InequalityReport r(name,
                       {{"(2/lambda)<f(C)x,x>", (2.0 / lambda) * form_fc},
                        {"f(<Cx,x>)", fq},
                        {"2<f(C)x,x>", 2.0 * form_fc}},
                       status);
    r.set_derived("lambda", lambda).set_derived("coefficient", 2.0 / lambda).set_derived("min_f", minimum.f_min);
    return r;
  }
  const double lambda = endpoints - minimum.f_min;
  InequalityReport r(name, {{"0", 0.0}, {"2<f(C)x,x> - f(<Cx,x>)", 2.0 * form_fc - fq}, {"lambda", lambda}},
                     status);
  r.set_derived("lambda", lambda).set_derived("min_f", minimum.f_min);
  return r;
}

}  // namespace detail

namespace {

struct Terms {
  SpectralDecomposition d;
  double form_c;   // <Cx,x>
  double form_fc;  // <f(C)x,x>
};

Terms evaluate(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f, const SpectrumWindow& window,
               const char* what) {
  if (c.dim() != x.dim())
    fail(ErrorCode::invalid_input, fmt::format("{}: operator dim {} vs state dim {}", what, c.dim(), x.dim()));
  Terms t{spectral_decompose(c), 0.0, 0.0};
  require_spectrum_in(t.d, window, what);
  t.form_c = quadratic_form(c, x);
  t.form_fc = function_form(t.d, f, x);
  return t;
}

}  // namespace

InequalityReport jensen_pclass(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f) {
  detail::require_unit(x, "jensen");
  HypothesisLedger h;
  h.require(f, Property::pclass, "jensen");
  const auto t = evaluate(c, x, f, f.domain(), "jensen");
  return InequalityReport("jensen", {{"f(<Cx,x>)", f(t.form_c)}, {"2<f(C)x,x>", 2.0 * t.form_fc}}, h.status());
}

InequalityReport jensen_pclass_unnormalized(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f) {
  if (!(x.norm_sq() > 1e-20)) fail(ErrorCode::invalid_input, "jensen-raw: state must be nonzero");
  HypothesisLedger h;
  h.require(f, Property::pclass, "jensen-raw");
  const auto t = evaluate(c, x, f, f.domain(), "jensen-raw");
  const double n = x.norm_sq();
  return InequalityReport("jensen-raw",
                          {{"f(<Cx,x>/<x,x>)", f(t.form_c / n)}, {"2<f(C)x,x>/<x,x>", 2.0 * t.form_fc / n}},
                          h.status());
}

InequalityReport scalar_reverse_lemma(const ScalarFunction& f, double a, double b, double lambda, ReverseKind kind) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(lambda))
    fail(ErrorCode::invalid_input, "reverse-lemma: a, b and lambda must be finite");
  if (!(a < b)) fail(ErrorCode::invalid_input, fmt::format("reverse-lemma: needs a < b, got a = {}, b = {}", a, b));
  if (lambda >= 0.0 && lambda <= 1.0)
    fail(ErrorCode::invalid_input, fmt::format("reverse-lemma: lambda = {} lies in [0, 1]", lambda));
  HypothesisLedger h;
  h.require(f, Property::pclass, "reverse-lemma");
  if (kind == ReverseKind::decreasing_negative_lambda) {
    if (!(lambda < 0)) fail(ErrorCode::invalid_input, "reverse-lemma: decreasing kind needs lambda < 0");
    h.require(f, Property::decreasing, "reverse-lemma");
  } else {
    if (!(lambda > 1)) fail(ErrorCode::invalid_input, "reverse-lemma: increasing kind needs lambda > 1");
    h.require(f, Property::increasing, "reverse-lemma");
  }
  if (!f.domain().contains(a) || !f.domain().contains(b))
    fail(ErrorCode::domain, fmt::format("reverse-lemma: a = {} or b = {} outside the domain", a, b));
  const double point = (1.0 - lambda) * a + lambda * b;
  if (!f.domain().contains(point, kDomainSlack))
    fail(ErrorCode::domain, fmt::format("reverse-lemma: (1-l)a + l b = {} lies outside [{}, {}]", point,
                                        f.domain().m(), f.domain().M()));
  InequalityReport r("reverse-lemma", {{"f(a)-f(b)", f(a) - f(b)}, {"f((1-l)a+l b)", f(point)}}, h.status());
  r.set_derived("point", point);
  return r;
}

InequalityReport reverse_functional(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                                    double u, double a, Monotone direction) {
  const double n = x.norm_sq();
  if (!(n > 0.0)) fail(ErrorCode::hypothesis, "reverse: hypothesis 0 < <x,x> violated");
  if (!(n < u)) fail(ErrorCode::hypothesis, fmt::format("reverse: hypothesis <x,x> < u violated ({} >= {})", n, u));
  const SpectrumWindow& w = f.domain();
  if (!w.contains(a)) fail(ErrorCode::hypothesis, fmt::format("reverse: hypothesis a in [m, M] violated (a = {})", a));
  HypothesisLedger h;
  h.require(f, Property::pclass, "reverse");
  h.require(f, direction == Monotone::decreasing ? Property::decreasing : Property::increasing, "reverse");
  const auto t = evaluate(c, x, f, w, "reverse");
  const double arg = (u * a - t.form_c) / (u - n);
  if (!w.contains(arg, kDomainSlack))
    fail(ErrorCode::hypothesis,
         fmt::format("reverse: hypothesis (ua - <Cx,x>)/(u - <x,x>) in [m, M] violated (arg = {})", arg));
  std::vector<ChainEntry> chain;
  if (direction == Monotone::decreasing) {
    chain = {{"f(a) - 2<f(C)x,x>/<x,x>", f(a) - 2.0 * t.form_fc / n}, {"f((ua-<Cx,x>)/(u-<x,x>))", f(arg)}};
  } else {
    const double mean = t.form_c / n;
    if (!(mean < a))
      fail(ErrorCode::hypothesis,
           fmt::format("reverse: increasing branch needs <Cx,x>/<x,x> < a (got {} >= {})", mean, a));
    chain = {{"f(<Cx,x>/<x,x>) - f(a)", f(mean) - f(a)}, {"f((ua-<Cx,x>)/(u-<x,x>))", f(arg)}};
  }
  InequalityReport r("reverse", std::move(chain), h.status());
  r.set_derived("arg", arg);
  return r;
}

InequalityReport endpoint_upper_bound(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                                      const SpectrumWindow& window) {
  detail::require_unit(x, "endpoint");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "endpoint");
  const auto t = evaluate(c, x, f, window, "endpoint");
  return InequalityReport("endpoint", {{"<f(C)x,x>", t.form_fc}, {"f(m)+f(M)", f(window.m()) + f(window.M())}},
                          h.status());
}

InequalityReport composite_F_bound(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                                   const SpectrumWindow& window, const Bivariate& F, UMonotonicity monotonicity) {
  detail::require_unit(x, "composite-F");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "composite-F");
  detail::spot_check_monotonicity(f, window, F, monotonicity);
  const auto t = evaluate(c, x, f, window, "composite-F");
  return detail::composite_F_from_terms(f, window, F, monotonicity, t.form_fc, t.form_c, h.status(), "composite-F");
}

InequalityReport lambda_bounds(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                               const SpectrumWindow& window, LambdaMode mode) {
  detail::require_unit(x, "lambda");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "lambda");
  const auto t = evaluate(c, x, f, window, "lambda");
  return detail::lambda_from_terms(f, window, mode, t.form_fc, t.form_c, h.status(), "lambda");
}

InequalityReport composition_bounds(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f, int n,
                                    CompositionKind kind) {
  detail::require_unit(x, "compose");
  if (n < 1) fail(ErrorCode::invalid_input, fmt::format("compose: n must be >= 1, got {}", n));
  HypothesisLedger h;
  h.require(f, Property::pclass, "compose");
  h.require(f, Property::increasing, "compose");
  h.require(f, kind == CompositionKind::homogeneous ? Property::homogeneous : Property::subadditive, "compose");
  const auto g = power_compose(f, n);
  const auto t = evaluate(c, x, g, g.domain(), "compose");
  const double factor = kind == CompositionKind::homogeneous ? std::pow(2.0, n) : 2.0;
  InequalityReport r("compose", {{"f^n(<Cx,x>)", g(t.form_c)}, {"k<f^n(C)x,x>", factor * t.form_fc}}, h.status());
  r.set_derived("factor", factor);
  return r;
}

InequalityReport hermite_hadamard(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                                  const SpectrumWindow& window, double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q) || p < 0 || q < 0 || !(p + q > 0))
    fail(ErrorCode::invalid_input, fmt::format("hermite-hadamard: needs p, q >= 0 with p + q > 0 (p = {}, q = {})", p, q));
  detail::require_unit(x, "hermite-hadamard");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "hermite-hadamard");
  const auto t = evaluate(c, x, f, window, "hermite-hadamard");
  const double mid = (p * window.m() + q * window.M()) / (p + q);
  const double gap = std::abs(t.form_c - mid);
  if (gap > 1e-8)
    fail(ErrorCode::hypothesis,
         fmt::format("hermite-hadamard: <Cx,x> = {} differs from (pm+qM)/(p+q) = {} by {}", t.form_c, mid, gap));
  InequalityReport r("hermite-hadamard",
                     {{"f((pm+qM)/(p+q))/2", 0.5 * f(mid)},
                      {"<f(C)x,x>", t.form_fc},
                      {"f(m)+f(M)", f(window.m()) + f(window.M())}},
                     h.status());
  r.set_derived("hypothesis_discrepancy", gap);
  return r;
}

namespace {

struct PowerForms {
  double form_c;   // <Cx,x>, clipped at 0
  double form_cr;  // <C^r x,x>
};

PowerForms power_forms(const HermitianOperator& c, const StateVector& x, double r, const char* what) {
  if (!std::isfinite(r) || r <= 0.0 || r == 1.0)
    fail(ErrorCode::invalid_input, fmt::format("{}: r must lie in (0,1) or (1,inf), got {}", what, r));
  detail::require_unit(x, what);
  if (c.dim() != x.dim()) fail(ErrorCode::invalid_input, fmt::format("{}: dimension mismatch", what));
  const auto d = spectral_decompose(c);
  if (d.min_eigenvalue() < -1e-10)
    fail(ErrorCode::domain, fmt::format("{}: C must be positive, lambda_min = {}", what, d.min_eigenvalue()));
  PowerForms out{std::max(0.0, quadratic_form(c, x)), 0.0};
  for (std::size_t k = 0; k < d.dim; ++k) {
    double dot = 0.0;
    for (std::size_t i = 0; i < d.dim; ++i) dot += d.eigenvector(i, k) * x[i];
    out.form_cr += std::pow(std::max(0.0, d.eigenvalues[k]), r) * dot * dot;
  }
  return out;
}

}  // namespace

InequalityReport holder_maccarthy_two_sided(const HermitianOperator& c, const StateVector& x, double r) {
  const auto pf = power_forms(c, x, r, "maccarthy");
  const double qr = std::pow(pf.form_c, r);
  InequalityReport rep = r < 1.0
      ? InequalityReport("maccarthy", {{"<C^r x,x>", pf.form_cr}, {"<Cx,x>^r", qr}, {"2<C^r x,x>", 2.0 * pf.form_cr}})
      : InequalityReport("maccarthy",
                         {{"<Cx,x>^r", qr}, {"<C^r x,x>", pf.form_cr}, {"2^r<Cx,x>^r", std::pow(2.0, r) * qr}});
  rep.set_derived("r", r);
  return rep;
}

InequalityReport holder_maccarthy_classical(const HermitianOperator& c, const StateVector& x, double r) {
  const auto pf = power_forms(c, x, r, "maccarthy-classical");
  const double qr = std::pow(pf.form_c, r);
  return r < 1.0 ? InequalityReport("maccarthy-classical", {{"<C^r x,x>", pf.form_cr}, {"<Cx,x>^r", qr}})
                 : InequalityReport("maccarthy-classical", {{"<Cx,x>^r", qr}, {"<C^r x,x>", pf.form_cr}});
}

}  // namespace pclass
