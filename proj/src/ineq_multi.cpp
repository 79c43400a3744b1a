#include "pclass/ineq_multi.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pclass/error.hpp"

namespace pclass {

std::vector<bool> subset_mask(std::span<const std::size_t> subset, std::size_t n) {
  if (subset.empty()) fail(ErrorCode::invalid_input, "subset I must be nonempty");
  std::vector<bool> mask(n, false);
  for (std::size_t i : subset) {
    if (i >= n) fail(ErrorCode::invalid_input, fmt::format("subset index {} out of range for {} blocks", i, n));
    if (mask[i]) fail(ErrorCode::invalid_input, fmt::format("subset index {} repeated", i));
    mask[i] = true;
  }
  if (subset.size() == n) fail(ErrorCode::invalid_input, "subset I must be a proper subset");
  return mask;
}

namespace {

struct BlockTerms {
  std::vector<double> form_c;   // <C_i y_i, y_i>
  std::vector<double> form_fc;  // <f(C_i) y_i, y_i>
};

void require_blocks(std::span<const HermitianOperator> cs, const char* what) {
  if (cs.empty()) fail(ErrorCode::invalid_input, fmt::format("{}: at least one block is required", what));
}

void require_norm_sum(std::span<const StateVector> xs, const char* what) {
  double total = 0.0;
  for (const auto& x : xs) total += x.norm_sq();
  if (std::abs(total - 1.0) > 1e-10)
    fail(ErrorCode::invalid_input, fmt::format("{}: sum ||x_i||^2 must be 1 within 1e-10, got {}", what, total));
}

void require_weights(std::span<const double> p, std::size_t n, const char* what) {
  if (p.size() != n) fail(ErrorCode::invalid_input, fmt::format("{}: {} weights for {} blocks", what, p.size(), n));
  double total = 0.0;
  for (double w : p) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorCode::invalid_input, fmt::format("{}: weight {} is invalid", what, w));
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorCode::invalid_input, fmt::format("{}: weights must sum to 1 within 1e-12, got {}", what, total));
}

BlockTerms block_terms(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                       const ScalarFunction& f, const SpectrumWindow& window, const char* what) {
  if (cs.size() != xs.size())
    fail(ErrorCode::invalid_input, fmt::format("{}: {} blocks but {} states", what, cs.size(), xs.size()));
  BlockTerms t;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].dim() != xs[i].dim())
      fail(ErrorCode::invalid_input, fmt::format("{}: block {} has dim {} but its state has dim {}", what, i,
                                                 cs[i].dim(), xs[i].dim()));
    const auto d = spectral_decompose(cs[i]);
    require_spectrum_in(d, window, what);
    t.form_c.push_back(quadratic_form(cs[i], xs[i]));
    t.form_fc.push_back(function_form(d, f, xs[i]));
  }
  return t;
}

BlockTerms shared_state_terms(std::span<const HermitianOperator> cs, const StateVector& x, const ScalarFunction& f,
                              const char* what) {
  std::vector<StateVector> xs(cs.size(), x);
  return block_terms(cs, xs, f, f.domain(), what);
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a;
  return s;
}

struct Split {
  std::vector<bool> mask;
  double p_in = 0.0;
  double p_out = 0.0;
};

Split split_weights(std::span<const double> p, std::span<const std::size_t> subset, const char* what) {
  Split s{subset_mask(subset, p.size())};
  for (std::size_t i = 0; i < p.size(); ++i) (s.mask[i] ? s.p_in : s.p_out) += p[i];
  if (!(s.p_in > 1e-15) || !(s.p_out > 1e-15))
    fail(ErrorCode::degenerate,
         fmt::format("{}: degenerate partition, p_I = {} (must lie strictly inside (0,1))", what, s.p_in));
  return s;
}

/// Sum over one side of the partition of (p_i / p_side) * values[i].
double side_average(const Split& s, std::span<const double> p, const std::vector<double>& values, bool inside) {
  const double denom = inside ? s.p_in : s.p_out;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (s.mask[i] == inside) acc += (p[i] / denom) * values[i];
  return acc;
}

HermitianOperator side_operator(const Split& s, std::span<const double> p, std::span<const HermitianOperator> ops,
                                bool inside) {
  const double denom = inside ? s.p_in : s.p_out;
  HermitianOperator acc = HermitianOperator::zero(ops.front().dim());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (s.mask[i] == inside) acc = acc + ops[i].scaled(p[i] / denom);
  return acc;
}

HermitianOperator weighted_sum(std::span<const double> p, std::span<const HermitianOperator> ops) {
  HermitianOperator acc = HermitianOperator::zero(ops.front().dim());
  for (std::size_t i = 0; i < ops.size(); ++i) acc = acc + ops[i].scaled(p[i]);
  return acc;
}

HermitianOperator plain_sum(std::span<const HermitianOperator> ops) {
  HermitianOperator acc = HermitianOperator::zero(ops.front().dim());
  for (const auto& op : ops) acc = acc + op;
  return acc;
}

void require_psd_same_dim(std::span<const HermitianOperator> cs, const char* what) {
  require_blocks(cs, what);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].dim() != cs.front().dim())
      fail(ErrorCode::invalid_input, fmt::format("{}: all blocks must share one dimension", what));
    const auto d = spectral_decompose(cs[i]);
    if (d.min_eigenvalue() < -1e-10)
      fail(ErrorCode::negative_spectrum,
           fmt::format("{}: block {} is not positive, lambda_min = {}", what, i, d.min_eigenvalue()));
  }
}

/// U diag(max(l,0)^r) U^T
HermitianOperator psd_power(const HermitianOperator& c, double r) {
  const auto d = spectral_decompose(c);
  const std::size_t n = d.dim;
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lr = std::pow(std::max(0.0, d.eigenvalues[k]), r);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) out[i * n + j] += lr * d.eigenvector(i, k) * d.eigenvector(j, k);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) out[i * n + j] = out[j * n + i];
  return HermitianOperator(n, std::move(out));
}

}  // namespace

InequalityReport multi_jensen(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                              const ScalarFunction& f) {
  require_blocks(cs, "multi-jensen");
  require_norm_sum(xs, "multi-jensen");
  HypothesisLedger h;
  h.require(f, Property::pclass, "multi-jensen");
  const auto t = block_terms(cs, xs, f, f.domain(), "multi-jensen");
  return InequalityReport("multi-jensen",
                          {{"f(sum <C_i x_i,x_i>)", f(sum(t.form_c))}, {"2 sum <f(C_i)x_i,x_i>", 2.0 * sum(t.form_fc)}},
                          h.status());
}

InequalityReport weighted_multi_jensen(std::span<const HermitianOperator> cs, std::span<const double> p,
                                       const StateVector& x, const ScalarFunction& f) {
  require_blocks(cs, "weighted-multi-jensen");
  require_weights(p, cs.size(), "weighted-multi-jensen");
  detail::require_unit(x, "weighted-multi-jensen");
  HypothesisLedger h;
  h.require(f, Property::pclass, "weighted-multi-jensen");
  const auto t = shared_state_terms(cs, x, f, "weighted-multi-jensen");
  double q = 0.0, fc = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    q += p[i] * t.form_c[i];
    fc += p[i] * t.form_fc[i];
  }
  return InequalityReport("weighted-multi-jensen",
                          {{"f(sum p_i <C_i x,x>)", f(q)}, {"2 sum p_i <f(C_i)x,x>", 2.0 * fc}}, h.status());
}

InequalityReport omega_refinement(std::span<const HermitianOperator> cs, std::span<const double> p,
                                  const StateVector& x, const ScalarFunction& f,
                                  std::span<const std::size_t> subset) {
  require_blocks(cs, "omega");
  require_weights(p, cs.size(), "omega");
  detail::require_unit(x, "omega");
  const auto s = split_weights(p, subset, "omega");
  HypothesisLedger h;
  h.require(f, Property::pclass, "omega");
  const auto t = shared_state_terms(cs, x, f, "omega");
  double q = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) q += p[i] * t.form_c[i];
  const double omega1 = f(side_average(s, p, t.form_c, true)) + f(side_average(s, p, t.form_c, false));
  const double omega2 = 2.0 * side_average(s, p, t.form_fc, true) + 2.0 * side_average(s, p, t.form_fc, false);
  InequalityReport r("omega",
                     {{"f(sum p_i <C_i x,x>)", f(q)},
                      {"Omega1", omega1},
                      {"Omega2", omega2},
                      {"2 sum <f(C_i)x,x>", 2.0 * sum(t.form_fc)}},
                     h.status());
  r.set_derived("p_I", s.p_in);
  return r;
}

InequalityReport norm_chain(std::span<const HermitianOperator> cs, std::span<const double> p,
                            const ScalarFunction& f, std::span<const std::size_t> subset) {
  require_psd_same_dim(cs, "norm-chain");
  require_weights(p, cs.size(), "norm-chain");
  const auto s = split_weights(p, subset, "norm-chain");
  HypothesisLedger h;
  h.require(f, Property::pclass, "norm-chain");
  h.require(f, Property::increasing, "norm-chain");
  std::vector<HermitianOperator> fcs;
  for (const auto& c : cs) {
    const auto d = spectral_decompose(c);
    require_spectrum_in(d, f.domain(), "norm-chain");
    fcs.push_back(apply_function(d, f));
  }
  const double total = sup_form_norm(weighted_sum(p, cs));
  const double in_norm = sup_form_norm(side_operator(s, p, cs, true));
  const double out_norm = sup_form_norm(side_operator(s, p, cs, false));
  const double fin = sup_form_norm(side_operator(s, p, fcs, true));
  const double fout = sup_form_norm(side_operator(s, p, fcs, false));
  const double fall = sup_form_norm(plain_sum(fcs));
  InequalityReport r("norm-chain",
                     {{"f(||sum p_i C_i||)", f(total)},
                      {"f(||A_I||) + f(||A_Ic||)", f(in_norm) + f(out_norm)},
                      {"2||sum_I w f(C_i)|| + 2||sum_Ic w f(C_i)||", 2.0 * fin + 2.0 * fout},
                      {"2||sum f(C_i)||", 2.0 * fall}},
                     h.status());
  r.set_derived("p_I", s.p_in);
  return r;
}

InequalityReport norm_power_chain(std::span<const HermitianOperator> cs, std::span<const double> p, double r,
                                  std::span<const std::size_t> subset) {
  if (!std::isfinite(r) || r <= 0.0 || r == 1.0)
    fail(ErrorCode::invalid_input, fmt::format("norm-power: r must lie in (0,1) or (1,inf), got {}", r));
  require_psd_same_dim(cs, "norm-power");
  require_weights(p, cs.size(), "norm-power");
  const auto s = split_weights(p, subset, "norm-power");
  std::vector<HermitianOperator> pcs;
  for (const auto& c : cs) pcs.push_back(psd_power(c, r));
  auto norm = [](const HermitianOperator& a) { return std::max(0.0, sup_form_norm(a)); };
  std::vector<ChainEntry> chain;
  if (r < 1.0) {
    chain = {{"||sum p_i C_i||^r", std::pow(norm(weighted_sum(p, cs)), r)},
             {"||A_I||^r + ||A_Ic||^r",
              std::pow(norm(side_operator(s, p, cs, true)), r) + std::pow(norm(side_operator(s, p, cs, false)), r)},
             {"2||sum_I w C_i^r|| + 2||sum_Ic w C_i^r||",
              2.0 * norm(side_operator(s, p, pcs, true)) + 2.0 * norm(side_operator(s, p, pcs, false))},
             {"2||sum C_i^r||", 2.0 * norm(plain_sum(pcs))}};
  } else {
    const double a = norm(side_operator(s, p, pcs, true));
    const double b = norm(side_operator(s, p, pcs, false));
    chain = {{"||sum p_i C_i^r||", norm(weighted_sum(p, pcs))},
             {"(||sum_I w C_i^r||^(1/r) + ||sum_Ic w C_i^r||^(1/r))^r",
              std::pow(std::pow(a, 1.0 / r) + std::pow(b, 1.0 / r), r)},
             {"2^r(||A_I|| + ||A_Ic||)^r",
              std::pow(2.0, r) *
                  std::pow(norm(side_operator(s, p, cs, true)) + norm(side_operator(s, p, cs, false)), r)},
             {"(2||sum C_i||)^r", std::pow(2.0 * norm(plain_sum(cs)), r)}};
  }
  InequalityReport rep("norm-power", std::move(chain));
  rep.set_derived("p_I", s.p_in).set_derived("r", r);
  return rep;
}

InequalityReport multi_endpoint_bound(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                                      const ScalarFunction& f, const SpectrumWindow& window) {
  require_blocks(cs, "multi-endpoint");
  require_norm_sum(xs, "multi-endpoint");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "multi-endpoint");
  const auto t = block_terms(cs, xs, f, window, "multi-endpoint");
  return InequalityReport("multi-endpoint",
                          {{"sum <f(C_i)x_i,x_i>", sum(t.form_fc)}, {"f(m)+f(M)", f(window.m()) + f(window.M())}},
                          h.status());
}

InequalityReport multi_F_bound(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                               const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F,
                               UMonotonicity monotonicity) {
  require_blocks(cs, "multi-F");
  require_norm_sum(xs, "multi-F");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "multi-F");
  detail::spot_check_monotonicity(f, window, F, monotonicity);
  const auto t = block_terms(cs, xs, f, window, "multi-F");
  return detail::composite_F_from_terms(f, window, F, monotonicity, sum(t.form_fc), sum(t.form_c), h.status(),
                                        "multi-F");
}

InequalityReport multi_lambda_bounds(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                                     const ScalarFunction& f, const SpectrumWindow& window, LambdaMode mode) {
  require_blocks(cs, "multi-lambda");
  require_norm_sum(xs, "multi-lambda");
  detail::require_window_in_domain(window, f);
  HypothesisLedger h;
  h.require(f, Property::pclass, "multi-lambda");
  const auto t = block_terms(cs, xs, f, window, "multi-lambda");
  return detail::lambda_from_terms(f, window, mode, sum(t.form_fc), sum(t.form_c), h.status(), "multi-lambda");
}

}  // namespace pclass
