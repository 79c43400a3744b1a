#include "pclass/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "pclass/error.hpp"
#include "pclass/rng.hpp"

namespace pclass {

HermitianOperator::HermitianOperator(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), a_(std::move(row_major)) {
  if (dim_ == 0) fail(ErrorCode::invalid_input, "operator dimension must be positive");
  if (a_.size() != dim_ * dim_)
    fail(ErrorCode::invalid_input, fmt::format("expected {} entries for a {}x{} operator, got {}", dim_ * dim_,
                                               dim_, dim_, a_.size()));
  double scale = 1.0;
  for (double v : a_) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "operator entries must be finite");
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-12 * scale;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      double& lo = a_[i * dim_ + j];
      double& hi = a_[j * dim_ + i];
      if (std::abs(lo - hi) > tol)
        fail(ErrorCode::invalid_input,
             fmt::format("operator is not symmetric: a[{}][{}] = {} but a[{}][{}] = {}", i, j, lo, j, i, hi));
      lo = hi = 0.5 * lo + 0.5 * hi;
    }
  }
}

HermitianOperator HermitianOperator::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> data;
  data.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) fail(ErrorCode::invalid_input, "operator rows must form a square matrix");
    data.insert(data.end(), r.begin(), r.end());
  }
  return HermitianOperator(n, std::move(data));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> d) {
  std::vector<double> data(d.size() * d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) data[i * d.size() + i] = d[i];
  return HermitianOperator(d.size(), std::move(data));
}

HermitianOperator HermitianOperator::scalar(std::size_t dim, double c) {
  std::vector<double> d(dim, c);
  return diagonal(d);
}

bool HermitianOperator::is_diagonal() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (i != j && a_[i * dim_ + j] != 0.0) return false;
  return true;
}

double HermitianOperator::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (other.dim_ != dim_) fail(ErrorCode::invalid_input, "operator dimensions differ");
  std::vector<double> out(a_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.a_[i];
  return HermitianOperator(dim_, std::move(out));
}

HermitianOperator HermitianOperator::scaled(double s) const {
  std::vector<double> out(a_);
  for (double& v : out) v *= s;
  return HermitianOperator(dim_, std::move(out));
}

HermitianOperator HermitianOperator::squared() const {
  std::vector<double> out(a_.size(), 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) s += a_[i * dim_ + k] * a_[k * dim_ + j];
      out[i * dim_ + j] = out[j * dim_ + i] = s;
    }
  }
  return HermitianOperator(dim_, std::move(out));
}

double SpectralDecomposition::reconstruction_residual(const HermitianOperator& a) const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double r = 0.0;
      for (std::size_t k = 0; k < dim; ++k) r += eigenvector(i, k) * eigenvalues[k] * eigenvector(j, k);
      const double e = r - a(i, j);
      s += e * e;
    }
  }
  return std::sqrt(s);
}

double SpectralDecomposition::orthonormality_residual() const {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t l = 0; l < dim; ++l) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += eigenvector(i, k) * eigenvector(i, l);
      const double e = dot - (k == l ? 1.0 : 0.0);
      s += e * e;
    }
  }
  return std::sqrt(s);
}

StateVector::StateVector(std::vector<double> coords) : x_(std::move(coords)), norm_sq_(0.0) {
  if (x_.empty()) fail(ErrorCode::invalid_input, "state dimension must be positive");
  for (double v : x_) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "state coordinates must be finite");
    norm_sq_ += v * v;
  }
}

bool StateVector::is_unit(double tol) const noexcept { return std::abs(norm_sq_ - 1.0) <= tol; }

StateVector StateVector::scaled(double s) const {
  std::vector<double> out(x_);
  for (double& v : out) v *= s;
  return StateVector(std::move(out));
}

StateVector StateVector::normalized() const {
  if (!(norm_sq_ > 1e-20)) fail(ErrorCode::invalid_input, "cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(norm_sq_));
}

SpectralDecomposition spectral_decompose(const HermitianOperator& op) {
  const std::size_t n = op.dim();
  std::vector<double> a(op.data().begin(), op.data().end());
  std::vector<double> v(n * n, 0.0);  // row-major: v[i*n + k] = component i of vector k
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = std::max(op.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        if (std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (std::abs(theta) > 1e150) t = 0.5 / std::abs(theta);
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  SpectralDecomposition d;
  d.dim = n;
  d.eigenvalues.resize(n);
  d.eigenvectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    d.eigenvalues[k] = a[src * n + src];
    for (std::size_t i = 0; i < n; ++i) d.eigenvectors[k * n + i] = v[i * n + src];
  }
  return d;
}

namespace {

std::vector<double> checked_values(const SpectralDecomposition& d, const ScalarFunction& f) {
  std::vector<double> fv(d.dim);
  for (std::size_t k = 0; k < d.dim; ++k) {
    const double l = d.eigenvalues[k];
    if (!f.domain().contains(l, kDomainSlack))
      fail(ErrorCode::domain, fmt::format("eigenvalue {} lies outside the domain [{}, {}] of '{}'", l,
                                          f.domain().m(), f.domain().M(), f.label()));
    fv[k] = f(l);
  }
  return fv;
}

void require_dims(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::invalid_input, fmt::format("dimension mismatch: operator {} vs state {}", a, b));
}

}  // namespace

HermitianOperator apply_function(const SpectralDecomposition& d, const ScalarFunction& f) {
  const auto fv = checked_values(d, f);
  const std::size_t n = d.dim;
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += d.eigenvector(i, k) * fv[k] * d.eigenvector(j, k);
      out[i * n + j] = out[j * n + i] = s;
    }
  }
  return HermitianOperator(n, std::move(out));
}

HermitianOperator apply_function(const HermitianOperator& a, const ScalarFunction& f) {
  return apply_function(spectral_decompose(a), f);
}

double quadratic_form(const HermitianOperator& a, const StateVector& x) {
  require_dims(a.dim(), x.dim());
  const std::size_t n = a.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a(i, j) * x[j];
    s += x[i] * row;
  }
  return s;
}

double function_form(const SpectralDecomposition& d, const ScalarFunction& f, const StateVector& x) {
  require_dims(d.dim, x.dim());
  const auto fv = checked_values(d, f);
  double s = 0.0;
  for (std::size_t k = 0; k < d.dim; ++k) {
    double dot = 0.0;
    for (std::size_t i = 0; i < d.dim; ++i) dot += d.eigenvector(i, k) * x[i];
    s += fv[k] * dot * dot;
  }
  return s;
}

double sup_form_norm(const HermitianOperator& a) {
  const auto d = spectral_decompose(a);
  if (d.min_eigenvalue() < -1e-10)
    fail(ErrorCode::negative_spectrum,
         fmt::format("operator norm via sup <Ax,x> needs A >= 0; lambda_min = {}", d.min_eigenvalue()));
  return d.max_eigenvalue();
}

SpectrumWindow infer_window(const SpectralDecomposition& d) {
  return SpectrumWindow(d.min_eigenvalue() - 1e-12, d.max_eigenvalue() + 1e-12);
}

void require_spectrum_in(const SpectralDecomposition& d, const SpectrumWindow& w, const char* what) {
  for (double l : d.eigenvalues) {
    if (!w.contains(l, kDomainSlack))
      fail(ErrorCode::domain, fmt::format("{}: eigenvalue {} lies outside [{}, {}]", what, l, w.m(), w.M()));
  }
}

HermitianOperator block_diag(std::span<const HermitianOperator> blocks) {
  if (blocks.empty()) fail(ErrorCode::invalid_input, "block_diag needs at least one block");
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.dim();
  std::vector<double> data(n * n, 0.0);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.dim(); ++i)
      for (std::size_t j = 0; j < b.dim(); ++j) data[(off + i) * n + off + j] = b(i, j);
    off += b.dim();
  }
  return HermitianOperator(n, std::move(data));
}

StateVector stack(std::span<const StateVector> states) {
  if (states.empty()) fail(ErrorCode::invalid_input, "stack needs at least one state");
  std::vector<double> out;
  for (const auto& s : states) out.insert(out.end(), s.coords().begin(), s.coords().end());
  return StateVector(std::move(out));
}

namespace {

std::vector<double> orthogonal_from(Rng& rng, std::size_t n) {
  std::vector<double> q(n * n);
  for (;;) {
    for (double& v : q) v = rng.normal();
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      double* col = &q[k * n];
      // two passes of modified Gram-Schmidt
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t l = 0; l < k; ++l) {
          const double* prev = &q[l * n];
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += prev[i] * col[i];
          for (std::size_t i = 0; i < n; ++i) col[i] -= dot * prev[i];
        }
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm += col[i] * col[i];
      norm = std::sqrt(norm);
      if (norm < 1e-8) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) col[i] /= norm;
    }
    if (ok) return q;
  }
}

}  // namespace

std::vector<double> random_orthogonal(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) fail(ErrorCode::invalid_input, "dimension must be positive");
  Rng rng(seed);
  return orthogonal_from(rng, dim);
}

HermitianOperator conjugate_diagonal(std::span<const double> q, std::span<const double> eigenvalues) {
  const std::size_t n = eigenvalues.size();
  if (q.size() != n * n) fail(ErrorCode::invalid_input, "orthogonal factor has the wrong size");
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q[k * n + i] * eigenvalues[k] * q[k * n + j];
      out[i * n + j] = out[j * n + i] = s;
    }
  }
  return HermitianOperator(n, std::move(out));
}

RandomOperator random_hermitian(const SpectrumWindow& window, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) fail(ErrorCode::invalid_input, "dimension must be positive");
  Rng rng(seed);
  std::vector<double> lambda(dim);
  for (double& l : lambda) l = rng.uniform(window.m(), window.M());
  const auto q = orthogonal_from(rng, dim);
  RandomOperator out{conjugate_diagonal(q, lambda), lambda};
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

StateVector random_state(std::size_t dim, std::uint64_t seed, bool unit) {
  if (dim == 0) fail(ErrorCode::invalid_input, "dimension must be positive");
  Rng rng(seed);
  std::vector<double> x(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& v : x) {
      v = rng.normal();
      n2 += v * v;
    }
  } while (n2 < 1e-20);
  StateVector s(std::move(x));
  return unit ? s.normalized() : s;
}

}  // namespace pclass
