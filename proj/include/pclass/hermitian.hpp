#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pclass/function_kit.hpp"
#include "pclass/window.hpp"

namespace pclass {

/// Real symmetric matrix standing in for a self-adjoint operator. Entries are
/// stored row-major and are exactly symmetric.
class HermitianOperator {
 public:
  /// Rejects non-square input, non-finite entries, and asymmetry larger than
  /// 1e-12 max(1, max|a_ij|); the accepted matrix is symmetrized exactly.
  HermitianOperator(std::size_t dim, std::vector<double> row_major);

  static HermitianOperator from_rows(const std::vector<std::vector<double>>& rows);
  static HermitianOperator diagonal(std::span<const double> d);
  static HermitianOperator scalar(std::size_t dim, double c);
  static HermitianOperator zero(std::size_t dim) { return scalar(dim, 0.0); }

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * dim_ + j]; }
  std::span<const double> data() const noexcept { return a_; }
  bool is_diagonal() const noexcept;
  double frobenius_norm() const noexcept;

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator scaled(double s) const;
  /// Product A*A (symmetric for symmetric A).
  HermitianOperator squared() const;

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

/// Unit-length column vectors stored column-major: eigenvector k occupies
/// [k*dim, (k+1)*dim).
struct SpectralDecomposition {
  std::size_t dim = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> eigenvectors;

  double eigenvector(std::size_t row, std::size_t k) const noexcept {
    return eigenvectors[k * dim + row];
  }
  double min_eigenvalue() const noexcept { return eigenvalues.front(); }
  double max_eigenvalue() const noexcept { return eigenvalues.back(); }

  /// ||U diag(eigenvalues) U^T - A||_F
  double reconstruction_residual(const HermitianOperator& a) const;
  /// ||U^T U - I||_F
  double orthonormality_residual() const;
};

class StateVector {
 public:
  explicit StateVector(std::vector<double> coords);

  std::size_t dim() const noexcept { return x_.size(); }
  std::span<const double> coords() const noexcept { return x_; }
  double operator[](std::size_t i) const noexcept { return x_[i]; }
  double norm_sq() const noexcept { return norm_sq_; }
  bool is_unit(double tol = 1e-10) const noexcept;
  StateVector scaled(double s) const;
  /// Rejects (near-)zero vectors.
  StateVector normalized() const;

 private:
  std::vector<double> x_;
  double norm_sq_;
};

/// Cyclic Jacobi. Deterministic; eigenvalues ascending (stable for ties).
SpectralDecomposition spectral_decompose(const HermitianOperator& a);

/// U f(Lambda) U^T. Every eigenvalue must lie in f's domain up to 1e-10.
HermitianOperator apply_function(const HermitianOperator& a, const ScalarFunction& f);
HermitianOperator apply_function(const SpectralDecomposition& d, const ScalarFunction& f);

/// x^T A x
double quadratic_form(const HermitianOperator& a, const StateVector& x);

/// <f(A)x, x> computed spectrally as sum_k f(lambda_k) (u_k . x)^2.
double function_form(const SpectralDecomposition& d, const ScalarFunction& f, const StateVector& x);

/// sup over unit x of <Ax,x> = lambda_max(A); requires lambda_min >= -1e-10.
double sup_form_norm(const HermitianOperator& a);

/// [lambda_min, lambda_max] widened by 1e-12 on each side.
SpectrumWindow infer_window(const SpectralDecomposition& d);
/// Throws a domain error when some eigenvalue falls outside w (1e-10 slack).
void require_spectrum_in(const SpectralDecomposition& d, const SpectrumWindow& w, const char* what);

HermitianOperator block_diag(std::span<const HermitianOperator> blocks);
StateVector stack(std::span<const StateVector> states);

struct RandomOperator {
  HermitianOperator op;
  std::vector<double> eigenvalues;  // ground truth, ascending
};

/// Eigenvalues uniform in the window, conjugated by an orthogonal matrix from
/// Gram-Schmidt on Gaussian draws. Identical seed gives bit-identical output.
RandomOperator random_hermitian(const SpectrumWindow& window, std::size_t dim, std::uint64_t seed);
/// Q diag(eigenvalues) Q^T with Q orthogonal (column-major), symmetrized.
HermitianOperator conjugate_diagonal(std::span<const double> q_colmajor, std::span<const double> eigenvalues);
/// Column-major random orthogonal matrix.
std::vector<double> random_orthogonal(std::size_t dim, std::uint64_t seed);

/// Gaussian draw, normalized when unit is set.
StateVector random_state(std::size_t dim, std::uint64_t seed, bool unit);

}  // namespace pclass
