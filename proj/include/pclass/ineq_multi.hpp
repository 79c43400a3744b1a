#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pclass/ineq_single.hpp"

namespace pclass {

// Multi-operator inequalities. All blocks share one window, f's domain; with
// states x_i the norms must satisfy sum ||x_i||^2 = 1 to within 1e-10.
// Subsets are 0-based index lists, proper and nonempty.

/// f(sum <C_i x_i,x_i>) <= 2 sum <f(C_i)x_i,x_i>
InequalityReport multi_jensen(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                              const ScalarFunction& f);

/// f(sum p_i <C_i x,x>) <= 2 sum p_i <f(C_i)x,x>
InequalityReport weighted_multi_jensen(std::span<const HermitianOperator> cs, std::span<const double> p,
                                       const StateVector& x, const ScalarFunction& f);

/// [f(sum p_i <C_i x,x>), Omega1, Omega2, 2 sum <f(C_i)x,x>]
InequalityReport omega_refinement(std::span<const HermitianOperator> cs, std::span<const double> p,
                                  const StateVector& x, const ScalarFunction& f,
                                  std::span<const std::size_t> subset);

/// Operator-norm chain with sub-averages over the subset and its complement.
/// Blocks must be positive semidefinite and f nondecreasing.
InequalityReport norm_chain(std::span<const HermitianOperator> cs, std::span<const double> p,
                            const ScalarFunction& f, std::span<const std::size_t> subset);

/// r-power norm chains for 0<r<1 and r>1.
InequalityReport norm_power_chain(std::span<const HermitianOperator> cs, std::span<const double> p, double r,
                                  std::span<const std::size_t> subset);

/// sum <f(C_i)x_i,x_i> <= f(m) + f(M)
InequalityReport multi_endpoint_bound(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                                      const ScalarFunction& f, const SpectrumWindow& window);

/// F-bound on the summed terms.
InequalityReport multi_F_bound(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                               const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F,
                               UMonotonicity monotonicity);
/// lambda-bounds on the summed terms.
InequalityReport multi_lambda_bounds(std::span<const HermitianOperator> cs, std::span<const StateVector> xs,
                                     const ScalarFunction& f, const SpectrumWindow& window, LambdaMode mode);

/// Validates a subset of {0..n-1}: nonempty, proper, in range, no repeats.
std::vector<bool> subset_mask(std::span<const std::size_t> subset, std::size_t n);

}  // namespace pclass
