#pragma once

#include <functional>
#include <string>

#include "pclass/function_kit.hpp"
#include "pclass/hermitian.hpp"
#include "pclass/report.hpp"

namespace pclass {

// Single-operator inequality verifiers. Each returns a report whose chain is
// ordered so that every adjacent pair must satisfy L <= R.
//
// Unless stated otherwise the spectral window is f's domain, Sp(C) must lie
// inside it and x must be a unit vector.

/// f(<Cx,x>) <= 2 <f(C)x,x>
InequalityReport jensen_pclass(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f);

/// f(<Cx,x>/<x,x>) <= 2 <f(C)x,x>/<x,x> for any nonzero x.
InequalityReport jensen_pclass_unnormalized(const HermitianOperator& c, const StateVector& x,
                                            const ScalarFunction& f);

enum class ReverseKind { decreasing_negative_lambda, increasing_lambda_above_one };
enum class Monotone { decreasing, increasing };

/// f(a) - f(b) <= f((1 - l) a + l b) for a < b; l < 0 with f decreasing or
/// l > 1 with f increasing.
InequalityReport scalar_reverse_lemma(const ScalarFunction& f, double a, double b, double lambda,
                                      ReverseKind kind);

/// Decreasing f: f(a) - 2<f(C)x,x>/<x,x> <= f(arg).
/// Increasing f: f(<Cx,x>/<x,x>) - f(a) <= f(arg), which additionally needs
/// <Cx,x>/<x,x> < a.  Here arg = (u a - <Cx,x>) / (u - <x,x>).
InequalityReport reverse_functional(const HermitianOperator& c, const StateVector& x,
                                    const ScalarFunction& f, double u, double a, Monotone direction);

/// <f(C)x,x> <= f(m) + f(M)
InequalityReport endpoint_upper_bound(const HermitianOperator& c, const StateVector& x,
                                      const ScalarFunction& f, const SpectrumWindow& window);

struct Bivariate {
  std::string label;
  std::function<double(double, double)> eval;
};

enum class UMonotonicity { nondecreasing, nonincreasing };

/// Nondecreasing in u: F(2<f(C)x,x>, f(<Cx,x>)) <= max_t F(2(f(m)+f(M)), f(t)).
/// Nonincreasing in u: min_t ... <= F(2<f(C)x,x>, f(<Cx,x>)).
/// The declared monotonicity is spot-checked on 100 sampled u-pairs.
InequalityReport composite_F_bound(const HermitianOperator& c, const StateVector& x,
                                   const ScalarFunction& f, const SpectrumWindow& window,
                                   const Bivariate& F, UMonotonicity monotonicity);

enum class LambdaMode { ratio, difference };

/// ratio:      (2/l) <f(C)x,x> <= f(<Cx,x>) <= 2 <f(C)x,x>,  l = 2(f(m)+f(M)) / min f
/// difference: 0 <= 2<f(C)x,x> - f(<Cx,x>) <= l,           l = 2(f(m)+f(M)) - min f
/// The constant is recorded as derived value "lambda".
InequalityReport lambda_bounds(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                               const SpectrumWindow& window, LambdaMode mode);

enum class CompositionKind { homogeneous, subadditive };

/// homogeneous: f^n(<Cx,x>) <= 2^n <f^n(C)x,x>; subadditive: ... <= 2 <f^n(C)x,x>.
InequalityReport composition_bounds(const HermitianOperator& c, const StateVector& x,
                                    const ScalarFunction& f, int n, CompositionKind kind);

/// 1/2 f((pm+qM)/(p+q)) <= <f(C)x,x> <= f(m)+f(M) given <Cx,x> = (pm+qM)/(p+q)
/// to within 1e-8.
InequalityReport hermite_hadamard(const HermitianOperator& c, const StateVector& x, const ScalarFunction& f,
                                  const SpectrumWindow& window, double p, double q);

/// 0<r<1: <C^r x,x> <= <Cx,x>^r <= 2 <C^r x,x>
/// r>1:   <Cx,x>^r <= <C^r x,x> <= 2^r <Cx,x>^r
/// C must be positive semidefinite.
InequalityReport holder_maccarthy_two_sided(const HermitianOperator& c, const StateVector& x, double r);

/// Classical one-sided comparison only: r>1: <Cx,x>^r <= <C^r x,x>;
/// 0<r<1: <C^r x,x> <= <Cx,x>^r.
InequalityReport holder_maccarthy_classical(const HermitianOperator& c, const StateVector& x, double r);

// Shared pieces used by the multi-operator verifiers.
namespace detail {

void require_unit(const StateVector& x, const char* what);
void require_window_in_domain(const SpectrumWindow& w, const ScalarFunction& f);
double grid_extremum_F(const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F,
                       double u, UMonotonicity monotonicity);
void spot_check_monotonicity(const ScalarFunction& f, const SpectrumWindow& window, const Bivariate& F,
                             UMonotonicity monotonicity);
/// Assembles the composite-F report from the evaluated operator terms.
InequalityReport composite_F_from_terms(const ScalarFunction& f, const SpectrumWindow& window,
                                        const Bivariate& F, UMonotonicity monotonicity, double form_fc,
                                        double form_c, HypothesisStatus status, const std::string& name);
InequalityReport lambda_from_terms(const ScalarFunction& f, const SpectrumWindow& window, LambdaMode mode,
                                   double form_fc, double form_c, HypothesisStatus status,
                                   const std::string& name);

}  // namespace detail

}  // namespace pclass
