#pragma once

#include <functional>

#include "tvgsp/types.hpp"

namespace tvgsp {

/// Chebyshev expansion of f on [lower, upper] up to the given order, from
/// Gauss-Chebyshev quadrature on 2(order + 1) nodes. Polynomials of degree
/// <= order are reproduced exactly. The first coefficient is already halved:
/// f(x) ~ sum_i c_i T_i(y), y = (2x - lower - upper) / (upper - lower).
CVector chebyshev_coefficients(const std::function<Complex(double)>& f, Index order, double lower,
                               double upper);

/// Clenshaw evaluation of the expansion at x.
Complex chebyshev_eval(const Eigen::Ref<const CVector>& coeffs, double x, double lower, double upper);

/// Max |f - p| over `probes` Chebyshev points of the interval.
double chebyshev_sup_error(const std::function<Complex(double)>& f,
                           const Eigen::Ref<const CVector>& coeffs, double lower, double upper,
                           Index probes = 101);

/// Per-temporal-frequency Chebyshev fits of a joint kernel in lambda.
struct ChebyshevApprox {
  Index order = 0;
  double lower = 0.0;
  double upper = 1.0;
  CMatrix table;            // T x (order + 1); row k fits h(., omega_k)
  double sup_error = 0.0;   // worst row error on 101 probe points
};

/// Applies sum_i c_i T_i(L~) to X with L~ = (2L - (lower + upper) I) / (upper - lower).
/// coeffs is (order + 1) x X.cols(): column j of X gets its own expansion.
CMatrix chebyshev_apply_columns(const SparseMatrix& L, double lower, double upper,
                                const CMatrix& coeffs, const CMatrix& X);

}  // namespace tvgsp
