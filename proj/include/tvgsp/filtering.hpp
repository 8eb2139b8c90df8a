#pragma once

#include <string_view>

#include "tvgsp/chebyshev.hpp"
#include "tvgsp/graph.hpp"
#include "tvgsp/harmonic.hpp"
#include "tvgsp/kernel.hpp"

namespace tvgsp {

// Four routes to Y = h(L_G, L_T) X:
//   exact     - eigendecomposition, pointwise multiplication in the joint spectrum
//   ffc       - exact DFT in time, Chebyshev recursion in L_G per frequency
//   cheby2d   - 2D Chebyshev expansion in (L_G, L_T); kernel must be even in omega
//   separable - Chebyshev h1(L_G) on columns, exact DFT masking by h2
// All take complex signals; real inputs are promoted by the templates.

namespace detail {
CMatrix filter_exact(const CMatrix& X, const JointKernel& h, const GraphEigensystem& eig);
CMatrix filter_ffc(const CMatrix& X, const JointKernel& h, const Graph& g, Index order);
CMatrix filter_cheby2d(const CMatrix& X, const JointKernel& h, const Graph& g, Index order_graph,
                       Index order_time);
CMatrix filter_separable(const CMatrix& X, const JointKernel::Factor& h1,
                         const JointKernel::Factor& h2, const Graph& g, Index order);
}  // namespace detail

template <typename Derived>
CMatrix filter_exact(const Eigen::MatrixBase<Derived>& X, const JointKernel& h,
                     const GraphEigensystem& eig) {
  return detail::filter_exact(X.template cast<Complex>(), h, eig);
}

/// Fast Fourier-Chebyshev filtering. Cost O(T |E| order + N T log T); uses
/// only g.lambda_max(), never an eigendecomposition.
template <typename Derived>
CMatrix filter_ffc(const Eigen::MatrixBase<Derived>& X, const JointKernel& h, const Graph& g,
                   Index order) {
  return detail::filter_ffc(X.template cast<Complex>(), h, g, order);
}

/// Chebyshev2D baseline. The time operator is the circulant L_T with
/// spectrum mu in [0, 4]; the kernel is sampled at omega = arccos(1 - mu/2).
template <typename Derived>
CMatrix filter_cheby2d(const Eigen::MatrixBase<Derived>& X, const JointKernel& h, const Graph& g,
                       Index order_graph, Index order_time) {
  return detail::filter_cheby2d(X.template cast<Complex>(), h, g, order_graph, order_time);
}

template <typename Derived>
CMatrix filter_separable(const Eigen::MatrixBase<Derived>& X, const JointKernel::Factor& h1,
                         const JointKernel::Factor& h2, const Graph& g, Index order) {
  return detail::filter_separable(X.template cast<Complex>(), h1, h2, g, order);
}

/// Separable overload; throws ValidationError when h is not separable.
template <typename Derived>
CMatrix filter_separable(const Eigen::MatrixBase<Derived>& X, const JointKernel& h, const Graph& g,
                         Index order) {
  if (!h.is_separable()) throw ValidationError("filter_separable: kernel '" + h.name() + "' is not separable");
  return detail::filter_separable(X.template cast<Complex>(), h.graph_factor(), h.time_factor(), g,
                                  order);
}

/// Per-frequency Chebyshev table used by filter_ffc.
ChebyshevApprox fit_ffc(const JointKernel& h, Index T, Index order, double lambda_bound);

/// Named responses:
///   lowpass_sigmoid {lambda_cf, omega_cf}  separable sigmoid product
///   wave_gauss      {lambda_max}           exp(-|pi|omega| - arccos(1 - lambda/(2 lambda_max))|^2)
///   tikhonov        {tau1, tau2}           1 / (1 + tau1 lambda + 2 tau2 (1 - cos omega))
///   heat            {s, T}                 sum_t ((1 - s lambda) e^{-j omega})^t
///   wave            {s, T}                 closed-form wave kernel
///   damped_wave     {beta, T}              damped wave mother kernel
/// heat, wave and damped_wave map an impulse x1 at t = 0 to the PDE solution.
JointKernel named_response(std::string_view name, const KernelParams& params);

}  // namespace tvgsp
