#pragma once

#include <string_view>

#include "tvgsp/graph.hpp"
#include "tvgsp/harmonic.hpp"
#include "tvgsp/types.hpp"

namespace tvgsp {

// Time origin: column 0 of every evolved signal is the initial condition x1.
// Heat column t holds (I - sL)^t x1 and wave column t holds cos(t tau_l)
// applied per graph mode, with tau_l = arccos(1 - s lambda_l / 2).

enum class PdeKind { heat, wave, damped_wave };

PdeKind parse_pde_kind(std::string_view name);

struct PdeKernelSpec {
  PdeKind kind = PdeKind::heat;
  double s = 0.0;     // diffusivity (heat) or speed (wave)
  double beta = 0.0;  // damping, damped_wave only
  Index T = 1;

  /// Throws ValidationError for non-positive T, negative s or beta, and, for
  /// the wave kinds, s * lambda_max >= 4.
  void validate(double lambda_max) const;
};

/// x_t = (I - sL)^t x1 by repeated sparse products. Warns when
/// |1 - s lambda_max| > 1 (the iteration then grows).
Matrix heat_evolve(const Eigen::Ref<const Vector>& x1, const Graph& g, double s, Index T);

/// Closed-form joint spectrum of heat_evolve:
/// X_hat(l, k) = (a^T - 1) / (a - 1) Z(l, k), a = (1 - s lambda_l) e^{-j omega_k},
/// Z(l, k) = x1_tilde(l) / sqrt(T). The ratio is replaced by T when a = 1.
JointSpectrum heat_joint_spectrum(const Eigen::Ref<const Vector>& x1, const GraphEigensystem& eig,
                                  double s, Index T);

/// K_hat(lambda, omega) = sum_{t=0}^{T-1} cos(t tau) e^{-j omega t} in closed
/// form. When T tau / 2pi is an integer (within 1e-9) and omega lies on the
/// DFT grid the sum collapses to T/2 at omega = +-tau and 0 elsewhere.
/// Throws NumericalError when s * lambda is outside [0, 4].
Complex wave_kernel(double lambda, double omega, double s, Index T);

/// Wave propagation with zero initial velocity, via the eigenbasis:
/// column t = U diag(cos(t tau)) U^T x1. Throws NumericalError when
/// s * lambda_max >= 4.
Matrix wave_evolve(const Eigen::Ref<const Vector>& x1, const GraphEigensystem& eig, double s, Index T);

/// The same solution from the leapfrog recursion
/// x_{t+1} = 2 x_t - x_{t-1} - s L x_t, x_1 = x_0 - (s/2) L x_0.
/// Needs no eigendecomposition; stability is checked against g.lambda_max().
Matrix wave_evolve_iterative(const Eigen::Ref<const Vector>& x1, const Graph& g, double s, Index T);

/// Joint spectrum K_hat(lambda_l, omega_k) Z(l, k) of wave_evolve.
JointSpectrum wave_joint_spectrum(const Eigen::Ref<const Vector>& x1, const GraphEigensystem& eig,
                                  double s, Index T);

/// Damped wave mother kernel
///   (1/sqrt T) (e^{beta + j omega} + lambda/2 - 1) / (2 (cosh(beta + j omega) + lambda/2 - 1)),
/// the transfer function of r^t cos(t tau) with r = e^{-beta}.
/// Throws NumericalError when the denominator magnitude is below 1e-12.
Complex damped_wave_kernel(double lambda, double omega, double beta, Index T);

}  // namespace tvgsp
