#include "tvgsp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "tvgsp/diagnostics.hpp"

namespace tvgsp {

namespace {

constexpr double kResonanceTol = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wave_tau(double lambda, double s) {
  const double arg = s * lambda;
  if (!(arg >= -1e-12 && arg <= 4.0 + 1e-12)) {
    std::ostringstream os;
    os << "wave kernel unstable: s * lambda = " << arg << " outside [0, 4]";
    throw NumericalError(os.str());
  }
  return std::acos(std::clamp(1.0 - arg / 2.0, -1.0, 1.0));
}

// sum_{t=0}^{T-1} r^t for complex r. The closed form (r^T - 1)/(r - 1)
// cancels badly near r = 1, where the sum is evaluated directly.
Complex power_sum(Complex r, Index T) {
  if (std::abs(r - 1.0) < 1e-4) {
    Complex acc = 0.0;
    for (Index t = 0; t < T; ++t) acc = acc * r + 1.0;
    return acc;
  }
  return (std::pow(r, static_cast<double>(T)) - 1.0) / (r - 1.0);
}

// sum_{t=0}^{T-1} e^{-j theta t}.
Complex geometric_sum(double theta, Index T) {
  const double wrapped = std::remainder(theta, kTwoPi);
  if (std::abs(wrapped) < 1e-4) return power_sum(std::exp(Complex(0.0, -wrapped)), T);
  const Complex num = 1.0 - std::exp(Complex(0.0, -static_cast<double>(T) * wrapped));
  const Complex den = 1.0 - std::exp(Complex(0.0, -wrapped));
  return num / den;
}

bool near_integer(double x) { return std::abs(x - std::round(x)) < kResonanceTol; }

void check_stability(double s, double lambda_max) {
  if (s < 0.0) throw ValidationError("wave speed s must be >= 0");
  if (s * lambda_max >= 4.0) {
    std::ostringstream os;
    os << "wave evolution unstable: s = " << s << " but stability needs s < 4 / lambda_max = "
       << 4.0 / lambda_max;
    throw NumericalError(os.str());
  }
}

}  // namespace

PdeKind parse_pde_kind(std::string_view name) {
  if (name == "heat") return PdeKind::heat;
  if (name == "wave") return PdeKind::wave;
  if (name == "damped_wave") return PdeKind::damped_wave;
  throw ValidationError("unknown PDE kind '" + std::string(name) + "'");
}

void PdeKernelSpec::validate(double lambda_max) const {
  if (T < 1) throw ValidationError("T must be >= 1");
  if (!(s >= 0.0)) throw ValidationError("s must be >= 0");
  if (!(beta >= 0.0)) throw ValidationError("beta must be >= 0");
  if (kind != PdeKind::heat && s * lambda_max >= 4.0)
    throw ValidationError("wave kernels need s < 4 / lambda_max");
}

Matrix heat_evolve(const Eigen::Ref<const Vector>& x1, const Graph& g, double s, Index T) {
  if (x1.size() != g.num_vertices()) throw ValidationError("heat_evolve: x1 size mismatch");
  if (T < 1) throw ValidationError("heat_evolve: T must be >= 1");
  if (std::abs(1.0 - s * g.lambda_max()) > 1.0)
    warn("heat_evolve: |1 - s lambda_max| > 1, the evolution may diverge");
  Matrix X(x1.size(), T);
  X.col(0) = x1;
  for (Index t = 1; t < T; ++t) X.col(t) = X.col(t - 1) - s * (g.laplacian() * X.col(t - 1));
  return X;
}

JointSpectrum heat_joint_spectrum(const Eigen::Ref<const Vector>& x1, const GraphEigensystem& eig,
                                  double s, Index T) {
  if (x1.size() != eig.size()) throw ValidationError("heat_joint_spectrum: x1 size mismatch");
  if (T < 1) throw ValidationError("heat_joint_spectrum: T must be >= 1");
  const Vector x1_tilde = gft(x1, eig);
  const Vector omega = angular_frequencies(T);
  const double inv_sqrt_t = 1.0 / std::sqrt(static_cast<double>(T));
  CMatrix S(eig.size(), T);
  for (Index k = 0; k < T; ++k) {
    for (Index l = 0; l < eig.size(); ++l) {
      const Complex a = (1.0 - s * eig.eigenvalues(l)) * std::exp(Complex(0.0, -omega(k)));
      S(l, k) = power_sum(a, T) * x1_tilde(l) * inv_sqrt_t;
    }
  }
  return {S};
}

Complex wave_kernel(double lambda, double omega, double s, Index T) {
  if (T < 1) throw ValidationError("wave_kernel: T must be >= 1");
  const double tau = wave_tau(lambda, s);
  const auto n_t = static_cast<double>(T);

  if (near_integer(n_t * tau / kTwoPi) && near_integer(n_t * omega / kTwoPi)) {
    // Both tau and omega on the DFT grid: each geometric sum is T or 0.
    double value = 0.0;
    if (std::abs(std::remainder(omega - tau, kTwoPi)) < 1e-9) value += n_t / 2.0;
    if (std::abs(std::remainder(omega + tau, kTwoPi)) < 1e-9) value += n_t / 2.0;
    return {value, 0.0};
  }
  return 0.5 * (geometric_sum(omega + tau, T) + geometric_sum(omega - tau, T));
}

Matrix wave_evolve(const Eigen::Ref<const Vector>& x1, const GraphEigensystem& eig, double s, Index T) {
  if (x1.size() != eig.size()) throw ValidationError("wave_evolve: x1 size mismatch");
  if (T < 1) throw ValidationError("wave_evolve: T must be >= 1");
  check_stability(s, eig.eigenvalues.size() ? eig.eigenvalues.maxCoeff() : 0.0);
  const Vector x1_tilde = gft(x1, eig);
  Vector tau(eig.size());
  for (Index l = 0; l < eig.size(); ++l) tau(l) = wave_tau(eig.eigenvalues(l), s);

  Matrix Xg(eig.size(), T);
  for (Index t = 0; t < T; ++t)
    Xg.col(t) = ((static_cast<double>(t) * tau).array().cos() * x1_tilde.array()).matrix();
  return igft(Xg, eig);
}

Matrix wave_evolve_iterative(const Eigen::Ref<const Vector>& x1, const Graph& g, double s, Index T) {
  if (x1.size() != g.num_vertices()) throw ValidationError("wave_evolve_iterative: x1 size mismatch");
  if (T < 1) throw ValidationError("wave_evolve_iterative: T must be >= 1");
  check_stability(s, g.lambda_max());
  Matrix X(x1.size(), T);
  X.col(0) = x1;
  if (T > 1) X.col(1) = x1 - 0.5 * s * (g.laplacian() * x1);
  for (Index t = 2; t < T; ++t)
    X.col(t) = 2.0 * X.col(t - 1) - X.col(t - 2) - s * (g.laplacian() * X.col(t - 1));
  return X;
}

JointSpectrum wave_joint_spectrum(const Eigen::Ref<const Vector>& x1, const GraphEigensystem& eig,
                                  double s, Index T) {
  if (x1.size() != eig.size()) throw ValidationError("wave_joint_spectrum: x1 size mismatch");
  check_stability(s, eig.eigenvalues.size() ? eig.eigenvalues.maxCoeff() : 0.0);
  const Vector x1_tilde = gft(x1, eig);
  const Vector omega = angular_frequencies(T);
  const double inv_sqrt_t = 1.0 / std::sqrt(static_cast<double>(T));
  CMatrix S(eig.size(), T);
  for (Index k = 0; k < T; ++k)
    for (Index l = 0; l < eig.size(); ++l)
      S(l, k) = wave_kernel(eig.eigenvalues(l), omega(k), s, T) * x1_tilde(l) * inv_sqrt_t;
  return {S};
}

Complex damped_wave_kernel(double lambda, double omega, double beta, Index T) {
  if (T < 1) throw ValidationError("damped_wave_kernel: T must be >= 1");
  const Complex z(beta, omega);
  const Complex den = 2.0 * (std::cosh(z) + lambda / 2.0 - 1.0);
  if (std::abs(den) < 1e-12) {
    std::ostringstream os;
    os << "damped wave kernel singular at (lambda=" << lambda << ", omega=" << omega
       << ", beta=" << beta << ")";
    throw NumericalError(os.str());
  }
  return (std::exp(z) + lambda / 2.0 - 1.0) / den / std::sqrt(static_cast<double>(T));
}

}  // namespace tvgsp
