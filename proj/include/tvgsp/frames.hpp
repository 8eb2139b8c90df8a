#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tvgsp/filtering.hpp"
#include "tvgsp/graph.hpp"
#include "tvgsp/kernel.hpp"

namespace tvgsp {

// Vectorized deltas follow the column-stacking convention: the atom at
// vertex m and time tau is vec(delta_m delta_tau^T) = delta_tau (x) delta_m.

/// Filtering backend for frame operators. exact() keeps a non-owning pointer
/// to the eigensystem; it must outlive the route.
class FilterRoute {
 public:
  static FilterRoute exact(const GraphEigensystem& eig) { return FilterRoute(&eig, 0); }
  static FilterRoute chebyshev(Index order = 50) { return FilterRoute(nullptr, order); }

  const GraphEigensystem* eigensystem() const { return eig_; }
  Index order() const { return order_; }

 private:
  FilterRoute(const GraphEigensystem* eig, Index order) : eig_(eig), order_(order) {}
  const GraphEigensystem* eig_;
  Index order_;
};

enum class BankKind { stvft, stvwt, custom };

std::string_view to_string(BankKind kind);

/// Indexed family of joint kernels {h_z}. lattice[z] records the spectral
/// shift (STVFT) or dilation (STVWT) that produced kernels[z]. Empty vertex or
/// time lattices mean every vertex / every time index.
struct FilterBank {
  BankKind kind = BankKind::custom;
  JointKernel mother;
  std::vector<JointKernel> kernels;
  std::vector<std::pair<double, double>> lattice;
  std::vector<Index> vertex_lattice;
  std::vector<Index> time_lattice;

  Index size() const { return static_cast<Index>(kernels.size()); }
  bool full_lattice() const { return vertex_lattice.empty() && time_lattice.empty(); }
};

/// Builds a custom bank with full lattices.
FilterBank make_bank(std::vector<JointKernel> kernels);

/// One coefficient matrix per kernel, |vertex lattice| x |time lattice|.
struct CoefficientTensor {
  std::vector<CMatrix> coeffs;

  Index size() const { return static_cast<Index>(coeffs.size()); }
  double squared_norm() const;
  /// sum_z <this_z, other_z> with conjugation on the second argument.
  Complex inner(const CoefficientTensor& other) const;
  double max_abs() const;
};

/// Atom h(L_G, L_T) applied to the delta at (m, tau). Separable kernels are
/// localized independently along each axis.
CMatrix localize(const JointKernel& h, Index m, Index tau, const GraphEigensystem& eig, Index T);

/// Itersine window of half-support `spacing`: sin(pi/2 cos^2(pi x)) with
/// x = lambda / (2 spacing), zero for |x| > 1/2. Translates spaced by
/// `spacing` have squares summing to 1.
JointKernel::Factor itersine_window(double spacing);

/// count shifts equally spaced over [0, lambda_max].
std::vector<double> uniform_shifts(Index count, double lambda_max);

/// h_T(omega) = sum_t w[t] e^{-j omega (t - c)}, c = floor((l - 1) / 2).
JointKernel::Factor time_window_response(const Vector& window);

struct StvftConfig {
  JointKernel::Factor graph_window;
  std::vector<double> lambda_shifts;
  Vector time_window;     // length l; |Z_omega| = l modulations 2 pi j / l
  Index redundancy = 1;   // time hop = l / redundancy
  bool subsample_time = true;
};

/// Short time-vertex Fourier transform bank: kernels
/// h_G(lambda - z_lambda) h_T(omega - z_omega).
FilterBank make_stvft(const StvftConfig& config, Index T);

struct StvwtOptions {
  /// Scaling-function kernel appended to cover DC; lifts the admissibility
  /// requirement on the mother.
  std::optional<JointKernel> dc_cover;
  /// Dictionaries used only for synthesis (sparse coding) may skip the
  /// zero-DC admissibility requirement.
  bool require_admissible = true;
};

/// Spectral time-vertex wavelet bank h(z_lambda lambda, z_omega omega) over
/// all (z_lambda, z_omega) pairs, full lattices.
FilterBank make_stvwt(const JointKernel& mother, std::span<const double> scales_lambda,
                      std::span<const double> scales_omega, const StvwtOptions& options = {});

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = true;  // false for subsampled lattices
};

/// A = min, B = max over the joint grid of sum_z |h_z(lambda_l, omega_k)|^2.
FrameBounds frame_bounds(const FilterBank& bank, const GraphEigensystem& eig, Index T);

/// C_z = h_z(L_G, L_T) X, restricted to the bank's lattices.
template <typename Derived>
CoefficientTensor analyze(const FilterBank& bank, const Eigen::MatrixBase<Derived>& X, const Graph& g,
                          const FilterRoute& route);

/// Adjoint of analyze: sum_z conj(h_z)(L_G, L_T) C_z. Full lattices only.
CMatrix synthesize(const FilterBank& bank, const CoefficientTensor& C, const Graph& g,
                   const FilterRoute& route);

/// h~_z = h_z / sum_z' |h_z'|^2. Throws NumericalError when the lower frame
/// bound on the grid is below tol, naming the worst grid point.
FilterBank canonical_dual(const FilterBank& bank, const GraphEigensystem& eig, Index T,
                          double tol = 1e-12);

namespace detail {
CoefficientTensor analyze(const FilterBank& bank, const CMatrix& X, const Graph& g,
                          const FilterRoute& route);
}

template <typename Derived>
CoefficientTensor analyze(const FilterBank& bank, const Eigen::MatrixBase<Derived>& X, const Graph& g,
                          const FilterRoute& route) {
  return detail::analyze(bank, X.template cast<Complex>(), g, route);
}

}  // namespace tvgsp
