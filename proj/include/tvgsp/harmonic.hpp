#pragma once

#include <cmath>
#include <numbers>

#include "tvgsp/graph.hpp"
#include "tvgsp/types.hpp"

namespace tvgsp {

// Conventions used throughout the library:
//  * A time-vertex signal is an N x T matrix; column t is the graph signal at
//    time t. vec() stacks columns, so vectorized operators act on
//    (time (x) vertex) Kronecker products.
//  * Temporal frequencies are omega_k = 2 pi k / T for k = 0..T-1 (no shift).
//    Kernels are evaluated at the same frequency wrapped into (-pi, pi].
//  * The DFT is unitary: X_hat(:, k) = T^{-1/2} sum_t X(:, t) e^{-j omega_k t}.
//  * Time boundary is periodic for every temporal operator.

/// Joint time-vertex spectrum. Rows follow ascending graph frequency, columns
/// the unshifted DFT grid.
struct JointSpectrum {
  CMatrix coeffs;

  Index num_vertices() const { return coeffs.rows(); }
  Index num_times() const { return coeffs.cols(); }
};

/// omega_k = 2 pi k / T, k = 0..T-1.
Vector angular_frequencies(Index T);

/// omega_k wrapped to (-pi, pi]; the values kernels are evaluated at.
Vector signed_frequencies(Index T);

inline double wrap_frequency(double omega) {
  double w = std::remainder(omega, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

/// Eigenvalues 2(1 - cos omega_k) of the periodic second-difference matrix.
Vector time_laplacian_eigenvalues(Index T);

/// The T x T circulant second-difference matrix.
SparseMatrix time_laplacian(Index T);

// --- transforms -----------------------------------------------------------

namespace detail {
CMatrix dft_rows(const CMatrix& X);
}

/// Row-wise unitary DFT.
template <typename Derived>
CMatrix dft(const Eigen::MatrixBase<Derived>& X) {
  return detail::dft_rows(X.template cast<Complex>());
}

CMatrix idft(const CMatrix& Xf);

/// Column-wise projection U^T X onto the Laplacian eigenbasis.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> gft(const Eigen::MatrixBase<Derived>& X,
                                          const GraphEigensystem& eig) {
  if (X.rows() != eig.size()) throw ValidationError("gft: signal rows do not match graph size");
  return eig.eigenvectors.transpose().template cast<typename Derived::Scalar>() * X;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> igft(const Eigen::MatrixBase<Derived>& Xg,
                                           const GraphEigensystem& eig) {
  if (Xg.rows() != eig.size()) throw ValidationError("igft: spectrum rows do not match graph size");
  return eig.eigenvectors.template cast<typename Derived::Scalar>() * Xg;
}

/// Joint Fourier transform U^T X conj(U_T); unitary.
template <typename Derived>
JointSpectrum jft(const Eigen::MatrixBase<Derived>& X, const GraphEigensystem& eig) {
  return {dft(gft(X, eig))};
}

/// Inverse joint transform, complex output.
CMatrix ijft(const JointSpectrum& S, const GraphEigensystem& eig);

/// Inverse joint transform for spectra of real signals. Throws NumericalError
/// when the imaginary part exceeds tol relative to the real part's norm.
Matrix ijft_real(const JointSpectrum& S, const GraphEigensystem& eig, double tol = 1e-10);

/// Real part of a filter or transform output, after checking that the
/// discarded imaginary part is below tol relative to the signal norm.
Matrix checked_real(const CMatrix& X, double tol = 1e-10);

// --- joint calculus ---------------------------------------------------------

/// X L_T: periodic second difference along each row.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> apply_time_laplacian(const Eigen::MatrixBase<Derived>& X) {
  const Index T = X.cols();
  DenseMatrix<typename Derived::Scalar> out(X.rows(), T);
  for (Index t = 0; t < T; ++t) {
    const Index prev = (t + T - 1) % T;
    const Index next = (t + 1) % T;
    out.col(t) = 2.0 * X.col(t) - X.col(prev) - X.col(next);
  }
  return out;
}

/// L_G X + X L_T without forming the NT x NT operator.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> joint_laplacian_apply(const Eigen::MatrixBase<Derived>& X,
                                                            const Graph& g) {
  if (X.rows() != g.num_vertices()) throw ValidationError("joint_laplacian_apply: row mismatch");
  using Scalar = typename Derived::Scalar;
  DenseMatrix<Scalar> out = g.laplacian().template cast<Scalar>() * X;
  out += apply_time_laplacian(X);
  return out;
}

/// Edge derivative: row e is sqrt(w_e) (X(src_e, :) - X(dst_e, :)), with the
/// edge order of Graph::edges().
template <typename Derived>
DenseMatrix<typename Derived::Scalar> graph_gradient(const Eigen::MatrixBase<Derived>& X,
                                                     const Graph& g) {
  if (X.rows() != g.num_vertices()) throw ValidationError("graph_gradient: row mismatch");
  DenseMatrix<typename Derived::Scalar> out(g.num_edges(), X.cols());
  Index e = 0;
  for (const Edge& edge : g.edges()) {
    out.row(e++) = std::sqrt(edge.weight) * (X.row(edge.src) - X.row(edge.dst));
  }
  return out;
}

/// Adjoint of graph_gradient; graph_gradient_adjoint(graph_gradient(X)) = L_G X.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> graph_gradient_adjoint(const Eigen::MatrixBase<Derived>& E,
                                                             const Graph& g) {
  if (E.rows() != g.num_edges()) throw ValidationError("graph_gradient_adjoint: row mismatch");
  DenseMatrix<typename Derived::Scalar> out =
      DenseMatrix<typename Derived::Scalar>::Zero(g.num_vertices(), E.cols());
  Index e = 0;
  for (const Edge& edge : g.edges()) {
    const double s = std::sqrt(edge.weight);
    out.row(edge.src) += s * E.row(e);
    out.row(edge.dst) -= s * E.row(e);
    ++e;
  }
  return out;
}

/// X grad_T: column t is X(:, t+1) - X(:, t), periodic.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> time_gradient(const Eigen::MatrixBase<Derived>& X) {
  const Index T = X.cols();
  DenseMatrix<typename Derived::Scalar> out(X.rows(), T);
  for (Index t = 0; t < T; ++t) out.col(t) = X.col((t + 1) % T) - X.col(t);
  return out;
}

/// Adjoint of time_gradient; time_gradient_adjoint(time_gradient(X)) = X L_T.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> time_gradient_adjoint(const Eigen::MatrixBase<Derived>& D) {
  const Index T = D.cols();
  DenseMatrix<typename Derived::Scalar> out(D.rows(), T);
  for (Index t = 0; t < T; ++t) out.col(t) = D.col((t + T - 1) % T) - D.col(t);
  return out;
}

struct JointGradient {
  Matrix graph_part;  // |E| x T
  Matrix time_part;   // N x T
};

JointGradient joint_gradient(const Eigen::Ref<const Matrix>& X, const Graph& g);

/// w_G ||grad_G X||_p^p + w_T ||X grad_T||_q^q with p, q in {1, 2}.
double variation_norm(const Eigen::Ref<const Matrix>& X, const Graph& g, int p, int q,
                      double w_graph = 1.0, double w_time = 1.0);

}  // namespace tvgsp
