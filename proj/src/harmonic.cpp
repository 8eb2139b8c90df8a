#include "tvgsp/harmonic.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "tvgsp/parallel.hpp"

namespace tvgsp {

Vector angular_frequencies(Index T) {
  Vector w(T);
  for (Index k = 0; k < T; ++k)
    w(k) = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(T);
  return w;
}

Vector signed_frequencies(Index T) {
  Vector w = angular_frequencies(T);
  for (Index k = 0; k < T; ++k) w(k) = wrap_frequency(w(k));
  return w;
}

Vector time_laplacian_eigenvalues(Index T) {
  return (2.0 * (1.0 - angular_frequencies(T).array().cos())).matrix();
}

SparseMatrix time_laplacian(Index T) {
  Matrix dense = Matrix::Zero(T, T);
  for (Index t = 0; t < T; ++t) {
    dense(t, t) += 2.0;
    dense(t, (t + 1) % T) -= 1.0;
    dense(t, (t + T - 1) % T) -= 1.0;
  }
  return dense.sparseView();
}

namespace {

enum class Direction { forward, inverse };

CMatrix rowwise_fft(const CMatrix& X, Direction dir) {
  const Index N = X.rows();
  const Index T = X.cols();
  CMatrix out(N, T);
  if (T == 0 || N == 0) return out;
  // kissfft faults on length-one plans; the unitary DFT of length one is the identity.
  if (T == 1) return X;
  const double scale = 1.0 / std::sqrt(static_cast<double>(T));
  const Index workers = std::min<Index>(num_threads(), N);
  const Index chunk = (N + workers - 1) / workers;
  parallel_for(0, workers, [&](std::ptrdiff_t w) {
    // Eigen::FFT caches plans per instance; one instance per worker.
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> in(static_cast<std::size_t>(T));
    std::vector<Complex> res;
    const Index hi = std::min<Index>(N, (w + 1) * chunk);
    for (Index n = w * chunk; n < hi; ++n) {
      for (Index t = 0; t < T; ++t) in[t] = X(n, t);
      if (dir == Direction::forward) fft.fwd(res, in);
      else fft.inv(res, in);
      for (Index t = 0; t < T; ++t) out(n, t) = res[t] * scale;
    }
  });
  return out;
}

}  // namespace

CMatrix detail::dft_rows(const CMatrix& X) { return rowwise_fft(X, Direction::forward); }

CMatrix idft(const CMatrix& Xf) { return rowwise_fft(Xf, Direction::inverse); }

CMatrix ijft(const JointSpectrum& S, const GraphEigensystem& eig) {
  if (S.coeffs.rows() != eig.size()) throw ValidationError("ijft: spectrum rows do not match graph size");
  return igft(idft(S.coeffs), eig);
}

Matrix checked_real(const CMatrix& X, double tol) {
  const double re = X.real().norm();
  const double im = X.imag().norm();
  if (im > tol * std::max(re, 1e-300) && im > 1e-300)
    throw NumericalError("imaginary residue " + std::to_string(im / std::max(re, 1e-300)) +
                         " exceeds tolerance; spectrum is not that of a real signal");
  return X.real();
}

Matrix ijft_real(const JointSpectrum& S, const GraphEigensystem& eig, double tol) {
  return checked_real(ijft(S, eig), tol);
}

JointGradient joint_gradient(const Eigen::Ref<const Matrix>& X, const Graph& g) {
  return {graph_gradient(X, g), time_gradient(X)};
}

double variation_norm(const Eigen::Ref<const Matrix>& X, const Graph& g, int p, int q,
                      double w_graph, double w_time) {
  if ((p != 1 && p != 2) || (q != 1 && q != 2))
    throw ValidationError("variation_norm: p and q must be 1 or 2");
  if (w_graph < 0.0 || w_time < 0.0) throw ValidationError("variation_norm: weights must be >= 0");
  const Matrix dg = graph_gradient(X, g);
  const Matrix dt = time_gradient(X);
  const double graph_term = p == 1 ? dg.cwiseAbs().sum() : dg.squaredNorm();
  const double time_term = q == 1 ? dt.cwiseAbs().sum() : dt.squaredNorm();
  return w_graph * graph_term + w_time * time_term;
}

}  // namespace tvgsp
