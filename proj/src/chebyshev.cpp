#include "tvgsp/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "tvgsp/parallel.hpp"

namespace tvgsp {

namespace {

// Degenerate intervals (a graph with no edges) still need a valid map.
void normalize_interval(double& lower, double& upper) {
  if (!(upper > lower)) upper = lower + 1.0;
}

}  // namespace

CVector chebyshev_coefficients(const std::function<Complex(double)>& f, Index order, double lower,
                               double upper) {
  if (order < 0) throw ValidationError("Chebyshev order must be >= 0");
  normalize_interval(lower, upper);
  const Index nodes = 2 * (order + 1);
  const double half_width = 0.5 * (upper - lower);
  const double center = 0.5 * (upper + lower);

  CVector samples(nodes);
  Vector theta(nodes);
  for (Index n = 0; n < nodes; ++n) {
    theta(n) = std::numbers::pi * (static_cast<double>(n) + 0.5) / static_cast<double>(nodes);
    samples(n) = f(center + half_width * std::cos(theta(n)));
  }
  CVector c(order + 1);
  for (Index i = 0; i <= order; ++i) {
    Complex acc = 0.0;
    for (Index n = 0; n < nodes; ++n) acc += samples(n) * std::cos(static_cast<double>(i) * theta(n));
    c(i) = acc * (2.0 / static_cast<double>(nodes));
  }
  c(0) *= 0.5;
  return c;
}

Complex chebyshev_eval(const Eigen::Ref<const CVector>& coeffs, double x, double lower, double upper) {
  normalize_interval(lower, upper);
  const double y = (2.0 * x - lower - upper) / (upper - lower);
  Complex b1 = 0.0;
  Complex b2 = 0.0;
  for (Index i = coeffs.size() - 1; i >= 1; --i) {
    const Complex b0 = coeffs(i) + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs.size() ? coeffs(0) + y * b1 - b2 : Complex(0.0);
}

double chebyshev_sup_error(const std::function<Complex(double)>& f,
                           const Eigen::Ref<const CVector>& coeffs, double lower, double upper,
                           Index probes) {
  normalize_interval(lower, upper);
  double worst = 0.0;
  for (Index n = 0; n < probes; ++n) {
    const double theta = std::numbers::pi * (static_cast<double>(n) + 0.5) / static_cast<double>(probes);
    const double x = 0.5 * (upper + lower) + 0.5 * (upper - lower) * std::cos(theta);
    worst = std::max(worst, std::abs(f(x) - chebyshev_eval(coeffs, x, lower, upper)));
  }
  return worst;
}

CMatrix chebyshev_apply_columns(const SparseMatrix& L, double lower, double upper,
                                const CMatrix& coeffs, const CMatrix& X) {
  if (coeffs.cols() != X.cols()) throw ValidationError("chebyshev_apply_columns: one expansion per column required");
  if (L.rows() != X.rows()) throw ValidationError("chebyshev_apply_columns: operator size mismatch");
  normalize_interval(lower, upper);
  const Index order = coeffs.rows() - 1;
  const double alpha = 2.0 / (upper - lower);
  const double shift = (upper + lower) / (upper - lower);
  const Eigen::SparseMatrix<Complex> Lc = L.cast<Complex>();

  CMatrix Y(X.rows(), X.cols());
  const Index cols = X.cols();
  const Index workers = std::max<Index>(1, std::min<Index>(num_threads(), cols));
  const Index chunk = cols > 0 ? (cols + workers - 1) / workers : 0;
  parallel_for(0, workers, [&](std::ptrdiff_t w) {
    const Index lo = w * chunk;
    const Index hi = std::min(cols, lo + chunk);
    if (lo >= hi) return;
    const Index width = hi - lo;
    // L~ V = alpha L V - shift V
    auto apply = [&](const CMatrix& V) -> CMatrix { return alpha * (Lc * V) - shift * V; };

    // acc += V scaled column-wise by row i of the coefficients
    auto term = [&](const CMatrix& V, Index i) -> CMatrix {
      return (V.array().rowwise() * coeffs.row(i).segment(lo, width).array()).matrix();
    };

    CMatrix prev = X.middleCols(lo, width);
    CMatrix acc = term(prev, 0);
    if (order >= 1) {
      CMatrix cur = apply(prev);
      acc += term(cur, 1);
      for (Index i = 2; i <= order; ++i) {
        CMatrix next = 2.0 * apply(cur) - prev;
        acc += term(next, i);
        prev = std::move(cur);
        cur = std::move(next);
      }
    }
    Y.middleCols(lo, width) = acc;
  });
  return Y;
}

}  // namespace tvgsp
