#include "tvgsp/compaction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tvgsp/harmonic.hpp"

namespace tvgsp {

namespace {

// Error of keeping all but the `drop` smallest coefficients; by unitarity this
// is the norm of the dropped part.
double threshold_error(const CMatrix& coeffs, Index drop, double norm) {
  const Index n = coeffs.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const Complex* c = coeffs.data();
  std::stable_sort(order.begin(), order.end(),
                   [c](Index a, Index b) { return std::abs(c[a]) < std::abs(c[b]); });
  double dropped = 0.0;
  for (Index i = 0; i < drop; ++i) dropped += std::norm(c[order[i]]);
  return std::sqrt(dropped) / norm;
}

}  // namespace

CompactionCurve compaction_experiment(const Eigen::Ref<const Matrix>& X, const Graph& g,
                                      const GraphEigensystem& eig, const std::vector<double>& percentiles) {
  if (X.rows() != g.num_vertices() || eig.size() != g.num_vertices())
    throw ValidationError("compaction: signal rows, graph and eigensystem sizes differ");
  for (double p : percentiles)
    if (!(p >= 0.0 && p < 100.0)) throw ValidationError("compaction: percentiles must lie in [0, 100)");
  const double norm = X.norm();
  if (!(norm > 0.0)) throw ValidationError("compaction: signal is zero");

  const Matrix Xm = X;
  CompactionCurve curve;
  curve.percentiles = percentiles;
  curve.transforms = {"dft", "gft", "jft"};
  const std::vector<CMatrix> coeffs{dft(Xm), gft(Xm, eig).cast<Complex>(), jft(Xm, eig).coeffs};

  const Index n = X.size();
  for (const auto& c : coeffs) {
    std::vector<double> row;
    for (double p : percentiles) {
      const auto drop = static_cast<Index>(std::floor(p * static_cast<double>(n) / 100.0));
      row.push_back(std::min(1.0, threshold_error(c, drop, norm)));
    }
    curve.errors.push_back(std::move(row));
  }
  return curve;
}

}  // namespace tvgsp
