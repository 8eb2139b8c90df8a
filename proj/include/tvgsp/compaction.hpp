#pragma once

#include <string>
#include <vector>

#include "tvgsp/graph.hpp"

namespace tvgsp {

/// Normalized hard-thresholding error ||X_p - X||_F / ||X||_F per transform.
struct CompactionCurve {
  std::vector<double> percentiles;
  std::vector<std::string> transforms;  // "dft", "gft", "jft"
  std::vector<std::vector<double>> errors;  // errors[transform][percentile]
};

/// For each percentile p, zeroes the floor(p n / 100) smallest-magnitude
/// coefficients of each unitary transform and inverts. Ties in magnitude go
/// by ascending flat index, so the larger index is kept.
CompactionCurve compaction_experiment(const Eigen::Ref<const Matrix>& X, const Graph& g,
                                      const GraphEigensystem& eig, const std::vector<double>& percentiles);

}  // namespace tvgsp
