#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tvgsp/types.hpp"

namespace tvgsp {

struct Edge {
  Index src = 0;
  Index dst = 0;
  double weight = 1.0;
};

enum class LambdaMaxMethod {
  degree_bound,    ///< 2 * max weighted degree; always a valid upper bound
  power_iteration  ///< 50 power iterations plus a residual margin, capped by the degree bound
};

/// Weighted undirected graph with its combinatorial Laplacian L = D - W.
///
/// Immutable after construction. Edges are stored once each with src < dst,
/// sorted lexicographically; this ordering indexes the rows of the graph
/// gradient.
class Graph {
 public:
  Graph() = default;

  Index num_vertices() const { return n_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  const SparseMatrix& weights() const { return weights_; }
  const SparseMatrix& laplacian() const { return laplacian_; }
  const Vector& degrees() const { return degrees_; }

  /// Upper bound on the largest Laplacian eigenvalue.
  double lambda_max() const { return lambda_max_; }

  /// Optional N x 2 vertex positions (sensor graphs, grids).
  const std::optional<Matrix>& coordinates() const { return coords_; }

  Graph with_coordinates(Matrix coords) const;
  Graph with_lambda_max(double bound) const;

 private:
  friend Graph build_graph(std::span<const Edge>, Index, LambdaMaxMethod);

  Index n_ = 0;
  std::vector<Edge> edges_;
  SparseMatrix weights_;
  SparseMatrix laplacian_;
  Vector degrees_;
  double lambda_max_ = 0.0;
  std::optional<Matrix> coords_;
};

/// Orthonormal eigenbasis of the Laplacian, eigenvalues ascending.
struct GraphEigensystem {
  Vector eigenvalues;
  Matrix eigenvectors;  // column l is u_l

  Index size() const { return eigenvalues.size(); }
};

inline constexpr Index kDefaultEigenCap = 4096;

/// Builds a graph from an undirected edge list. Duplicate edges (in either
/// orientation) are merged by summing weights. Throws ValidationError on out
/// of range ids, negative or non-finite weights and self-loops.
Graph build_graph(std::span<const Edge> edges, Index num_vertices,
                  LambdaMaxMethod method = LambdaMaxMethod::degree_bound);

/// Dense symmetric eigensolve. Each eigenvector is signed so its first entry
/// of non-negligible magnitude is positive. Throws ValidationError when
/// N exceeds cap; such graphs should use the Chebyshev filtering routes.
GraphEigensystem eigendecompose(const Graph& g, Index cap = kDefaultEigenCap);

double estimate_lambda_max(const Graph& g,
                           LambdaMaxMethod method = LambdaMaxMethod::degree_bound);

/// Connected component label per vertex, labels numbered from 0 in order of
/// first appearance.
std::vector<Index> connected_components(const Graph& g);
bool is_connected(const Graph& g);

enum class GraphKind { path, ring, grid2d, knn_sensor, erdos_renyi };

GraphKind parse_graph_kind(std::string_view name);

struct GraphParams {
  Index num_vertices = 0;  // path, ring, knn_sensor, erdos_renyi
  Index rows = 0;          // grid2d
  Index cols = 0;          // grid2d
  Index k = 6;             // knn_sensor neighbours
  double probability = 0.1;  // erdos_renyi edge probability
  double sigma = 0.0;        // knn_sensor kernel width; 0 picks the mean k-NN distance
};

/// Deterministic synthetic graphs. knn_sensor draws points uniformly in the
/// unit square, joins each point to its k nearest neighbours with weights
/// exp(-d^2 / sigma^2), symmetrizes, and redraws (next sub-stream) until the
/// result is connected. grid2d and knn_sensor attach coordinates.
Graph generate_graph(GraphKind kind, const GraphParams& params, std::uint64_t seed = 0);

}  // namespace tvgsp
