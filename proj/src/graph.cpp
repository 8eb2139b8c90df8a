#include "tvgsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "tvgsp/rng.hpp"

namespace tvgsp {

Graph Graph::with_coordinates(Matrix coords) const {
  if (coords.rows() != n_ || coords.cols() < 2)
    throw ValidationError("coordinates must be N x 2, got " + std::to_string(coords.rows()) +
                          " x " + std::to_string(coords.cols()));
  Graph out = *this;
  out.coords_ = std::move(coords);
  return out;
}

Graph Graph::with_lambda_max(double bound) const {
  if (!(bound >= 0.0) || !std::isfinite(bound))
    throw ValidationError("lambda_max bound must be finite and nonnegative");
  Graph out = *this;
  out.lambda_max_ = bound;
  return out;
}

Graph build_graph(std::span<const Edge> edges, Index num_vertices, LambdaMaxMethod method) {
  if (num_vertices <= 0) throw ValidationError("graph needs at least one vertex");

  std::map<std::pair<Index, Index>, double> merged;
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= num_vertices || e.dst < 0 || e.dst >= num_vertices)
      throw ValidationError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") has a vertex id outside [0, " + std::to_string(num_vertices) + ")");
    if (e.src == e.dst)
      throw ValidationError("self-loop at vertex " + std::to_string(e.src) + " is not allowed");
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw ValidationError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") has negative or non-finite weight");
    merged[std::minmax(e.src, e.dst)] += e.weight;
  }

  Graph g;
  g.n_ = num_vertices;
  g.degrees_ = Vector::Zero(num_vertices);
  std::vector<Eigen::Triplet<double>> w_trip;
  std::vector<Eigen::Triplet<double>> l_trip;
  for (const auto& [key, w] : merged) {
    if (w == 0.0) continue;
    const auto [a, b] = key;
    g.edges_.push_back({a, b, w});
    w_trip.emplace_back(a, b, w);
    w_trip.emplace_back(b, a, w);
    l_trip.emplace_back(a, b, -w);
    l_trip.emplace_back(b, a, -w);
    g.degrees_(a) += w;
    g.degrees_(b) += w;
  }
  for (Index i = 0; i < num_vertices; ++i) l_trip.emplace_back(i, i, g.degrees_(i));

  g.weights_.resize(num_vertices, num_vertices);
  g.weights_.setFromTriplets(w_trip.begin(), w_trip.end());
  g.laplacian_.resize(num_vertices, num_vertices);
  g.laplacian_.setFromTriplets(l_trip.begin(), l_trip.end());
  g.laplacian_.prune(0.0);
  g.lambda_max_ = estimate_lambda_max(g, method);
  return g;
}

double estimate_lambda_max(const Graph& g, LambdaMaxMethod method) {
  const double bound = g.num_vertices() > 0 && g.degrees().size() > 0
                           ? 2.0 * g.degrees().maxCoeff()
                           : 0.0;
  if (method == LambdaMaxMethod::degree_bound || bound == 0.0) return bound;

  // Deterministic start vector with no component pinned to the constant mode.
  CounterRng rng(0x5eed);
  Vector v(g.num_vertices());
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(-1.0, 1.0);
  v.normalize();
  double rayleigh = 0.0;
  double residual = 0.0;
  for (int it = 0; it < 50; ++it) {
    const Vector lv = g.laplacian() * v;
    rayleigh = v.dot(lv);
    residual = (lv - rayleigh * v).norm();
    const double nrm = lv.norm();
    if (nrm == 0.0) break;
    v = lv / nrm;
  }
  // Power iteration approaches from below; the margin is heuristic, the
  // degree bound keeps the result valid.
  return std::min(bound, 1.01 * rayleigh + residual);
}

GraphEigensystem eigendecompose(const Graph& g, Index cap) {
  const Index n = g.num_vertices();
  if (n > cap)
    throw ValidationError("graph has " + std::to_string(n) + " vertices, above the dense eigensolver cap of " +
                          std::to_string(cap) + "; use the fast Chebyshev path instead");

  const Matrix dense = Matrix(g.laplacian());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericalError("Laplacian eigensolver did not converge");

  GraphEigensystem eig{solver.eigenvalues(), solver.eigenvectors()};
  for (Index l = 0; l < n; ++l) {
    // L is PSD; clip round-off below zero.
    if (eig.eigenvalues(l) < 0.0) eig.eigenvalues(l) = 0.0;
    auto col = eig.eigenvectors.col(l);
    for (Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-10) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
  return eig;
}

std::vector<Index> connected_components(const Graph& g) {
  const Index n = g.num_vertices();
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  Index next = 0;
  for (Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::deque<Index> queue{s};
    label[s] = next;
    while (!queue.empty()) {
      const Index v = queue.front();
      queue.pop_front();
      for (SparseMatrix::InnerIterator it(g.weights(), v); it; ++it) {
        if (label[it.index()] < 0) {
          label[it.index()] = next;
          queue.push_back(it.index());
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_connected(const Graph& g) {
  const auto labels = connected_components(g);
  return std::all_of(labels.begin(), labels.end(), [](Index l) { return l == 0; });
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "path") return GraphKind::path;
  if (name == "ring") return GraphKind::ring;
  if (name == "grid2d") return GraphKind::grid2d;
  if (name == "knn_sensor" || name == "sensor") return GraphKind::knn_sensor;
  if (name == "erdos_renyi") return GraphKind::erdos_renyi;
  throw ValidationError("unknown graph kind '" + std::string(name) + "'");
}

namespace {

Graph knn_sensor_once(const GraphParams& p, CounterRng& rng) {
  const Index n = p.num_vertices;
  Matrix pts(n, 2);
  for (Index i = 0; i < n; ++i) {
    pts(i, 0) = rng.uniform();
    pts(i, 1) = rng.uniform();
  }

  std::vector<std::vector<std::pair<double, Index>>> nbrs(static_cast<std::size_t>(n));
  double kth_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Index>> d;
    d.reserve(static_cast<std::size_t>(n - 1));
    for (Index j = 0; j < n; ++j)
      if (j != i) d.emplace_back((pts.row(i) - pts.row(j)).squaredNorm(), j);
    std::partial_sort(d.begin(), d.begin() + p.k, d.end());
    d.resize(static_cast<std::size_t>(p.k));
    kth_sum += std::sqrt(d.back().first);
    nbrs[i] = std::move(d);
  }
  const double sigma = p.sigma > 0.0 ? p.sigma : kth_sum / static_cast<double>(n);

  std::vector<Edge> edges;
  std::map<std::pair<Index, Index>, double> seen;
  for (Index i = 0; i < n; ++i)
    for (const auto& [d2, j] : nbrs[i]) seen[std::minmax(i, j)] = std::exp(-d2 / (sigma * sigma));
  for (const auto& [key, w] : seen) edges.push_back({key.first, key.second, w});
  return build_graph(edges, n).with_coordinates(std::move(pts));
}

}  // namespace

Graph generate_graph(GraphKind kind, const GraphParams& p, std::uint64_t seed) {
  std::vector<Edge> edges;
  switch (kind) {
    case GraphKind::path: {
      if (p.num_vertices < 1) throw ValidationError("path needs num_vertices >= 1");
      for (Index i = 0; i + 1 < p.num_vertices; ++i) edges.push_back({i, i + 1, 1.0});
      Matrix coords = Matrix::Zero(p.num_vertices, 2);
      for (Index i = 0; i < p.num_vertices; ++i) coords(i, 0) = static_cast<double>(i);
      return build_graph(edges, p.num_vertices).with_coordinates(std::move(coords));
    }
    case GraphKind::ring: {
      if (p.num_vertices < 3) throw ValidationError("ring needs num_vertices >= 3");
      const Index n = p.num_vertices;
      Matrix coords(n, 2);
      for (Index i = 0; i < n; ++i) {
        edges.push_back({i, (i + 1) % n, 1.0});
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        coords(i, 0) = std::cos(a);
        coords(i, 1) = std::sin(a);
      }
      return build_graph(edges, n).with_coordinates(std::move(coords));
    }
    case GraphKind::grid2d: {
      if (p.rows < 1 || p.cols < 1) throw ValidationError("grid2d needs rows, cols >= 1");
      const Index n = p.rows * p.cols;
      Matrix coords(n, 2);
      for (Index r = 0; r < p.rows; ++r) {
        for (Index c = 0; c < p.cols; ++c) {
          const Index v = r * p.cols + c;
          coords(v, 0) = static_cast<double>(c);
          coords(v, 1) = static_cast<double>(r);
          if (c + 1 < p.cols) edges.push_back({v, v + 1, 1.0});
          if (r + 1 < p.rows) edges.push_back({v, v + p.cols, 1.0});
        }
      }
      return build_graph(edges, n).with_coordinates(std::move(coords));
    }
    case GraphKind::knn_sensor: {
      if (p.num_vertices < 2) throw ValidationError("knn_sensor needs num_vertices >= 2");
      if (p.k < 1 || p.k >= p.num_vertices) throw ValidationError("knn_sensor needs 1 <= k < N");
      if (p.sigma < 0.0) throw ValidationError("knn_sensor sigma must be >= 0");
      for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        CounterRng rng(seed * 1000003ULL + attempt);
        Graph g = knn_sensor_once(p, rng);
        if (is_connected(g)) return g;
      }
      throw NumericalError("knn_sensor: no connected instance found; increase k");
    }
    case GraphKind::erdos_renyi: {
      if (p.num_vertices < 1) throw ValidationError("erdos_renyi needs num_vertices >= 1");
      if (!(p.probability >= 0.0 && p.probability <= 1.0))
        throw ValidationError("erdos_renyi probability must be in [0, 1]");
      CounterRng rng(seed);
      for (Index i = 0; i < p.num_vertices; ++i)
        for (Index j = i + 1; j < p.num_vertices; ++j)
          if (rng.uniform() < p.probability) edges.push_back({i, j, 1.0});
      return build_graph(edges, p.num_vertices);
    }
  }
  throw ValidationError("unhandled graph kind");
}

}  // namespace tvgsp
