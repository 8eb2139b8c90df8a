#pragma once

#include <vector>

#include "tvgsp/frames.hpp"
#include "tvgsp/graph.hpp"
#include "tvgsp/types.hpp"

namespace tvgsp {

/// gamma_graph ||grad_G X||_p^p + gamma_time ||X grad_T||_q^q.
struct JointRegularizer {
  int p = 2;
  int q = 2;
  double gamma_graph = 0.0;
  double gamma_time = 0.0;

  static JointRegularizer tikhonov(double tau1, double tau2) { return {2, 2, tau1, tau2}; }
  static JointRegularizer mixed(int p, int q, double gamma1, double gamma2) {
    return {p, q, gamma1, gamma2};
  }
};

struct SolverControls {
  Index max_iters = 2000;
  double tolerance = 1e-6;  // relative objective change
};

/// min_X ||M o X - Y||_F^2 + regularizer(X).
struct InverseProblemSpec {
  Matrix observation;  // Y; entries where mask == 0 are ignored
  Matrix mask;         // 1 = observed, 0 = missing
  JointRegularizer regularizer;
  SolverControls controls;

  void validate(const Graph& g) const;
};

struct InpaintResult {
  Matrix signal;
  double objective = 0.0;
  Index iterations = 0;
  bool converged = false;
  double final_relative_change = 0.0;
  /// Objective of every accepted iterate, non-increasing.
  std::vector<double> objective_history;
};

/// Closed-form minimizer of ||X - Y||^2 + tau1 ||grad_G X||^2 + tau2 ||X grad_T||^2:
/// the joint lowpass 1 / (1 + tau1 lambda + 2 tau2 (1 - cos omega)).
Matrix denoise_tikhonov(const Eigen::Ref<const Matrix>& Y, const Graph& g, double tau1, double tau2,
                        const FilterRoute& route);

double inpaint_objective(const Eigen::Ref<const Matrix>& X, const InverseProblemSpec& spec, const Graph& g);

/// Primal-dual (Chambolle-Pock) solver with K = [grad_G; grad_T]. Returns the
/// best accepted iterate; `converged` is false when max_iters ran out, and a
/// warning reports the last relative objective change.
InpaintResult inpaint(const InverseProblemSpec& spec, const Graph& g);

/// min_C ||D^H C - X||_2^2 + gamma ||C||_1 over a full-lattice bank.
struct SparseCodingSpec {
  FilterBank bank;
  Matrix observation;
  double gamma = 0.0;
  SolverControls controls{5000, 1e-9};
  /// Once the objective stalls, iterate until the largest entry of the
  /// proximal-gradient residual (C - prox(C - step grad)) / step is below this.
  double optimality_tolerance = 1e-6;
};

struct SparseCodeResult {
  CoefficientTensor coefficients;
  double objective = 0.0;
  Index iterations = 0;
  bool converged = false;
  double step = 0.0;  // 1 / (2 B)
  double optimality_residual = 0.0;  // max |(C - prox(C - step grad)) / step|
};

double sparse_code_objective(const CoefficientTensor& C, const SparseCodingSpec& spec, const Graph& g,
                             const FilterRoute& route);

/// Monotone FISTA with step 1 / (2B), B the upper frame bound (on the exact
/// grid when the route carries an eigensystem, otherwise on a 512-point
/// lambda grid over [0, lambda_max]). Converged when the objective changed
/// by less than the tolerance over 10 iterations and the proximal-gradient
/// residual is below optimality_tolerance.
SparseCodeResult sparse_code(const SparseCodingSpec& spec, const Graph& g, const FilterRoute& route);

/// Per-vertex coefficient energy sum_{z, tau} |C_z(m, tau)|^2, indexed by
/// graph vertex (the bank's vertex lattice maps rows to vertices).
Vector vertex_energy(const CoefficientTensor& C, const FilterBank& bank, Index num_vertices);

/// Energy-weighted centroid of the top_k highest-energy source vertices.
/// Throws ValidationError when the graph has no coordinates.
Eigen::Vector2d localize_source(const CoefficientTensor& C, const FilterBank& bank, const Graph& g,
                                Index top_k);

/// Baseline: centroid of all vertex coordinates weighted by signal energy.
Eigen::Vector2d energy_centroid(const Eigen::Ref<const Matrix>& X, const Graph& g);

}  // namespace tvgsp
