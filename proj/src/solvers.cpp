#include "tvgsp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tvgsp/diagnostics.hpp"
#include "tvgsp/filtering.hpp"
#include "tvgsp/harmonic.hpp"

namespace tvgsp {

Matrix denoise_tikhonov(const Eigen::Ref<const Matrix>& Y, const Graph& g, double tau1, double tau2,
                        const FilterRoute& route) {
  if (Y.rows() != g.num_vertices()) throw ValidationError("denoise_tikhonov: signal rows do not match graph size");
  const JointKernel h = named_response("tikhonov", {{"tau1", tau1}, {"tau2", tau2}});
  const CMatrix out = route.eigensystem() ? filter_exact(Y, h, *route.eigensystem())
                                          : filter_ffc(Y, h, g, route.order());
  return checked_real(out, 1e-8);
}

void InverseProblemSpec::validate(const Graph& g) const {
  if (observation.rows() != g.num_vertices()) throw ValidationError("inpaint: observation rows do not match graph size");
  if (mask.rows() != observation.rows() || mask.cols() != observation.cols())
    throw ValidationError("inpaint: mask shape does not match observation");
  if (((mask.array() != 0.0) && (mask.array() != 1.0)).any())
    throw ValidationError("inpaint: mask entries must be 0 or 1");
  if (mask.sum() < 1.0) throw ValidationError("inpaint: at least one entry must be observed");
  if (!observation.allFinite()) throw ValidationError("inpaint: observation has non-finite entries");
  const auto& r = regularizer;
  if ((r.p != 1 && r.p != 2) || (r.q != 1 && r.q != 2)) throw ValidationError("inpaint: p and q must be 1 or 2");
  if (r.gamma_graph < 0.0 || r.gamma_time < 0.0) throw ValidationError("inpaint: weights must be >= 0");
  if (controls.max_iters < 1 || !(controls.tolerance > 0.0))
    throw ValidationError("inpaint: max_iters >= 1 and tolerance > 0 required");
}

double inpaint_objective(const Eigen::Ref<const Matrix>& X, const InverseProblemSpec& spec, const Graph& g) {
  const double fidelity = (spec.mask.cwiseProduct(X - spec.observation)).squaredNorm();
  const auto& r = spec.regularizer;
  return fidelity + variation_norm(X, g, r.p, r.q, r.gamma_graph, r.gamma_time);
}

namespace {

// prox of sigma F* where F = weight ||.||_p^p.
void dual_prox(Matrix& y, int p, double weight, double sigma) {
  if (weight == 0.0) {
    y.setZero();
  } else if (p == 1) {
    y = y.cwiseMax(-weight).cwiseMin(weight);
  } else {
    y /= 1.0 + sigma / (2.0 * weight);
  }
}

Matrix initial_guess(const InverseProblemSpec& spec) {
  const Matrix& Y = spec.observation;
  const Matrix& M = spec.mask;
  const double global_mean = M.cwiseProduct(Y).sum() / M.sum();
  Matrix X = Y;
  for (Index n = 0; n < Y.rows(); ++n) {
    const double count = M.row(n).sum();
    const double fill = count > 0.0 ? M.row(n).dot(Y.row(n)) / count : global_mean;
    for (Index t = 0; t < Y.cols(); ++t)
      if (M(n, t) == 0.0) X(n, t) = fill;
  }
  return X;
}

}  // namespace

InpaintResult inpaint(const InverseProblemSpec& spec, const Graph& g) {
  spec.validate(g);
  const auto& r = spec.regularizer;
  const Matrix& M = spec.mask;
  const Matrix MY = M.cwiseProduct(spec.observation);

  // ||K||^2 <= ||grad_G||^2 + ||grad_T||^2 <= lambda_max + 4.
  const double op_norm = std::sqrt(g.lambda_max() + 4.0);
  const double tau = 0.99 / op_norm;
  const double sigma = 0.99 / op_norm;

  Matrix X = initial_guess(spec);
  Matrix X_bar = X;
  Matrix dual_graph = Matrix::Zero(g.num_edges(), X.cols());
  Matrix dual_time = Matrix::Zero(X.rows(), X.cols());
  const Matrix denom = (1.0 + 2.0 * tau * M.array()).matrix();

  InpaintResult result;
  result.signal = X;
  result.objective = inpaint_objective(X, spec, g);
  result.objective_history.push_back(result.objective);

  double previous = result.objective;
  int quiet_steps = 0;
  for (Index it = 1; it <= spec.controls.max_iters; ++it) {
    dual_graph += sigma * graph_gradient(X_bar, g);
    dual_time += sigma * time_gradient(X_bar);
    dual_prox(dual_graph, r.p, r.gamma_graph, sigma);
    dual_prox(dual_time, r.q, r.gamma_time, sigma);

    const Matrix V = X - tau * (graph_gradient_adjoint(dual_graph, g) + time_gradient_adjoint(dual_time));
    const Matrix X_next = (V + 2.0 * tau * MY).cwiseQuotient(denom);
    X_bar = 2.0 * X_next - X;
    X = X_next;

    const double f = inpaint_objective(X, spec, g);
    result.iterations = it;
    if (f <= result.objective + 1e-10 * std::max(1.0, std::abs(result.objective))) {
      result.objective = std::min(result.objective, f);
      result.signal = X;
      result.objective_history.push_back(result.objective);
    }
    const double change = std::abs(f - previous) / std::max(std::abs(f), 1e-300);
    result.final_relative_change = change;
    previous = f;
    quiet_steps = change < spec.controls.tolerance ? quiet_steps + 1 : 0;
    if (quiet_steps >= 10) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    std::ostringstream os;
    os << "inpaint: no convergence in " << spec.controls.max_iters
       << " iterations, last relative objective change " << result.final_relative_change;
    warn(os.str());
  }
  return result;
}

namespace {

CoefficientTensor zeros_like_bank(const FilterBank& bank, Index N, Index T) {
  CoefficientTensor C;
  C.coeffs.assign(bank.kernels.size(), CMatrix::Zero(N, T));
  return C;
}

void axpby(CoefficientTensor& out, Complex a, const CoefficientTensor& x, Complex b,
           const CoefficientTensor& y) {
  for (std::size_t z = 0; z < out.coeffs.size(); ++z) out.coeffs[z] = a * x.coeffs[z] + b * y.coeffs[z];
}

void soft_threshold(CoefficientTensor& C, double threshold) {
  for (auto& c : C.coeffs) {
    c = c.unaryExpr([threshold](const Complex& v) {
      const double mag = std::abs(v);
      return mag <= threshold ? Complex(0.0) : v * ((mag - threshold) / mag);
    });
  }
}

double l1_norm(const CoefficientTensor& C) {
  double acc = 0.0;
  for (const auto& c : C.coeffs) acc += c.cwiseAbs().sum();
  return acc;
}

double upper_frame_bound(const FilterBank& bank, const Graph& g, const FilterRoute& route, Index T) {
  if (const GraphEigensystem* eig = route.eigensystem()) return frame_bounds(bank, *eig, T).upper;
  const Index samples = 512;
  Vector lambdas(samples);
  for (Index i = 0; i < samples; ++i)
    lambdas(i) = g.lambda_max() * static_cast<double>(i) / static_cast<double>(samples - 1);
  Matrix S = Matrix::Zero(samples, T);
  for (const auto& h : bank.kernels) S += response_grid(h, lambdas, T).cwiseAbs2();
  return S.maxCoeff();
}

}  // namespace

double sparse_code_objective(const CoefficientTensor& C, const SparseCodingSpec& spec, const Graph& g,
                             const FilterRoute& route) {
  const CMatrix residual = synthesize(spec.bank, C, g, route) - spec.observation.cast<Complex>();
  return residual.squaredNorm() + spec.gamma * l1_norm(C);
}

SparseCodeResult sparse_code(const SparseCodingSpec& spec, const Graph& g, const FilterRoute& route) {
  if (spec.gamma < 0.0) throw ValidationError("sparse_code: gamma must be >= 0");
  if (!(spec.optimality_tolerance > 0.0)) throw ValidationError("sparse_code: optimality_tolerance must be > 0");
  if (!spec.bank.full_lattice()) throw ValidationError("sparse_code: bank must use full lattices");
  if (spec.observation.rows() != g.num_vertices())
    throw ValidationError("sparse_code: observation rows do not match graph size");
  const Index N = spec.observation.rows();
  const Index T = spec.observation.cols();
  const CMatrix X = spec.observation.cast<Complex>();

  const double B = upper_frame_bound(spec.bank, g, route, T);
  if (!(B > 0.0) || !std::isfinite(B)) throw NumericalError("sparse_code: upper frame bound must be finite and > 0");
  const double step = 1.0 / (2.0 * B);
  const double threshold = spec.gamma * step;

  auto objective_and_residual = [&](const CoefficientTensor& C, CMatrix& residual) {
    residual = synthesize(spec.bank, C, g, route) - X;
    return residual.squaredNorm() + spec.gamma * l1_norm(C);
  };
  // Entries of the gradient mapping equal the subgradient violation on the
  // support and vanish exactly at a minimizer.
  auto optimality = [&](const CoefficientTensor& C, const CMatrix& residual) {
    CoefficientTensor moved = C;
    axpby(moved, 1.0, C, -2.0 * step, analyze(spec.bank, residual, g, route));
    soft_threshold(moved, threshold);
    double worst = 0.0;
    for (std::size_t z = 0; z < C.coeffs.size(); ++z)
      worst = std::max(worst, (C.coeffs[z] - moved.coeffs[z]).cwiseAbs().maxCoeff() / step);
    return worst;
  };

  SparseCodeResult result;
  result.step = step;
  CoefficientTensor current = zeros_like_bank(spec.bank, N, T);
  CoefficientTensor momentum = current;
  CMatrix residual;
  double f_current = objective_and_residual(current, residual);
  CMatrix momentum_residual = residual;
  CMatrix current_residual = residual;
  double t = 1.0;
  // Convergence is judged over a window since rejected monotone steps leave
  // the objective unchanged for an iteration.
  constexpr std::size_t kWindow = 10;
  std::vector<double> history{f_current};

  for (Index it = 1; it <= spec.controls.max_iters; ++it) {
    // Gradient step from the momentum point, then shrinkage.
    const CoefficientTensor grad = analyze(spec.bank, momentum_residual, g, route);
    CoefficientTensor candidate = momentum;
    axpby(candidate, 1.0, momentum, -2.0 * step, grad);
    soft_threshold(candidate, threshold);

    CMatrix candidate_residual;
    const double f_candidate = objective_and_residual(candidate, candidate_residual);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));

    CoefficientTensor previous = current;
    if (f_candidate <= f_current) {
      current = candidate;
      f_current = f_candidate;
      current_residual = std::move(candidate_residual);
    }
    // Monotone FISTA momentum.
    momentum = current;
    for (std::size_t z = 0; z < momentum.coeffs.size(); ++z) {
      momentum.coeffs[z] += (t / t_next) * (candidate.coeffs[z] - current.coeffs[z]) +
                            ((t - 1.0) / t_next) * (current.coeffs[z] - previous.coeffs[z]);
    }
    momentum_residual = synthesize(spec.bank, momentum, g, route) - X;
    t = t_next;

    result.iterations = it;
    history.push_back(f_current);
    if (f_current == 0.0) {
      result.converged = true;
      break;
    }
    if (history.size() > kWindow) {
      const double change = (history[history.size() - 1 - kWindow] - f_current) / f_current;
      if (change < spec.controls.tolerance && optimality(current, current_residual) <= spec.optimality_tolerance) {
        result.converged = true;
        break;
      }
    }
  }
  result.optimality_residual = optimality(current, current_residual);
  if (!result.converged) {
    std::ostringstream os;
    os << "sparse_code: no convergence in " << spec.controls.max_iters << " iterations, optimality residual "
       << result.optimality_residual;
    warn(os.str());
  }
  result.coefficients = std::move(current);
  result.objective = f_current;
  return result;
}

Vector vertex_energy(const CoefficientTensor& C, const FilterBank& bank, Index num_vertices) {
  Vector e = Vector::Zero(num_vertices);
  for (const auto& c : C.coeffs) {
    for (Index i = 0; i < c.rows(); ++i) {
      const Index m = bank.vertex_lattice.empty() ? i : bank.vertex_lattice[i];
      e(m) += c.row(i).squaredNorm();
    }
  }
  return e;
}

Eigen::Vector2d localize_source(const CoefficientTensor& C, const FilterBank& bank, const Graph& g,
                                Index top_k) {
  if (!g.coordinates()) throw ValidationError("localize_source: graph has no vertex coordinates");
  if (top_k < 1) throw ValidationError("localize_source: top_k must be >= 1");
  const Vector e = vertex_energy(C, bank, g.num_vertices());
  std::vector<Index> order(static_cast<std::size_t>(e.size()));
  std::iota(order.begin(), order.end(), Index{0});
  // Highest energy first; ties resolved by lower vertex id.
  std::stable_sort(order.begin(), order.end(), [&e](Index a, Index b) { return e(a) > e(b); });
  const Index k = std::min<Index>(top_k, e.size());
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double total = 0.0;
  for (Index i = 0; i < k; ++i) {
    const Index m = order[i];
    acc += e(m) * g.coordinates()->row(m).head<2>().transpose();
    total += e(m);
  }
  if (total <= 0.0) throw NumericalError("localize_source: all coefficients are zero");
  return acc / total;
}

Eigen::Vector2d energy_centroid(const Eigen::Ref<const Matrix>& X, const Graph& g) {
  if (!g.coordinates()) throw ValidationError("energy_centroid: graph has no vertex coordinates");
  const Vector e = X.rowwise().squaredNorm();
  const double total = e.sum();
  if (total <= 0.0) throw NumericalError("energy_centroid: signal is zero");
  return (g.coordinates()->leftCols<2>().transpose() * e) / total;
}

}  // namespace tvgsp
