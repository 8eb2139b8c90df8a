#include "tvgsp/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tvgsp/dynamics.hpp"
#include "tvgsp/parallel.hpp"

namespace tvgsp {

namespace detail {

CMatrix filter_exact(const CMatrix& X, const JointKernel& h, const GraphEigensystem& eig) {
  if (X.rows() != eig.size()) throw ValidationError("filter_exact: signal rows do not match graph size");
  JointSpectrum S = jft(X, eig);
  S.coeffs.array() *= response_grid(h, eig.eigenvalues, X.cols()).array();
  return ijft(S, eig);
}

CMatrix filter_ffc(const CMatrix& X, const JointKernel& h, const Graph& g, Index order) {
  if (X.rows() != g.num_vertices()) throw ValidationError("filter_ffc: signal rows do not match graph size");
  if (order < 0) throw ValidationError("filter_ffc: order must be >= 0");
  const ChebyshevApprox fit = fit_ffc(h, X.cols(), order, g.lambda_max());
  const CMatrix Xf = dft(X);
  const CMatrix Yf = chebyshev_apply_columns(g.laplacian(), fit.lower, fit.upper,
                                             fit.table.transpose(), Xf);
  return idft(Yf);
}

CMatrix filter_separable(const CMatrix& X, const JointKernel::Factor& h1,
                         const JointKernel::Factor& h2, const Graph& g, Index order) {
  if (X.rows() != g.num_vertices())
    throw ValidationError("filter_separable: signal rows do not match graph size");
  if (order < 0) throw ValidationError("filter_separable: order must be >= 0");
  const Index T = X.cols();
  const CVector c = chebyshev_coefficients(h1, order, 0.0, g.lambda_max());
  const CMatrix graph_filtered =
      chebyshev_apply_columns(g.laplacian(), 0.0, g.lambda_max(), c.replicate(1, T), X);
  CMatrix Yf = dft(graph_filtered);
  const Vector omega = signed_frequencies(T);
  for (Index k = 0; k < T; ++k) Yf.col(k) *= h2(omega(k));
  return idft(Yf);
}

CMatrix filter_cheby2d(const CMatrix& X, const JointKernel& h, const Graph& g, Index order_graph,
                       Index order_time) {
  if (X.rows() != g.num_vertices()) throw ValidationError("filter_cheby2d: signal rows do not match graph size");
  if (order_graph < 0 || order_time < 0) throw ValidationError("filter_cheby2d: orders must be >= 0");

  double lmax = g.lambda_max();
  if (!(lmax > 0.0)) lmax = 1.0;
  constexpr double mu_max = 4.0;

  // Tensor Gauss-Chebyshev quadrature for c_ij of h(lambda, omega(mu)).
  const Index ng = 2 * (order_graph + 1);
  const Index nt = 2 * (order_time + 1);
  auto node_angle = [](Index n, Index count) {
    return std::numbers::pi * (static_cast<double>(n) + 0.5) / static_cast<double>(count);
  };
  CMatrix samples(ng, nt);
  for (Index a = 0; a < ng; ++a) {
    const double lambda = 0.5 * lmax * (1.0 + std::cos(node_angle(a, ng)));
    for (Index b = 0; b < nt; ++b) {
      const double mu = 0.5 * mu_max * (1.0 + std::cos(node_angle(b, nt)));
      const double omega = std::acos(std::clamp(1.0 - mu / 2.0, -1.0, 1.0));
      samples(a, b) = h(lambda, omega);
    }
  }
  Matrix cos_g(order_graph + 1, ng);
  for (Index i = 0; i <= order_graph; ++i)
    for (Index a = 0; a < ng; ++a) cos_g(i, a) = std::cos(static_cast<double>(i) * node_angle(a, ng));
  Matrix cos_t(order_time + 1, nt);
  for (Index j = 0; j <= order_time; ++j)
    for (Index b = 0; b < nt; ++b) cos_t(j, b) = std::cos(static_cast<double>(j) * node_angle(b, nt));
  CMatrix coeffs = (cos_g.cast<Complex>() * samples * cos_t.transpose().cast<Complex>()) *
                   (4.0 / static_cast<double>(ng * nt));
  coeffs.row(0) *= 0.5;
  coeffs.col(0) *= 0.5;

  // Z_j = X T_j(L~_T), L~_T = (L_T - 2 I) / 2 acting from the right.
  auto time_step = [](const CMatrix& V) -> CMatrix { return 0.5 * apply_time_laplacian(V) - V; };
  std::vector<CMatrix> Z;
  Z.reserve(static_cast<std::size_t>(order_time + 1));
  Z.push_back(X);
  if (order_time >= 1) Z.push_back(time_step(X));
  for (Index j = 2; j <= order_time; ++j) Z.push_back(2.0 * time_step(Z[j - 1]) - Z[j - 2]);

  // W_i = sum_j c_ij Z_j, then Clenshaw over i with L~_G from the left.
  auto W = [&](Index i) {
    CMatrix acc = coeffs(i, 0) * Z[0];
    for (Index j = 1; j <= order_time; ++j) acc += coeffs(i, j) * Z[j];
    return acc;
  };
  const Eigen::SparseMatrix<Complex> Lc = g.laplacian().cast<Complex>();
  auto graph_step = [&](const CMatrix& V) -> CMatrix { return (2.0 / lmax) * (Lc * V) - V; };

  CMatrix b1 = CMatrix::Zero(X.rows(), X.cols());
  CMatrix b2 = CMatrix::Zero(X.rows(), X.cols());
  for (Index i = order_graph; i >= 1; --i) {
    CMatrix b0 = W(i) + 2.0 * graph_step(b1) - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return W(0) + graph_step(b1) - b2;
}

}  // namespace detail

ChebyshevApprox fit_ffc(const JointKernel& h, Index T, Index order, double lambda_bound) {
  if (order < 0) throw ValidationError("fit_ffc: order must be >= 0");
  ChebyshevApprox fit;
  fit.order = order;
  fit.lower = 0.0;
  fit.upper = lambda_bound > 0.0 ? lambda_bound : 1.0;
  fit.table.resize(T, order + 1);
  const Vector omega = signed_frequencies(T);
  std::vector<double> errors(static_cast<std::size_t>(T), 0.0);
  parallel_for(0, T, [&](std::ptrdiff_t k) {
    const double w = omega(k);
    auto slice = [&h, w](double lambda) { return h(lambda, w); };
    const CVector c = chebyshev_coefficients(slice, order, fit.lower, fit.upper);
    fit.table.row(k) = c.transpose();
    errors[k] = chebyshev_sup_error(slice, c, fit.lower, fit.upper);
  });
  fit.sup_error = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  return fit;
}

namespace {

double require(const KernelParams& p, const std::string& key, std::string_view kernel) {
  const auto it = p.find(key);
  if (it == p.end())
    throw ValidationError("kernel '" + std::string(kernel) + "' needs parameter '" + key + "'");
  return it->second;
}

Index require_length(const KernelParams& p, std::string_view kernel) {
  const double T = require(p, "T", kernel);
  if (!(T >= 1.0) || T != std::floor(T))
    throw ValidationError("kernel '" + std::string(kernel) + "' needs integer T >= 1");
  return static_cast<Index>(T);
}

double logistic_decay(double x) { return 1.0 / (1.0 + std::exp(x)); }

}  // namespace

JointKernel named_response(std::string_view name, const KernelParams& params) {
  if (name == "lowpass_sigmoid" || name == "lp") {
    const double lcf = require(params, "lambda_cf", name);
    const double wcf = require(params, "omega_cf", name);
    // e^{-(x - c)} / (1 + e^{-(x - c)}) = 1 / (1 + e^{x - c})
    return JointKernel::separable(
        "lowpass_sigmoid", [lcf](double l) { return Complex(logistic_decay(l - lcf), 0.0); },
        [wcf](double w) { return Complex(logistic_decay(std::abs(w) - wcf), 0.0); }, params);
  }
  if (name == "wave_gauss" || name == "wave_approx") {
    const double lmax = require(params, "lambda_max", name);
    if (!(lmax > 0.0)) throw ValidationError("wave_gauss needs lambda_max > 0");
    return JointKernel::general(
        "wave_gauss",
        [lmax](double l, double w) {
          const double ridge = std::acos(std::clamp(1.0 - l / (2.0 * lmax), -1.0, 1.0));
          const double d = std::numbers::pi * std::abs(w) - ridge;
          return Complex(std::exp(-d * d), 0.0);
        },
        params);
  }
  if (name == "tikhonov") {
    const double tau1 = require(params, "tau1", name);
    const double tau2 = require(params, "tau2", name);
    if (tau1 < 0.0 || tau2 < 0.0) throw ValidationError("tikhonov needs tau1, tau2 >= 0");
    return JointKernel::general(
        "tikhonov",
        [tau1, tau2](double l, double w) {
          return Complex(1.0 / (1.0 + tau1 * l + 2.0 * tau2 * (1.0 - std::cos(w))), 0.0);
        },
        params);
  }
  if (name == "heat") {
    const double s = require(params, "s", name);
    const Index T = require_length(params, name);
    return JointKernel::general(
        "heat",
        [s, T](double l, double w) {
          const Complex a = (1.0 - s * l) * std::exp(Complex(0.0, -w));
          Complex acc = 0.0;
          for (Index t = 0; t < T; ++t) acc = acc * a + 1.0;
          return acc;
        },
        params);
  }
  if (name == "wave") {
    const double s = require(params, "s", name);
    const Index T = require_length(params, name);
    return JointKernel::general(
        "wave", [s, T](double l, double w) { return wave_kernel(l, w, s, T); }, params);
  }
  if (name == "damped_wave") {
    const double beta = require(params, "beta", name);
    const Index T = require_length(params, name);
    return JointKernel::general(
        "damped_wave", [beta, T](double l, double w) { return damped_wave_kernel(l, w, beta, T); },
        params);
  }
  throw ValidationError("unknown kernel '" + std::string(name) + "'");
}

}  // namespace tvgsp
