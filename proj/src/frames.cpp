#include "tvgsp/frames.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "tvgsp/harmonic.hpp"
#include "tvgsp/parallel.hpp"

namespace tvgsp {

std::string_view to_string(BankKind kind) {
  switch (kind) {
    case BankKind::stvft: return "stvft";
    case BankKind::stvwt: return "stvwt";
    case BankKind::custom: return "custom";
  }
  return "custom";
}

FilterBank make_bank(std::vector<JointKernel> kernels) {
  if (kernels.empty()) throw ValidationError("filter bank needs at least one kernel");
  FilterBank bank;
  bank.kind = BankKind::custom;
  bank.mother = kernels.front();
  bank.lattice.assign(kernels.size(), {0.0, 0.0});
  bank.kernels = std::move(kernels);
  return bank;
}

double CoefficientTensor::squared_norm() const {
  double acc = 0.0;
  for (const auto& c : coeffs) acc += c.squaredNorm();
  return acc;
}

Complex CoefficientTensor::inner(const CoefficientTensor& other) const {
  if (other.size() != size()) throw ValidationError("coefficient tensors differ in size");
  Complex acc = 0.0;
  // Eigen's dot conjugates its first argument.
  for (std::size_t z = 0; z < coeffs.size(); ++z)
    acc += other.coeffs[z].reshaped().dot(coeffs[z].reshaped());
  return acc;
}

double CoefficientTensor::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs)
    if (c.size()) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

CMatrix localize(const JointKernel& h, Index m, Index tau, const GraphEigensystem& eig, Index T) {
  const Index N = eig.size();
  if (m < 0 || m >= N) throw ValidationError("localize: vertex " + std::to_string(m) + " out of range");
  if (tau < 0 || tau >= T) throw ValidationError("localize: time " + std::to_string(tau) + " out of range");

  if (h.is_separable()) {
    // h1(L_G) delta_m times (h2(L_T) delta_tau)^T
    CVector graph_resp(N);
    for (Index l = 0; l < N; ++l) graph_resp(l) = h.graph_factor()(eig.eigenvalues(l));
    const CVector graph_atom =
        eig.eigenvectors.cast<Complex>() * (graph_resp.cwiseProduct(eig.eigenvectors.row(m).transpose().cast<Complex>()));
    CMatrix delta_t = CMatrix::Zero(1, T);
    delta_t(0, tau) = 1.0;
    CMatrix tf = dft(delta_t);
    const Vector omega = signed_frequencies(T);
    for (Index k = 0; k < T; ++k) tf(0, k) *= h.time_factor()(omega(k));
    return graph_atom * idft(tf);
  }
  CMatrix delta = CMatrix::Zero(N, T);
  delta(m, tau) = 1.0;
  return filter_exact(delta, h, eig);
}

JointKernel::Factor itersine_window(double spacing) {
  if (!(spacing > 0.0)) throw ValidationError("itersine spacing must be > 0");
  return [spacing](double lambda) {
    const double x = lambda / (2.0 * spacing);
    if (std::abs(x) > 0.5) return Complex(0.0, 0.0);
    const double c = std::cos(std::numbers::pi * x);
    return Complex(std::sin(0.5 * std::numbers::pi * c * c), 0.0);
  };
}

std::vector<double> uniform_shifts(Index count, double lambda_max) {
  if (count < 1) throw ValidationError("need at least one shift");
  std::vector<double> shifts(static_cast<std::size_t>(count), 0.0);
  for (Index i = 1; i < count; ++i)
    shifts[i] = lambda_max * static_cast<double>(i) / static_cast<double>(count - 1);
  return shifts;
}

JointKernel::Factor time_window_response(const Vector& window) {
  if (window.size() < 1) throw ValidationError("time window must be nonempty");
  const Index center = (window.size() - 1) / 2;
  return [window, center](double omega) {
    Complex acc = 0.0;
    for (Index t = 0; t < window.size(); ++t)
      acc += window(t) * std::exp(Complex(0.0, -omega * static_cast<double>(t - center)));
    return acc;
  };
}

FilterBank make_stvft(const StvftConfig& config, Index T) {
  if (!config.graph_window) throw ValidationError("make_stvft: graph window missing");
  if (config.lambda_shifts.empty()) throw ValidationError("make_stvft: need at least one graph shift");
  const Index len = config.time_window.size();
  if (len < 1 || len > T) throw ValidationError("make_stvft: time window length must be in [1, T]");
  if (config.redundancy < 1 || len % config.redundancy != 0)
    throw ValidationError("make_stvft: redundancy must divide the window length");

  FilterBank bank;
  bank.kind = BankKind::stvft;
  bank.mother = JointKernel::separable("stvft_mother", config.graph_window,
                                       time_window_response(config.time_window),
                                       {{"window_length", static_cast<double>(len)}});
  for (double zl : config.lambda_shifts) {
    for (Index j = 0; j < len; ++j) {
      const double zw = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(len);
      bank.kernels.push_back(bank.mother.shifted(zl, zw));
      bank.lattice.emplace_back(zl, zw);
    }
  }
  if (config.subsample_time) {
    const Index hop = len / config.redundancy;
    if (hop < T)
      for (Index tau = 0; tau < T; tau += hop) bank.time_lattice.push_back(tau);
  }
  return bank;
}

FilterBank make_stvwt(const JointKernel& mother, std::span<const double> scales_lambda,
                      std::span<const double> scales_omega, const StvwtOptions& options) {
  if (scales_lambda.empty() || scales_omega.empty())
    throw ValidationError("make_stvwt: scale lists must be nonempty");
  if (options.require_admissible && !options.dc_cover && std::abs(mother(0.0, 0.0)) > 1e-12) {
    std::ostringstream os;
    os << "make_stvwt: mother kernel '" << mother.name() << "' is not admissible, |h(0,0)| = "
       << std::abs(mother(0.0, 0.0)) << "; supply a DC-cover kernel";
    throw ValidationError(os.str());
  }
  FilterBank bank;
  bank.kind = BankKind::stvwt;
  bank.mother = mother;
  for (double zl : scales_lambda) {
    for (double zw : scales_omega) {
      bank.kernels.push_back(mother.dilated(zl, zw));
      bank.lattice.emplace_back(zl, zw);
    }
  }
  if (options.dc_cover) {
    bank.kernels.push_back(*options.dc_cover);
    bank.lattice.emplace_back(0.0, 0.0);
  }
  return bank;
}

namespace {

Matrix squared_response_sum(const FilterBank& bank, const GraphEigensystem& eig, Index T) {
  Matrix S = Matrix::Zero(eig.size(), T);
  for (const auto& h : bank.kernels) S += response_grid(h, eig.eigenvalues, T).cwiseAbs2();
  return S;
}

CMatrix subsample(const CMatrix& Y, const FilterBank& bank) {
  if (bank.full_lattice()) return Y;
  const Index rows = bank.vertex_lattice.empty() ? Y.rows() : static_cast<Index>(bank.vertex_lattice.size());
  const Index cols = bank.time_lattice.empty() ? Y.cols() : static_cast<Index>(bank.time_lattice.size());
  CMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    const Index t = bank.time_lattice.empty() ? j : bank.time_lattice[j];
    for (Index i = 0; i < rows; ++i) {
      const Index m = bank.vertex_lattice.empty() ? i : bank.vertex_lattice[i];
      out(i, j) = Y(m, t);
    }
  }
  return out;
}

}  // namespace

FrameBounds frame_bounds(const FilterBank& bank, const GraphEigensystem& eig, Index T) {
  const Matrix S = squared_response_sum(bank, eig, T);
  return {S.minCoeff(), S.maxCoeff(), bank.full_lattice()};
}

CoefficientTensor detail::analyze(const FilterBank& bank, const CMatrix& X, const Graph& g,
                                  const FilterRoute& route) {
  if (X.rows() != g.num_vertices()) throw ValidationError("analyze: signal rows do not match graph size");
  CoefficientTensor C;
  C.coeffs.resize(bank.kernels.size());
  if (const GraphEigensystem* eig = route.eigensystem()) {
    const JointSpectrum S = jft(X, *eig);
    parallel_for(0, bank.size(), [&](std::ptrdiff_t z) {
      JointSpectrum Sz{S.coeffs.cwiseProduct(response_grid(bank.kernels[z], eig->eigenvalues, X.cols()))};
      C.coeffs[z] = subsample(ijft(Sz, *eig), bank);
    });
  } else {
    for (Index z = 0; z < bank.size(); ++z)
      C.coeffs[z] = subsample(filter_ffc(X, bank.kernels[z], g, route.order()), bank);
  }
  return C;
}

CMatrix synthesize(const FilterBank& bank, const CoefficientTensor& C, const Graph& g,
                   const FilterRoute& route) {
  if (!bank.full_lattice())
    throw ValidationError("synthesize: subsampled lattices are analysis-only");
  if (C.size() != bank.size()) throw ValidationError("synthesize: coefficient count does not match bank");
  if (C.size() == 0) throw ValidationError("synthesize: empty coefficient tensor");
  const Index N = g.num_vertices();
  const Index T = C.coeffs.front().cols();
  for (const auto& c : C.coeffs)
    if (c.rows() != N || c.cols() != T) throw ValidationError("synthesize: coefficient shape mismatch");

  if (const GraphEigensystem* eig = route.eigensystem()) {
    CMatrix acc = CMatrix::Zero(N, T);
    for (Index z = 0; z < bank.size(); ++z) {
      const JointSpectrum Sz = jft(C.coeffs[z], *eig);
      acc += Sz.coeffs.cwiseProduct(response_grid(bank.kernels[z], eig->eigenvalues, T).conjugate());
    }
    return ijft(JointSpectrum{acc}, *eig);
  }
  CMatrix acc = CMatrix::Zero(N, T);
  for (Index z = 0; z < bank.size(); ++z)
    acc += filter_ffc(C.coeffs[z], bank.kernels[z].conjugate(), g, route.order());
  return acc;
}

FilterBank canonical_dual(const FilterBank& bank, const GraphEigensystem& eig, Index T, double tol) {
  const Matrix S = squared_response_sum(bank, eig, T);
  Index lo_l = 0;
  Index lo_k = 0;
  const double A = S.minCoeff(&lo_l, &lo_k);
  if (A <= tol) {
    std::ostringstream os;
    os << "canonical_dual: not a frame, sum_z |h_z|^2 = " << A << " at (l=" << lo_l << ", k=" << lo_k
       << ")";
    throw NumericalError(os.str());
  }
  auto kernels = std::make_shared<const std::vector<JointKernel>>(bank.kernels);
  auto energy = [kernels](double l, double w) {
    double acc = 0.0;
    for (const auto& h : *kernels) acc += std::norm(h(l, w));
    return acc;
  };
  FilterBank dual = bank;
  dual.kind = bank.kind;
  for (std::size_t z = 0; z < bank.kernels.size(); ++z) {
    dual.kernels[z] = JointKernel::general(
        bank.kernels[z].name() + "_dual",
        [h = bank.kernels[z], energy](double l, double w) { return h(l, w) / energy(l, w); },
        bank.kernels[z].params());
  }
  return dual;
}

}  // namespace tvgsp
