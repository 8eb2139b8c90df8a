#include "tvgsp/kernel.hpp"

#include <utility>

#include "tvgsp/harmonic.hpp"

namespace tvgsp {

JointKernel JointKernel::general(std::string name, Response response, KernelParams params) {
  JointKernel k;
  k.name_ = std::move(name);
  k.response_ = std::move(response);
  k.params_ = std::move(params);
  return k;
}

JointKernel JointKernel::separable(std::string name, Factor graph_factor, Factor time_factor,
                                   KernelParams params) {
  JointKernel k;
  k.name_ = std::move(name);
  k.separable_ = true;
  k.graph_factor_ = std::move(graph_factor);
  k.time_factor_ = std::move(time_factor);
  k.response_ = [h1 = k.graph_factor_, h2 = k.time_factor_](double lambda, double omega) {
    return h1(lambda) * h2(omega);
  };
  k.params_ = std::move(params);
  return k;
}

JointKernel JointKernel::constant(Complex value) {
  return separable(
      "constant", [value](double) { return value; }, [](double) { return Complex(1.0, 0.0); },
      {{"re", value.real()}, {"im", value.imag()}});
}

const JointKernel::Factor& JointKernel::graph_factor() const {
  if (!separable_) throw ValidationError("kernel '" + name_ + "' is not separable");
  return graph_factor_;
}

const JointKernel::Factor& JointKernel::time_factor() const {
  if (!separable_) throw ValidationError("kernel '" + name_ + "' is not separable");
  return time_factor_;
}

JointKernel JointKernel::conjugate() const {
  if (separable_) {
    return separable(
        name_ + "*", [h1 = graph_factor_](double l) { return std::conj(h1(l)); },
        [h2 = time_factor_](double w) { return std::conj(h2(w)); }, params_);
  }
  return general(
      name_ + "*", [f = response_](double l, double w) { return std::conj(f(l, w)); }, params_);
}

JointKernel JointKernel::dilated(double lambda_scale, double omega_scale) const {
  KernelParams p = params_;
  p["z_lambda"] = lambda_scale;
  p["z_omega"] = omega_scale;
  if (separable_) {
    return separable(
        name_, [h1 = graph_factor_, lambda_scale](double l) { return h1(lambda_scale * l); },
        [h2 = time_factor_, omega_scale](double w) { return h2(omega_scale * w); }, std::move(p));
  }
  return general(
      name_,
      [f = response_, lambda_scale, omega_scale](double l, double w) {
        return f(lambda_scale * l, omega_scale * w);
      },
      std::move(p));
}

JointKernel JointKernel::shifted(double lambda_shift, double omega_shift) const {
  KernelParams p = params_;
  p["z_lambda"] = lambda_shift;
  p["z_omega"] = omega_shift;
  if (separable_) {
    return separable(
        name_, [h1 = graph_factor_, lambda_shift](double l) { return h1(l - lambda_shift); },
        [h2 = time_factor_, omega_shift](double w) { return h2(w - omega_shift); }, std::move(p));
  }
  return general(
      name_,
      [f = response_, lambda_shift, omega_shift](double l, double w) {
        return f(l - lambda_shift, w - omega_shift);
      },
      std::move(p));
}

JointKernel JointKernel::scaled(Complex factor) const {
  if (separable_) {
    return separable(
        name_, [h1 = graph_factor_, factor](double l) { return factor * h1(l); }, time_factor_,
        params_);
  }
  return general(
      name_, [f = response_, factor](double l, double w) { return factor * f(l, w); }, params_);
}

CMatrix response_grid(const JointKernel& h, const Eigen::Ref<const Vector>& eigenvalues, Index T) {
  const Vector omega = signed_frequencies(T);
  CMatrix R(eigenvalues.size(), T);
  for (Index k = 0; k < T; ++k)
    for (Index l = 0; l < eigenvalues.size(); ++l) R(l, k) = h(eigenvalues(l), omega(k));
  return R;
}

}  // namespace tvgsp
