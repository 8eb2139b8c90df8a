#pragma once

#include <functional>
#include <map>
#include <string>

#include "tvgsp/graph.hpp"
#include "tvgsp/types.hpp"

namespace tvgsp {

using KernelParams = std::map<std::string, double>;

/// Joint frequency response h(lambda, omega). Separable kernels also carry
/// their factors h1(lambda) and h2(omega), which the fast paths exploit.
class JointKernel {
 public:
  using Response = std::function<Complex(double lambda, double omega)>;
  using Factor = std::function<Complex(double)>;

  JointKernel() = default;

  static JointKernel general(std::string name, Response response, KernelParams params = {});
  static JointKernel separable(std::string name, Factor graph_factor, Factor time_factor,
                               KernelParams params = {});
  static JointKernel constant(Complex value);

  Complex operator()(double lambda, double omega) const { return response_(lambda, omega); }

  bool is_separable() const { return separable_; }
  const Factor& graph_factor() const;
  const Factor& time_factor() const;

  const std::string& name() const { return name_; }
  const KernelParams& params() const { return params_; }

  /// conj(h(lambda, omega)); the response of the adjoint filter.
  JointKernel conjugate() const;

  /// h(a * lambda, b * omega).
  JointKernel dilated(double lambda_scale, double omega_scale) const;

  /// h(lambda - a, omega - b).
  JointKernel shifted(double lambda_shift, double omega_shift) const;

  /// c * h(lambda, omega).
  JointKernel scaled(Complex factor) const;

 private:
  std::string name_;
  Response response_;
  bool separable_ = false;
  Factor graph_factor_;
  Factor time_factor_;
  KernelParams params_;
};

/// h(lambda_l, omega_k) on the joint grid, omega wrapped to (-pi, pi].
CMatrix response_grid(const JointKernel& h, const Eigen::Ref<const Vector>& eigenvalues, Index T);

}  // namespace tvgsp
