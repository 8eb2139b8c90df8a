#include <doctest.h>

#include "oracles.hpp"
#include "tvgsp/diagnostics.hpp"
#include "tvgsp/dynamics.hpp"
#include "tvgsp/filtering.hpp"
#include "tvgsp/rng.hpp"

using namespace tvgsp;

namespace {

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("heat evolution examples") {
  const Graph g = build_graph(std::vector<Edge>{{0, 1, 1.0}}, 2);
  Vector x1(2);
  x1 << 1, 0;
  const Matrix X = heat_evolve(x1, g, 0.25, 3);
  CHECK(X(0, 1) == doctest::Approx(0.75));
  CHECK(X(1, 1) == doctest::Approx(0.25));
  CHECK((X.col(0) - x1).norm() == 0.0);

  const Matrix S0 = heat_evolve(x1, g, 0.0, 4);
  for (Index t = 0; t < 4; ++t) CHECK((S0.col(t) - x1).norm() == 0.0);

  const Graph r = generate_graph(GraphKind::ring, GraphParams{6}, 0);
  const Vector c = Vector::Constant(6, 2.0);
  const Matrix C = heat_evolve(c, r, 0.3, 5);
  for (Index t = 0; t < 5; ++t) CHECK((C.col(t) - c).norm() < 1e-14);
}

TEST_CASE("heat warns when the iteration grows") {
  std::vector<std::string> seen;
  auto previous = set_warning_handler([&](const std::string& m) { seen.push_back(m); });
  const Graph g = generate_graph(GraphKind::ring, GraphParams{6}, 0);
  heat_evolve(Vector::Ones(6), g, 1.0, 3);
  set_warning_handler(previous);
  CHECK(seen.size() == 1);
}

TEST_CASE("heat joint spectrum matches jft of the evolution") {
  CounterRng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{30, 0, 0, 5}, 100 + trial);
    const auto eig = eigendecompose(g);
    const Index T = 16 + 4 * trial;
    const double s = rng.uniform(0.01, 1.0) / g.lambda_max();
    const Vector x1 = rng.normal_matrix(30, 1).col(0);
    const JointSpectrum S = heat_joint_spectrum(x1, eig, s, T);
    CHECK(rel(S.coeffs, jft(heat_evolve(x1, g, s, T), eig).coeffs) <= 1e-8);
  }
}

TEST_CASE("heat spectrum at the a = 1 limit and s = 0") {
  const Graph g = generate_graph(GraphKind::ring, GraphParams{5}, 0);
  const auto eig = eigendecompose(g);
  const Index T = 8;
  const Vector x1 = Vector::LinSpaced(5, 1.0, 2.0);
  const JointSpectrum S = heat_joint_spectrum(x1, eig, 0.0, T);
  const Matrix constant = x1.replicate(1, T);
  CHECK(rel(S.coeffs, jft(constant, eig).coeffs) < 1e-12);
  // lambda = 0, k = 0: the geometric ratio is replaced by T.
  const double dc = gft(x1, eig)(0);
  CHECK(std::abs(S.coeffs(0, 0) - Complex(dc * T / std::sqrt(double(T)), 0.0)) < 1e-12);
}

TEST_CASE("wave kernel examples") {
  // s = 1, lambda = 2: tau = pi / 2, time kernel 1, 0, -1, 0, ...
  const Graph n1 = build_graph(std::vector<Edge>{}, 1);
  const auto eig1 = eigendecompose(n1);
  Vector x1 = Vector::Ones(1);
  CHECK(std::acos(1.0 - 1.0 * 2.0 / 2.0) == doctest::Approx(oracle::kPi / 2));

  const Index T = 8;
  for (Index k = 0; k < T; ++k) {
    const double w = 2.0 * oracle::kPi * double(k) / double(T);
    const Complex v = wave_kernel(0.0, w, 1.0, T);
    CHECK(std::abs(v - (k == 0 ? Complex(T) : Complex(0.0))) < 1e-10);
  }
  const Matrix W = wave_evolve(x1, eig1, 0.5, 6);
  for (Index t = 0; t < 6; ++t) CHECK(W(0, t) == doctest::Approx(1.0));
  CHECK_THROWS_AS(wave_kernel(2.0, 0.1, 2.5, T), NumericalError);
  CHECK_THROWS_AS(wave_kernel(-1.0, 0.1, 1.0, T), NumericalError);
}

TEST_CASE("wave closed form matches direct summation, resonances included") {
  CounterRng rng(11);
  const Index T = 8;
  int resonant = 0;
  for (int trial = 0; trial < 20; ++trial) {
    double lambda = rng.uniform(0.0, 4.0);
    const double s = 1.0;
    if (trial % 3 == 0) {
      // tau = 2 pi j / T makes T tau / 2 pi an integer.
      const double tau = 2.0 * oracle::kPi * double(trial % T) / double(T);
      lambda = 2.0 * (1.0 - std::cos(tau)) / s;
      ++resonant;
    }
    for (Index k = 0; k < T; ++k) {
      const double w = 2.0 * oracle::kPi * double(k) / double(T);
      const Complex ref = oracle::wave_direct_sum(lambda, w, s, T);
      CHECK(std::abs(wave_kernel(lambda, w, s, T) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
      CHECK(std::abs(wave_kernel(lambda, wrap_frequency(w), s, T) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
  CHECK(resonant >= 5);
  // Endpoints: lambda s = 0 and = 4 (tau = 0, tau = pi).
  for (double lambda : {0.0, 4.0})
    for (Index k = 0; k < T; ++k) {
      const double w = 2.0 * oracle::kPi * double(k) / double(T);
      CHECK(std::abs(wave_kernel(lambda, w, 1.0, T) - oracle::wave_direct_sum(lambda, w, 1.0, T)) < 1e-10);
    }
}

TEST_CASE("wave evolution: spectral and leapfrog agree, spectrum identity holds") {
  CounterRng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{30, 0, 0, 5}, 200 + trial);
    const auto eig = eigendecompose(g);
    const Index T = 32;
    const double s = rng.uniform(0.01, 3.9) / g.lambda_max();
    const Vector x1 = rng.normal_matrix(30, 1).col(0);
    const Matrix A = wave_evolve(x1, eig, s, T);
    const Matrix B = wave_evolve_iterative(x1, g, s, T);
    CHECK((A - B).norm() <= 1e-9 * A.norm());
    CHECK(rel(wave_joint_spectrum(x1, eig, s, T).coeffs, jft(B, eig).coeffs) <= 1e-8);
    // Per-mode bound |cos(t tau)| <= 1.
    const Matrix modes = gft(A, eig);
    const Vector x1t = gft(x1, eig);
    for (Index t = 0; t < T; ++t)
      for (Index l = 0; l < 30; ++l) CHECK(std::abs(modes(l, t)) <= std::abs(x1t(l)) + 1e-10);
  }
}

TEST_CASE("wave stability checks") {
  const Graph g = generate_graph(GraphKind::ring, GraphParams{6}, 0);
  const auto eig = eigendecompose(g);
  CHECK_THROWS_AS(wave_evolve_iterative(Vector::Ones(6), g, 4.0 / g.lambda_max(), 4), NumericalError);
  CHECK_THROWS_AS(wave_evolve(Vector::Ones(6), eig, 4.0 / eig.eigenvalues.maxCoeff(), 4), NumericalError);
  CHECK_THROWS_AS(PdeKernelSpec({PdeKind::wave, 1.1, 0.0, 8}).validate(4.0), ValidationError);
  CHECK_NOTHROW(PdeKernelSpec({PdeKind::heat, 1.1, 0.0, 8}).validate(4.0));
  CHECK_THROWS_AS(PdeKernelSpec({PdeKind::heat, 0.1, 0.0, 0}).validate(4.0), ValidationError);
  CHECK(parse_pde_kind("damped_wave") == PdeKind::damped_wave);
  CHECK_THROWS_AS(parse_pde_kind("sound"), ValidationError);
}

TEST_CASE("damped wave kernel") {
  const Index T = 16;
  const double rt = std::sqrt(double(T));
  const double beta = 0.7;
  const Complex v = damped_wave_kernel(0.0, 0.0, beta, T);
  const double expected = (std::exp(beta) - 1.0) / (2.0 * (std::cosh(beta) - 1.0)) / rt;
  CHECK(std::abs(v - expected) < 1e-12);

  for (double w : {0.0, 0.7, -2.0}) {
    const Complex a = damped_wave_kernel(1.0, w, 20.0, T);
    const Complex b = damped_wave_kernel(1.0, w, 30.0, T);
    CHECK(std::abs(a - b) < 1e-6);
    CHECK(std::abs(std::abs(b) - 1.0 / rt) < 1e-6);
  }
  CHECK_THROWS_WITH_AS(damped_wave_kernel(0.0, 0.0, 0.0, T), doctest::Contains("beta"), NumericalError);
}

TEST_CASE("damped wave kernel is the transform of a decaying cosine") {
  // sum_t r^t cos(t tau) e^{-j omega t} over an infinite horizon equals
  // sqrt(T) h; truncate where r^t is negligible.
  const double beta = 0.3, lambda = 1.2, w = 0.9;
  const double tau = std::acos(1.0 - lambda / 2.0);
  Complex acc = 0.0;
  for (int t = 0; t < 400; ++t)
    acc += std::exp(-beta * t) * std::cos(t * tau) * std::polar(1.0, -w * t);
  CHECK(std::abs(damped_wave_kernel(lambda, w, beta, 16) * 4.0 - acc) < 1e-10);
}

TEST_CASE("PDE named responses map an impulse to the evolution") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{20, 0, 0, 4}, 5);
  const auto eig = eigendecompose(g);
  const Index T = 16;
  CounterRng rng(13);
  const Vector x1 = rng.normal_matrix(20, 1).col(0);
  Matrix impulse = Matrix::Zero(20, T);
  impulse.col(0) = x1;
  const double s = 0.5 / g.lambda_max();

  const CMatrix H = filter_exact(impulse, named_response("heat", {{"s", s}, {"T", double(T)}}), eig);
  CHECK((H.real() - heat_evolve(x1, g, s, T)).norm() <= 1e-10 * x1.norm());

  const CMatrix W = filter_exact(impulse, named_response("wave", {{"s", 3 * s}, {"T", double(T)}}), eig);
  CHECK((W.real() - wave_evolve(x1, eig, 3 * s, T)).norm() <= 1e-10 * x1.norm());
}

}  // TEST_SUITE
