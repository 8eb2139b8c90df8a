#include <doctest.h>

#include "oracles.hpp"
#include "tvgsp/harmonic.hpp"
#include "tvgsp/rng.hpp"

using namespace tvgsp;

namespace {

Graph p2() { return build_graph(std::vector<Edge>{{0, 1, 1.0}}, 2); }

}  // namespace

TEST_SUITE("harmonic") {

TEST_CASE("dft examples") {
  const Matrix ones = Matrix::Ones(1, 4);
  const CMatrix F = dft(ones);
  CHECK(std::abs(F(0, 0) - Complex(2.0, 0.0)) < 1e-15);
  for (Index k = 1; k < 4; ++k) CHECK(std::abs(F(0, k)) < 1e-15);

  Matrix delta = Matrix::Zero(1, 2);
  delta(0, 0) = 1.0;
  const CMatrix D = dft(delta);
  CHECK(std::abs(D(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(D(0, 1) - 1.0 / std::sqrt(2.0)) < 1e-15);

  CounterRng rng(1);
  const Matrix X = rng.normal_matrix(3, 8);
  CHECK((idft(dft(X)) - X.cast<Complex>()).norm() <= 1e-12 * X.norm());
}

TEST_CASE("dft matches the explicit DFT matrix for every length") {
  CounterRng rng(2);
  for (Index T : {1, 2, 3, 5, 7, 8, 12, 17, 64}) {
    const Matrix X = rng.normal_matrix(4, T);
    const CMatrix ref = X.cast<Complex>() * oracle::dft_matrix(T);
    CHECK((dft(X) - ref).norm() <= 1e-12 * std::max(1.0, ref.norm()));
    CHECK(std::abs(dft(X).norm() - X.norm()) <= 1e-12 * X.norm());
  }
}

TEST_CASE("gft examples") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{20, 0, 0, 4}, 1);
  const auto eig = eigendecompose(g);
  const Matrix c = Matrix::Constant(20, 1, 3.0);
  const Matrix Gc = gft(c, eig);
  CHECK(std::abs(Gc(0, 0)) == doctest::Approx(c.norm()));
  CHECK(Gc.bottomRows(19).norm() < 1e-12);

  const Matrix u2 = eig.eigenvectors.col(1);
  const Matrix Gu = gft(u2, eig);
  CHECK(std::abs(Gu(1, 0) - 1.0) < 1e-12);
  CHECK(Gu.norm() == doctest::Approx(1.0));

  CounterRng rng(3);
  const Matrix X = rng.normal_matrix(20, 5);
  CHECK((igft(gft(X, eig), eig) - X).norm() <= 1e-12 * X.norm());
  CHECK(std::abs(gft(X, eig).norm() - X.norm()) <= 1e-12 * X.norm());
}

TEST_CASE("jft of a constant signal has one coefficient") {
  const Graph g = generate_graph(GraphKind::ring, GraphParams{4}, 0);
  const auto eig = eigendecompose(g);
  const Matrix X = Matrix::Ones(4, 4);
  const CMatrix S = jft(X, eig).coeffs;
  CHECK(std::abs(S(0, 0)) == doctest::Approx(X.norm()));
  CMatrix rest = S;
  rest(0, 0) = 0.0;
  CHECK(rest.norm() < 1e-12);
}

TEST_CASE("jft of a basis atom is a delta") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{12, 0, 0, 4}, 2);
  const auto eig = eigendecompose(g);
  const Index T = 10;
  const Index l = 3, k = 7;
  CMatrix atom(12, T);
  for (Index t = 0; t < T; ++t)
    atom.col(t) = eig.eigenvectors.col(l).cast<Complex>() *
                  std::polar(1.0 / std::sqrt(double(T)), 2.0 * oracle::kPi * double(k * t) / double(T));
  const CMatrix S = jft(atom, eig).coeffs;
  CHECK(std::abs(S(l, k) - 1.0) < 1e-12);
  CMatrix rest = S;
  rest(l, k) = 0.0;
  CHECK(rest.norm() < 1e-12);
}

TEST_CASE("jft against explicit matrices, order independence and Parseval") {
  CounterRng rng(4);
  const Graph g = generate_graph(GraphKind::erdos_renyi, GraphParams{16, 0, 0, 6, 0.3}, 4);
  const auto eig = eigendecompose(g);
  const auto ref_eig = oracle::dense_eig(oracle::dense_laplacian(g));
  const Matrix X = rng.normal_matrix(16, 12);
  const CMatrix S = jft(X, eig).coeffs;
  // Eigenvector signs may differ from the generic solver; compare magnitudes
  // after the basis change, which is sign invariant row by row.
  const CMatrix ref = ref_eig.vectors.transpose().cast<Complex>() * X.cast<Complex>() * oracle::dft_matrix(12);
  CHECK((S.cwiseAbs() - ref.cwiseAbs()).norm() <= 1e-10 * X.norm());

  const CMatrix a = gft(dft(X), eig);
  const CMatrix b = dft(gft(X, eig));
  CHECK((a - b).norm() <= 1e-12 * X.norm());
  CHECK((S - a).norm() <= 1e-12 * X.norm());
  CHECK(std::abs(S.norm() - X.norm()) <= 1e-10 * X.norm());
  CHECK((ijft_real(jft(X, eig), eig) - X).norm() <= 1e-10 * X.norm());
}

TEST_CASE("ijft examples") {
  const Graph g = p2();
  const auto eig = eigendecompose(g);
  CHECK(ijft(JointSpectrum{CMatrix::Zero(2, 2)}, eig).norm() == 0.0);

  JointSpectrum S{CMatrix::Zero(2, 2)};
  S.coeffs(0, 0) = 1.0;
  // u_1 = (1, 1) / sqrt 2 and the DC time atom is (1, 1) / sqrt 2.
  const Matrix X = ijft_real(S, eig);
  CHECK((X - Matrix::Constant(2, 2, 0.5)).norm() < 1e-15);

  JointSpectrum bad{CMatrix::Zero(2, 2)};
  bad.coeffs(0, 1) = Complex(0.0, 1.0);
  bad.coeffs(1, 1) = 1.0;
  CHECK_THROWS_AS(ijft_real(bad, eig), NumericalError);
  CHECK_THROWS_AS(ijft(JointSpectrum{CMatrix::Zero(3, 2)}, eig), ValidationError);
}

TEST_CASE("time Laplacian spectrum") {
  for (Index T : {1, 2, 3, 8, 31, 64}) {
    const Vector lt = time_laplacian_eigenvalues(T);
    CHECK(lt(0) == 0.0);
    for (Index k = 0; k < T; ++k) {
      CHECK(lt(k) >= 0.0);
      CHECK(lt(k) <= 4.0);
      CHECK(std::abs(lt(k) - lt((T - k) % T)) < 1e-12);
    }
    Vector dense = oracle::dense_eig(oracle::circulant_time_laplacian(T)).values;
    Vector sorted = lt;
    std::sort(sorted.data(), sorted.data() + T);
    CHECK((dense - sorted).norm() < 1e-12);
    CHECK((Matrix(time_laplacian(T)) - oracle::circulant_time_laplacian(T)).norm() == 0.0);
  }
}

TEST_CASE("frequency grids") {
  const Vector w = angular_frequencies(4);
  CHECK(w(1) == doctest::Approx(oracle::kPi / 2));
  const Vector s = signed_frequencies(4);
  CHECK(s(2) == doctest::Approx(oracle::kPi));
  CHECK(s(3) == doctest::Approx(-oracle::kPi / 2));
  CHECK(wrap_frequency(-oracle::kPi) == doctest::Approx(oracle::kPi));
  CHECK(wrap_frequency(3 * oracle::kPi) == doctest::Approx(oracle::kPi));
}

TEST_CASE("joint Laplacian equals the Kronecker sum") {
  CounterRng rng(5);
  for (auto [N, T] : {std::pair<Index, Index>{2, 2}, {4, 8}, {8, 16}, {16, 16}, {5, 7}}) {
    const Graph g = generate_graph(GraphKind::erdos_renyi, GraphParams{N, 0, 0, 6, 0.5}, N * 31 + T);
    const Matrix X = rng.normal_matrix(N, T);
    const Matrix J = oracle::kron_joint_laplacian(oracle::dense_laplacian(g), T);
    const Matrix ref = oracle::unvec(J * oracle::vec(X), N, T);
    CHECK((joint_laplacian_apply(X, g) - ref).norm() <= 1e-12 * std::max(1.0, ref.norm()));
  }
  const Graph g = p2();
  Matrix X(2, 2);
  X << 1, 0, 0, 0;
  const Matrix ref = oracle::unvec(oracle::kron_joint_laplacian(oracle::dense_laplacian(g), 2) * oracle::vec(X), 2, 2);
  CHECK((joint_laplacian_apply(X, g) - ref).norm() < 1e-15);
  CHECK(joint_laplacian_apply(Matrix::Ones(2, 2), g).norm() == 0.0);

  const Vector jev = oracle::dense_eig(oracle::kron_joint_laplacian(oracle::dense_laplacian(g), 2)).values;
  Vector expected(4);
  expected << 0, 2, 4, 6;
  CHECK((jev - expected).norm() < 1e-12);
}

TEST_CASE("joint gradient") {
  const Graph g = build_graph(std::vector<Edge>{{0, 1, 4.0}}, 2);
  Matrix X(2, 1);
  X << 1, 0;
  const JointGradient grad = joint_gradient(X, g);
  CHECK(grad.graph_part(0, 0) == doctest::Approx(2.0));

  const Graph c = generate_graph(GraphKind::knn_sensor, GraphParams{15, 0, 0, 4}, 8);
  const JointGradient z = joint_gradient(Matrix::Constant(15, 6, 2.5), c);
  CHECK(z.graph_part.norm() < 1e-14);
  CHECK(z.time_part.norm() < 1e-14);

  CounterRng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix Y = rng.normal_matrix(15, 6);
    const JointGradient gr = joint_gradient(Y, c);
    const double lhs = gr.graph_part.squaredNorm() + gr.time_part.squaredNorm();
    const double rhs = (Y.array() * joint_laplacian_apply(Y, c).array()).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
  }
}

TEST_CASE("gradient adjoints") {
  CounterRng rng(7);
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{12, 0, 0, 3}, 1);
  const Matrix X = rng.normal_matrix(12, 9);
  const Matrix E = rng.normal_matrix(g.num_edges(), 9);
  const Matrix D = rng.normal_matrix(12, 9);
  CHECK(std::abs((graph_gradient(X, g).array() * E.array()).sum() -
                 (X.array() * graph_gradient_adjoint(E, g).array()).sum()) < 1e-12);
  CHECK(std::abs((time_gradient(X).array() * D.array()).sum() -
                 (X.array() * time_gradient_adjoint(D).array()).sum()) < 1e-12);
}

TEST_CASE("variation norms") {
  const Graph g = generate_graph(GraphKind::ring, GraphParams{9}, 0);
  for (int p : {1, 2})
    for (int q : {1, 2}) CHECK(variation_norm(Matrix::Constant(9, 5, 1.5), g, p, q) == 0.0);

  CounterRng rng(8);
  const Matrix X = rng.normal_matrix(9, 5);
  const double quad = (X.array() * joint_laplacian_apply(X, g).array()).sum();
  CHECK(std::abs(variation_norm(X, g, 2, 2) - quad) <= 1e-10 * quad);

  double l1 = 0.0;
  for (const auto& e : g.edges())
    for (Index t = 0; t < 5; ++t) l1 += std::sqrt(e.weight) * std::abs(X(e.src, t) - X(e.dst, t));
  for (Index n = 0; n < 9; ++n)
    for (Index t = 0; t < 5; ++t) l1 += std::abs(X(n, (t + 1) % 5) - X(n, t));
  CHECK(std::abs(variation_norm(X, g, 1, 1) - l1) <= 1e-12 * l1);
  CHECK_THROWS_AS(variation_norm(X, g, 3, 1), ValidationError);
}

}  // TEST_SUITE
