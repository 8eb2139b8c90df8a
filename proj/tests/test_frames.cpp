#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "tvgsp/frames.hpp"
#include "tvgsp/rng.hpp"

using namespace tvgsp;

namespace {

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

// Three smooth kernels renormalized so that sum_z |h_z|^2 = 1 everywhere.
FilterBank tight_bank() {
  std::vector<JointKernel> raw{
      JointKernel::general("a", [](double l, double w) { return Complex(std::exp(-l) * (1.0 + std::cos(w)), 0.0); }),
      JointKernel::general("b", [](double l, double w) { return Complex(l * std::exp(-0.5 * l), std::sin(w)); }),
      JointKernel::general("c", [](double l, double) { return Complex(0.3 + 0.1 * l, 0.0); })};
  auto shared = std::make_shared<std::vector<JointKernel>>(raw);
  std::vector<JointKernel> out;
  for (std::size_t z = 0; z < raw.size(); ++z)
    out.push_back(JointKernel::general("t", [shared, z](double l, double w) {
      double e = 0.0;
      for (const auto& h : *shared) e += std::norm(h(l, w));
      return (*shared)[z](l, w) / std::sqrt(e);
    }));
  return make_bank(std::move(out));
}

Graph sensor_for_wavelets(std::uint64_t seed, Index n = 50) {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{n, 0, 0, 5}, seed);
  // Damped-wave kernels need lambda <= 2 for the arccos-based design.
  const double scale = 2.0 / g.lambda_max();
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.weight *= scale;
  return build_graph(edges, n).with_coordinates(*g.coordinates());
}

FilterBank stvwt_fixture(Index T) {
  std::vector<double> zl;
  for (int i = 1; i <= 10; ++i) zl.push_back(0.2 * i);
  const std::vector<double> zw{1.0};
  const auto mother = named_response("damped_wave", {{"beta", 0.2}, {"T", double(T)}});
  StvwtOptions opts;
  opts.require_admissible = false;
  return make_stvwt(mother, zl, zw, opts);
}

}  // namespace

TEST_SUITE("frames") {

TEST_CASE("localize examples") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{18, 0, 0, 4}, 2);
  const auto eig = eigendecompose(g);
  const Index T = 10;
  const CMatrix d = localize(JointKernel::constant(1.0), 4, 3, eig, T);
  CMatrix delta = CMatrix::Zero(18, T);
  delta(4, 3) = 1.0;
  CHECK((d - delta).norm() < 1e-12);

  const auto decay = [](double l) { return Complex(std::exp(-l), 0.0); };
  const auto hs = JointKernel::separable("g", decay, [](double) { return Complex(1.0, 0.0); });
  const CMatrix a = localize(hs, 4, 3, eig, T);
  CHECK(a.col(2).norm() < 1e-12);
  CHECK(a.col(4).norm() < 1e-12);
  const Vector atom = eig.eigenvectors * (eig.eigenvalues.array().exp().inverse().matrix().asDiagonal() *
                                          eig.eigenvectors.row(4).transpose());
  CHECK((a.col(3) - atom.cast<Complex>()).norm() < 1e-12);

  CHECK_THROWS_AS(localize(hs, 18, 0, eig, T), ValidationError);
  CHECK_THROWS_AS(localize(hs, 0, T, eig, T), ValidationError);
}

TEST_CASE("localize is time-translation covariant and matches the general path") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{14, 0, 0, 4}, 3);
  const auto eig = eigendecompose(g);
  const Index T = 12;
  CounterRng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = rng.uniform(0.2, 2.0), b = rng.uniform(-1.0, 1.0);
    const auto h = JointKernel::general("r", [a, b](double l, double w) {
      return Complex(std::exp(-a * l) * std::cos(w + b), std::sin(a * w) * l);
    });
    const Index m = static_cast<Index>(rng.index(14));
    const Index tau = static_cast<Index>(rng.index(T));
    const CMatrix base = localize(h, m, tau, eig, T);
    const CMatrix next = localize(h, m, (tau + 1) % T, eig, T);
    CMatrix shifted(14, T);
    for (Index t = 0; t < T; ++t) shifted.col((t + 1) % T) = base.col(t);
    CHECK((next - shifted).norm() <= 1e-10 * base.norm());
  }
  const auto sep = JointKernel::separable(
      "s", [](double l) { return Complex(1.0 / (1.0 + l), 0.0); }, [](double w) { return Complex(std::cos(w), 0.5 * std::sin(w)); });
  const auto gen = JointKernel::general("s", [sep](double l, double w) { return sep(l, w); });
  CHECK((localize(sep, 2, 5, eig, T) - localize(gen, 2, 5, eig, T)).norm() < 1e-12);
}

TEST_CASE("itersine windows partition the spectrum") {
  const double lmax = 7.3;
  const Index count = 5;
  const auto shifts = uniform_shifts(count, lmax);
  CHECK(shifts.front() == 0.0);
  CHECK(shifts.back() == doctest::Approx(lmax));
  const auto window = itersine_window(lmax / double(count - 1));
  double lo = 1e9, hi = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double l = lmax * i / 511.0;
    double s = 0.0;
    for (double z : shifts) s += std::norm(window(l - z));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(hi <= lo * 1.05);
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stvft lattice arithmetic") {
  StvftConfig cfg;
  cfg.graph_window = itersine_window(1.0);
  cfg.lambda_shifts = {0.0, 1.0, 2.0};
  cfg.time_window = Vector::Ones(16);
  cfg.redundancy = 2;
  const FilterBank bank = make_stvft(cfg, 64);
  CHECK(bank.size() == 3 * 16);
  CHECK(bank.time_lattice.size() == 8);
  CHECK(bank.time_lattice[1] == 8);
  CHECK_FALSE(frame_bounds(bank, eigendecompose(generate_graph(GraphKind::ring, GraphParams{5}, 0)), 64).certified);

  cfg.redundancy = 3;
  CHECK_THROWS_AS(make_stvft(cfg, 64), ValidationError);
  cfg.redundancy = 1;
  cfg.time_window = Vector::Ones(70);
  CHECK_THROWS_AS(make_stvft(cfg, 64), ValidationError);
}

TEST_CASE("degenerate stvft reduces to joint filtering") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{10, 0, 0, 3}, 5);
  const auto eig = eigendecompose(g);
  const Index T = 8;
  StvftConfig cfg;
  cfg.graph_window = [](double l) { return Complex(std::exp(-l * l), 0.0); };
  cfg.lambda_shifts = {0.0};
  cfg.time_window = Vector::Zero(1);
  cfg.time_window(0) = 1.0;
  cfg.redundancy = 1;
  const FilterBank bank = make_stvft(cfg, T);
  REQUIRE(bank.size() == 1);
  CounterRng rng(6);
  const Matrix X = rng.normal_matrix(10, T);
  const CoefficientTensor C = analyze(bank, X, g, FilterRoute::exact(eig));
  const auto hg = JointKernel::separable("w", cfg.graph_window, [](double) { return Complex(1.0, 0.0); });
  CHECK(rel(C.coeffs[0], filter_exact(X, hg, eig)) < 1e-12);
}

TEST_CASE("stvft coefficients match the brute-force double sum") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{16, 0, 0, 4}, 7);
  const auto eig = eigendecompose(g);
  const auto dense = oracle::dense_eig(oracle::dense_laplacian(g));
  const Index T = 16;
  Vector w(4);
  w << 0.2, 0.7, 1.0, 0.4;
  StvftConfig cfg;
  cfg.graph_window = itersine_window(g.lambda_max() / 3.0);
  cfg.lambda_shifts = uniform_shifts(4, g.lambda_max());
  cfg.time_window = w;
  cfg.redundancy = 1;
  cfg.subsample_time = false;
  const FilterBank bank = make_stvft(cfg, T);
  CounterRng rng(8);
  const Matrix X = rng.normal_matrix(16, T);
  const CoefficientTensor C = analyze(bank, X, g, FilterRoute::exact(eig));
  const auto gw = cfg.graph_window;
  const Index c = (w.size() - 1) / 2;
  auto mother = [&](double l, double om) {
    Complex ht = 0.0;
    for (Index t = 0; t < w.size(); ++t) ht += w(t) * std::polar(1.0, -om * double(t - c));
    return gw(l) * ht;
  };
  double worst = 0.0;
  for (Index z = 0; z < bank.size(); ++z) {
    const auto [zl, zw] = bank.lattice[z];
    for (Index m = 0; m < 16; m += 3)
      for (Index tau = 0; tau < T; tau += 5)
        worst = std::max(worst, std::abs(C.coeffs[z](m, tau) - oracle::stvft_double_sum(mother, zl, zw, X, dense, m, tau)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("subsampled stvft keeps the lattice columns") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{12, 0, 0, 4}, 9);
  const auto eig = eigendecompose(g);
  StvftConfig cfg;
  cfg.graph_window = itersine_window(g.lambda_max() / 2.0);
  cfg.lambda_shifts = uniform_shifts(3, g.lambda_max());
  cfg.time_window = Vector::Ones(8) / std::sqrt(8.0);
  cfg.redundancy = 2;
  const FilterBank sub = make_stvft(cfg, 32);
  cfg.subsample_time = false;
  const FilterBank full = make_stvft(cfg, 32);
  CounterRng rng(10);
  const Matrix X = rng.normal_matrix(12, 32);
  const auto cs = analyze(sub, X, g, FilterRoute::exact(eig));
  const auto cf = analyze(full, X, g, FilterRoute::exact(eig));
  for (Index z = 0; z < sub.size(); ++z) {
    REQUIRE(cs.coeffs[z].cols() == 8);
    for (Index j = 0; j < 8; ++j) CHECK((cs.coeffs[z].col(j) - cf.coeffs[z].col(sub.time_lattice[j])).norm() < 1e-14);
  }
  CHECK_THROWS_AS(synthesize(sub, cs, g, FilterRoute::exact(eig)), ValidationError);
}

TEST_CASE("stvwt construction") {
  const auto mexican = JointKernel::general("mh", [](double l, double w) {
    return Complex(l * std::exp(-l) * std::exp(-w * w), 0.0);
  });
  const std::vector<double> one{1.0};
  const FilterBank single = make_stvwt(mexican, one, one);
  REQUIRE(single.size() == 1);
  CHECK(single.kernels[0](0.7, 0.3) == mexican(0.7, 0.3));

  const auto bad = named_response("damped_wave", {{"beta", 0.2}, {"T", 16.0}});
  CHECK_THROWS_AS(make_stvwt(bad, one, one), ValidationError);
  StvwtOptions cover;
  cover.dc_cover = JointKernel::general("phi", [](double l, double) { return Complex(std::exp(-l), 0.0); });
  CHECK(make_stvwt(bad, one, one, cover).size() == 2);

  const FilterBank fixture = stvwt_fixture(16);
  CHECK(fixture.size() == 10);
  CHECK(fixture.lattice[3].first == doctest::Approx(0.8));
  CHECK(fixture.kernels[3](0.5, 0.2) == bad.dilated(0.8, 1.0)(0.5, 0.2));
}

TEST_CASE("frame bound examples") {
  const Graph g = generate_graph(GraphKind::ring, GraphParams{6}, 0);
  const auto eig = eigendecompose(g);
  const auto one = make_bank({JointKernel::constant(1.0)});
  const auto b1 = frame_bounds(one, eig, 8);
  CHECK(b1.lower == 1.0);
  CHECK(b1.upper == 1.0);
  const auto two = make_bank({JointKernel::constant(1.0), JointKernel::constant(1.0)});
  const auto b2 = frame_bounds(two, eig, 8);
  CHECK(b2.lower == 2.0);
  CHECK(b2.upper == 2.0);
  CHECK(b2.certified);
}

TEST_CASE("stvwt fixture: frame sandwich, adjointness and dual reconstruction") {
  const Graph g = sensor_for_wavelets(21);
  const auto eig = eigendecompose(g);
  const Index T = 16;
  const FilterBank bank = stvwt_fixture(T);
  const FrameBounds fb = frame_bounds(bank, eig, T);
  CHECK(fb.lower > 0.0);
  CHECK(fb.lower <= fb.upper);
  const FilterRoute route = FilterRoute::exact(eig);

  CounterRng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix X = rng.normal_matrix(50, T);
    const double e = analyze(bank, X, g, route).squared_norm();
    const double x2 = X.squaredNorm();
    const double eps = 1e-8 * fb.upper * x2;
    CHECK(e >= fb.lower * x2 - eps);
    CHECK(e <= fb.upper * x2 + eps);
  }

  const Matrix X = rng.normal_matrix(50, T);
  CoefficientTensor C;
  for (Index z = 0; z < bank.size(); ++z) C.coeffs.push_back(rng.normal_matrix(50, T).cast<Complex>() + Complex(0, 1) * rng.normal_matrix(50, T).cast<Complex>());
  const Complex lhs = analyze(bank, X, g, route).inner(C);
  const Complex rhs = synthesize(bank, C, g, route).reshaped().dot(X.cast<Complex>().reshaped());
  // <A x, C> = <x, A^H C>; Eigen's dot conjugates its first argument.
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));

  const FilterBank dual = canonical_dual(bank, eig, T);
  double worst = 0.0;
  for (Index l = 0; l < eig.size(); ++l)
    for (Index k = 0; k < T; ++k) {
      const double w = signed_frequencies(T)(k);
      Complex s = 0.0;
      for (Index z = 0; z < bank.size(); ++z)
        s += dual.kernels[z](eig.eigenvalues(l), w) * std::conj(bank.kernels[z](eig.eigenvalues(l), w));
      worst = std::max(worst, std::abs(s - 1.0));
    }
  CHECK(worst <= 1e-10);
  const CMatrix back = synthesize(dual, analyze(bank, X, g, route), g, route);
  CHECK(rel(back, X.cast<Complex>()) <= 1e-8);
}

TEST_CASE("tight banks") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{20, 0, 0, 4}, 11);
  const auto eig = eigendecompose(g);
  const Index T = 12;
  const FilterBank bank = tight_bank();
  const auto fb = frame_bounds(bank, eig, T);
  CHECK(fb.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fb.upper == doctest::Approx(1.0).epsilon(1e-12));
  CounterRng rng(12);
  const Matrix X = rng.normal_matrix(20, T);
  const auto route = FilterRoute::exact(eig);
  const CoefficientTensor C = analyze(bank, X, g, route);
  CHECK(std::abs(C.squared_norm() - X.squaredNorm()) <= 1e-8 * X.squaredNorm());
  CHECK(rel(synthesize(bank, C, g, route), X.cast<Complex>()) <= 1e-8);

  // Dual of a tight bank with bound c is the bank scaled by 1 / c.
  std::vector<JointKernel> doubled;
  for (const auto& h : bank.kernels) doubled.push_back(h.scaled(std::sqrt(2.0)));
  const FilterBank b2 = make_bank(doubled);
  const FilterBank d2 = canonical_dual(b2, eig, T);
  for (Index z = 0; z < b2.size(); ++z)
    CHECK(std::abs(d2.kernels[z](1.3, 0.4) - b2.kernels[z](1.3, 0.4) / 2.0) < 1e-12);

  // Single kernel without zeros: exact round trip.
  const auto single = make_bank({JointKernel::general("e", [](double l, double w) { return Complex(1.0 + l, 0.5 * w); })});
  const auto sd = canonical_dual(single, eig, T);
  CHECK(rel(synthesize(sd, analyze(single, X, g, route), g, route), X.cast<Complex>()) <= 1e-10);

  CoefficientTensor zero;
  for (Index z = 0; z < bank.size(); ++z) zero.coeffs.push_back(CMatrix::Zero(20, T));
  CHECK(synthesize(bank, zero, g, route).norm() == 0.0);
}

TEST_CASE("identity bank and routes") {
  const Graph g = generate_graph(GraphKind::knn_sensor, GraphParams{30, 0, 0, 5}, 13);
  const auto eig = eigendecompose(g);
  CounterRng rng(14);
  const Matrix X = rng.normal_matrix(30, 16);
  const auto id = make_bank({JointKernel::constant(1.0)});
  CHECK(rel(analyze(id, X, g, FilterRoute::exact(eig)).coeffs[0], X.cast<Complex>()) < 1e-12);

  const FilterBank bank = tight_bank();
  const auto ce = analyze(bank, X, g, FilterRoute::exact(eig));
  const auto cf = analyze(bank, X, g, FilterRoute::chebyshev(50));
  for (Index z = 0; z < bank.size(); ++z) CHECK(rel(cf.coeffs[z], ce.coeffs[z]) <= 1e-6);
  CHECK(rel(synthesize(bank, cf, g, FilterRoute::chebyshev(50)), synthesize(bank, cf, g, FilterRoute::exact(eig))) <= 1e-6);
}

TEST_CASE("canonical dual rejects non-frames") {
  const Graph g = generate_graph(GraphKind::ring, GraphParams{6}, 0);
  const auto eig = eigendecompose(g);
  const auto hp = make_bank({JointKernel::general("hp", [](double l, double) { return Complex(l, 0.0); })});
  CHECK_THROWS_WITH_AS(canonical_dual(hp, eig, 8), doctest::Contains("l=0"), NumericalError);
}

}  // TEST_SUITE
