// tvgsp: command-line front end for the time-vertex signal processing library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvgsp/compaction.hpp"
#include "tvgsp/diagnostics.hpp"
#include "tvgsp/dynamics.hpp"
#include "tvgsp/filtering.hpp"
#include "tvgsp/frames.hpp"
#include "tvgsp/graph.hpp"
#include "tvgsp/harmonic.hpp"
#include "tvgsp/io.hpp"
#include "tvgsp/parallel.hpp"
#include "tvgsp/rng.hpp"
#include "tvgsp/solvers.hpp"

namespace {

using namespace tvgsp;
using io::format_double;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct GraphArgs {
  std::string edges;
  std::string coords;
};

void add_graph_options(CLI::App* cmd, GraphArgs& args) {
  cmd->add_option("--graph", args.edges, "Edge list CSV (src,dst,weight)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--coords", args.coords, "Vertex coordinates CSV (x,y)")->check(CLI::ExistingFile);
}

// Signals may name vertices beyond the last edge endpoint; their row count
// fixes N.
Graph load(const GraphArgs& args, Index num_vertices = 0) {
  return io::load_graph(args.edges, args.coords, num_vertices);
}

void check_rows(const Matrix& X, const Graph& g, const char* what) {
  if (X.rows() != g.num_vertices())
    throw ValidationError(std::string(what) + " has " + std::to_string(X.rows()) + " rows, graph has " +
                          std::to_string(g.num_vertices()) + " vertices");
}

KernelParams parse_params(const std::vector<std::string>& items) {
  KernelParams params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--param expects key=value, got '" + item + "'");
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw ValidationError("--param " + item + ": value is not a number");
    params[item.substr(0, eq)] = v;
  }
  return params;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ValidationError(std::string(flag) + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Fills graph-dependent defaults: lambda_max for wave_gauss (scaled by
// lmax_scale) and T for the PDE kernels.
JointKernel kernel_for(const std::string& name, KernelParams params, const Graph& g, Index T) {
  if ((name == "wave_gauss" || name == "wave_approx") && !params.count("lambda_max")) {
    const double scale = params.count("lmax_scale") ? params["lmax_scale"] : 1.0;
    params["lambda_max"] = scale * g.lambda_max();
  }
  if ((name == "heat" || name == "wave" || name == "damped_wave") && !params.count("T"))
    params["T"] = static_cast<double>(T);
  if ((name == "lowpass_sigmoid" || name == "lp") && !params.count("lambda_cf"))
    params["lambda_cf"] = 0.25 * g.lambda_max();
  if ((name == "lowpass_sigmoid" || name == "lp") && !params.count("omega_cf")) params["omega_cf"] = 0.5;
  return named_response(name, params);
}

CMatrix run_filter(const std::string& method, const Matrix& X, const JointKernel& h, const Graph& g,
                   Index order, Index order_time, const std::optional<GraphEigensystem>& eig) {
  if (method == "exact") return filter_exact(X, h, *eig);
  if (method == "ffc") return filter_ffc(X, h, g, order);
  if (method == "cheby2d") return filter_cheby2d(X, h, g, order, order_time > 0 ? order_time : order);
  if (method == "separable") return filter_separable(X, h, g, order);
  throw ValidationError("unknown filter method '" + method + "' (exact, ffc, cheby2d, separable)");
}

FilterRoute make_route(const std::string& method, Index order, const std::optional<GraphEigensystem>& eig) {
  if (method == "exact") return FilterRoute::exact(*eig);
  if (method == "ffc") return FilterRoute::chebyshev(order);
  throw ValidationError("unknown route '" + method + "' (exact, ffc)");
}

struct Cli {
  std::uint64_t seed = 0;
  int threads = -1;
  std::string report_path;
  io::RunReport report;
  Stopwatch clock;

  void stage(const std::string& name) { report.timings_ms[name] = clock.lap_ms(); }
  void output(const std::string& path) { report.outputs.push_back(path); }

  void emit_report() const {
    const std::string text = report.to_json().dump(2) + "\n";
    if (report_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(report_path, std::ios::trunc);
      if (!out) throw ValidationError("cannot open '" + report_path + "' for writing");
      out << text;
    }
  }
};

std::string num(double v) { return format_double(v); }

// --- subcommands ------------------------------------------------------------

void register_graph_gen(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("graph-gen", "Generate a synthetic graph");
  struct Args {
    std::string kind = "knn_sensor";
    Index n = 100, rows = 0, cols = 0, k = 6;
    double probability = 0.1, sigma = 0.0;
    std::string out, coords;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--kind", args->kind, "path, ring, grid2d, knn_sensor, erdos_renyi")->capture_default_str();
  cmd->add_option("--n", args->n, "Number of vertices")->capture_default_str();
  cmd->add_option("--rows", args->rows, "grid2d rows");
  cmd->add_option("--cols", args->cols, "grid2d columns");
  cmd->add_option("--k", args->k, "knn_sensor neighbours")->capture_default_str();
  cmd->add_option("--p", args->probability, "erdos_renyi edge probability")->capture_default_str();
  cmd->add_option("--sigma", args->sigma, "knn_sensor kernel width, 0 = mean k-NN distance");
  cmd->add_option("--out", args->out, "Output edge list CSV")->required();
  cmd->add_option("--coords-out", args->coords, "Output coordinates CSV");
  cmd->callback([args, &cli] {
    GraphParams p{args->n, args->rows, args->cols, args->k, args->probability, args->sigma};
    const Graph g = generate_graph(parse_graph_kind(args->kind), p, cli.seed);
    cli.stage("generate");
    io::write_edge_list(args->out, g);
    cli.output(args->out);
    if (!args->coords.empty()) {
      if (!g.coordinates()) throw ValidationError("graph kind '" + args->kind + "' has no coordinates");
      io::write_coordinates(args->coords, *g.coordinates());
      cli.output(args->coords);
    }
    cli.stage("write");
    cli.report.parameters = {{"kind", args->kind}, {"seed", std::to_string(cli.seed)}};
    cli.report.metrics = {{"num_vertices", double(g.num_vertices())},
                          {"num_edges", double(g.num_edges())},
                          {"lambda_max_bound", g.lambda_max()}};
  });
}

void register_transform(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("transform", "Joint (or graph / time) Fourier transform");
  struct Args {
    GraphArgs graph;
    std::string signal, spectrum, out, domain = "joint";
    bool inverse = false;
  };
  auto args = std::make_shared<Args>();
  add_graph_options(cmd, args->graph);
  cmd->add_option("--signal", args->signal, "Input signal (forward) or spectrum CSV (inverse)")->required();
  cmd->add_option("--out", args->out, "Output spectrum CSV (forward) or signal (inverse)")->required();
  cmd->add_option("--domain", args->domain, "joint, graph or time")->capture_default_str();
  cmd->add_flag("--inverse", args->inverse, "Invert a spectrum back to a real signal");
  cmd->callback([args, &cli] {
    const auto& d = args->domain;
    if (d != "joint" && d != "graph" && d != "time") throw ValidationError("unknown domain '" + d + "'");
    if (!args->inverse) {
      const Matrix X = io::read_signal(args->signal);
      const Graph g = load(args->graph, X.rows());
      check_rows(X, g, "signal");
      cli.stage("read");
      JointSpectrum S;
      if (d == "time") {
        S.coeffs = dft(X);
      } else {
        const GraphEigensystem eig = eigendecompose(g);
        cli.stage("eigendecompose");
        S = d == "joint" ? jft(X, eig) : JointSpectrum{gft(X, eig).cast<Complex>()};
      }
      cli.stage("transform");
      io::write_spectrum(args->out, S);
      cli.report.metrics["signal_norm"] = X.norm();
      cli.report.metrics["spectrum_norm"] = S.coeffs.norm();
    } else {
      const JointSpectrum S = io::read_spectrum(args->signal);
      const Graph g = load(args->graph, S.coeffs.rows());
      check_rows(Matrix::Zero(S.coeffs.rows(), 0), g, "spectrum");
      cli.stage("read");
      Matrix X;
      if (d == "time") {
        X = checked_real(idft(S.coeffs));
      } else {
        const GraphEigensystem eig = eigendecompose(g);
        cli.stage("eigendecompose");
        X = d == "joint" ? ijft_real(S, eig) : checked_real(igft(S.coeffs, eig));
      }
      cli.stage("transform");
      io::write_signal(args->out, X);
      cli.report.metrics["signal_norm"] = X.norm();
    }
    cli.output(args->out);
    cli.report.parameters = {{"domain", d}, {"inverse", args->inverse ? "true" : "false"}};
  });
}

void register_dynamics(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("dynamics", "Evolve heat / wave dynamics from an initial condition");
  struct Args {
    GraphArgs graph;
    std::string kind = "heat", x1, out, spectrum;
    double s = 0.1, beta = 0.0;
    Index T = 64;
  };
  auto args = std::make_shared<Args>();
  add_graph_options(cmd, args->graph);
  cmd->add_option("--kind", args->kind, "heat, wave or damped_wave")->capture_default_str();
  cmd->add_option("--s", args->s, "Diffusivity (heat) or speed (wave)")->capture_default_str();
  cmd->add_option("--beta", args->beta, "Damping (damped_wave)")->capture_default_str();
  cmd->add_option("--T", args->T, "Number of time samples")->capture_default_str();
  cmd->add_option("--x1", args->x1, "Initial condition, N x 1 signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args->out, "Output N x T signal")->required();
  cmd->add_option("--emit-spectrum", args->spectrum, "Also write the closed-form joint spectrum CSV");
  cmd->callback([args, &cli] {
    const Matrix x1m = io::read_signal(args->x1);
    if (x1m.cols() != 1) throw ValidationError("--x1 must have exactly one column");
    const Vector x1 = x1m.col(0);
    const Graph g = load(args->graph, x1.size());
    check_rows(x1m, g, "x1");
    const PdeKind kind = parse_pde_kind(args->kind);
    PdeKernelSpec{kind, args->s, args->beta, args->T}.validate(g.lambda_max());
    cli.stage("read");

    Matrix X;
    std::optional<GraphEigensystem> eig;
    if (kind == PdeKind::heat) {
      X = heat_evolve(x1, g, args->s, args->T);
    } else if (kind == PdeKind::wave) {
      X = wave_evolve_iterative(x1, g, args->s, args->T);
    } else {
      eig = eigendecompose(g);
      Matrix impulse = Matrix::Zero(g.num_vertices(), args->T);
      impulse.col(0) = x1;
      const JointKernel h = named_response("damped_wave", {{"beta", args->beta}, {"T", double(args->T)}});
      X = checked_real(filter_exact(impulse, h, *eig), 1e-8);
    }
    cli.stage("evolve");
    io::write_signal(args->out, X);
    cli.output(args->out);

    if (!args->spectrum.empty()) {
      if (!eig) eig = eigendecompose(g);
      JointSpectrum S;
      if (kind == PdeKind::heat)
        S = heat_joint_spectrum(x1, *eig, args->s, args->T);
      else if (kind == PdeKind::wave)
        S = wave_joint_spectrum(x1, *eig, args->s, args->T);
      else
        S = jft(X, *eig);
      io::write_spectrum(args->spectrum, S);
      cli.output(args->spectrum);
      cli.report.metrics["spectrum_mismatch"] = (S.coeffs - jft(X, *eig).coeffs).norm() / S.coeffs.norm();
    }
    cli.stage("write");
    cli.report.parameters = {{"kind", args->kind}, {"s", num(args->s)}, {"beta", num(args->beta)},
                             {"T", std::to_string(args->T)}};
    cli.report.metrics["signal_norm"] = X.norm();
  });
}

void register_filter(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("filter", "Apply a joint filter h(L_G, L_T)");
  struct Args {
    GraphArgs graph;
    std::string signal, out, kernel, method = "ffc";
    std::vector<std::string> params;
    Index order = 30, order_time = 0;
  };
  auto args = std::make_shared<Args>();
  add_graph_options(cmd, args->graph);
  cmd->add_option("--signal", args->signal, "Input N x T signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--kernel", args->kernel,
                  "lowpass_sigmoid (lp), wave_gauss, tikhonov, heat, wave, damped_wave")->required();
  cmd->add_option("--param", args->params, "Kernel parameter key=value (repeatable)");
  cmd->add_option("--method", args->method, "exact, ffc, cheby2d or separable")->capture_default_str();
  cmd->add_option("--order", args->order, "Chebyshev order (graph)")->capture_default_str();
  cmd->add_option("--order-time", args->order_time, "cheby2d time order, 0 = same as --order");
  cmd->add_option("--out", args->out, "Output signal (.bin for binary)")->required();
  cmd->callback([args, &cli] {
    const Matrix X = io::read_signal(args->signal);
    const Graph g = load(args->graph, X.rows());
    check_rows(X, g, "signal");
    const JointKernel h = kernel_for(args->kernel, parse_params(args->params), g, X.cols());
    cli.stage("read");
    std::optional<GraphEigensystem> eig;
    if (args->method == "exact") {
      eig = eigendecompose(g);
      cli.stage("eigendecompose");
    }
    const CMatrix Y = run_filter(args->method, X, h, g, args->order, args->order_time, eig);
    cli.stage("filter");
    const Matrix Yr = Y.real();
    io::write_signal(args->out, Yr);
    cli.output(args->out);
    cli.stage("write");
    cli.report.parameters = {{"kernel", args->kernel}, {"method", args->method},
                             {"order", std::to_string(args->order)}};
    for (const auto& [k, v] : h.params()) cli.report.parameters["kernel." + k] = num(v);
    cli.report.metrics["output_norm"] = Yr.norm();
    cli.report.metrics["discarded_imag_norm"] = Y.imag().norm();
  });
}

void register_filter_bench(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("filter-bench", "Accuracy / time table of the filtering methods");
  struct Args {
    GraphArgs graph;
    std::string kernels = "lp,wave", orders = "5,10,20,40", methods = "exact,ffc,cheby2d", emit;
    Index n = 200, T = 128, k = 6;
  };
  auto args = std::make_shared<Args>();
  cmd->add_option("--graph", args->graph.edges, "Edge list CSV; default: seeded kNN sensor graph")
      ->check(CLI::ExistingFile);
  cmd->add_option("--n", args->n, "Sensor graph size when --graph is absent")->capture_default_str();
  cmd->add_option("--k", args->k, "Sensor graph neighbours")->capture_default_str();
  cmd->add_option("--T", args->T, "Number of time samples")->capture_default_str();
  cmd->add_option("--kernels", args->kernels, "lp (lowpass_sigmoid) and/or wave (wave_gauss)")
      ->capture_default_str();
  cmd->add_option("--orders", args->orders, "Comma-separated orders (M_G = M_T)")->capture_default_str();
  cmd->add_option("--methods", args->methods, "Subset of exact, ffc, cheby2d, separable")->capture_default_str();
  cmd->add_option("--emit", args->emit, "Output CSV")->required();
  cmd->callback([args, &cli] {
    const Graph g = args->graph.edges.empty()
                        ? generate_graph(GraphKind::knn_sensor, GraphParams{args->n, 0, 0, args->k}, cli.seed)
                        : load(args->graph);
    CounterRng rng(cli.seed);
    const Matrix X = rng.normal_matrix(g.num_vertices(), args->T);
    const std::optional<GraphEigensystem> eig = eigendecompose(g);
    cli.stage("setup");

    std::vector<Index> orders;
    for (double o : parse_list(args->orders, "--orders")) {
      if (o < 0 || o != std::floor(o)) throw ValidationError("--orders must be non-negative integers");
      orders.push_back(static_cast<Index>(o));
    }
    const auto methods = split_names(args->methods);
    for (const auto& m : methods)
      if (m != "exact" && m != "ffc" && m != "cheby2d" && m != "separable")
        throw ValidationError("unknown method '" + m + "'");

    std::ofstream out(args->emit, std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + args->emit + "' for writing");
    out << "kernel,method,order,rel_error,wall_ms\n";
    for (const auto& name : split_names(args->kernels)) {
      std::string full;
      if (name == "lp" || name == "lowpass_sigmoid")
        full = "lowpass_sigmoid";
      else if (name == "wave" || name == "wave_gauss")
        full = "wave_gauss";
      else
        throw ValidationError("filter-bench kernels are lp and wave, got '" + name + "'");
      const JointKernel h = kernel_for(full, {}, g, args->T);
      const CMatrix ref = filter_exact(X, h, *eig);
      const double ref_norm = ref.norm();
      for (const auto& m : methods) {
        if (m == "separable" && !h.is_separable()) {
          warn("filter-bench: skipping separable method for non-separable kernel '" + name + "'");
          continue;
        }
        for (Index order : orders) {
          if (m == "exact" && order != orders.front()) continue;
          Stopwatch sw;
          const CMatrix Y = run_filter(m, X, h, g, order, order, eig);
          const double ms = sw.lap_ms();
          out << name << ',' << m << ',' << (m == "exact" ? 0 : order) << ','
              << format_double((Y - ref).norm() / ref_norm) << ',' << format_double(ms) << '\n';
        }
      }
    }
    cli.output(args->emit);
    cli.stage("bench");
    cli.report.parameters = {{"kernels", args->kernels}, {"orders", args->orders},
                             {"methods", args->methods}, {"T", std::to_string(args->T)},
                             {"seed", std::to_string(cli.seed)}};
    cli.report.metrics["num_vertices"] = double(g.num_vertices());
  });
}

struct BankArgs {
  GraphArgs graph;
  std::string bank;
  Index T = 0;
  std::string route = "exact";
  Index order = 50;
};

void add_bank_options(CLI::App* cmd, BankArgs& args) {
  add_graph_options(cmd, args.graph);
  cmd->add_option("--bank", args.bank, "Bank spec JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--route", args.route, "exact or ffc filtering")->capture_default_str();
  cmd->add_option("--order", args.order, "Chebyshev order for --route ffc")->capture_default_str();
}

void register_frame_build(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("frame-build", "Build a filter bank and report its frame bounds");
  auto args = std::make_shared<BankArgs>();
  auto out_holder = std::make_shared<std::string>();
  add_bank_options(cmd, *args);
  cmd->add_option("--T", args->T, "Number of time samples")->required();
  cmd->add_option("--out", *out_holder, "Write the resolved bank description JSON");
  cmd->callback([args, out_holder, &cli] {
    const Graph g = load(args->graph);
    const auto spec = io::read_json(args->bank);
    const FilterBank bank = io::bank_from_json(spec, g, args->T);
    cli.stage("build");
    const GraphEigensystem eig = eigendecompose(g);
    const FrameBounds fb = frame_bounds(bank, eig, args->T);
    cli.stage("bounds");
    cli.report.parameters = {{"kind", std::string(to_string(bank.kind))}, {"T", std::to_string(args->T)}};
    cli.report.metrics = {{"num_kernels", double(bank.size())},
                          {"frame_lower", fb.lower},
                          {"frame_upper", fb.upper},
                          {"certified", fb.certified ? 1.0 : 0.0}};
    if (!out_holder->empty()) {
      nlohmann::json doc = spec;
      doc["resolved"] = {{"num_kernels", bank.size()},
                         {"frame_lower", fb.lower},
                         {"frame_upper", fb.upper},
                         {"certified", fb.certified},
                         {"lattice", bank.lattice},
                         {"time_lattice", bank.time_lattice},
                         {"vertex_lattice", bank.vertex_lattice}};
      io::write_json(*out_holder, doc);
      cli.output(*out_holder);
    }
  });
}

void register_analyze(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("analyze", "Frame analysis C_z = h_z(L_G, L_T) X");
  auto args = std::make_shared<BankArgs>();
  auto io_paths = std::make_shared<std::pair<std::string, std::string>>();
  add_bank_options(cmd, *args);
  cmd->add_option("--signal", io_paths->first, "Input N x T signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", io_paths->second, "Output coefficient tensor (TVCF binary)")->required();
  cmd->callback([args, io_paths, &cli] {
    const Matrix X = io::read_signal(io_paths->first);
    const Graph g = load(args->graph, X.rows());
    check_rows(X, g, "signal");
    const FilterBank bank = io::bank_from_json(io::read_json(args->bank), g, X.cols());
    std::optional<GraphEigensystem> eig;
    if (args->route == "exact") eig = eigendecompose(g);
    cli.stage("setup");
    const CoefficientTensor C = analyze(bank, X, g, make_route(args->route, args->order, eig));
    cli.stage("analyze");
    io::write_coefficients(io_paths->second, C);
    cli.output(io_paths->second);
    cli.report.parameters = {{"route", args->route}, {"kind", std::string(to_string(bank.kind))}};
    cli.report.metrics = {{"num_kernels", double(bank.size())}, {"coefficient_energy", C.squared_norm()},
                          {"signal_energy", X.squaredNorm()}};
  });
}

void register_synthesize(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("synthesize", "Frame synthesis sum_z conj(h_z)(L_G, L_T) C_z");
  auto args = std::make_shared<BankArgs>();
  struct Extra {
    std::string coeffs, out;
    bool dual = false;
  };
  auto extra = std::make_shared<Extra>();
  add_bank_options(cmd, *args);
  cmd->add_option("--coeffs", extra->coeffs, "Coefficient tensor (TVCF)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", extra->out, "Output signal (real part)")->required();
  cmd->add_flag("--dual", extra->dual, "Synthesize with the canonical dual (reconstruction)");
  cmd->callback([args, extra, &cli] {
    const CoefficientTensor C = io::read_coefficients(extra->coeffs);
    if (C.size() == 0) throw ValidationError("coefficient tensor is empty");
    const Index N = C.coeffs.front().rows();
    const Index T = C.coeffs.front().cols();
    const Graph g = load(args->graph, N);
    FilterBank bank = io::bank_from_json(io::read_json(args->bank), g, T);
    std::optional<GraphEigensystem> eig;
    if (args->route == "exact" || extra->dual) eig = eigendecompose(g);
    if (extra->dual) bank = canonical_dual(bank, *eig, T);
    cli.stage("setup");
    const CMatrix Y = synthesize(bank, C, g, make_route(args->route, args->order, eig));
    cli.stage("synthesize");
    io::write_signal(extra->out, Y.real());
    cli.output(extra->out);
    cli.report.parameters = {{"route", args->route}, {"dual", extra->dual ? "true" : "false"}};
    cli.report.metrics = {{"output_norm", Y.real().norm()}, {"discarded_imag_norm", Y.imag().norm()}};
  });
}

void register_denoise(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("denoise", "Joint Tikhonov denoising");
  struct Args {
    GraphArgs graph;
    std::string signal, out, route = "exact";
    double tau1 = 0.71, tau2 = 1.78;
    Index order = 50;
  };
  auto args = std::make_shared<Args>();
  add_graph_options(cmd, args->graph);
  cmd->add_option("--signal", args->signal, "Noisy N x T signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tau1", args->tau1, "Graph smoothness weight")->capture_default_str();
  cmd->add_option("--tau2", args->tau2, "Temporal smoothness weight")->capture_default_str();
  cmd->add_option("--route", args->route, "exact or ffc")->capture_default_str();
  cmd->add_option("--order", args->order, "Chebyshev order for --route ffc")->capture_default_str();
  cmd->add_option("--out", args->out, "Output signal")->required();
  cmd->callback([args, &cli] {
    const Matrix Y = io::read_signal(args->signal);
    const Graph g = load(args->graph, Y.rows());
    check_rows(Y, g, "signal");
    std::optional<GraphEigensystem> eig;
    if (args->route == "exact") eig = eigendecompose(g);
    cli.stage("setup");
    const Matrix X = denoise_tikhonov(Y, g, args->tau1, args->tau2, make_route(args->route, args->order, eig));
    cli.stage("solve");
    io::write_signal(args->out, X);
    cli.output(args->out);
    const JointRegularizer reg = JointRegularizer::tikhonov(args->tau1, args->tau2);
    InverseProblemSpec spec{Y, Matrix::Ones(Y.rows(), Y.cols()), reg, {}};
    cli.report.parameters = {{"tau1", num(args->tau1)}, {"tau2", num(args->tau2)}, {"route", args->route}};
    cli.report.metrics = {{"objective", inpaint_objective(X, spec, g)}, {"iterations", 1.0}};
  });
}

void register_inpaint(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("inpaint", "Joint-variation regularized inpainting");
  struct Args {
    GraphArgs graph;
    std::string signal, mask, out;
    int p = 1, q = 2;
    double gamma1 = 0.1, gamma2 = 0.1, tol = 1e-6;
    Index max_iters = 2000;
  };
  auto args = std::make_shared<Args>();
  add_graph_options(cmd, args->graph);
  cmd->add_option("--signal", args->signal, "Observed N x T signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mask", args->mask, "N x T mask CSV, 1 = observed")->required()->check(CLI::ExistingFile);
  cmd->add_option("--p", args->p, "Graph gradient norm exponent (1 or 2)")->capture_default_str();
  cmd->add_option("--q", args->q, "Time gradient norm exponent (1 or 2)")->capture_default_str();
  cmd->add_option("--gamma1", args->gamma1, "Graph regularization weight")->capture_default_str();
  cmd->add_option("--gamma2", args->gamma2, "Time regularization weight")->capture_default_str();
  cmd->add_option("--max-iters", args->max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", args->tol, "Relative objective change tolerance")->capture_default_str();
  cmd->add_option("--out", args->out, "Output signal")->required();
  cmd->callback([args, &cli] {
    const Matrix Y = io::read_signal(args->signal);
    const Matrix M = io::read_signal(args->mask);
    const Graph g = load(args->graph, Y.rows());
    InverseProblemSpec spec{Y, M, JointRegularizer::mixed(args->p, args->q, args->gamma1, args->gamma2),
                            {args->max_iters, args->tol}};
    spec.validate(g);
    cli.stage("setup");
    const InpaintResult r = inpaint(spec, g);
    cli.stage("solve");
    io::write_signal(args->out, r.signal);
    cli.output(args->out);
    cli.report.parameters = {{"p", std::to_string(args->p)}, {"q", std::to_string(args->q)},
                             {"gamma1", num(args->gamma1)}, {"gamma2", num(args->gamma2)},
                             {"max_iters", std::to_string(args->max_iters)}, {"tol", num(args->tol)}};
    cli.report.metrics = {{"objective", r.objective},
                          {"iterations", double(r.iterations)},
                          {"converged", r.converged ? 1.0 : 0.0},
                          {"final_relative_change", r.final_relative_change}};
  });
}

struct SparseArgs {
  BankArgs bank;
  std::string signal;
  double gamma = 0.1, tol = 1e-9;
  Index max_iters = 5000;
};

void add_sparse_options(CLI::App* cmd, SparseArgs& args) {
  add_bank_options(cmd, args.bank);
  cmd->add_option("--signal", args.signal, "Observed N x T signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--gamma", args.gamma, "l1 weight")->capture_default_str();
  cmd->add_option("--max-iters", args.max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", args.tol, "Relative objective change tolerance")->capture_default_str();
}

struct SparseRun {
  Graph graph;
  FilterBank bank;
  Matrix signal;
  SparseCodeResult result;
};

SparseRun run_sparse(const SparseArgs& args, Cli& cli) {
  SparseRun run;
  run.signal = io::read_signal(args.signal);
  run.graph = load(args.bank.graph, run.signal.rows());
  check_rows(run.signal, run.graph, "signal");
  run.bank = io::bank_from_json(io::read_json(args.bank.bank), run.graph, run.signal.cols());
  std::optional<GraphEigensystem> eig;
  if (args.bank.route == "exact") eig = eigendecompose(run.graph);
  cli.stage("setup");
  SparseCodingSpec spec{run.bank, run.signal, args.gamma, {args.max_iters, args.tol}};
  run.result = sparse_code(spec, run.graph, make_route(args.bank.route, args.bank.order, eig));
  cli.stage("solve");
  cli.report.parameters = {{"gamma", num(args.gamma)}, {"route", args.bank.route},
                           {"max_iters", std::to_string(args.max_iters)}, {"tol", num(args.tol)}};
  cli.report.metrics = {{"objective", run.result.objective},
                        {"iterations", double(run.result.iterations)},
                        {"converged", run.result.converged ? 1.0 : 0.0},
                        {"step", run.result.step},
                        {"optimality_residual", run.result.optimality_residual}};
  return run;
}

void register_sparse_code(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("sparse-code", "l1 sparse coding in a time-vertex dictionary");
  auto args = std::make_shared<SparseArgs>();
  auto out = std::make_shared<std::string>();
  add_sparse_options(cmd, *args);
  cmd->add_option("--out", *out, "Output coefficient tensor (TVCF)")->required();
  cmd->callback([args, out, &cli] {
    const SparseRun run = run_sparse(*args, cli);
    io::write_coefficients(*out, run.result.coefficients);
    cli.output(*out);
    Index nnz = 0;
    for (const auto& c : run.result.coefficients.coeffs) nnz += (c.array().abs() > 0.0).count();
    cli.report.metrics["nonzeros"] = double(nnz);
  });
}

void register_localize(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("localize", "Source localization from sparse time-vertex wavelet coefficients");
  auto args = std::make_shared<SparseArgs>();
  auto top_k = std::make_shared<Index>(3);
  add_sparse_options(cmd, *args);
  cmd->add_option("--top-k", *top_k, "Vertices averaged in the estimate")->capture_default_str();
  cmd->callback([args, top_k, &cli] {
    if (args->bank.graph.coords.empty()) throw ValidationError("localize needs --coords");
    const SparseRun run = run_sparse(*args, cli);
    const Eigen::Vector2d est = localize_source(run.result.coefficients, run.bank, run.graph, *top_k);
    const Eigen::Vector2d base = energy_centroid(run.signal, run.graph);
    cli.stage("localize");
    cli.report.parameters["top_k"] = std::to_string(*top_k);
    cli.report.metrics["x"] = est.x();
    cli.report.metrics["y"] = est.y();
    cli.report.metrics["baseline_x"] = base.x();
    cli.report.metrics["baseline_y"] = base.y();
  });
}

void register_compaction(CLI::App& app, Cli& cli) {
  auto* cmd = app.add_subcommand("compaction", "Energy compaction of DFT, GFT and JFT");
  struct Args {
    GraphArgs graph;
    std::string signal, percentiles = "50,75,90,95,99", out;
  };
  auto args = std::make_shared<Args>();
  add_graph_options(cmd, args->graph);
  cmd->add_option("--signal", args->signal, "Input N x T signal")->required()->check(CLI::ExistingFile);
  cmd->add_option("--percentiles", args->percentiles, "Comma-separated percentiles in [0, 100)")
      ->capture_default_str();
  cmd->add_option("--out", args->out, "Output CSV (transform,p,error)")->required();
  cmd->callback([args, &cli] {
    const Matrix X = io::read_signal(args->signal);
    const Graph g = load(args->graph, X.rows());
    check_rows(X, g, "signal");
    const GraphEigensystem eig = eigendecompose(g);
    cli.stage("setup");
    const CompactionCurve curve = compaction_experiment(X, g, eig, parse_list(args->percentiles, "--percentiles"));
    cli.stage("compaction");
    std::ofstream out(args->out, std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + args->out + "' for writing");
    out << "transform,p,error\n";
    for (std::size_t t = 0; t < curve.transforms.size(); ++t)
      for (std::size_t i = 0; i < curve.percentiles.size(); ++i)
        out << curve.transforms[t] << ',' << format_double(curve.percentiles[i]) << ','
            << format_double(curve.errors[t][i]) << '\n';
    cli.output(args->out);
    cli.report.parameters["percentiles"] = args->percentiles;
  });
}

int fail(const char* code, const std::string& message, int exit_code) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << code << ": " << line << '\n';
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tvgsp: time-vertex signal processing"};
  app.require_subcommand(1);
  Cli cli;
  app.add_option("--seed", cli.seed, "Seed for every random fixture")->capture_default_str()->configurable();
  app.add_option("--threads", cli.threads, "Worker threads, 0 = hardware (env TVGSP_THREADS)")
      ->envname("TVGSP_THREADS");
  app.add_option("--report", cli.report_path, "Write the JSON run report here instead of stdout");
  // Global flags are accepted after the subcommand name too.
  app.fallthrough();

  register_graph_gen(app, cli);
  register_transform(app, cli);
  register_dynamics(app, cli);
  register_filter(app, cli);
  register_filter_bench(app, cli);
  register_frame_build(app, cli);
  register_analyze(app, cli);
  register_synthesize(app, cli);
  register_denoise(app, cli);
  register_inpaint(app, cli);
  register_sparse_code(app, cli);
  register_localize(app, cli);
  register_compaction(app, cli);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse_complete_callback([&] {
      if (cli.threads >= 0) set_num_threads(static_cast<unsigned>(cli.threads));
      cli.report.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    });
    app.parse(argc, argv);
    cli.emit_report();
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    return fail("usage_error", e.what(), kExitValidation);
  } catch (const ValidationError& e) {
    return fail("validation_error", e.what(), kExitValidation);
  } catch (const NumericalError& e) {
    return fail("numerical_error", e.what(), kExitNumerical);
  } catch (const nlohmann::json::exception& e) {
    return fail("validation_error", e.what(), kExitValidation);
  } catch (const std::exception& e) {
    return fail("internal_error", e.what(), 1);
  }
}
