#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvgsp/frames.hpp"
#include "tvgsp/graph.hpp"
#include "tvgsp/harmonic.hpp"

namespace tvgsp::io {

// File formats
//  edge list   CSV, header "src,dst,weight", zero-based ids
//  coordinates CSV, header "x,y", one row per vertex
//  signal      CSV, N rows x T columns, no header; or binary: "TVSG",
//              u32 N, u32 T, N*T little-endian float64 column-major
//  spectrum    CSV, header "l,k,re,im", zero-based l (ascending graph
//              frequency) and k (omega_k = 2 pi k / T, unshifted)
//  coefficients binary: "TVCF", u32 |Z|, u32 N_lattice, u32 T_lattice, then
//              per z a column-major matrix of (re, im) float64 pairs
//  bank spec   JSON, see bank_from_json

struct EdgeList {
  std::vector<Edge> edges;
  Index num_vertices = 0;  // max id + 1 unless overridden
};

EdgeList read_edge_list(const std::filesystem::path& path);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

/// Reads an edge list, and coordinates when coords_path is nonempty.
Graph load_graph(const std::filesystem::path& edges_path, const std::filesystem::path& coords_path = {},
                 Index num_vertices = 0);

Matrix read_coordinates(const std::filesystem::path& path);
void write_coordinates(const std::filesystem::path& path, const Matrix& coords);

/// Dispatches on the "TVSG" magic; anything else is parsed as CSV.
Matrix read_signal(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, const Matrix& X);
void write_signal_binary(const std::filesystem::path& path, const Matrix& X);
/// Binary when the extension is .bin, CSV otherwise.
void write_signal(const std::filesystem::path& path, const Matrix& X);

JointSpectrum read_spectrum(const std::filesystem::path& path);
void write_spectrum(const std::filesystem::path& path, const JointSpectrum& S);

CoefficientTensor read_coefficients(const std::filesystem::path& path);
void write_coefficients(const std::filesystem::path& path, const CoefficientTensor& C);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Bank spec:
///   {"kind": "stvwt", "mother": {"name": "damped_wave", "params": {"beta": 0.1}},
///    "scales_lambda": [...], "scales_omega": [1.0], "require_admissible": false}
///   {"kind": "stvft", "graph_window": {"name": "itersine", "count": 5},
///    "time_window": {"name": "rect", "length": 16}, "redundancy": 2}
///   {"kind": "custom", "kernels": [{"name": ..., "params": {...}}, ...]}
/// Missing T parameters of PDE kernels are filled from T.
FilterBank bank_from_json(const nlohmann::json& spec, const Graph& g, Index T);
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Command echo, parameters, per-stage timings, metrics and outputs of one
/// CLI run.
struct RunReport {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> timings_ms;
  std::map<std::string, double> metrics;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& doc);
};

}  // namespace tvgsp::io
