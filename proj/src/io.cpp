#include "tvgsp/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tvgsp/filtering.hpp"

namespace tvgsp::io {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little, "binary codecs assume a little-endian host");

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ValidationError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, const fs::path& path, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ValidationError(where(path, line) + ": cannot parse number '" + std::string(field) + "'");
  return v;
}

Index parse_index(std::string_view field, const fs::path& path, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ValidationError(where(path, line) + ": cannot parse integer '" + std::string(field) + "'");
  return static_cast<Index>(v);
}

// Lines of a text file, blank lines skipped, paired with 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!trim(line).empty()) lines.emplace_back(n, line);
  }
  return lines;
}

void expect_header(const std::vector<std::pair<std::size_t, std::string>>& lines, std::string_view header,
                   const fs::path& path) {
  if (lines.empty() || trim(lines.front().second) != header)
    throw ValidationError(path.string() + ": expected header '" + std::string(header) + "'");
}

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const fs::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw ValidationError(path.string() + ": truncated binary file");
  return value;
}

bool has_magic(const fs::path& path, std::string_view magic) {
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> buf{};
  return in.read(buf.data(), 4) && std::string_view(buf.data(), 4) == magic;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buf.data(), ptr);
}

EdgeList read_edge_list(const fs::path& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "src,dst,weight", path);
  EdgeList list;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [n, text] = lines[i];
    const auto fields = split(text);
    if (fields.size() != 3) throw ValidationError(where(path, n) + ": expected 3 fields");
    Edge e{parse_index(fields[0], path, n), parse_index(fields[1], path, n), parse_double(fields[2], path, n)};
    if (e.src < 0 || e.dst < 0) throw ValidationError(where(path, n) + ": negative vertex id");
    list.num_vertices = std::max({list.num_vertices, e.src + 1, e.dst + 1});
    list.edges.push_back(e);
  }
  return list;
}

void write_edge_list(const fs::path& path, const Graph& g) {
  auto out = open_out(path);
  out << "src,dst,weight\n";
  for (const auto& e : g.edges()) out << e.src << ',' << e.dst << ',' << format_double(e.weight) << '\n';
}

Matrix read_coordinates(const fs::path& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "x,y", path);
  Matrix coords(static_cast<Index>(lines.size()) - 1, 2);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [n, text] = lines[i];
    const auto fields = split(text);
    if (fields.size() != 2) throw ValidationError(where(path, n) + ": expected 2 fields");
    coords(static_cast<Index>(i) - 1, 0) = parse_double(fields[0], path, n);
    coords(static_cast<Index>(i) - 1, 1) = parse_double(fields[1], path, n);
  }
  return coords;
}

void write_coordinates(const fs::path& path, const Matrix& coords) {
  if (coords.cols() != 2) throw ValidationError("coordinates must have 2 columns");
  auto out = open_out(path);
  out << "x,y\n";
  for (Index i = 0; i < coords.rows(); ++i)
    out << format_double(coords(i, 0)) << ',' << format_double(coords(i, 1)) << '\n';
}

Graph load_graph(const fs::path& edges_path, const fs::path& coords_path, Index num_vertices) {
  const EdgeList list = read_edge_list(edges_path);
  Matrix coords;
  if (!coords_path.empty()) {
    coords = read_coordinates(coords_path);
    num_vertices = std::max(num_vertices, coords.rows());
  }
  const Index n = std::max(num_vertices, list.num_vertices);
  Graph g = build_graph(list.edges, n);
  if (!coords_path.empty()) {
    if (coords.rows() != n)
      throw ValidationError("coordinates list " + std::to_string(coords.rows()) + " vertices, graph has " +
                            std::to_string(n));
    g = g.with_coordinates(std::move(coords));
  }
  return g;
}

Matrix read_signal(const fs::path& path) {
  if (has_magic(path, "TVSG")) {
    auto in = open_in(path, true);
    in.ignore(4);
    const auto n = get<std::uint32_t>(in, path);
    const auto t = get<std::uint32_t>(in, path);
    Matrix X(n, t);
    const auto bytes = static_cast<std::streamsize>(sizeof(double) * X.size());
    if (!in.read(reinterpret_cast<char*>(X.data()), bytes))
      throw ValidationError(path.string() + ": truncated binary signal");
    return X;
  }
  const auto lines = read_lines(path);
  if (lines.empty()) throw ValidationError(path.string() + ": empty signal file");
  const Index rows = static_cast<Index>(lines.size());
  const Index cols = static_cast<Index>(split(lines.front().second).size());
  Matrix X(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& [n, text] = lines[i];
    const auto fields = split(text);
    if (static_cast<Index>(fields.size()) != cols)
      throw ValidationError(where(path, n) + ": expected " + std::to_string(cols) + " fields");
    for (Index j = 0; j < cols; ++j) X(i, j) = parse_double(fields[j], path, n);
  }
  return X;
}

void write_signal_csv(const fs::path& path, const Matrix& X) {
  auto out = open_out(path);
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      if (j) out << ',';
      out << format_double(X(i, j));
    }
    out << '\n';
  }
}

void write_signal_binary(const fs::path& path, const Matrix& X) {
  auto out = open_out(path, true);
  out.write("TVSG", 4);
  put(out, static_cast<std::uint32_t>(X.rows()));
  put(out, static_cast<std::uint32_t>(X.cols()));
  out.write(reinterpret_cast<const char*>(X.data()), static_cast<std::streamsize>(sizeof(double) * X.size()));
}

void write_signal(const fs::path& path, const Matrix& X) {
  if (path.extension() == ".bin")
    write_signal_binary(path, X);
  else
    write_signal_csv(path, X);
}

JointSpectrum read_spectrum(const fs::path& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "l,k,re,im", path);
  struct Entry {
    Index l, k;
    Complex v;
  };
  std::vector<Entry> entries;
  Index rows = 0;
  Index cols = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [n, text] = lines[i];
    const auto f = split(text);
    if (f.size() != 4) throw ValidationError(where(path, n) + ": expected 4 fields");
    Entry e{parse_index(f[0], path, n), parse_index(f[1], path, n),
            Complex(parse_double(f[2], path, n), parse_double(f[3], path, n))};
    if (e.l < 0 || e.k < 0) throw ValidationError(where(path, n) + ": negative index");
    rows = std::max(rows, e.l + 1);
    cols = std::max(cols, e.k + 1);
    entries.push_back(e);
  }
  if (static_cast<Index>(entries.size()) != rows * cols)
    throw ValidationError(path.string() + ": spectrum is not a full N x T grid");
  JointSpectrum S{CMatrix::Zero(rows, cols)};
  for (const auto& e : entries) S.coeffs(e.l, e.k) = e.v;
  return S;
}

void write_spectrum(const fs::path& path, const JointSpectrum& S) {
  auto out = open_out(path);
  out << "l,k,re,im\n";
  for (Index l = 0; l < S.coeffs.rows(); ++l)
    for (Index k = 0; k < S.coeffs.cols(); ++k)
      out << l << ',' << k << ',' << format_double(S.coeffs(l, k).real()) << ','
          << format_double(S.coeffs(l, k).imag()) << '\n';
}

CoefficientTensor read_coefficients(const fs::path& path) {
  if (!has_magic(path, "TVCF")) throw ValidationError(path.string() + ": missing TVCF header");
  auto in = open_in(path, true);
  in.ignore(4);
  const auto nz = get<std::uint32_t>(in, path);
  const auto rows = get<std::uint32_t>(in, path);
  const auto cols = get<std::uint32_t>(in, path);
  CoefficientTensor C;
  C.coeffs.assign(nz, CMatrix(rows, cols));
  for (auto& c : C.coeffs) {
    const auto bytes = static_cast<std::streamsize>(sizeof(Complex) * c.size());
    if (!in.read(reinterpret_cast<char*>(c.data()), bytes))
      throw ValidationError(path.string() + ": truncated coefficient tensor");
  }
  return C;
}

void write_coefficients(const fs::path& path, const CoefficientTensor& C) {
  const Index rows = C.coeffs.empty() ? 0 : C.coeffs.front().rows();
  const Index cols = C.coeffs.empty() ? 0 : C.coeffs.front().cols();
  for (const auto& c : C.coeffs)
    if (c.rows() != rows || c.cols() != cols) throw ValidationError("coefficient matrices differ in shape");
  auto out = open_out(path, true);
  out.write("TVCF", 4);
  put(out, static_cast<std::uint32_t>(C.size()));
  put(out, static_cast<std::uint32_t>(rows));
  put(out, static_cast<std::uint32_t>(cols));
  for (const auto& c : C.coeffs)
    out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(sizeof(Complex) * c.size()));
}

namespace {

KernelParams params_from_json(const nlohmann::json& node) {
  KernelParams params;
  if (node.is_null()) return params;
  if (!node.is_object()) throw ValidationError("bank spec: 'params' must be an object");
  for (const auto& [key, value] : node.items()) {
    if (!value.is_number()) throw ValidationError("bank spec: parameter '" + key + "' must be a number");
    params[key] = value.get<double>();
  }
  return params;
}

JointKernel kernel_from_json(const nlohmann::json& node, Index T) {
  if (!node.is_object() || !node.contains("name") || !node["name"].is_string())
    throw ValidationError("bank spec: kernel needs a 'name'");
  const auto name = node["name"].get<std::string>();
  KernelParams params = params_from_json(node.value("params", nlohmann::json()));
  if ((name == "heat" || name == "wave" || name == "damped_wave") && !params.count("T"))
    params["T"] = static_cast<double>(T);
  return named_response(name, params);
}

std::vector<double> numbers(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_array()) throw ValidationError(std::string("bank spec: '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : spec[key]) {
    if (!v.is_number()) throw ValidationError(std::string("bank spec: '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Vector time_window(const nlohmann::json& node) {
  const auto name = node.value("name", std::string("rect"));
  const Index len = node.value("length", Index{0});
  if (len < 1) throw ValidationError("bank spec: time window length must be >= 1");
  Vector w(len);
  if (name == "rect") {
    w.setConstant(1.0 / std::sqrt(static_cast<double>(len)));
  } else if (name == "hann") {
    // Periodic Hann; overlaps of hop len/2 sum to a constant.
    for (Index t = 0; t < len; ++t)
      w(t) = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(len));
    w /= w.norm();
  } else {
    throw ValidationError("bank spec: unknown time window '" + name + "'");
  }
  return w;
}

}  // namespace

FilterBank bank_from_json(const nlohmann::json& spec, const Graph& g, Index T) {
  if (!spec.is_object() || !spec.contains("kind")) throw ValidationError("bank spec: missing 'kind'");
  const auto kind = spec["kind"].get<std::string>();
  if (kind == "stvwt") {
    const JointKernel mother = kernel_from_json(spec.at("mother"), T);
    const auto sl = numbers(spec, "scales_lambda");
    const auto sw = spec.contains("scales_omega") ? numbers(spec, "scales_omega") : std::vector<double>{1.0};
    StvwtOptions options;
    options.require_admissible = spec.value("require_admissible", true);
    if (spec.contains("dc_cover")) options.dc_cover = kernel_from_json(spec["dc_cover"], T);
    return make_stvwt(mother, sl, sw, options);
  }
  if (kind == "stvft") {
    const auto gw = spec.value("graph_window", nlohmann::json::object());
    if (gw.value("name", std::string("itersine")) != "itersine")
      throw ValidationError("bank spec: only the itersine graph window is supported");
    const Index count = gw.value("count", Index{5});
    if (count < 2) throw ValidationError("bank spec: graph window count must be >= 2");
    const double lmax = gw.value("lambda_max", g.lambda_max());
    StvftConfig config;
    config.graph_window = itersine_window(lmax / static_cast<double>(count - 1));
    config.lambda_shifts = uniform_shifts(count, lmax);
    config.time_window = time_window(spec.value("time_window", nlohmann::json::object()));
    config.redundancy = spec.value("redundancy", Index{1});
    config.subsample_time = spec.value("subsample_time", true);
    return make_stvft(config, T);
  }
  if (kind == "custom") {
    std::vector<JointKernel> kernels;
    for (const auto& node : spec.at("kernels")) kernels.push_back(kernel_from_json(node, T));
    return make_bank(std::move(kernels));
  }
  throw ValidationError("bank spec: unknown kind '" + kind + "'");
}

nlohmann::json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

nlohmann::json RunReport::to_json() const {
  for (const auto& [name, value] : metrics)
    if (!std::isfinite(value)) throw NumericalError("report metric '" + name + "' is not finite");
  nlohmann::json doc;
  doc["command"] = command;
  doc["parameters"] = parameters;
  doc["timings_ms"] = timings_ms;
  doc["metrics"] = metrics;
  doc["outputs"] = outputs;
  return doc;
}

RunReport RunReport::from_json(const nlohmann::json& doc) {
  RunReport r;
  r.command = doc.at("command").get<std::string>();
  r.parameters = doc.at("parameters").get<std::map<std::string, std::string>>();
  r.timings_ms = doc.at("timings_ms").get<std::map<std::string, double>>();
  r.metrics = doc.at("metrics").get<std::map<std::string, double>>();
  r.outputs = doc.at("outputs").get<std::vector<std::string>>();
  return r;
}

}  // namespace tvgsp::io
