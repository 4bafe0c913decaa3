#include "covsdp/io.hpp"

#include "covsdp/covariates.hpp"
#include "covsdp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace covsdp {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

bool parse_int(std::string_view s, long long& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Eigen::MatrixXd load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  auto in = open_input(path);
  if (options.nodes && *options.nodes < 0) throw ParameterError("node count must be non-negative");
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  long long max_index = -1;
  std::optional<int> declared = options.nodes;
  while (std::getline(in, line)) {
    ++line_no;
    const auto raw = trim(line);
    if (!options.nodes && raw.starts_with("# nodes ")) {
      long long count = 0;
      if (!parse_int(trim(raw.substr(8)), count) || count < 0) throw ParseError("malformed node count", line_no);
      declared = static_cast<int>(count);
      continue;
    }
    const auto body = strip_comment(line);
    if (body.empty()) continue;
    const auto fields = split_whitespace(body);
    long long src = 0;
    long long dst = 0;
    if (fields.size() != 2 || !parse_int(fields[0], src) || !parse_int(fields[1], dst)) {
      throw ParseError("expected two integer node indices", line_no);
    }
    const long long limit = declared ? *declared : std::numeric_limits<int>::max();
    if (src < 0 || dst < 0 || src >= limit || dst >= limit) throw IndexError("node index out of range", line_no);
    max_index = std::max({max_index, src, dst});
    edges.emplace_back(static_cast<int>(src), static_cast<int>(dst));
  }
  const int n = declared ? *declared : static_cast<int>(max_index + 1);
  if (max_index >= n) throw IndexError("node index exceeds the declared node count", 0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : edges) {
    g(i, j) = 1.0;
    if (!options.directed) g(j, i) = 1.0;
  }
  if (!options.directed) g.diagonal().setZero();
  return g;
}

void save_edge_list(const std::filesystem::path& path, const Eigen::MatrixXd& a, bool directed) {
  if (a.rows() != a.cols()) throw DimensionError("adjacency matrix must be square");
  auto out = open_output(path);
  out << "# nodes " << a.rows() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = directed ? 0 : i + 1; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) out << i << ' ' << j << '\n';
    }
  }
}

CovariateMatrix load_covariates_csv(const std::filesystem::path& path, bool standardize) {
  auto in = open_input(path);
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      width = split_fields(line, ',').size();
      break;
    }
  }
  if (width == 0) throw DataError("covariate file " + path.string() + " has no header row");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != width) {
      throw DataError("row has " + std::to_string(fields.size()) + " fields, header has " + std::to_string(width) +
                      " (line " + std::to_string(line_no) + ")");
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (fields[c].empty()) throw ParseError("missing value in column " + std::to_string(c + 1), line_no);
      if (!parse_double(fields[c], row[c])) {
        throw ParseError("non-numeric value '" + std::string(fields[c]) + "'", line_no);
      }
    }
    rows.push_back(std::move(row));
  }
  CovariateMatrix y(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < width; ++c) y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  }
  return standardize ? standardize_columns(y) : y;
}

void save_covariates_csv(const std::filesystem::path& path, const CovariateMatrix& y) {
  auto out = open_output(path);
  for (Eigen::Index c = 0; c < y.cols(); ++c) out << (c ? "," : "") << 'x' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index c = 0; c < y.cols(); ++c) out << (c ? "," : "") << format_double(y(i, c));
    out << '\n';
  }
}

Labels load_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::map<std::string, int, std::less<>> ids;
  std::vector<int> z;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto token = strip_comment(line);
    if (token.empty()) continue;
    if (split_whitespace(token).size() != 1) throw ParseError("expected one label per line", line_no);
    auto it = ids.find(token);
    if (it == ids.end()) it = ids.emplace(std::string(token), static_cast<int>(ids.size())).first;
    z.push_back(it->second);
  }
  if (z.empty()) throw DataError("label file " + path.string() + " is empty");
  return Labels(std::move(z), static_cast<int>(ids.size()));
}

void save_labels(const std::filesystem::path& path, const Labels& labels) {
  auto out = open_output(path);
  for (int z : labels.assignments()) out << z << '\n';
}

AdjacencyMatrix threshold_symmetrize(const Eigen::MatrixXd& g, int tau) {
  if (g.rows() != g.cols()) throw ParameterError("directed adjacency must be square");
  if (tau < 1) throw ParameterError("threshold must be a positive integer");
  if (((g.array() != 0.0) && (g.array() != 1.0)).any()) throw ParameterError("directed adjacency must be 0/1");
  const Eigen::MatrixXd common = g * g.transpose();
  AdjacencyMatrix a = (common.array() >= tau - 0.5).cast<double>();
  a.diagonal().setZero();
  return a;
}

CovariateMatrix log_mass_normalize(std::span<const double> masses) {
  CovariateMatrix y(static_cast<Eigen::Index>(masses.size()), 1);
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i])) throw ParameterError("masses must be positive and finite");
    y(static_cast<Eigen::Index>(i), 0) = std::log(masses[i]);
  }
  return standardize_columns(y);
}

void Dataset::validate() const {
  const auto n = a.rows();
  if (a.cols() != n) throw DimensionError("adjacency matrix must be square");
  if (y.rows() != n) throw DimensionError("covariate rows must match the node count");
  if (truth && truth->n() != n) throw DimensionError("label count must match the node count");
}

}  // namespace covsdp
