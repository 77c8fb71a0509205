#include "hsob/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace hsob {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
  const auto last_nl = text.rfind('\n', end == 0 ? 0 : end - 1);
  const std::size_t column = last_nl == std::string::npos ? end : end - last_nl - 1;
  return std::to_string(line) + ":" + std::to_string(column);
}

std::vector<double> number_array(const json& node, const std::string& where) {
  if (!node.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number())
      throw InputError(where + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(node[i].get<double>());
  }
  return out;
}

std::vector<double> flatten_rows(const json& node, const std::string& where, std::size_t& width) {
  if (!node.is_array()) throw InputError(where + ": expected an array of rows");
  std::vector<double> out;
  width = 0;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto row = number_array(node[i], where + "[" + std::to_string(i) + "]");
    if (i == 0) width = row.size();
    if (row.size() != width)
      throw InputError(where + "[" + std::to_string(i) + "]: expected " + std::to_string(width) +
                       " entries, found " + std::to_string(row.size()));
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

const json& field(const json& doc, const char* key, const std::string& origin) {
  if (!doc.contains(key)) throw InputError(origin + ": missing field \"" + key + "\"");
  return doc.at(key);
}

}  // namespace

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    throw InputError(path.string() + ":" + line_of(text, byte) + ": JSON syntax error: " + e.what());
  }
}

Space space_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw InputError(origin + ": space file must be a JSON object");
  const json& kind_node = field(doc, "kind", origin);
  if (!kind_node.is_string()) throw InputError(origin + ": \"kind\" must be a string");
  const std::string kind = kind_node.get<std::string>();
  try {
    if (kind == "euclidean_lebesgue") {
      const json& dim = field(doc, "dim", origin);
      if (!dim.is_number_integer()) throw InputError(origin + ": \"dim\" must be an integer");
      return AnalyticSpace::euclidean_lebesgue(dim.get<int>());
    }
    if (kind == "appendix_plane") return AnalyticSpace::appendix_plane();
    if (kind != "discrete")
      throw InputError(origin + ": unknown space kind \"" + kind +
                       "\" (expected discrete, euclidean_lebesgue or appendix_plane)");

    auto weights = number_array(field(doc, "weights", origin), origin + ": weights");
    const json& metric_node = field(doc, "metric", origin);
    if (!metric_node.is_string()) throw InputError(origin + ": \"metric\" must be a string");
    const MetricKind metric = parse_metric_kind(metric_node.get<std::string>());
    if (metric == MetricKind::matrix) {
      std::size_t width = 0;
      auto dist = flatten_rows(field(doc, "dist_matrix", origin), origin + ": dist_matrix", width);
      if (width != weights.size() || dist.size() != width * width)
        throw InputError(origin + ": dist_matrix must be n x n with n = number of weights");
      return DiscreteSpace(std::move(dist), std::move(weights));
    }
    std::size_t dim = 0;
    auto coords = flatten_rows(field(doc, "points", origin), origin + ": points", dim);
    if (coords.size() != dim * weights.size() || (dim == 0 && !weights.empty()))
      throw InputError(origin + ": points and weights differ in count");
    return DiscreteSpace(dim, std::move(coords), std::move(weights), metric);
  } catch (const std::invalid_argument& e) {
    throw InputError(origin + ": " + e.what());
  }
}

json space_to_json(const DiscreteSpace& space) {
  json doc;
  doc["kind"] = "discrete";
  doc["metric"] = to_string(space.metric());
  doc["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
  if (space.metric() == MetricKind::matrix) {
    json rows = json::array();
    const auto dist = space.distance_matrix();
    for (std::size_t i = 0; i < space.size(); ++i)
      rows.push_back(std::vector<double>(dist.begin() + static_cast<std::ptrdiff_t>(i * space.size()),
                                         dist.begin() + static_cast<std::ptrdiff_t>((i + 1) * space.size())));
    doc["dist_matrix"] = std::move(rows);
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto p = space.point(i);
      rows.push_back(std::vector<double>(p.begin(), p.end()));
    }
    doc["points"] = std::move(rows);
  }
  return doc;
}

json space_to_json(const AnalyticSpace& space) {
  json doc;
  if (space.kind() == AnalyticSpace::Kind::appendix_plane) {
    doc["kind"] = "appendix_plane";
  } else {
    doc["kind"] = "euclidean_lebesgue";
    doc["dim"] = space.dim();
  }
  return doc;
}

Space load_space(const fs::path& path) { return space_from_json(read_json(path), path.string()); }

void save_space(const fs::path& path, const DiscreteSpace& space) {
  write_json(path, space_to_json(space));
}

std::vector<double> load_values(const fs::path& path) {
  const json doc = read_json(path);
  const std::string origin = path.string();
  if (doc.is_object()) return number_array(field(doc, "values", origin), origin + ": values");
  return number_array(doc, origin);
}

void save_values(const fs::path& path, const std::vector<double>& values) {
  write_json(path, json(values));
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp =
      dir / ("." + path.filename().string() + ".tmp." + std::to_string(static_cast<long>(::getpid())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path.string() + ": cannot write output");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw InputError(path.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw InputError(path.string() + ": cannot move output into place: " + ec.message());
  }
}

void write_json(const fs::path& path, const json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  write_atomic(path, out);
}

}  // namespace hsob
