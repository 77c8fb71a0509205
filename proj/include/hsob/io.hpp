#pragma once

/**
 * @file
 * File formats: spaces and functions as JSON, curves as CSV.  Writers go
 * through a temporary file and a rename so readers never see partial output.
 *
 * Space file:
 *   {"kind": "discrete", "points": [[x, ...], ...], "weights": [w, ...],
 *    "metric": "euclidean" | "linf" | "matrix", "dist_matrix": [[...], ...]}
 *   {"kind": "euclidean_lebesgue", "dim": n}
 *   {"kind": "appendix_plane"}
 *
 * Function file: a JSON array of numbers, or {"values": [...]}.
 */

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hsob/space.hpp"

namespace hsob {

using Space = std::variant<DiscreteSpace, AnalyticSpace>;

/// Malformed or unreadable input; the message names the file (and line for
/// JSON syntax errors).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::filesystem::path& path);

Space space_from_json(const nlohmann::json& doc, const std::string& origin = "<json>");
nlohmann::json space_to_json(const DiscreteSpace& space);
nlohmann::json space_to_json(const AnalyticSpace& space);

Space load_space(const std::filesystem::path& path);
void save_space(const std::filesystem::path& path, const DiscreteSpace& space);

std::vector<double> load_values(const std::filesystem::path& path);
void save_values(const std::filesystem::path& path, const std::vector<double>& values);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// CSV with a header row; numbers as %.17g.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string format_number(double x);

}  // namespace hsob
