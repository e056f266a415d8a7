#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace d2d::cli {

/// Flat key-value experiment description: the union of every subcommand's
/// inputs. Field names mirror the long CLI flags. Parsing rejects unknown
/// and duplicate keys; serialize/parse round-trips every set field exactly.
struct ExperimentConfig {
  std::optional<double> expected_nodes;          ///< N
  std::optional<double> departure_rate;          ///< lambda
  std::optional<double> request_rate;            ///< omega
  std::optional<double> popularity;              ///< p
  std::optional<double> cost_ratio;              ///< R
  std::optional<std::string> scheme;
  std::optional<int> storage_nodes;              ///< n
  std::optional<int> reconstruction_degree;      ///< k
  std::optional<int> repair_degree;              ///< d
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_events;       ///< events
  std::optional<double> time_horizon;            ///< horizon
  std::optional<int> batches;
  std::optional<std::string> repair_from;        ///< "n+2" | "n+1"
  std::optional<std::string> coupling;           ///< "deterministic" | "strict"
  std::optional<bool> compare_analytic;
  std::optional<bool> cold_start;
  std::optional<bool> all_schemes;               ///< all
  std::optional<bool> by_k;
  std::optional<double> p_from;
  std::optional<double> p_to;
  std::optional<int> points;
  std::optional<std::vector<double>> cost_ratio_grid;      ///< R-grid
  std::optional<std::vector<double>> expected_nodes_grid;  ///< N-grid
  std::optional<std::string> format;             ///< csv | json
  std::optional<std::string> out;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses "key = value" lines; '#' starts a comment, blank lines are
/// skipped. Throws std::invalid_argument on unknown keys, duplicate keys or
/// malformed values.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Comma-separated list of numbers, e.g. "20,60,100".
std::vector<double> parse_number_list(const std::string& text);

}  // namespace d2d::cli
