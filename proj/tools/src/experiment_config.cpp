#include "experiment_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace d2d::cli {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  }
  if (used != value.size()) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  }
  return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int parsed = 0;
  try {
    parsed = std::stoi(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  }
  if (used != value.size()) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  }
  return parsed;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long parsed = 0;
  try {
    parsed = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad count for '" + key + "': " + value);
  }
  if (used != value.size()) {
    throw std::invalid_argument("config: bad count for '" + key + "': " + value);
  }
  return parsed;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "' (use true/false): " + value);
}

std::string full_precision(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string join_list(const std::vector<double>& values) {
  std::string text;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j) text += ',';
    text += full_precision(values[j]);
  }
  return text;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw std::invalid_argument("config: empty entry in number list: " + text);
    }
    values.push_back(parse_double("list", item));
  }
  if (values.empty()) {
    throw std::invalid_argument("config: empty number list");
  }
  return values;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    }

    if (key == "N") config.expected_nodes = parse_double(key, value);
    else if (key == "lambda") config.departure_rate = parse_double(key, value);
    else if (key == "omega") config.request_rate = parse_double(key, value);
    else if (key == "p") config.popularity = parse_double(key, value);
    else if (key == "R") config.cost_ratio = parse_double(key, value);
    else if (key == "scheme") config.scheme = value;
    else if (key == "n") config.storage_nodes = parse_int(key, value);
    else if (key == "k") config.reconstruction_degree = parse_int(key, value);
    else if (key == "d") config.repair_degree = parse_int(key, value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else if (key == "events") config.max_events = parse_u64(key, value);
    else if (key == "horizon") config.time_horizon = parse_double(key, value);
    else if (key == "batches") config.batches = parse_int(key, value);
    else if (key == "repair-from") config.repair_from = value;
    else if (key == "coupling") config.coupling = value;
    else if (key == "compare-analytic") config.compare_analytic = parse_bool(key, value);
    else if (key == "cold-start") config.cold_start = parse_bool(key, value);
    else if (key == "all") config.all_schemes = parse_bool(key, value);
    else if (key == "by-k") config.by_k = parse_bool(key, value);
    else if (key == "p-from") config.p_from = parse_double(key, value);
    else if (key == "p-to") config.p_to = parse_double(key, value);
    else if (key == "points") config.points = parse_int(key, value);
    else if (key == "R-grid") config.cost_ratio_grid = parse_number_list(value);
    else if (key == "N-grid") config.expected_nodes_grid = parse_number_list(value);
    else if (key == "format") config.format = value;
    else if (key == "out") config.out = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string text;
  const auto emit = [&text](const char* key, const std::string& value) {
    text += key;
    text += " = ";
    text += value;
    text += '\n';
  };
  if (c.expected_nodes) emit("N", full_precision(*c.expected_nodes));
  if (c.departure_rate) emit("lambda", full_precision(*c.departure_rate));
  if (c.request_rate) emit("omega", full_precision(*c.request_rate));
  if (c.popularity) emit("p", full_precision(*c.popularity));
  if (c.cost_ratio) emit("R", full_precision(*c.cost_ratio));
  if (c.scheme) emit("scheme", *c.scheme);
  if (c.storage_nodes) emit("n", std::to_string(*c.storage_nodes));
  if (c.reconstruction_degree) emit("k", std::to_string(*c.reconstruction_degree));
  if (c.repair_degree) emit("d", std::to_string(*c.repair_degree));
  if (c.seed) emit("seed", std::to_string(*c.seed));
  if (c.max_events) emit("events", std::to_string(*c.max_events));
  if (c.time_horizon) emit("horizon", full_precision(*c.time_horizon));
  if (c.batches) emit("batches", std::to_string(*c.batches));
  if (c.repair_from) emit("repair-from", *c.repair_from);
  if (c.coupling) emit("coupling", *c.coupling);
  if (c.compare_analytic) emit("compare-analytic", *c.compare_analytic ? "true" : "false");
  if (c.cold_start) emit("cold-start", *c.cold_start ? "true" : "false");
  if (c.all_schemes) emit("all", *c.all_schemes ? "true" : "false");
  if (c.by_k) emit("by-k", *c.by_k ? "true" : "false");
  if (c.p_from) emit("p-from", full_precision(*c.p_from));
  if (c.p_to) emit("p-to", full_precision(*c.p_to));
  if (c.points) emit("points", std::to_string(*c.points));
  if (c.cost_ratio_grid) emit("R-grid", join_list(*c.cost_ratio_grid));
  if (c.expected_nodes_grid) emit("N-grid", join_list(*c.expected_nodes_grid));
  if (c.format) emit("format", *c.format);
  if (c.out) emit("out", *c.out);
  return text;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::invalid_argument("config: cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace d2d::cli
