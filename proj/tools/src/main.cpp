#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "experiment_config.hpp"

namespace {

using d2d::cli::ExperimentConfig;

// CLI flags for one subcommand. Values land in `flags`; after parsing,
// merged() overlays everything the user actually typed on top of the
// --config file (flags win).
struct FlagSet {
  CLI::App* cmd = nullptr;
  std::string config_path;
  ExperimentConfig flags;
  std::string cost_ratio_grid_text;
  std::string expected_nodes_grid_text;
  bool compare_analytic = false;
  bool cold_start = false;
  bool all_schemes = false;
  bool by_k = false;

  explicit FlagSet(CLI::App* subcommand) : cmd(subcommand) {
    cmd->add_option("--config", config_path, "experiment config file (flat key = value lines)");
    cmd->add_option("--format", flags.format, "output format: csv (default) or json");
    cmd->add_option("--out", flags.out, "output path (default: stdout)");
  }

  void add_system_params() {
    cmd->add_option("--N", flags.expected_nodes, "expected node count N (> 0)");
    cmd->add_option("--lambda", flags.departure_rate, "node departure rate (default 1)");
    cmd->add_option("--omega", flags.request_rate, "per-node file request rate");
    cmd->add_option("--p", flags.popularity, "popularity p = omega/lambda (preferred)");
    cmd->add_option("--R", flags.cost_ratio, "base-station to D2D cost ratio (> 1)");
  }

  void add_scheme() {
    cmd->add_option("--scheme", flags.scheme,
                    "simple-caching | mbr | msr | replication | base-station-only");
  }

  void add_code_params() {
    cmd->add_option("--n", flags.storage_nodes, "storage node count n (default 30)");
    cmd->add_option("--k", flags.reconstruction_degree, "reconstruction degree k");
    cmd->add_option("--d", flags.repair_degree, "repair degree d (default 10)");
  }

  void add_repair_from() {
    cmd->add_option("--repair-from", flags.repair_from,
                    "lowest repairing state: n+2 (default) or n+1");
  }

  ExperimentConfig merged() const {
    ExperimentConfig base;
    const CLI::Option* config_option = cmd->get_option_no_throw("--config");
    if (config_option != nullptr && config_option->count() > 0) {
      base = d2d::cli::load_config_file(config_path);
    }
    const auto given = [this](const char* name) {
      const CLI::Option* option = cmd->get_option_no_throw(name);
      return option != nullptr && option->count() > 0;
    };
    if (given("--N")) base.expected_nodes = flags.expected_nodes;
    if (given("--lambda")) base.departure_rate = flags.departure_rate;
    if (given("--omega")) {
      base.request_rate = flags.request_rate;
      base.popularity.reset();
    }
    if (given("--p")) {
      base.popularity = flags.popularity;
      base.request_rate.reset();
    }
    if (given("--R")) base.cost_ratio = flags.cost_ratio;
    if (given("--scheme")) base.scheme = flags.scheme;
    if (given("--n")) base.storage_nodes = flags.storage_nodes;
    if (given("--k")) base.reconstruction_degree = flags.reconstruction_degree;
    if (given("--d")) base.repair_degree = flags.repair_degree;
    if (given("--seed")) base.seed = flags.seed;
    if (given("--events")) {
      base.max_events = flags.max_events;
      base.time_horizon.reset();
    }
    if (given("--horizon")) {
      base.time_horizon = flags.time_horizon;
      base.max_events.reset();
    }
    if (given("--batches")) base.batches = flags.batches;
    if (given("--repair-from")) base.repair_from = flags.repair_from;
    if (given("--coupling")) base.coupling = flags.coupling;
    if (given("--compare-analytic")) base.compare_analytic = compare_analytic;
    if (given("--cold-start")) base.cold_start = cold_start;
    if (given("--all")) base.all_schemes = all_schemes;
    if (given("--by-k")) base.by_k = by_k;
    if (given("--p-from")) base.p_from = flags.p_from;
    if (given("--p-to")) base.p_to = flags.p_to;
    if (given("--points")) base.points = flags.points;
    if (given("--R-grid")) {
      base.cost_ratio_grid = d2d::cli::parse_number_list(cost_ratio_grid_text);
    }
    if (given("--N-grid")) {
      base.expected_nodes_grid = d2d::cli::parse_number_list(expected_nodes_grid_text);
    }
    if (given("--format")) base.format = flags.format;
    if (given("--out")) base.out = flags.out;
    return base;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission-cost model, churn simulator and scheme planner "
               "for D2D file storage"};
  app.require_subcommand(1);

  CLI::App* costs = app.add_subcommand("costs", "closed-form cost of one scheme (or --all)");
  FlagSet costs_flags(costs);
  costs_flags.add_system_params();
  costs_flags.add_scheme();
  costs_flags.add_code_params();
  costs_flags.add_repair_from();
  costs->add_flag("--all", costs_flags.all_schemes, "print every scheme side by side");

  CLI::App* simulate = app.add_subcommand("simulate", "discrete-event churn simulation");
  FlagSet sim_flags(simulate);
  sim_flags.add_system_params();
  sim_flags.add_scheme();
  sim_flags.add_code_params();
  sim_flags.add_repair_from();
  simulate->add_option("--seed", sim_flags.flags.seed, "RNG seed (default 1)");
  simulate->add_option("--events", sim_flags.flags.max_events,
                       "event-count horizon (default 1000000)");
  simulate->add_option("--horizon", sim_flags.flags.time_horizon, "simulated-time horizon");
  simulate->add_option("--batches", sim_flags.flags.batches,
                       "batch-means batches, >= 10 (default 10)");
  simulate->add_option("--coupling", sim_flags.flags.coupling,
                       "block-count coupling: deterministic (default) or strict");
  simulate->add_flag("--cold-start", sim_flags.cold_start, "start from an empty system");
  simulate->add_flag("--compare-analytic", sim_flags.compare_analytic,
                     "also report the closed-form rate and the relative error");

  CLI::App* sweep = app.add_subcommand("sweep", "cost tables over p (or over k with --by-k)");
  FlagSet sweep_flags(sweep);
  sweep->add_option("--N", sweep_flags.flags.expected_nodes, "expected node count N (> 0)");
  sweep->add_option("--R", sweep_flags.flags.cost_ratio, "base-station cost ratio (> 1)");
  sweep->add_option("--n", sweep_flags.flags.storage_nodes, "storage node count (default 30)");
  sweep->add_option("--d", sweep_flags.flags.repair_degree, "repair degree (default 10)");
  sweep->add_option("--p", sweep_flags.flags.popularity, "popularity for the --by-k scan");
  sweep->add_option("--p-from", sweep_flags.flags.p_from, "sweep start (default 1e-4)");
  sweep->add_option("--p-to", sweep_flags.flags.p_to, "sweep end (default 10)");
  sweep->add_option("--points", sweep_flags.flags.points, "log-spaced points (default 200)");
  sweep->add_flag("--by-k", sweep_flags.by_k, "scan k at fixed --p instead of sweeping p");
  sweep_flags.add_repair_from();

  CLI::App* thresholds =
      app.add_subcommand("thresholds", "switching thresholds p1, p2, p3 over an (R, N) grid");
  FlagSet thr_flags(thresholds);
  thresholds->add_option("--R-grid", thr_flags.cost_ratio_grid_text,
                         "comma-separated cost ratios, e.g. 20,60,100");
  thresholds->add_option("--N-grid", thr_flags.expected_nodes_grid_text,
                         "comma-separated node counts, e.g. 100,1000,10000");
  thresholds->add_option("--n", thr_flags.flags.storage_nodes, "storage node count (default 30)");
  thresholds->add_option("--d", thr_flags.flags.repair_degree, "repair degree (default 10)");
  thr_flags.add_repair_from();

  CLI11_PARSE(app, argc, argv);

  try {
    if (costs->parsed()) {
      return d2d::cli::run_costs(costs_flags.merged(), std::cout, std::cerr);
    }
    if (simulate->parsed()) {
      return d2d::cli::run_simulate(sim_flags.merged(), std::cout, std::cerr);
    }
    if (sweep->parsed()) {
      return d2d::cli::run_sweep(sweep_flags.merged(), std::cout, std::cerr);
    }
    if (thresholds->parsed()) {
      return d2d::cli::run_thresholds(thr_flags.merged(), std::cout, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return d2d::cli::kExitInvalidParams;
  }
  return d2d::cli::kExitOk;
}
