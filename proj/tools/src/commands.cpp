#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include <d2dstore/planner.hpp>
#include <d2dstore/simulator.hpp>

#include "table.hpp"

namespace d2d::cli {
namespace {

SystemParams resolve_params(const ExperimentConfig& c) {
  if (!c.expected_nodes) {
    throw std::invalid_argument("missing --N (expected node count, N > 0)");
  }
  if (!c.cost_ratio) {
    throw std::invalid_argument("missing --R (base-station cost ratio, R > 1)");
  }
  const double lambda = c.departure_rate.value_or(1.0);
  double omega = 0.0;
  if (c.request_rate && c.popularity) {
    throw std::invalid_argument("give either --omega or --p, not both");
  } else if (c.request_rate) {
    omega = *c.request_rate;
  } else if (c.popularity) {
    omega = *c.popularity * lambda;
  } else {
    throw std::invalid_argument("missing --p or --omega (file request rate)");
  }
  SystemParams params;
  params.expected_nodes = *c.expected_nodes;
  params.departure_rate = lambda;
  params.request_rate = omega;
  params.cost_ratio = *c.cost_ratio;
  params.validate();
  return params;
}

DesignSpace resolve_space(const ExperimentConfig& c) {
  DesignSpace space;
  space.storage_nodes = c.storage_nodes.value_or(30);
  space.repair_degree = c.repair_degree.value_or(10);
  space.k_min = 2;
  space.k_max = space.repair_degree;
  space.validate();
  return space;
}

CostOptions resolve_cost_options(const ExperimentConfig& c) {
  CostOptions options;
  if (c.repair_from) {
    if (*c.repair_from == "n+2") options.repair_from = RepairFrom::two_spares;
    else if (*c.repair_from == "n+1") options.repair_from = RepairFrom::one_spare;
    else throw std::invalid_argument("--repair-from must be n+2 or n+1");
  }
  return options;
}

CodeParams resolve_code(const ExperimentConfig& c) {
  if (!c.reconstruction_degree) {
    throw std::invalid_argument("missing --k (reconstruction degree)");
  }
  CodeParams code;
  code.storage_nodes = c.storage_nodes.value_or(30);
  code.reconstruction_degree = *c.reconstruction_degree;
  code.repair_degree = c.repair_degree.value_or(10);
  code.validate();
  return code;
}

Scheme resolve_scheme(const ExperimentConfig& c) {
  if (!c.scheme) {
    throw std::invalid_argument(
        "missing --scheme (simple-caching | mbr | msr | replication | base-station-only)");
  }
  const std::string& name = *c.scheme;
  if (name == "simple-caching") return SimpleCaching{};
  if (name == "base-station-only") return BaseStationOnly{};
  if (name == "replication") return ReplicationScheme{c.storage_nodes.value_or(30)};
  if (name == "mbr") return MbrScheme{resolve_code(c)};
  if (name == "msr") return MsrScheme{resolve_code(c)};
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (simple-caching | mbr | msr | replication | base-station-only)");
}

std::string resolve_format(const ExperimentConfig& c) {
  const std::string format = c.format.value_or("csv");
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("--format must be csv or json");
  }
  return format;
}

void write_output(const ExperimentConfig& c, const Table& table, std::ostream& fallback) {
  const std::string text = resolve_format(c) == "csv" ? to_csv(table) : to_json(table);
  if (c.out) {
    std::ofstream file(*c.out, std::ios::binary);
    if (!file) {
      throw std::invalid_argument("cannot open output file " + *c.out);
    }
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
  } else {
    fallback.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
}

Cell opt_int(int value, bool present) {
  if (!present) return std::monostate{};
  return static_cast<std::int64_t>(value);
}

std::vector<Cell> breakdown_row(const std::string& scheme, Cell n, Cell k, Cell d,
                                const CostBreakdown& costs) {
  return {scheme, n, k, d, costs.allocation, costs.redundancy, costs.repair,
          costs.remote_retrieval, costs.reconstruction_storage, costs.reconstruction_many,
          costs.total};
}

std::vector<Cell> scalar_row(const std::string& scheme, double total) {
  return {scheme, std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
          std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
          std::monostate{}, total};
}

std::vector<double> log_grid(double from, double to, int points) {
  if (!(from > 0.0) || !(to > 0.0) || points < 1 || (points > 1 && !(to > from))) {
    throw std::invalid_argument("grid: need 0 < p-from < p-to and points >= 1");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    grid.push_back(from);
    return grid;
  }
  const double log_from = std::log(from);
  const double log_to = std::log(to);
  for (int j = 0; j < points; ++j) {
    grid.push_back(std::exp(log_from + (log_to - log_from) * j / (points - 1)));
  }
  return grid;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UndersampledError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUndersampled;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParams;
  }
}

}  // namespace

int run_costs(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const SystemParams params = resolve_params(config);
    const CostOptions options = resolve_cost_options(config);

    Table table;
    table.columns = {"scheme", "n", "k", "d", "allocation", "redundancy", "repair",
                     "remote_retrieval", "reconstruction_storage", "reconstruction_many",
                     "total"};

    const int n = config.storage_nodes.value_or(30);
    const int d = config.repair_degree.value_or(10);
    const auto coded_row = [&](CodeFlavor flavor) {
      CodeParams code;
      if (config.reconstruction_degree) {
        code = resolve_code(config);
        const Scheme scheme = flavor == CodeFlavor::mbr ? Scheme{MbrScheme{code}}
                                                        : Scheme{MsrScheme{code}};
        validate_scheme(scheme);
      } else {
        DesignSpace space = resolve_space(config);
        code = CodeParams{space.storage_nodes, best_k(params, space, flavor, options).k,
                          space.repair_degree};
      }
      const CodePoint point = flavor == CodeFlavor::mbr ? mbr_point(params.file_size, code)
                                                        : msr_point(params.file_size, code);
      const CostBreakdown costs = cost_regenerating(params, code, point, options);
      return breakdown_row(flavor == CodeFlavor::mbr ? "mbr" : "msr",
                           static_cast<std::int64_t>(code.storage_nodes),
                           static_cast<std::int64_t>(code.reconstruction_degree),
                           static_cast<std::int64_t>(code.repair_degree), costs);
    };

    if (config.all_schemes.value_or(false)) {
      table.rows.push_back(scalar_row("simple-caching", cost_simple_caching(params)));
      table.rows.push_back(coded_row(CodeFlavor::mbr));
      table.rows.push_back(coded_row(CodeFlavor::msr));
      const CostBreakdown rep = cost_replication(params, n, options);
      table.rows.push_back(breakdown_row("replication", static_cast<std::int64_t>(n),
                                         std::monostate{}, std::monostate{}, rep));
      table.rows.push_back(scalar_row("base-station-only", cost_base_station_only(params)));
    } else {
      const Scheme scheme = resolve_scheme(config);
      validate_scheme(scheme);
      if (std::holds_alternative<SimpleCaching>(scheme)) {
        table.rows.push_back(scalar_row("simple-caching", cost_simple_caching(params)));
      } else if (std::holds_alternative<BaseStationOnly>(scheme)) {
        table.rows.push_back(scalar_row("base-station-only", cost_base_station_only(params)));
      } else if (std::holds_alternative<ReplicationScheme>(scheme)) {
        const CostBreakdown rep = cost_replication(params, n, options);
        table.rows.push_back(breakdown_row("replication", static_cast<std::int64_t>(n),
                                           std::monostate{}, std::monostate{}, rep));
      } else if (const auto* mbr = std::get_if<MbrScheme>(&scheme)) {
        const CostBreakdown costs = cost_regenerating(
            params, mbr->code, mbr_point(params.file_size, mbr->code), options);
        table.rows.push_back(breakdown_row("mbr", static_cast<std::int64_t>(mbr->code.storage_nodes),
                                           static_cast<std::int64_t>(mbr->code.reconstruction_degree),
                                           static_cast<std::int64_t>(mbr->code.repair_degree),
                                           costs));
      } else if (const auto* msr = std::get_if<MsrScheme>(&scheme)) {
        const CostBreakdown costs = cost_regenerating(
            params, msr->code, msr_point(params.file_size, msr->code), options);
        table.rows.push_back(breakdown_row("msr", static_cast<std::int64_t>(msr->code.storage_nodes),
                                           static_cast<std::int64_t>(msr->code.reconstruction_degree),
                                           static_cast<std::int64_t>(msr->code.repair_degree),
                                           costs));
      }
    }
    write_output(config, table, out);
    return kExitOk;
  });
}

int run_simulate(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    SimConfig sim;
    sim.params = resolve_params(config);
    sim.scheme = resolve_scheme(config);
    validate_scheme(sim.scheme);
    if (config.max_events && config.time_horizon) {
      throw std::invalid_argument("give either --events or --horizon, not both");
    }
    if (config.time_horizon) {
      sim.horizon = Horizon::sim_time(*config.time_horizon);
    } else {
      sim.horizon = Horizon::events(config.max_events.value_or(1'000'000));
    }
    sim.seed = config.seed.value_or(1);
    sim.batch_count = config.batches.value_or(10);
    sim.policy.repair_from = resolve_cost_options(config).repair_from;
    if (config.coupling) {
      if (*config.coupling == "deterministic") sim.policy.coupling = StateCoupling::deterministic;
      else if (*config.coupling == "strict") sim.policy.coupling = StateCoupling::strict;
      else throw std::invalid_argument("--coupling must be deterministic or strict");
    }
    sim.warm_start = !config.cold_start.value_or(false);

    const bool compare = config.compare_analytic.value_or(false);
    SimReport report;
    AnalyticComparison comparison;
    if (compare) {
      comparison = compare_to_analytic(sim);
      report = comparison.report;
    } else {
      report = simulate(sim);
    }

    Table table;
    table.columns = {"scheme", "seed", "arrivals", "departures", "requests", "elapsed_time",
                     "total_cost", "mean_cost_rate", "ci_halfwidth_95", "cost_allocation",
                     "cost_redundancy", "cost_repair", "cost_remote_retrieval",
                     "cost_reconstruction_storage", "cost_reconstruction_many",
                     "events_allocation", "events_redundancy", "events_repair",
                     "events_remote_retrieval", "events_reconstruction_storage",
                     "events_reconstruction_many", "drift_diagnostic", "empty"};
    if (compare) {
      table.columns.insert(table.columns.end(),
                           {"analytic_rate", "relative_error", "analytic_within_ci"});
    }

    std::vector<Cell> row = {scheme_name(sim.scheme), sim.seed, report.arrivals,
                             report.departures, report.requests, report.elapsed_sim_time,
                             report.total_cost};
    if (report.empty) {
      row.push_back(std::monostate{});
      row.push_back(std::monostate{});
    } else {
      row.push_back(report.mean_cost_rate);
      row.push_back(report.ci_halfwidth_95);
    }
    for (double cost : report.cost_by_category) row.push_back(cost);
    for (std::uint64_t count : report.category_events) row.push_back(count);
    row.push_back(report.drift_diagnostic);
    row.push_back(report.empty);
    if (compare) {
      row.push_back(comparison.analytic_rate);
      row.push_back(comparison.relative_error);
      row.push_back(comparison.analytic_within_ci);
    }
    table.rows.push_back(std::move(row));
    write_output(config, table, out);
    return kExitOk;
  });
}

int run_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (!config.expected_nodes) {
      throw std::invalid_argument("missing --N (expected node count, N > 0)");
    }
    if (!config.cost_ratio) {
      throw std::invalid_argument("missing --R (base-station cost ratio, R > 1)");
    }
    const double expected_nodes = *config.expected_nodes;
    const double cost_ratio = *config.cost_ratio;
    const DesignSpace space = resolve_space(config);
    const CostOptions options = resolve_cost_options(config);

    Table table;
    if (config.by_k.value_or(false)) {
      if (!config.popularity) {
        throw std::invalid_argument("--by-k needs --p (popularity at which to scan k)");
      }
      SystemParams params;
      params.expected_nodes = expected_nodes;
      params.departure_rate = 1.0;
      params.request_rate = *config.popularity;
      params.cost_ratio = cost_ratio;
      params.validate();
      const double cost_sc = cost_simple_caching(params);
      const double cost_rep = cost_replication(params, space.storage_nodes, options).total;
      table.columns = {"k",        "cost_sc", "cost_mbr", "cost_msr", "cost_rep",
                       "rel_mbr",  "rel_msr", "rel_rep"};
      for (int k = space.k_min; k <= space.k_max; ++k) {
        const CodeParams code{space.storage_nodes, k, space.repair_degree};
        const double mbr =
            cost_regenerating(params, code, mbr_point(params.file_size, code), options).total;
        const double msr =
            cost_regenerating(params, code, msr_point(params.file_size, code), options).total;
        table.rows.push_back({static_cast<std::int64_t>(k), cost_sc, mbr, msr, cost_rep,
                              mbr / cost_sc, msr / cost_sc, cost_rep / cost_sc});
      }
    } else {
      const std::vector<double> grid = log_grid(config.p_from.value_or(1e-4),
                                                config.p_to.value_or(10.0),
                                                config.points.value_or(200));
      const std::vector<SweepRow> rows =
          sweep_p(cost_ratio, expected_nodes, space, grid, options);
      table.columns = {"p",       "cost_sc",      "cost_mbr_best", "k_mbr",
                       "cost_msr_best", "k_msr", "cost_rep",      "best_scheme",
                       "rel_mbr_best",  "rel_msr_best", "rel_rep"};
      for (const SweepRow& row : rows) {
        table.rows.push_back({row.p, row.cost_simple, row.cost_mbr,
                              static_cast<std::int64_t>(row.k_mbr), row.cost_msr,
                              static_cast<std::int64_t>(row.k_msr), row.cost_replication,
                              method_name(row.best), row.rel_mbr, row.rel_msr,
                              row.rel_replication});
      }
    }
    write_output(config, table, out);
    return kExitOk;
  });
}

int run_thresholds(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (!config.cost_ratio_grid || !config.expected_nodes_grid) {
      throw std::invalid_argument("missing --R-grid and/or --N-grid (comma-separated lists)");
    }
    const DesignSpace space = resolve_space(config);
    const CostOptions options = resolve_cost_options(config);
    const std::vector<SurfaceRow> rows = threshold_surface(
        *config.cost_ratio_grid, *config.expected_nodes_grid, space, options);

    Table table;
    table.columns = {"R",  "N",  "p1", "p2", "p3", "crossings_p1", "crossings_p2",
                     "crossings_p3"};
    bool any_crossing = false;
    for (const SurfaceRow& row : rows) {
      const auto cell = [&](const CrossingSearch& search) -> Cell {
        if (!search.p) return std::monostate{};
        any_crossing = true;
        return *search.p;
      };
      table.rows.push_back({row.cost_ratio, row.expected_nodes,
                            cell(row.thresholds.caching_to_mbr), cell(row.thresholds.mbr_to_msr),
                            cell(row.thresholds.msr_to_replication),
                            static_cast<std::int64_t>(row.thresholds.caching_to_mbr.sign_changes),
                            static_cast<std::int64_t>(row.thresholds.mbr_to_msr.sign_changes),
                            static_cast<std::int64_t>(
                                row.thresholds.msr_to_replication.sign_changes)});
    }
    write_output(config, table, out);
    return any_crossing ? kExitOk : kExitNoCrossing;
  });
}

}  // namespace d2d::cli
