#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "d2dstore/cost_model.hpp"

namespace d2d {

/// How the simulator tracks the stored-block count b against the node
/// count i. `deterministic` pins b = min(i, n) for i >= k (and 0 below k),
/// which is what the closed-form terms presuppose. `strict` lets b evolve
/// honestly: blocks survive on their nodes, repairs happen only when an
/// empty node exists, and the drift diagnostic reports how much time the
/// honest count spends away from the pinned one.
enum class StateCoupling { deterministic, strict };

struct SimPolicy {
  RepairFrom repair_from = RepairFrom::two_spares;
  StateCoupling coupling = StateCoupling::deterministic;
};

/// Stop condition: a fixed number of events or a fixed span of simulated
/// time. Zero is allowed and yields an explicit empty report.
struct Horizon {
  enum class Kind { events, sim_time };
  Kind kind = Kind::events;
  std::uint64_t max_events = 0;
  double max_time = 0.0;

  static Horizon events(std::uint64_t count) {
    Horizon h;
    h.kind = Kind::events;
    h.max_events = count;
    return h;
  }
  static Horizon sim_time(double t) {
    Horizon h;
    h.kind = Kind::sim_time;
    h.max_time = t;
    return h;
  }
};

struct SimConfig {
  SystemParams params;
  Scheme scheme = SimpleCaching{};
  Horizon horizon = Horizon::events(1'000'000);
  std::uint64_t seed = 1;
  SimPolicy policy;
  int batch_count = 10;      ///< batch-means batches for the 95% CI
  bool warm_start = true;    ///< draw the initial population from the stationary pmf
  bool track_occupancy = false;  ///< record time-in-state for stationarity checks

  /// Throws std::invalid_argument on invalid params/scheme, batch_count < 10
  /// or a negative time horizon.
  void validate() const;
};

/// Cost event categories, matching the six components of CostBreakdown.
/// Simple caching books base-station recoveries under remote_retrieval and
/// D2D downloads under reconstruction_many; base-station-only books all
/// requests under remote_retrieval.
enum class CostCategory : int {
  allocation = 0,
  redundancy = 1,
  repair = 2,
  remote_retrieval = 3,
  reconstruction_storage = 4,
  reconstruction_many = 5,
};
inline constexpr int kCostCategoryCount = 6;

/// Time accumulated per population state over a run (track_occupancy only);
/// time_in_state[j] belongs to state first_state + j.
struct OccupancyHistogram {
  long first_state = 0;
  std::vector<double> time_in_state;
};

struct SimReport {
  double elapsed_sim_time = 0.0;
  double total_cost = 0.0;
  std::array<double, kCostCategoryCount> cost_by_category{};
  std::array<std::uint64_t, kCostCategoryCount> category_events{};
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t requests = 0;
  double mean_cost_rate = 0.0;   ///< total_cost / elapsed_sim_time; 0 when empty
  double ci_halfwidth_95 = 0.0;  ///< batch-means 95% halfwidth on the cost rate
  double drift_diagnostic = 0.0;  ///< strict coupling only; 0 otherwise
  bool empty = false;             ///< no events occurred within the horizon
  OccupancyHistogram occupancy;   ///< populated only when track_occupancy is set

  std::uint64_t total_events() const { return arrivals + departures + requests; }

  friend bool operator==(const SimReport&, const SimReport&);
};

class UndersampledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs the exponential-race event loop. In state i the next event is an
/// arrival (rate N lambda), the departure of a uniformly chosen node
/// (rate i lambda) or a request by a uniformly chosen node (rate i omega).
/// Identical (seed, config) give a bit-identical report. Throws
/// UndersampledError when 0 < events < batch_count.
SimReport simulate(const SimConfig& config);

struct AnalyticComparison {
  double analytic_rate = 0.0;
  double empirical_rate = 0.0;
  double relative_error = 0.0;
  bool analytic_within_ci = false;
  SimReport report;
};

/// Simulates and compares the empirical cost rate against the closed form
/// for the same scheme and repair policy.
AnalyticComparison compare_to_analytic(const SimConfig& config);

}  // namespace d2d
