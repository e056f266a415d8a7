#include "d2dstore/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace d2d {

bool operator==(const SimReport& a, const SimReport& b) {
  return a.elapsed_sim_time == b.elapsed_sim_time && a.total_cost == b.total_cost &&
         a.cost_by_category == b.cost_by_category && a.category_events == b.category_events &&
         a.arrivals == b.arrivals && a.departures == b.departures && a.requests == b.requests &&
         a.mean_cost_rate == b.mean_cost_rate && a.ci_halfwidth_95 == b.ci_halfwidth_95 &&
         a.drift_diagnostic == b.drift_diagnostic && a.empty == b.empty &&
         a.occupancy.first_state == b.occupancy.first_state &&
         a.occupancy.time_in_state == b.occupancy.time_in_state;
}

void SimConfig::validate() const {
  params.validate();
  // The k = 1 degeneracy is admitted here: simulating an Mbr/Msr scheme at
  // k = 1 exercises the replication equivalence directly. The stricter
  // k >= 2 scheme invariant applies to the cost_model/planner surfaces.
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MbrScheme> || std::is_same_v<T, MsrScheme>) {
          s.code.validate();
        } else if constexpr (std::is_same_v<T, ReplicationScheme>) {
          if (s.storage_nodes < 1) {
            throw std::invalid_argument("Scheme: replication requires n >= 1");
          }
        }
      },
      scheme);
  if (batch_count < 10) {
    throw std::invalid_argument("SimConfig: batch_count must be at least 10");
  }
  if (horizon.kind == Horizon::Kind::sim_time &&
      (!(horizon.max_time >= 0.0) || !std::isfinite(horizon.max_time))) {
    throw std::invalid_argument("SimConfig: time horizon must be nonnegative and finite");
  }
}

namespace {

// All randomness flows through these two mappings so that a fixed seed gives
// the same event stream on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double exp_sample(std::mt19937_64& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

double student_t_975(int df) {
  static constexpr double table[31] = {
      0.0,   12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201, 2.179,  2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
      2.074, 2.069,  2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df <= 0) return std::numeric_limits<double>::infinity();
  if (df <= 30) return table[df];
  if (df <= 40) return 2.021;
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

enum class SchemeKind { simple, coded, base_station };

struct Dynamics {
  SchemeKind kind = SchemeKind::simple;
  int n = 0;
  int k = 0;
  int d = 0;
  double alpha = 0.0;
  double gamma = 0.0;
};

Dynamics make_dynamics(const SystemParams& params, const Scheme& scheme) {
  return std::visit(
      [&](const auto& s) -> Dynamics {
        using T = std::decay_t<decltype(s)>;
        Dynamics dyn;
        if constexpr (std::is_same_v<T, SimpleCaching>) {
          dyn.kind = SchemeKind::simple;
        } else if constexpr (std::is_same_v<T, BaseStationOnly>) {
          dyn.kind = SchemeKind::base_station;
        } else if constexpr (std::is_same_v<T, MbrScheme>) {
          const CodePoint point = mbr_point(params.file_size, s.code);
          dyn = Dynamics{SchemeKind::coded, s.code.storage_nodes, s.code.reconstruction_degree,
                         s.code.repair_degree, point.alpha, point.gamma};
        } else if constexpr (std::is_same_v<T, MsrScheme>) {
          const CodePoint point = msr_point(params.file_size, s.code);
          dyn = Dynamics{SchemeKind::coded, s.code.storage_nodes, s.code.reconstruction_degree,
                         s.code.repair_degree, point.alpha, point.gamma};
        } else if constexpr (std::is_same_v<T, ReplicationScheme>) {
          dyn = Dynamics{SchemeKind::coded, s.storage_nodes, 1, 1, 1.0, 1.0};
        }
        return dyn;
      },
      scheme);
}

SimReport empty_report(double elapsed) {
  SimReport rep;
  rep.elapsed_sim_time = elapsed;
  rep.empty = true;
  return rep;
}

}  // namespace

SimReport simulate(const SimConfig& config) {
  config.validate();

  const double big_n = config.params.expected_nodes;
  const double lambda = config.params.departure_rate;
  const double omega = config.params.request_rate;
  const double r = config.params.cost_ratio;
  const Dynamics dyn = make_dynamics(config.params, config.scheme);
  const bool coded = dyn.kind == SchemeKind::coded;
  const bool strict = config.policy.coupling == StateCoupling::strict;
  const long repair_min =
      dyn.n + (config.policy.repair_from == RepairFrom::two_spares ? 2 : 1);
  const bool by_events = config.horizon.kind == Horizon::Kind::events;

  if (by_events) {
    if (config.horizon.max_events == 0) return empty_report(0.0);
    if (config.horizon.max_events < static_cast<std::uint64_t>(config.batch_count)) {
      throw UndersampledError("simulate: horizon of " +
                              std::to_string(config.horizon.max_events) +
                              " events cannot form " + std::to_string(config.batch_count) +
                              " batches");
    }
  } else if (config.horizon.max_time == 0.0) {
    return empty_report(0.0);
  }

  std::mt19937_64 rng(config.seed);

  // Pinned stored-block count the closed forms assume.
  const auto coupled_blocks = [&](long i) -> long {
    if (i < dyn.k) return 0;
    return std::min<long>(i, dyn.n);
  };

  long state = 0;
  if (config.warm_start) {
    const PopulationModel pop = config.params.population();
    const TruncationWindow window = truncation_window(pop, kTailEps);
    const double u = uniform01(rng);
    double cum = 0.0;
    state = window.i_max;
    for (long s = window.i_min; s <= window.i_max; ++s) {
      cum += stationary_pmf(pop, s);
      if (u < cum) {
        state = s;
        break;
      }
    }
  }
  bool cacher_present = state >= 1;
  long blocks = coupled_blocks(state);

  const int batch_count = config.batch_count;
  std::vector<double> batch_cost(static_cast<std::size_t>(batch_count), 0.0);
  std::vector<double> batch_time(static_cast<std::size_t>(batch_count), 0.0);
  const std::uint64_t events_per_batch =
      by_events ? std::max<std::uint64_t>(1, config.horizon.max_events /
                                                 static_cast<std::uint64_t>(batch_count))
                : 0;
  const double batch_len = by_events ? 0.0 : config.horizon.max_time / batch_count;

  std::array<double, kCostCategoryCount> cost_by_category{};
  std::array<std::uint64_t, kCostCategoryCount> category_events{};
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t requests = 0;
  double now = 0.0;
  double drift_time = 0.0;
  std::vector<double> occupancy;
  const auto record_occupancy = [&](long i, double dt) {
    if (!config.track_occupancy) return;
    if (static_cast<std::size_t>(i) >= occupancy.size()) {
      occupancy.resize(static_cast<std::size_t>(i) + 1, 0.0);
    }
    occupancy[static_cast<std::size_t>(i)] += dt;
  };

  std::uint64_t event_index = 0;
  std::size_t batch_idx = 0;
  const auto charge = [&](CostCategory category, double amount) {
    const auto c = static_cast<std::size_t>(category);
    cost_by_category[c] += amount;
    category_events[c] += 1;
    batch_cost[batch_idx] += amount;
  };

  while (true) {
    if (by_events && event_index >= config.horizon.max_events) break;

    const double total_rate = (big_n + static_cast<double>(state)) * lambda +
                              static_cast<double>(state) * omega;
    const double dt = exp_sample(rng, total_rate);

    if (!by_events && now + dt > config.horizon.max_time) {
      const double rest = config.horizon.max_time - now;
      record_occupancy(state, rest);
      if (strict && blocks != coupled_blocks(state)) drift_time += rest;
      batch_time[static_cast<std::size_t>(batch_count) - 1] += rest;
      now = config.horizon.max_time;
      break;
    }

    batch_idx = by_events
                    ? static_cast<std::size_t>(std::min<std::uint64_t>(
                          event_index / events_per_batch,
                          static_cast<std::uint64_t>(batch_count) - 1))
                    : static_cast<std::size_t>(std::min<double>(
                          (now + dt) / batch_len, static_cast<double>(batch_count - 1)));
    record_occupancy(state, dt);
    if (strict && blocks != coupled_blocks(state)) drift_time += dt;
    batch_time[batch_idx] += dt;
    now += dt;

    const double pick = uniform01(rng) * total_rate;
    if (pick < big_n * lambda) {
      // arrival
      ++arrivals;
      if (coded) {
        if (!strict) {
          if (state == dyn.k - 1) {
            charge(CostCategory::allocation, r * dyn.k * dyn.alpha);
          } else if (state >= dyn.k && state < dyn.d) {
            charge(CostCategory::redundancy, dyn.k * dyn.alpha);
          } else if (state >= dyn.d && state < dyn.n) {
            charge(CostCategory::redundancy, dyn.gamma);
          }
        } else {
          if (blocks < dyn.k) {
            if (state + 1 >= dyn.k) {
              charge(CostCategory::allocation, r * dyn.k * dyn.alpha);
              blocks = dyn.k;
            }
          } else if (blocks < dyn.n) {
            charge(CostCategory::redundancy, blocks >= dyn.d ? dyn.gamma : dyn.k * dyn.alpha);
            ++blocks;
          }
        }
      }
      ++state;
    } else if (pick < (big_n + static_cast<double>(state)) * lambda) {
      // departure of a uniformly chosen node
      ++departures;
      if (coded) {
        if (!strict) {
          if (state >= repair_min &&
              uniform01(rng) * static_cast<double>(state) < static_cast<double>(dyn.n)) {
            charge(CostCategory::repair, dyn.gamma);
          }
          --state;
          blocks = coupled_blocks(state);
        } else {
          const bool stored =
              uniform01(rng) * static_cast<double>(state) < static_cast<double>(blocks);
          --state;
          if (stored) {
            --blocks;
            const bool spare = state - blocks >= 1;
            if (spare && blocks >= dyn.d) {
              charge(CostCategory::repair, dyn.gamma);
              ++blocks;
            } else if (spare && blocks >= dyn.k) {
              charge(CostCategory::repair, dyn.k * dyn.alpha);
              ++blocks;
            }
          }
        }
      } else {
        if (dyn.kind == SchemeKind::simple && cacher_present &&
            uniform01(rng) * static_cast<double>(state) < 1.0) {
          cacher_present = false;
        }
        --state;
      }
    } else {
      // request by a uniformly chosen node
      ++requests;
      if (dyn.kind == SchemeKind::base_station) {
        charge(CostCategory::remote_retrieval, r);
      } else if (dyn.kind == SchemeKind::simple) {
        if (!cacher_present) {
          charge(CostCategory::remote_retrieval, r);
          cacher_present = true;  // the requester keeps the downloaded copy
        } else if (uniform01(rng) * static_cast<double>(state) >= 1.0) {
          charge(CostCategory::reconstruction_many, config.params.file_size);
        }
      } else if (!strict) {
        if (state < dyn.k) {
          charge(CostCategory::remote_retrieval, r);
        } else if (state <= dyn.n) {
          charge(CostCategory::reconstruction_storage, (dyn.k - 1) * dyn.alpha);
        } else {
          const bool stores =
              uniform01(rng) * static_cast<double>(state) < static_cast<double>(dyn.n);
          charge(CostCategory::reconstruction_many,
                 stores ? (dyn.k - 1) * dyn.alpha : dyn.k * dyn.alpha);
        }
      } else {
        if (blocks < dyn.k) {
          charge(CostCategory::remote_retrieval, r);
        } else {
          const bool stores =
              uniform01(rng) * static_cast<double>(state) < static_cast<double>(blocks);
          const double amount = stores ? (dyn.k - 1) * dyn.alpha : dyn.k * dyn.alpha;
          charge(state <= dyn.n ? CostCategory::reconstruction_storage
                                : CostCategory::reconstruction_many,
                 amount);
        }
      }
    }
    ++event_index;
  }

  SimReport rep;
  rep.elapsed_sim_time = now;
  rep.cost_by_category = cost_by_category;
  rep.category_events = category_events;
  rep.arrivals = arrivals;
  rep.departures = departures;
  rep.requests = requests;
  for (double c : cost_by_category) rep.total_cost += c;
  if (config.track_occupancy) {
    rep.occupancy.first_state = 0;
    rep.occupancy.time_in_state = std::move(occupancy);
  }

  const std::uint64_t total_events = rep.total_events();
  if (total_events == 0) {
    rep.empty = true;
    return rep;
  }
  if (total_events < static_cast<std::uint64_t>(batch_count)) {
    throw UndersampledError("simulate: only " + std::to_string(total_events) +
                            " events occurred, cannot form " + std::to_string(batch_count) +
                            " batches");
  }

  rep.mean_cost_rate = rep.total_cost / rep.elapsed_sim_time;
  rep.drift_diagnostic = strict && rep.elapsed_sim_time > 0.0
                             ? drift_time / rep.elapsed_sim_time
                             : 0.0;

  double mean = 0.0;
  int usable = 0;
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(batch_count));
  for (int b = 0; b < batch_count; ++b) {
    if (batch_time[static_cast<std::size_t>(b)] > 0.0) {
      rates.push_back(batch_cost[static_cast<std::size_t>(b)] /
                      batch_time[static_cast<std::size_t>(b)]);
      mean += rates.back();
      ++usable;
    }
  }
  if (usable >= 2) {
    mean /= usable;
    double var = 0.0;
    for (double rate : rates) var += (rate - mean) * (rate - mean);
    var /= (usable - 1);
    rep.ci_halfwidth_95 = student_t_975(usable - 1) * std::sqrt(var / usable);
  }
  return rep;
}

AnalyticComparison compare_to_analytic(const SimConfig& config) {
  AnalyticComparison cmp;
  cmp.report = simulate(config);
  if (cmp.report.empty) {
    throw UndersampledError("compare_to_analytic: empty simulation, no rate to compare");
  }
  const CostOptions options{config.policy.repair_from};
  cmp.analytic_rate = scheme_total_cost(config.params, config.scheme, options);
  cmp.empirical_rate = cmp.report.mean_cost_rate;
  const double diff = std::abs(cmp.empirical_rate - cmp.analytic_rate);
  if (cmp.analytic_rate != 0.0) {
    cmp.relative_error = diff / std::abs(cmp.analytic_rate);
  } else {
    cmp.relative_error = cmp.empirical_rate == 0.0
                             ? 0.0
                             : std::numeric_limits<double>::infinity();
  }
  cmp.analytic_within_ci = diff <= cmp.report.ci_halfwidth_95;
  return cmp;
}

}  // namespace d2d
