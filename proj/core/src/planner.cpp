#include "d2dstore/planner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace d2d {

void DesignSpace::validate() const {
  if (k_min < 2) {
    throw std::invalid_argument("DesignSpace: k_min must be at least 2");
  }
  if (k_max < k_min) {
    throw std::invalid_argument("DesignSpace: k_max must be at least k_min");
  }
  if (k_max > repair_degree) {
    throw std::invalid_argument("DesignSpace: k_max must not exceed the repair degree d");
  }
  if (repair_degree > storage_nodes - 1) {
    throw std::invalid_argument("DesignSpace: repair degree d must satisfy d <= n - 1");
  }
}

std::string method_name(Method method) {
  switch (method) {
    case Method::simple_caching: return "simple-caching";
    case Method::mbr: return "mbr";
    case Method::msr: return "msr";
    case Method::replication: return "replication";
  }
  return "unknown";
}

KSearchResult best_k(const SystemParams& params, const DesignSpace& space, CodeFlavor flavor,
                     const CostOptions& options) {
  params.validate();
  space.validate();
  KSearchResult best;
  for (int k = space.k_min; k <= space.k_max; ++k) {
    const CodeParams code{space.storage_nodes, k, space.repair_degree};
    const CodePoint point = flavor == CodeFlavor::mbr ? mbr_point(params.file_size, code)
                                                      : msr_point(params.file_size, code);
    const double cost = cost_regenerating(params, code, point, options).total;
    if (best.k == 0 || cost < best.cost) {
      best = {k, cost};
    }
  }
  return best;
}

double method_cost(const SystemParams& params, const DesignSpace& space, Method method,
                   const CostOptions& options) {
  switch (method) {
    case Method::simple_caching:
      return cost_simple_caching(params);
    case Method::mbr:
      return best_k(params, space, CodeFlavor::mbr, options).cost;
    case Method::msr:
      return best_k(params, space, CodeFlavor::msr, options).cost;
    case Method::replication:
      return cost_replication(params, space.storage_nodes, options).total;
  }
  throw std::invalid_argument("method_cost: unknown method");
}

MethodChoice best_method(const SystemParams& params, const DesignSpace& space,
                         const CostOptions& options) {
  params.validate();
  space.validate();
  MethodChoice choice{Method::simple_caching, 0, cost_simple_caching(params)};
  const KSearchResult mbr = best_k(params, space, CodeFlavor::mbr, options);
  if (mbr.cost < choice.cost) choice = {Method::mbr, mbr.k, mbr.cost};
  const KSearchResult msr = best_k(params, space, CodeFlavor::msr, options);
  if (msr.cost < choice.cost) choice = {Method::msr, msr.k, msr.cost};
  const double rep = cost_replication(params, space.storage_nodes, options).total;
  if (rep < choice.cost) choice = {Method::replication, 0, rep};
  return choice;
}

namespace {

SystemParams params_at(double cost_ratio, double expected_nodes, double p) {
  SystemParams params;
  params.expected_nodes = expected_nodes;
  params.departure_rate = 1.0;
  params.request_rate = p;
  params.cost_ratio = cost_ratio;
  return params;
}

}  // namespace

std::vector<SweepRow> sweep_p(double cost_ratio, double expected_nodes, const DesignSpace& space,
                              std::span<const double> p_grid, const CostOptions& options) {
  space.validate();
  if (p_grid.empty()) {
    throw std::invalid_argument("sweep_p: empty popularity grid");
  }
  for (std::size_t j = 0; j < p_grid.size(); ++j) {
    if (!(p_grid[j] > 0.0) || (j > 0 && !(p_grid[j] > p_grid[j - 1]))) {
      throw std::invalid_argument("sweep_p: p grid must be positive and strictly increasing");
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(p_grid.size());
  for (const double p : p_grid) {
    const SystemParams params = params_at(cost_ratio, expected_nodes, p);
    SweepRow row;
    row.p = p;
    row.cost_simple = cost_simple_caching(params);
    const KSearchResult mbr = best_k(params, space, CodeFlavor::mbr, options);
    row.cost_mbr = mbr.cost;
    row.k_mbr = mbr.k;
    const KSearchResult msr = best_k(params, space, CodeFlavor::msr, options);
    row.cost_msr = msr.cost;
    row.k_msr = msr.k;
    row.cost_replication = cost_replication(params, space.storage_nodes, options).total;
    row.best = Method::simple_caching;
    double best_cost = row.cost_simple;
    if (row.cost_mbr < best_cost) { row.best = Method::mbr; best_cost = row.cost_mbr; }
    if (row.cost_msr < best_cost) { row.best = Method::msr; best_cost = row.cost_msr; }
    if (row.cost_replication < best_cost) { row.best = Method::replication; }
    row.rel_mbr = row.cost_mbr / row.cost_simple;
    row.rel_msr = row.cost_msr / row.cost_simple;
    row.rel_replication = row.cost_replication / row.cost_simple;
    rows.push_back(row);
  }
  return rows;
}

CrossingSearch threshold(Method method_a, Method method_b, double cost_ratio,
                         double expected_nodes, const DesignSpace& space,
                         const CostOptions& options) {
  if (method_a == method_b) {
    throw std::invalid_argument("threshold: methods must be distinct");
  }
  space.validate();

  const auto gap = [&](double p) {
    const SystemParams params = params_at(cost_ratio, expected_nodes, p);
    return method_cost(params, space, method_a, options) -
           method_cost(params, space, method_b, options);
  };
  const auto rel_gap = [&](double p) {
    const SystemParams params = params_at(cost_ratio, expected_nodes, p);
    const double a = method_cost(params, space, method_a, options);
    const double b = method_cost(params, space, method_b, options);
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  };

  const double log_lo = std::log(kThresholdScanLow);
  const double log_hi = std::log(kThresholdScanHigh);
  std::array<double, kThresholdScanPoints> grid{};
  std::array<double, kThresholdScanPoints> values{};
  for (int j = 0; j < kThresholdScanPoints; ++j) {
    grid[static_cast<std::size_t>(j)] =
        std::exp(log_lo + (log_hi - log_lo) * j / (kThresholdScanPoints - 1));
    values[static_cast<std::size_t>(j)] = gap(grid[static_cast<std::size_t>(j)]);
  }

  CrossingSearch result;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  for (int j = 0; j + 1 < kThresholdScanPoints; ++j) {
    const double fa = values[static_cast<std::size_t>(j)];
    const double fb = values[static_cast<std::size_t>(j) + 1];
    if (fa == 0.0) {
      if (result.sign_changes == 0) {
        bracket_lo = bracket_hi = grid[static_cast<std::size_t>(j)];
      }
      ++result.sign_changes;
    } else if (fa * fb < 0.0) {
      if (result.sign_changes == 0) {
        bracket_lo = grid[static_cast<std::size_t>(j)];
        bracket_hi = grid[static_cast<std::size_t>(j) + 1];
      }
      ++result.sign_changes;
    }
  }
  if (result.sign_changes == 0) {
    return result;  // explicit "no crossing"
  }
  if (bracket_lo == bracket_hi) {
    result.p = bracket_lo;
    return result;
  }

  double flo = gap(bracket_lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::sqrt(bracket_lo * bracket_hi);
    const double fmid = gap(mid);
    if (flo * fmid <= 0.0) {
      bracket_hi = mid;
    } else {
      bracket_lo = mid;
      flo = fmid;
    }
    if (std::log(bracket_hi / bracket_lo) <= kThresholdRelTol) {
      const double candidate = std::sqrt(bracket_lo * bracket_hi);
      if (rel_gap(candidate) <= kThresholdRelTol) {
        result.p = candidate;
        return result;
      }
    }
  }
  result.p = std::sqrt(bracket_lo * bracket_hi);
  return result;
}

ThresholdSet switching_thresholds(double cost_ratio, double expected_nodes,
                                  const DesignSpace& space, const CostOptions& options) {
  ThresholdSet set;
  set.caching_to_mbr = threshold(Method::simple_caching, Method::mbr, cost_ratio, expected_nodes,
                                 space, options);
  set.mbr_to_msr = threshold(Method::mbr, Method::msr, cost_ratio, expected_nodes, space, options);
  set.msr_to_replication =
      threshold(Method::msr, Method::replication, cost_ratio, expected_nodes, space, options);
  return set;
}

std::vector<SurfaceRow> threshold_surface(std::span<const double> cost_ratio_grid,
                                          std::span<const double> expected_nodes_grid,
                                          const DesignSpace& space, const CostOptions& options,
                                          unsigned workers) {
  space.validate();
  if (cost_ratio_grid.empty() || expected_nodes_grid.empty()) {
    throw std::invalid_argument("threshold_surface: grids must be nonempty");
  }

  std::vector<double> ratios(cost_ratio_grid.begin(), cost_ratio_grid.end());
  std::vector<double> populations(expected_nodes_grid.begin(), expected_nodes_grid.end());
  std::sort(ratios.begin(), ratios.end());
  std::sort(populations.begin(), populations.end());

  const std::size_t cells = ratios.size() * populations.size();
  std::vector<SurfaceRow> rows(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto run_cell = [&](std::size_t cell) {
    const double ratio = ratios[cell / populations.size()];
    const double population = populations[cell % populations.size()];
    rows[cell] = SurfaceRow{ratio, population,
                            switching_thresholds(ratio, population, space, options)};
  };
  const auto worker_loop = [&] {
    for (std::size_t cell; (cell = next.fetch_add(1)) < cells;) {
      try {
        run_cell(cell);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  unsigned thread_count = workers ? workers : std::thread::hardware_concurrency();
  thread_count = std::max(1u, std::min<unsigned>(thread_count, static_cast<unsigned>(cells)));
  if (thread_count == 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker_loop);
    for (auto& thread : pool) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

}  // namespace d2d
