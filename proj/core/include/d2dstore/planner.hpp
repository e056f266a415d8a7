#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "d2dstore/cost_model.hpp"

namespace d2d {

/// The code design space searched by the planner: n and d are fixed, k is
/// scanned over [k_min, k_max].
struct DesignSpace {
  int storage_nodes = 30;  ///< n
  int repair_degree = 10;  ///< d
  int k_min = 2;
  int k_max = 10;

  /// Throws std::invalid_argument unless 2 <= k_min <= k_max <= d <= n - 1.
  void validate() const;
};

/// Scheme families compared by the planner. Base-station-only is excluded:
/// it is dominated by simple caching for every R > 1.
enum class Method { simple_caching, mbr, msr, replication };

std::string method_name(Method method);

struct KSearchResult {
  int k = 0;
  double cost = 0.0;
};

/// Exhaustive scan of k over the design space at fixed d; ties break toward
/// smaller k (fewer simultaneous D2D links).
KSearchResult best_k(const SystemParams& params, const DesignSpace& space, CodeFlavor flavor,
                     const CostOptions& options = {});

struct MethodChoice {
  Method method = Method::simple_caching;
  int k = 0;  ///< meaningful for mbr/msr only
  double cost = 0.0;
};

/// Cost of a method with its inner code parameters (best k) re-optimized.
double method_cost(const SystemParams& params, const DesignSpace& space, Method method,
                   const CostOptions& options = {});

/// Cheapest of simple caching, best-k MBR, best-k MSR and replication;
/// ties break in that listed order (simpler schemes first).
MethodChoice best_method(const SystemParams& params, const DesignSpace& space,
                         const CostOptions& options = {});

struct SweepRow {
  double p = 0.0;
  double cost_simple = 0.0;
  double cost_mbr = 0.0;
  int k_mbr = 0;
  double cost_msr = 0.0;
  int k_msr = 0;
  double cost_replication = 0.0;
  Method best = Method::simple_caching;
  // Costs relative to simple caching.
  double rel_mbr = 0.0;
  double rel_msr = 0.0;
  double rel_replication = 0.0;
};

/// Evaluates every method over a popularity grid with lambda normalized to 1
/// and omega = p; only the ratio omega/lambda affects scheme comparisons, so
/// the normalization is lossless. The grid must be strictly increasing and
/// positive.
std::vector<SweepRow> sweep_p(double cost_ratio, double expected_nodes, const DesignSpace& space,
                              std::span<const double> p_grid, const CostOptions& options = {});

/// Scan and bisection bounds of the threshold search.
inline constexpr double kThresholdScanLow = 1e-6;
inline constexpr double kThresholdScanHigh = 1e2;
inline constexpr int kThresholdScanPoints = 64;
inline constexpr double kThresholdRelTol = 1e-6;

/// Result of one crossing search. `p` is empty when the scan saw no sign
/// change; when several crossings exist the smallest is returned and
/// sign_changes records how many the scan found.
struct CrossingSearch {
  std::optional<double> p;
  int sign_changes = 0;

  bool multiple() const { return sign_changes > 1; }
};

/// Popularity at which the costs of two methods cross. Sign-scans
/// costA(p) - costB(p) over kThresholdScanPoints log-spaced points in
/// [kThresholdScanLow, kThresholdScanHigh], then bisects on log p until the
/// bracket is relatively 1e-6 wide and the cost gap at the returned point is
/// relatively below 1e-6. Inner code parameters are re-optimized at every
/// evaluated p.
CrossingSearch threshold(Method method_a, Method method_b, double cost_ratio,
                         double expected_nodes, const DesignSpace& space,
                         const CostOptions& options = {});

/// The three scheme-switching thresholds in p at one (R, N) point.
struct ThresholdSet {
  CrossingSearch caching_to_mbr;    ///< p1
  CrossingSearch mbr_to_msr;        ///< p2
  CrossingSearch msr_to_replication;  ///< p3
};

ThresholdSet switching_thresholds(double cost_ratio, double expected_nodes,
                                  const DesignSpace& space, const CostOptions& options = {});

struct SurfaceRow {
  double cost_ratio = 0.0;
  double expected_nodes = 0.0;
  ThresholdSet thresholds;
};

/// One row per (R, N) pair, ordered by ascending (R, N) regardless of the
/// input order or the worker count (0 workers means hardware concurrency).
/// Per-pair "no crossing" results are carried in-row; the surface never
/// aborts because of them.
std::vector<SurfaceRow> threshold_surface(std::span<const double> cost_ratio_grid,
                                          std::span<const double> expected_nodes_grid,
                                          const DesignSpace& space,
                                          const CostOptions& options = {},
                                          unsigned workers = 0);

}  // namespace d2d
