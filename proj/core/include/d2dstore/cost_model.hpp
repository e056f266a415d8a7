#pragma once

#include <string>
#include <variant>

#include "d2dstore/codes.hpp"
#include "d2dstore/markov.hpp"

namespace d2d {

/// Environment of the caching system. The file size B is kept explicit but
/// fixed to 1 at this API; all data volumes are in units of B.
struct SystemParams {
  double expected_nodes = 1.0;  ///< N
  double departure_rate = 1.0;  ///< lambda
  double request_rate = 0.0;    ///< omega, per-node file request rate
  double cost_ratio = 2.0;      ///< R, base-station bit cost over D2D bit cost
  double file_size = 1.0;       ///< B, fixed to 1

  /// p = omega / lambda, the expected number of requests per node sojourn.
  double popularity() const { return request_rate / departure_rate; }
  PopulationModel population() const { return {expected_nodes, departure_rate}; }

  /// Throws std::invalid_argument unless N > 0, lambda > 0, omega >= 0,
  /// R > 1 and B == 1.
  void validate() const;
};

struct SimpleCaching {};
struct BaseStationOnly {};
struct MbrScheme {
  CodeParams code;
};
struct MsrScheme {
  CodeParams code;
};
struct ReplicationScheme {
  int storage_nodes = 1;  ///< n full copies
};

using Scheme =
    std::variant<SimpleCaching, MbrScheme, MsrScheme, ReplicationScheme, BaseStationOnly>;

/// Throws std::invalid_argument on invariant violations: Mbr/Msr need valid
/// code parameters with k >= 2, Replication needs n >= 1.
void validate_scheme(const Scheme& scheme);

/// Stable lowercase name used across CLI output and config files.
std::string scheme_name(const Scheme& scheme);

/// Lowest state (relative to n) from which a departure is charged a repair:
/// `two_spares` charges from i >= n + 2 and is the default used throughout;
/// `one_spare` relaxes the gate to i >= n + 1, where a single vacancy already
/// exists for the replacement block.
enum class RepairFrom { two_spares, one_spare };

struct CostOptions {
  RepairFrom repair_from = RepairFrom::two_spares;
};

/// Expected transmission cost per time unit of a coded scheme, split into
/// its six components. total is always the exact sum of the components.
struct CostBreakdown {
  double allocation = 0.0;              ///< block re-allocation after data loss
  double redundancy = 0.0;              ///< redundant-block creation on arrivals
  double repair = 0.0;                  ///< regeneration of blocks lost to departures
  double remote_retrieval = 0.0;        ///< base-station downloads when too few nodes
  double reconstruction_storage = 0.0;  ///< requests served while every node stores
  double reconstruction_many = 0.0;     ///< requests in states with idle nodes present
  double total = 0.0;
};

/// Cost rate of keeping one full copy on a single node. A request while the
/// cacher is present costs 1; after the cacher departs the next requester
/// pays R and becomes the new cacher. With omega = 0 no request ever occurs
/// and the cost rate is 0 by convention, matching the omega -> 0 limit of
/// the closed form.
double cost_simple_caching(const SystemParams& params);

/// Cost rate R * N * omega when every request is served by the base station.
double cost_base_station_only(const SystemParams& params);

/// Six-component cost rate of a regenerating code at the given operating
/// point. Empty index ranges (e.g. the k..d-1 creation sum when d = k)
/// contribute exactly 0.
CostBreakdown cost_regenerating(const SystemParams& params, const CodeParams& code,
                                const CodePoint& point, const CostOptions& options = {});

/// Replication on n nodes: the regenerating cost specialized to
/// k = alpha = gamma = 1 (the repair degree plays no role there).
CostBreakdown cost_replication(const SystemParams& params, int storage_nodes,
                               const CostOptions& options = {});

/// Total cost rate of any scheme (breakdown-less schemes return the scalar).
double scheme_total_cost(const SystemParams& params, const Scheme& scheme,
                         const CostOptions& options = {});

}  // namespace d2d
