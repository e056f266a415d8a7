#include "d2dstore/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace d2d {

void SystemParams::validate() const {
  if (!(expected_nodes > 0.0) || !std::isfinite(expected_nodes)) {
    throw std::invalid_argument("SystemParams: expected_nodes N must be positive and finite");
  }
  if (!(departure_rate > 0.0) || !std::isfinite(departure_rate)) {
    throw std::invalid_argument("SystemParams: departure_rate lambda must be positive and finite");
  }
  if (!(request_rate >= 0.0) || !std::isfinite(request_rate)) {
    throw std::invalid_argument("SystemParams: request_rate omega must be nonnegative and finite");
  }
  if (!(cost_ratio > 1.0) || !std::isfinite(cost_ratio)) {
    throw std::invalid_argument("SystemParams: cost_ratio R must exceed 1");
  }
  if (file_size != 1.0) {
    throw std::invalid_argument("SystemParams: file_size B is fixed to 1 at this API");
  }
}

void validate_scheme(const Scheme& scheme) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MbrScheme> || std::is_same_v<T, MsrScheme>) {
          s.code.validate();
          if (s.code.reconstruction_degree < 2) {
            throw std::invalid_argument("Scheme: coded schemes require k >= 2");
          }
        } else if constexpr (std::is_same_v<T, ReplicationScheme>) {
          if (s.storage_nodes < 1) {
            throw std::invalid_argument("Scheme: replication requires n >= 1");
          }
        }
      },
      scheme);
}

std::string scheme_name(const Scheme& scheme) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SimpleCaching>) return "simple-caching";
        if constexpr (std::is_same_v<T, MbrScheme>) return "mbr";
        if constexpr (std::is_same_v<T, MsrScheme>) return "msr";
        if constexpr (std::is_same_v<T, ReplicationScheme>) return "replication";
        if constexpr (std::is_same_v<T, BaseStationOnly>) return "base-station-only";
      },
      scheme);
}

double cost_simple_caching(const SystemParams& params) {
  params.validate();
  if (params.request_rate == 0.0) {
    return 0.0;  // no requests ever occur; see header
  }
  const double n = params.expected_nodes;
  const double lambda = params.departure_rate;
  const double omega = params.request_rate;
  const double r = params.cost_ratio;
  return ((n - 1.0) * omega + r * lambda) / (1.0 + lambda / (n * omega));
}

double cost_base_station_only(const SystemParams& params) {
  params.validate();
  return params.cost_ratio * params.expected_nodes * params.request_rate;
}

namespace {

long repair_min_state(int storage_nodes, RepairFrom repair_from) {
  return storage_nodes + (repair_from == RepairFrom::two_spares ? 2 : 1);
}

// The six cost terms for generic (n, k, d, alpha, gamma). Replication enters
// with k = d = 1 and alpha = gamma = 1, in which case the two redundancy
// sums merge into a single sum over [1, n-1].
CostBreakdown regenerating_terms(const SystemParams& params, int n, int k, int d, double alpha,
                                 double gamma, const CostOptions& options) {
  const double big_n = params.expected_nodes;
  const double omega = params.request_rate;
  const double r = params.cost_ratio;
  const PopulationModel pop = params.population();
  const double normalizer = event_rate_normalizer(pop, NormalizerMode::closed_form);

  CostBreakdown out;

  out.allocation = normalizer * stationary_pmf(pop, k - 1) *
                   (big_n / (static_cast<double>(k - 1) + big_n)) * r * k * alpha;

  double creation = 0.0;
  for (long i = k; i < d; ++i) {
    creation += stationary_pmf(pop, i) * (big_n / (static_cast<double>(i) + big_n)) * k * alpha;
  }
  for (long i = d; i < n; ++i) {
    creation += stationary_pmf(pop, i) * (big_n / (static_cast<double>(i) + big_n)) * gamma;
  }
  out.redundancy = normalizer * creation;

  const TruncationWindow window = truncation_window(pop, kTailEps);
  out.repair = normalizer * n * gamma *
               weighted_window_sum(pop, window, repair_min_state(n, options.repair_from),
                                   [big_n](long i) { return 1.0 / (static_cast<double>(i) + big_n); });

  double remote = 0.0;
  for (long i = 1; i < k; ++i) {
    remote += stationary_pmf(pop, i) * static_cast<double>(i);
  }
  out.remote_retrieval = remote * omega * r;

  double storage_requests = 0.0;
  for (long i = k; i <= n; ++i) {
    storage_requests += stationary_pmf(pop, i) * static_cast<double>(i);
  }
  out.reconstruction_storage = storage_requests * omega * (k - 1) * alpha;

  out.reconstruction_many =
      omega * alpha *
      weighted_window_sum(pop, window, n + 1, [k, n](long i) {
        return static_cast<double>(k) * static_cast<double>(i) - static_cast<double>(n);
      });

  out.total = out.allocation + out.redundancy + out.repair + out.remote_retrieval +
              out.reconstruction_storage + out.reconstruction_many;
  return out;
}

}  // namespace

CostBreakdown cost_regenerating(const SystemParams& params, const CodeParams& code,
                                const CodePoint& point, const CostOptions& options) {
  params.validate();
  code.validate();
  return regenerating_terms(params, code.storage_nodes, code.reconstruction_degree,
                            code.repair_degree, point.alpha, point.gamma, options);
}

CostBreakdown cost_replication(const SystemParams& params, int storage_nodes,
                               const CostOptions& options) {
  params.validate();
  if (storage_nodes < 1) {
    throw std::invalid_argument("cost_replication: n must be at least 1");
  }
  return regenerating_terms(params, storage_nodes, 1, 1, 1.0, 1.0, options);
}

double scheme_total_cost(const SystemParams& params, const Scheme& scheme,
                         const CostOptions& options) {
  validate_scheme(scheme);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SimpleCaching>) {
          return cost_simple_caching(params);
        } else if constexpr (std::is_same_v<T, MbrScheme>) {
          return cost_regenerating(params, s.code, mbr_point(params.file_size, s.code), options)
              .total;
        } else if constexpr (std::is_same_v<T, MsrScheme>) {
          return cost_regenerating(params, s.code, msr_point(params.file_size, s.code), options)
              .total;
        } else if constexpr (std::is_same_v<T, ReplicationScheme>) {
          return cost_replication(params, s.storage_nodes, options).total;
        } else {
          return cost_base_station_only(params);
        }
      },
      scheme);
}

}  // namespace d2d
