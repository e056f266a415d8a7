#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace d2d {

/// M/M/inf population of mobile nodes: arrivals at constant rate N*lambda,
/// each of the i present nodes departs independently at rate lambda. The
/// stationary number of nodes is Poisson with mean N. N is an expected count
/// and need not be an integer; state indices are integers.
struct PopulationModel {
  double expected_nodes = 1.0;  ///< N
  double departure_rate = 1.0;  ///< lambda = 1/T, T the mean sojourn time

  /// Throws std::invalid_argument unless N > 0 and lambda > 0 (both finite).
  void validate() const;
};

/// Contiguous state range [i_min, i_max] that carries all of the stationary
/// mass except at most tail_mass_bound.
struct TruncationWindow {
  long i_min = 0;
  long i_max = 0;
  /// Upper bound on the pmf mass outside [i_min, i_max]. Usually equal to the
  /// residual 1 - sum(pmf over window); it can exceed the requested epsilon
  /// only when that epsilon is below double resolution (~1e-15).
  double tail_mass_bound = 0.0;
};

/// Excluded tail mass used by every analytic infinite sum in this library.
inline constexpr double kTailEps = 1e-12;

enum class WeightGrowth { polynomial, super_polynomial };

/// Normalization constant turning per-event expected costs into cost per
/// time unit.  `closed_form` is the constant 2*N*lambda (exact only in the
/// large-N limit); `exact` is the true mean event rate
/// 1 / sum_i pi(i) / ((i+N) lambda), exposed so the quality of the closed
/// form can be quantified.
enum class NormalizerMode { closed_form, exact };

/// pi(i) = N^i e^{-N} / i!, evaluated in log space so it stays finite and
/// accurate for N up to 1e5 and i well past N + 20 sqrt(N). Returns 0 for
/// i < 0 (outside the support).
double stationary_pmf(const PopulationModel& model, long i);

/// log pi(i); -inf for i < 0.
double log_stationary_pmf(const PopulationModel& model, long i);

/// Smallest window around the mode floor(N) whose excluded mass is at most
/// tail_eps, grown greedily by the larger-pmf side. Requires
/// 0 < tail_eps < 1.
TruncationWindow truncation_window(const PopulationModel& model, double tail_eps);

double event_rate_normalizer(const PopulationModel& model, NormalizerMode mode);

/// sum_{i >= max(i_from, window.i_min)}^{window.i_max} pi(i) * weight(i).
template <class WeightFn>
double weighted_window_sum(const PopulationModel& model, const TruncationWindow& window,
                           long i_from, WeightFn&& weight) {
  double sum = 0.0;
  for (long i = std::max(i_from, window.i_min); i <= window.i_max; ++i) {
    sum += stationary_pmf(model, i) * weight(i);
  }
  return sum;
}

/// sum_{i = i_from}^{inf} pi(i) * weight(i), truncated to the kTailEps
/// window. The weight must be nonnegative and grow at most polynomially in i;
/// a caller flagging super-polynomial growth is rejected because the
/// truncation error can no longer be bounded by the excluded mass.
template <class WeightFn>
double weighted_tail_sum(const PopulationModel& model, long i_from, WeightFn&& weight,
                         WeightGrowth growth = WeightGrowth::polynomial) {
  if (growth == WeightGrowth::super_polynomial) {
    throw std::invalid_argument(
        "weighted_tail_sum: super-polynomial weight, truncation error unbounded");
  }
  return weighted_window_sum(model, truncation_window(model, kTailEps), i_from,
                             std::forward<WeightFn>(weight));
}

}  // namespace d2d
