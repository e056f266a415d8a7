#include "d2dstore/markov.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace d2d {
namespace {

constexpr long kLogFactorialTableSize = 1024;
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2 pi)

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const std::array<double, kLogFactorialTableSize> table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (long i = 1; i < kLogFactorialTableSize; ++i) {
      acc += std::log(static_cast<long double>(i));
      t[static_cast<std::size_t>(i)] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

// ln Gamma(x) by the Stirling series. With three correction terms the
// truncation error at x >= 1024 is below 1e-27, far under double epsilon.
double log_gamma_stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

double log_factorial(long i) {
  if (i < kLogFactorialTableSize) {
    return log_factorial_table()[static_cast<std::size_t>(i)];
  }
  return log_gamma_stirling(static_cast<double>(i) + 1.0);
}

}  // namespace

void PopulationModel::validate() const {
  if (!(expected_nodes > 0.0) || !std::isfinite(expected_nodes)) {
    throw std::invalid_argument("PopulationModel: expected_nodes must be positive and finite");
  }
  if (!(departure_rate > 0.0) || !std::isfinite(departure_rate)) {
    throw std::invalid_argument("PopulationModel: departure_rate must be positive and finite");
  }
}

double log_stationary_pmf(const PopulationModel& model, long i) {
  model.validate();
  if (i < 0) {
    return -std::numeric_limits<double>::infinity();
  }
  const double n = model.expected_nodes;
  return static_cast<double>(i) * std::log(n) - n - log_factorial(i);
}

double stationary_pmf(const PopulationModel& model, long i) {
  return std::exp(log_stationary_pmf(model, i));
}

TruncationWindow truncation_window(const PopulationModel& model, double tail_eps) {
  model.validate();
  if (!(tail_eps > 0.0) || !(tail_eps < 1.0)) {
    throw std::invalid_argument("truncation_window: tail_eps must lie in (0, 1)");
  }
  const long mode = static_cast<long>(std::floor(model.expected_nodes));
  long lo = mode;
  long hi = mode;
  double mass = stationary_pmf(model, mode);
  while (mass < 1.0 - tail_eps) {
    const double below = lo > 0 ? stationary_pmf(model, lo - 1) : -1.0;
    const double above = stationary_pmf(model, hi + 1);
    const double next = std::max(below, above);
    if (next <= 0.0 || mass + next == mass) {
      break;  // no representable mass left outside the window
    }
    if (below >= above) {
      --lo;
      mass += below;
    } else {
      ++hi;
      mass += above;
    }
  }
  return TruncationWindow{lo, hi, std::max(0.0, 1.0 - mass)};
}

double event_rate_normalizer(const PopulationModel& model, NormalizerMode mode) {
  model.validate();
  const double n = model.expected_nodes;
  const double lambda = model.departure_rate;
  if (mode == NormalizerMode::closed_form) {
    return 2.0 * n * lambda;
  }
  // In state i the next event (arrival or departure) occurs at rate
  // (i + N) lambda, so the stationary mean inter-event time is
  // sum_i pi(i) / ((i + N) lambda).
  const double mean_interval =
      weighted_tail_sum(model, 0, [n](long i) { return 1.0 / (static_cast<double>(i) + n); }) /
      lambda;
  return 1.0 / mean_interval;
}

}  // namespace d2d
