#pragma once

#include <iosfwd>

#include "experiment_config.hpp"

namespace d2d::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidParams = 2;
inline constexpr int kExitUndersampled = 3;
inline constexpr int kExitNoCrossing = 4;

// Each command resolves its inputs from the config, computes, and writes one
// table to config.out (or `out` when unset). Errors go to `err` and map to
// the exit codes above.
int run_costs(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_thresholds(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace d2d::cli
