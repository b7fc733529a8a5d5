#pragma once

#include "orientstat/oracle.hpp"

#include <functional>

namespace orientstat {

/// Runs fn(0..count-1) on a small worker pool. Results must be written to
/// pre-sized slots so the outcome does not depend on completion order.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

/// One benchmark cell: a batch of identically configured trials on one
/// (group, metric, mode) combination with deterministic per-trial seeds.
struct BenchCell {
    std::string group;
    Metric metric = Metric::arithmetic;
    Mode mode = Mode::rotation;
    int N = 0;
    std::vector<TrialReport> reports;
    std::vector<std::string> failures;
    BenchSummary summary;
};

BenchCell run_cell(const FiniteRotationGroup& group, const IrrepSet* irreps,
                   const TrialOptions& options, int trials, std::uint64_t master_seed, int jobs);

/// One hyperparameter setting evaluated on a shared batch of solved trials.
struct SweepOutcome {
    RoundingParams params;
    double accuracy_cost = 0.0;
    double max_rcg_nug = 0.0;
    int non_global = 0;
    int failures = 0;
};

/// Solves each trial once and rounds it under every parameter setting, so
/// settings are compared on identical relaxation solutions. Per-trial
/// failures are counted in every outcome; messages land in failure_log.
std::vector<SweepOutcome> run_sweep(const FiniteRotationGroup& group, const IrrepSet& irreps,
                                    const TrialOptions& options,
                                    std::span<const RoundingParams> settings, int trials,
                                    std::uint64_t master_seed, int jobs,
                                    std::vector<std::string>* failure_log = nullptr);

/// Seed stream for a trial: mixes the cell identity with the trial index.
std::uint64_t trial_seed(std::uint64_t master, const std::string& group, Metric metric,
                         Mode mode, int trial);

} // namespace orientstat
