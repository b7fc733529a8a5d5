#pragma once

#include "orientstat/nug.hpp"
#include "orientstat/rounding.hpp"

#include <cstdint>
#include <string>

namespace orientstat {

/// Objective selector: the exact cost L (best common representative) or its
/// pairwise surrogate L~.
enum class Objective { exact, surrogate };

/// Exhaustive gauge-fixed minimization (g_1 = e) over the group assignment
/// tuple. Rejects searches beyond |G|^(N-1) = 1e7 tuples. Ties resolve to
/// the lexicographically smallest tuple.
std::pair<Assignment, double> brute_force_min(Objective objective,
                                              std::span<const UnitQuaternion> rotations,
                                              const FiniteRotationGroup& group, Metric metric);
std::pair<Assignment, double> brute_force_min(Objective objective,
                                              std::span<const Direction> directions,
                                              const FiniteRotationGroup& group, Metric metric);

/// Trial size from the benchmark rule N = 1 + ceil(log_|G| 1000).
int trial_size(const FiniteRotationGroup& group);

struct TrialOptions {
    Metric metric = Metric::arithmetic;
    Mode mode = Mode::rotation;
    RoundingParams rounding;
    double tol = 1e-6;
    int max_iters = 20000;
    bool with_surrogate_brute = true; // argmin of L~, needed for the accuracy metrics
    bool with_exact_brute = true;     // argmin of L, needed for RoE / RCG
    bool with_sdp = true;
    bool with_singer = false;         // cyclic groups only
    int n_override = 0;               // 0 = benchmark formula
};

struct TrialReport {
    std::string group;
    Metric metric = Metric::arithmetic;
    Mode mode = Mode::rotation;
    int N = 0;
    std::uint64_t seed = 0;

    Assignment exact_argmin;
    double exact_cost = 0.0;
    Assignment surrogate_argmin;
    double surrogate_cost = 0.0;
    double exact_at_surrogate_argmin = 0.0;
    bool roe_equal = false;
    double rcg = 0.0;

    Assignment nug_assignment;
    double nug_cost = 0.0;
    double rcg_nug = 0.0;
    bool nug_cost_optimal = false;
    bool nug_assignment_optimal = false;

    double sdp_objective = 0.0;
    int sdp_iterations = 0;
    double lambda_sum_err = 0.0;  // max |sum_g lambda_ij(g) - 1|
    double lambda_min = 0.0;      // min entry
    double lambda_diag_min = 1.0; // min over i of lambda_ii(e)
    double x_min_eig = 0.0;       // min eigenvalue across blocks
    double objective_gap = 0.0;   // sdp objective - brute-force surrogate min

    bool has_singer = false;
    Assignment singer_assignment;
    double singer_cost = 0.0;
    double singer_rcg_nug = 0.0;
    bool singer_cost_optimal = false;

    double solve_seconds = 0.0;
    double round_seconds = 0.0;
};

/// Samples a trial, brute-forces both objectives, then runs the relaxation
/// and rounding pipeline with all benchmark metrics filled in.
TrialReport run_trial(std::uint64_t seed, const FiniteRotationGroup& group,
                      const IrrepSet* irreps, const TrialOptions& options);

struct BenchSummary {
    int trials = 0;
    int failures = 0;
    double roe = 0.0;
    double ratio_rcg_lt_001 = 0.0;
    double ratio_rcg_lt_01 = 0.0;
    double max_rcg = 0.0;

    double accuracy_cost = 0.0; // RCG-NUG = 0 with costs equal within 1e-9
    double accuracy_assignment = 0.0;
    double max_rcg_nug = 0.0;

    bool has_singer = false;
    double singer_accuracy_cost = 0.0;
    double singer_max_rcg_nug = 0.0;

    double worst_lambda_sum_err = 0.0;
    double worst_lambda_min = 0.0;
    double worst_lambda_diag_min = 1.0;
    double worst_x_min_eig = 0.0;
    double worst_objective_gap = 0.0;

    double mean_solve_seconds = 0.0;
    double mean_round_seconds = 0.0;
};

BenchSummary aggregate(std::span<const TrialReport> reports);

} // namespace orientstat
