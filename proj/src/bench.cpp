#include "orientstat/bench.hpp"

#include "orientstat/sampling.hpp"

#include <atomic>
#include <thread>

namespace orientstat {

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 0)
        jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= count)
                    return;
                fn(i);
            }
        });
    for (auto& t : workers)
        t.join();
}

std::uint64_t trial_seed(std::uint64_t master, const std::string& group, Metric metric,
                         Mode mode, int trial) {
    // FNV-1a over the cell identity gives the stream id.
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    };
    for (char c : group)
        mix(c);
    mix(metric == Metric::arithmetic ? 'A' : 'G');
    mix(mode == Mode::rotation ? 'R' : 'P');
    return derive_seed(master, h, std::uint64_t(trial));
}

BenchCell run_cell(const FiniteRotationGroup& group, const IrrepSet* irreps,
                   const TrialOptions& options, int trials, std::uint64_t master_seed, int jobs) {
    BenchCell cell;
    cell.group = group.spec().name();
    cell.metric = options.metric;
    cell.mode = options.mode;
    cell.N = options.n_override > 0 ? options.n_override : trial_size(group);

    std::vector<TrialReport> slots(trials);
    std::vector<std::string> errors(trials);
    parallel_for(trials, jobs, [&](int t) {
        const std::uint64_t seed =
            trial_seed(master_seed, cell.group, options.metric, options.mode, t);
        try {
            slots[t] = run_trial(seed, group, irreps, options);
        } catch (const std::exception& err) {
            errors[t] = "trial " + std::to_string(t) + " (seed " + std::to_string(seed) +
                        "): " + err.what();
        }
    });

    for (int t = 0; t < trials; ++t) {
        if (errors[t].empty())
            cell.reports.push_back(std::move(slots[t]));
        else
            cell.failures.push_back(std::move(errors[t]));
    }
    if (!cell.reports.empty()) {
        cell.summary = aggregate(cell.reports);
        cell.summary.failures = static_cast<int>(cell.failures.size());
        cell.summary.trials = trials;
    }
    return cell;
}

std::vector<SweepOutcome> run_sweep(const FiniteRotationGroup& group, const IrrepSet& irreps,
                                    const TrialOptions& options,
                                    std::span<const RoundingParams> settings, int trials,
                                    std::uint64_t master_seed, int jobs,
                                    std::vector<std::string>* failure_log) {
    struct TrialScore {
        bool failed = true;
        std::string message;
        std::vector<double> rcg_nug; // per setting
    };
    std::vector<TrialScore> scores(trials);

    parallel_for(trials, jobs, [&](int t) {
        const std::uint64_t seed =
            trial_seed(master_seed, group.spec().name(), options.metric, options.mode, t);
        try {
            Rng rng(seed);
            const int n = options.n_override > 0 ? options.n_override : trial_size(group);
            std::vector<UnitQuaternion> rotations;
            std::vector<Direction> directions;
            if (options.mode == Mode::rotation)
                for (int i = 0; i < n; ++i)
                    rotations.push_back(rng.rotation());
            else
                for (int i = 0; i < n; ++i)
                    directions.push_back(rng.direction());

            const auto [argmin, best_cost] =
                options.mode == Mode::rotation
                    ? brute_force_min(Objective::surrogate, rotations, group, options.metric)
                    : brute_force_min(Objective::surrogate, directions, group, options.metric);

            const NugProblem problem =
                options.mode == Mode::rotation
                    ? build_problem(rotations, group, irreps, options.metric)
                    : build_problem(directions, group, irreps, options.metric);
            SolveOptions solve_opts;
            solve_opts.tol = options.tol;
            solve_opts.max_iters = options.max_iters;
            const NugSolution solution = solve_sdp(problem, solve_opts);

            TrialScore score;
            score.failed = false;
            for (const auto& params : settings) {
                const Assignment rounded = greedy_round(solution, problem.costs, group, params);
                const double cost = problem.costs.assignment_cost(rounded, group);
                const double gap = cost <= best_cost + 1e-9
                                       ? 0.0
                                       : std::abs(best_cost - cost) / std::abs(best_cost);
                score.rcg_nug.push_back(gap);
            }
            scores[t] = std::move(score);
        } catch (const std::exception& err) {
            scores[t].failed = true;
            scores[t].message = "trial " + std::to_string(t) + " (seed " +
                                std::to_string(seed) + "): " + err.what();
        }
    });

    std::vector<SweepOutcome> outcomes(settings.size());
    for (std::size_t s = 0; s < settings.size(); ++s)
        outcomes[s].params = settings[s];
    int ok = 0;
    for (const auto& score : scores) {
        if (score.failed) {
            for (auto& outcome : outcomes)
                ++outcome.failures;
            if (failure_log)
                failure_log->push_back(score.message);
            continue;
        }
        ++ok;
        for (std::size_t s = 0; s < settings.size(); ++s) {
            if (score.rcg_nug[s] == 0.0)
                outcomes[s].accuracy_cost += 1.0;
            else
                ++outcomes[s].non_global;
            outcomes[s].max_rcg_nug = std::max(outcomes[s].max_rcg_nug, score.rcg_nug[s]);
        }
    }
    if (ok > 0)
        for (auto& outcome : outcomes)
            outcome.accuracy_cost /= double(ok);
    return outcomes;
}

} // namespace orientstat
