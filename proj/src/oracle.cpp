#include "orientstat/oracle.hpp"

#include "orientstat/sampling.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>

namespace orientstat {

namespace {

constexpr double kSearchCap = 1e7;
constexpr double kCostTie = 1e-9;

void check_search_size(int n, int m) {
    const double tuples = std::pow(double(m), double(n - 1));
    if (tuples > kSearchCap)
        throw std::invalid_argument("brute-force search needs " + std::to_string(tuples) +
                                    " gauge-fixed tuples; the cap is 1e7");
}

template <typename CostFn>
std::pair<Assignment, double> enumerate_min(int n, int m, CostFn&& cost) {
    Assignment current(n, 0);
    Assignment best = current;
    double best_cost = cost(current);
    while (true) {
        int pos = n - 1;
        while (pos >= 1 && current[pos] == m - 1)
            current[pos--] = 0;
        if (pos < 1)
            break;
        ++current[pos];
        const double c = cost(current);
        if (c < best_cost) {
            best_cost = c;
            best = current;
        }
    }
    return {best, best_cost};
}

double exact_cost_so3(std::span<const UnitQuaternion> moved, Metric metric) {
    if (metric == Metric::arithmetic) {
        Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
        for (const auto& q : moved)
            sum += q.matrix();
        sum /= double(moved.size());
        const Eigen::JacobiSVD<Eigen::Matrix3d> svd(sum);
        const Eigen::Vector3d s = svd.singularValues();
        const double eps = sum.determinant() >= 0.0 ? 1.0 : -1.0;
        return 2.0 * (3.0 - (s(0) + s(1) + eps * s(2)));
    }
    KarcherInfo info;
    std::vector<RotationMatrix> mats;
    mats.reserve(moved.size());
    for (const auto& q : moved)
        mats.push_back(q.matrix());
    const RotationMatrix mean = mean_so3_geometric(mats, &info);
    const UnitQuaternion mq = UnitQuaternion::from_matrix(mean);
    double total = 0.0;
    for (const auto& q : moved) {
        const double d = dist_so3(mq, q, Metric::geometric);
        total += d * d;
    }
    return total / double(moved.size());
}

double exact_cost_s2(std::span<const Direction> moved, Metric metric) {
    if (metric == Metric::arithmetic) {
        Direction sum = Direction::Zero();
        for (const auto& v : moved)
            sum += v;
        sum /= double(moved.size());
        return 2.0 * (1.0 - sum.norm());
    }
    KarcherInfo info;
    const Direction mean = mean_s2_geometric(moved, &info);
    double total = 0.0;
    for (const auto& v : moved) {
        const double d = dist_s2(mean, v, Metric::geometric);
        total += d * d;
    }
    return total / double(moved.size());
}

} // namespace

std::pair<Assignment, double> brute_force_min(Objective objective,
                                              std::span<const UnitQuaternion> rotations,
                                              const FiniteRotationGroup& group, Metric metric) {
    const int n = static_cast<int>(rotations.size());
    const int m = group.order();
    check_search_size(n, m);
    if (objective == Objective::surrogate) {
        const PairCostTable costs = build_costs(rotations, group, metric);
        return enumerate_min(n, m, [&](const Assignment& a) {
            return costs.assignment_cost(a, group);
        });
    }
    std::vector<UnitQuaternion> moved_table;
    moved_table.reserve(std::size_t(n) * m);
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < m; ++g)
            moved_table.push_back(rotations[i] * group.element(g));
    std::vector<UnitQuaternion> moved(n);
    return enumerate_min(n, m, [&](const Assignment& a) {
        for (int i = 0; i < n; ++i)
            moved[i] = moved_table[std::size_t(i) * m + a[i]];
        return exact_cost_so3(moved, metric);
    });
}

std::pair<Assignment, double> brute_force_min(Objective objective,
                                              std::span<const Direction> directions,
                                              const FiniteRotationGroup& group, Metric metric) {
    const int n = static_cast<int>(directions.size());
    const int m = group.order();
    check_search_size(n, m);
    if (objective == Objective::surrogate) {
        const PairCostTable costs = build_costs(directions, group, metric);
        return enumerate_min(n, m, [&](const Assignment& a) {
            return costs.assignment_cost(a, group);
        });
    }
    std::vector<Direction> moved_table;
    moved_table.reserve(std::size_t(n) * m);
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < m; ++g)
            moved_table.push_back(group.element_matrix(g).transpose() * directions[i]);
    std::vector<Direction> moved(n);
    return enumerate_min(n, m, [&](const Assignment& a) {
        for (int i = 0; i < n; ++i)
            moved[i] = moved_table[std::size_t(i) * m + a[i]];
        return exact_cost_s2(moved, metric);
    });
}

int trial_size(const FiniteRotationGroup& group) {
    const int m = group.order();
    if (m < 2)
        throw std::invalid_argument("benchmark trials need a nontrivial group");
    return 1 + static_cast<int>(std::ceil(std::log(1000.0) / std::log(double(m))));
}

TrialReport run_trial(std::uint64_t seed, const FiniteRotationGroup& group,
                      const IrrepSet* irreps, const TrialOptions& options) {
    using clock = std::chrono::steady_clock;
    TrialReport report;
    report.group = group.spec().name();
    report.metric = options.metric;
    report.mode = options.mode;
    report.seed = seed;
    report.N = options.n_override > 0 ? options.n_override : trial_size(group);

    Rng rng(seed);
    std::vector<UnitQuaternion> rotations;
    std::vector<Direction> directions;
    if (options.mode == Mode::rotation)
        for (int i = 0; i < report.N; ++i)
            rotations.push_back(rng.rotation());
    else
        for (int i = 0; i < report.N; ++i)
            directions.push_back(rng.direction());

    const auto eval_exact = [&](const Assignment& a) {
        return options.mode == Mode::rotation
                   ? eval_L_so3(rotations, a, group, options.metric)
                   : eval_L_s2(directions, a, group, options.metric);
    };

    if (options.with_surrogate_brute)
        std::tie(report.surrogate_argmin, report.surrogate_cost) =
            options.mode == Mode::rotation
                ? brute_force_min(Objective::surrogate, rotations, group, options.metric)
                : brute_force_min(Objective::surrogate, directions, group, options.metric);

    if (options.with_exact_brute && options.with_surrogate_brute) {
        std::tie(report.exact_argmin, report.exact_cost) =
            options.mode == Mode::rotation
                ? brute_force_min(Objective::exact, rotations, group, options.metric)
                : brute_force_min(Objective::exact, directions, group, options.metric);
        report.exact_at_surrogate_argmin = eval_exact(report.surrogate_argmin);
        report.roe_equal = report.exact_argmin == report.surrogate_argmin;
        const double num = std::abs(report.exact_cost - report.exact_at_surrogate_argmin);
        const double den = std::abs(report.exact_cost);
        report.rcg = den > 1e-15 ? num / den : (num <= 1e-12 ? 0.0 : INFINITY);
    }

    if (!options.with_sdp)
        return report;
    if (!irreps)
        throw std::invalid_argument("irreps are required for the relaxation pipeline");

    const NugProblem problem =
        options.mode == Mode::rotation
            ? build_problem(rotations, group, *irreps, options.metric)
            : build_problem(directions, group, *irreps, options.metric);

    SolveOptions solve_opts;
    solve_opts.tol = options.tol;
    solve_opts.max_iters = options.max_iters;
    const auto t0 = clock::now();
    const NugSolution solution = solve_sdp(problem, solve_opts);
    const auto t1 = clock::now();
    report.nug_assignment = greedy_round(solution, problem.costs, group, options.rounding);
    const auto t2 = clock::now();
    report.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.round_seconds = std::chrono::duration<double>(t2 - t1).count();

    report.nug_cost = problem.costs.assignment_cost(report.nug_assignment, group);
    report.sdp_objective = solution.objective;
    report.sdp_iterations = solution.diag.iterations;
    if (options.with_surrogate_brute) {
        report.nug_cost_optimal = report.nug_cost <= report.surrogate_cost + kCostTie;
        report.nug_assignment_optimal = report.nug_assignment == report.surrogate_argmin;
        report.rcg_nug = report.nug_cost_optimal
                             ? 0.0
                             : std::abs(report.surrogate_cost - report.nug_cost) /
                                   std::abs(report.surrogate_cost);
        report.objective_gap = solution.objective - report.surrogate_cost;
    }

    const int n = solution.N;
    const int m = solution.M;
    report.lambda_min = solution.diag.min_lambda;
    report.x_min_eig = -solution.diag.max_psd_violation;
    double sum_err = 0.0;
    for (int i = 0; i < n; ++i) {
        report.lambda_diag_min = std::min(report.lambda_diag_min, solution.lambda_at(i, i, 0));
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int g = 0; g < m; ++g)
                s += solution.lambda_at(i, j, g);
            sum_err = std::max(sum_err, std::abs(s - 1.0));
        }
    }
    report.lambda_sum_err = sum_err;

    if (options.with_singer) {
        report.has_singer = true;
        report.singer_assignment = singer_round(solution, group, *irreps);
        report.singer_cost = problem.costs.assignment_cost(report.singer_assignment, group);
        if (options.with_surrogate_brute) {
            report.singer_cost_optimal = report.singer_cost <= report.surrogate_cost + kCostTie;
            report.singer_rcg_nug = report.singer_cost_optimal
                                        ? 0.0
                                        : std::abs(report.surrogate_cost - report.singer_cost) /
                                              std::abs(report.surrogate_cost);
        }
    }
    return report;
}

BenchSummary aggregate(std::span<const TrialReport> reports) {
    BenchSummary s;
    if (reports.empty())
        throw std::invalid_argument("aggregate needs at least one report");
    s.trials = static_cast<int>(reports.size());
    int roe = 0, rcg001 = 0, rcg01 = 0, acc_cost = 0, acc_assign = 0;
    int singer_acc = 0, with_singer = 0;
    for (const auto& r : reports) {
        roe += r.roe_equal ? 1 : 0;
        rcg001 += r.rcg < 0.01 ? 1 : 0;
        rcg01 += r.rcg < 0.1 ? 1 : 0;
        s.max_rcg = std::max(s.max_rcg, r.rcg);
        acc_cost += r.nug_cost_optimal ? 1 : 0;
        acc_assign += r.nug_assignment_optimal ? 1 : 0;
        s.max_rcg_nug = std::max(s.max_rcg_nug, r.rcg_nug);
        if (r.has_singer) {
            ++with_singer;
            singer_acc += r.singer_cost_optimal ? 1 : 0;
            s.singer_max_rcg_nug = std::max(s.singer_max_rcg_nug, r.singer_rcg_nug);
        }
        s.worst_lambda_sum_err = std::max(s.worst_lambda_sum_err, r.lambda_sum_err);
        s.worst_lambda_min = std::min(s.worst_lambda_min, r.lambda_min);
        s.worst_lambda_diag_min = std::min(s.worst_lambda_diag_min, r.lambda_diag_min);
        s.worst_x_min_eig = std::min(s.worst_x_min_eig, r.x_min_eig);
        s.worst_objective_gap = std::max(s.worst_objective_gap, r.objective_gap);
        s.mean_solve_seconds += r.solve_seconds;
        s.mean_round_seconds += r.round_seconds;
    }
    const double t = double(s.trials);
    s.roe = roe / t;
    s.ratio_rcg_lt_001 = rcg001 / t;
    s.ratio_rcg_lt_01 = rcg01 / t;
    s.accuracy_cost = acc_cost / t;
    s.accuracy_assignment = acc_assign / t;
    s.mean_solve_seconds /= t;
    s.mean_round_seconds /= t;
    if (with_singer > 0) {
        s.has_singer = true;
        s.singer_accuracy_cost = singer_acc / double(with_singer);
    }
    return s;
}

} // namespace orientstat
