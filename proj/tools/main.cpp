#include "orientstat/bench.hpp"
#include "orientstat/cluster.hpp"
#include "orientstat/io.hpp"
#include "orientstat/rounding.hpp"
#include "orientstat/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace orientstat;

namespace {

struct CommonArgs {
    std::string group = "C1";
    std::string metric = "arith";
    std::string mode = "rotation";
    std::string input;
    std::string output;
    int m = 20;
    double c = 0.99;
    double tol = 1e-6;
    int max_iters = 20000;
    int trials = 100;
    std::uint64_t seed = 0;
    int jobs = 0;
};

Metric parse_metric(const std::string& text) {
    if (text == "arith")
        return Metric::arithmetic;
    if (text == "geo")
        return Metric::geometric;
    throw CLI::ValidationError("--metric", "expected 'arith' or 'geo'");
}

Mode parse_mode(const std::string& text) {
    if (text == "rotation")
        return Mode::rotation;
    if (text == "projection")
        return Mode::projection;
    throw CLI::ValidationError("--mode", "expected 'rotation' or 'projection'");
}

const char* metric_name(Metric m) { return m == Metric::arithmetic ? "arith" : "geo"; }
const char* mode_name(Mode m) { return m == Mode::rotation ? "rotation" : "projection"; }

void write_output(const std::string& path, const json& doc) {
    if (path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

json assignment_json(const Assignment& a) { return json(a); }

json diagnostics_json(const SolveDiagnostics& diag) {
    return json{{"iterations", diag.iterations},
                {"converged", diag.converged},
                {"primal_residual", diag.primal_residual},
                {"dual_residual", diag.dual_residual},
                {"max_psd_violation", diag.max_psd_violation},
                {"max_affine_violation", diag.max_affine_violation},
                {"min_lambda", diag.min_lambda}};
}

int cmd_meanvar(const CommonArgs& args, bool verbose) {
    const Metric metric = parse_metric(args.metric);
    const Mode mode = parse_mode(args.mode);
    if (args.input.empty())
        throw std::runtime_error("meanvar needs --input");
    const auto group = build_group(GroupSpec::parse(args.group));
    const auto irreps = irreps_of(group);
    const RoundingParams rounding{args.m, args.c};

    std::vector<UnitQuaternion> rotations;
    std::vector<Direction> directions;
    int n = 0;
    if (mode == Mode::rotation) {
        rotations = load_quaternions(args.input);
        n = static_cast<int>(rotations.size());
    } else {
        directions = load_directions(args.input);
        n = static_cast<int>(directions.size());
    }
    if (n == 0)
        throw std::runtime_error("input '" + args.input + "' holds no data lines");

    const auto t_start = std::chrono::steady_clock::now();
    const NugProblem problem = mode == Mode::rotation
                                   ? build_problem(rotations, group, irreps, metric)
                                   : build_problem(directions, group, irreps, metric);
    SolveOptions solve_opts;
    solve_opts.tol = args.tol;
    solve_opts.max_iters = args.max_iters;
    if (verbose)
        solve_opts.log = &std::cerr;
    const auto t_solve0 = std::chrono::steady_clock::now();
    const NugSolution solution = solve_sdp(problem, solve_opts);
    const Assignment assignment = greedy_round(solution, problem.costs, group, rounding);
    const auto t_solve1 = std::chrono::steady_clock::now();

    const double rounded_cost = problem.costs.assignment_cost(assignment, group);
    const double variance = mode == Mode::rotation
                                ? eval_L_so3(rotations, assignment, group, metric)
                                : eval_L_s2(directions, assignment, group, metric);

    json result;
    result["command"] = "meanvar";
    result["config"] = {{"group", group.spec().name()},
                        {"metric", args.metric},
                        {"mode", args.mode},
                        {"m", args.m},
                        {"c", args.c},
                        {"tol", args.tol},
                        {"max_iters", args.max_iters},
                        {"input", args.input}};
    result["n"] = n;
    result["representatives"] = assignment_json(assignment);
    result["variance"] = variance;
    result["sdp_objective"] = solution.objective;
    result["rounded_surrogate_cost"] = rounded_cost;
    // The sandwich bound between the surrogate and the exact cost is an
    // arithmetic-metric statement; no counterpart is emitted for 'geo'.
    if (mode == Mode::rotation && metric == Metric::arithmetic)
        result["variance_lower_bound"] = bound_f2_inv(bound_f1(variance));
    else
        result["variance_lower_bound"] = nullptr;
    result["mean_method"] = metric == Metric::arithmetic
                                ? (mode == Mode::rotation ? "svd_chordal" : "normalized_resultant")
                                : "geodesic_iterative";

    if (mode == Mode::rotation) {
        std::vector<RotationMatrix> moved;
        for (int i = 0; i < n; ++i)
            moved.push_back((rotations[i] * group.element(assignment[i])).matrix());
        const RotationMatrix mean = metric == Metric::arithmetic
                                        ? mean_so3_arith(moved)
                                        : mean_so3_geometric(moved);
        const UnitQuaternion mq = UnitQuaternion::from_matrix(mean);
        result["mean"] = {{"quaternion", {mq.w, mq.x, mq.y, mq.z}},
                          {"matrix",
                           {{mean(0, 0), mean(0, 1), mean(0, 2)},
                            {mean(1, 0), mean(1, 1), mean(1, 2)},
                            {mean(2, 0), mean(2, 1), mean(2, 2)}}}};
    } else {
        std::vector<Direction> moved;
        for (int i = 0; i < n; ++i)
            moved.push_back(group.element_matrix(assignment[i]).transpose() * directions[i]);
        const Direction mean = metric == Metric::arithmetic ? mean_s2_arith(moved)
                                                            : mean_s2_geometric(moved);
        result["mean"] = {{"direction", {mean.x(), mean.y(), mean.z()}}};
    }

    result["diagnostics"] = diagnostics_json(solution.diag);
    const auto t_end = std::chrono::steady_clock::now();
    result["timing"] = {
        {"solve_round_seconds", std::chrono::duration<double>(t_solve1 - t_solve0).count()},
        {"total_seconds", std::chrono::duration<double>(t_end - t_start).count()}};

    write_output(args.output, result);
    std::cerr << "meanvar: N=" << n << " group=" << group.spec().name()
              << " variance=" << variance << " objective=" << solution.objective << "\n";
    return 0;
}

json cell_json(const BenchCell& cell, bool with_reports) {
    json j;
    j["group"] = cell.group;
    j["metric"] = metric_name(cell.metric);
    j["mode"] = mode_name(cell.mode);
    j["n"] = cell.N;
    j["trials"] = cell.summary.trials;
    j["failures"] = cell.failures;
    j["summary"] = {{"roe", cell.summary.roe},
                    {"ratio_rcg_lt_0.01", cell.summary.ratio_rcg_lt_001},
                    {"ratio_rcg_lt_0.1", cell.summary.ratio_rcg_lt_01},
                    {"max_rcg", cell.summary.max_rcg},
                    {"accuracy", cell.summary.accuracy_cost},
                    {"accuracy_assignment", cell.summary.accuracy_assignment},
                    {"max_rcg_nug", cell.summary.max_rcg_nug},
                    {"worst_lambda_sum_err", cell.summary.worst_lambda_sum_err},
                    {"worst_lambda_min", cell.summary.worst_lambda_min},
                    {"worst_lambda_diag_min", cell.summary.worst_lambda_diag_min},
                    {"worst_x_min_eig", cell.summary.worst_x_min_eig},
                    {"worst_objective_gap", cell.summary.worst_objective_gap}};
    if (cell.summary.has_singer)
        j["summary"]["singer_accuracy"] = cell.summary.singer_accuracy_cost;
    if (cell.summary.has_singer)
        j["summary"]["singer_max_rcg_nug"] = cell.summary.singer_max_rcg_nug;
    j["timing"] = {{"mean_solve_seconds", cell.summary.mean_solve_seconds},
                   {"mean_round_seconds", cell.summary.mean_round_seconds}};
    if (with_reports) {
        json rows = json::array();
        for (const auto& r : cell.reports) {
            json row = {{"seed", r.seed},
                        {"rcg", r.rcg},
                        {"rcg_nug", r.rcg_nug},
                        {"roe_equal", r.roe_equal},
                        {"optimal", r.nug_cost_optimal},
                        {"surrogate_cost", r.surrogate_cost},
                        {"nug_cost", r.nug_cost}};
            if (r.has_singer) {
                row["singer_optimal"] = r.singer_cost_optimal;
                row["singer_rcg_nug"] = r.singer_rcg_nug;
            }
            rows.push_back(std::move(row));
        }
        j["trials_detail"] = std::move(rows);
    }
    return j;
}

void print_cell(const BenchCell& cell, const std::string& suite) {
    std::cerr << suite << " " << cell.group << " " << metric_name(cell.metric) << " "
              << mode_name(cell.mode) << " N=" << cell.N << ": ";
    if (suite == "approx") {
        std::cerr << "RoE=" << 100 * cell.summary.roe << "%"
                  << " RCG<0.01=" << 100 * cell.summary.ratio_rcg_lt_001 << "%"
                  << " RCG<0.1=" << 100 * cell.summary.ratio_rcg_lt_01 << "%";
    } else if (suite == "timing") {
        std::cerr << "solve=" << cell.summary.mean_solve_seconds << "s"
                  << " round=" << cell.summary.mean_round_seconds << "s";
    } else {
        std::cerr << "accuracy=" << 100 * cell.summary.accuracy_cost << "%"
                  << " maxRCG-NUG=" << 100 * cell.summary.max_rcg_nug << "%";
        if (cell.summary.has_singer)
            std::cerr << " singer=" << 100 * cell.summary.singer_accuracy_cost << "%";
    }
    if (!cell.failures.empty())
        std::cerr << " failures=" << cell.failures.size();
    std::cerr << "\n";
}

int cmd_bench(const CommonArgs& args, const std::string& suite,
              std::vector<std::string> group_names, const std::vector<double>& c_list,
              const std::vector<int>& m_list, const std::vector<int>& n_list,
              bool with_reports) {
    if (group_names.empty())
        group_names = {args.group};
    if (args.trials < 1)
        throw std::runtime_error("bench needs --trials >= 1");

    json doc;
    doc["command"] = "bench";
    doc["suite"] = suite;
    doc["config"] = {{"trials", args.trials}, {"seed", args.seed},
                     {"m", args.m},           {"c", args.c},
                     {"tol", args.tol},       {"max_iters", args.max_iters}};
    json cells = json::array();

    for (const auto& name : group_names) {
        const auto group = build_group(GroupSpec::parse(name));
        const auto irreps = irreps_of(group);
        TrialOptions options;
        options.rounding = {args.m, args.c};
        options.tol = args.tol;
        options.max_iters = args.max_iters;

        if (suite == "approx") {
            options.metric = Metric::arithmetic;
            options.mode = Mode::rotation;
            options.with_sdp = false;
            const BenchCell cell =
                run_cell(group, nullptr, options, args.trials, args.seed, args.jobs);
            print_cell(cell, suite);
            cells.push_back(cell_json(cell, with_reports));
        } else if (suite == "nug" || suite == "singer") {
            if (suite == "singer" && group.spec().family != GroupFamily::cyclic)
                throw std::runtime_error("the singer suite needs cyclic groups, got " + name);
            options.with_singer = suite == "singer";
            for (Metric metric : {Metric::arithmetic, Metric::geometric})
                for (Mode mode : {Mode::rotation, Mode::projection}) {
                    options.metric = metric;
                    options.mode = mode;
                    const BenchCell cell =
                        run_cell(group, &irreps, options, args.trials, args.seed, args.jobs);
                    print_cell(cell, suite);
                    cells.push_back(cell_json(cell, with_reports));
                }
        } else if (suite == "sweep") {
            options.metric = Metric::arithmetic;
            options.mode = Mode::rotation;
            std::vector<RoundingParams> settings;
            for (int m : m_list.empty() ? std::vector<int>{args.m} : m_list)
                for (double c : c_list.empty() ? std::vector<double>{args.c} : c_list)
                    settings.push_back({m, c});
            std::vector<std::string> sweep_failures;
            const auto outcomes = run_sweep(group, irreps, options, settings, args.trials,
                                            args.seed, args.jobs, &sweep_failures);
            json rows = json::array();
            for (const auto& o : outcomes) {
                std::cerr << "sweep " << name << " m=" << o.params.m << " c=" << o.params.c
                          << ": accuracy=" << 100 * o.accuracy_cost << "%"
                          << " maxRCG-NUG=" << 100 * o.max_rcg_nug << "%"
                          << " non_global=" << o.non_global << "\n";
                rows.push_back({{"m", o.params.m},
                                {"c", o.params.c},
                                {"accuracy", o.accuracy_cost},
                                {"max_rcg_nug", o.max_rcg_nug},
                                {"non_global", o.non_global},
                                {"failures", o.failures}});
            }
            cells.push_back(
                {{"group", name}, {"settings", std::move(rows)}, {"failures", sweep_failures}});
        } else if (suite == "timing") {
            options.with_surrogate_brute = false;
            options.with_exact_brute = false;
            options.metric = Metric::arithmetic;
            for (Mode mode : {Mode::rotation, Mode::projection}) {
                options.mode = mode;
                for (int n : n_list.empty() ? std::vector<int>{10, 20} : n_list) {
                    options.n_override = n;
                    const BenchCell cell =
                        run_cell(group, &irreps, options, args.trials, args.seed, args.jobs);
                    print_cell(cell, suite);
                    cells.push_back(cell_json(cell, with_reports));
                }
            }
        } else {
            throw std::runtime_error("unknown suite '" + suite + "'");
        }
    }
    doc["cells"] = std::move(cells);
    write_output(args.output, doc);
    return 0;
}

int cmd_gen(const CommonArgs& args, const std::string& centers_file, double radius, int count) {
    const auto group = build_group(GroupSpec::parse(args.group));
    std::vector<SyntheticClass> classes;
    if (!centers_file.empty()) {
        const LabeledPoints centers = load_labeled_points(centers_file);
        for (const auto& c : centers.points)
            classes.push_back({c, radius, count});
    } else if (args.group == "C3" && radius == 0.2 && count == 100) {
        classes = default_c3_classes();
    } else {
        throw std::runtime_error(
            "gen needs --centers (or the default five-class C3 arrangement: "
            "--group C3 --radius 0.2 --count 100)");
    }
    const LabeledPoints data = gen_synthetic(classes, group, args.seed);
    if (args.output.empty())
        write_labeled_points(std::cout, data);
    else
        save_labeled_points(args.output, data);
    std::cerr << "gen: " << data.points.size() << " points in " << classes.size()
              << " classes under " << group.spec().name() << "\n";
    return 0;
}

int cmd_cluster(const CommonArgs& args, const std::string& baseline, int k, int subsample,
                int kmeans_iters, const std::string& plot_path) {
    if (args.input.empty())
        throw std::runtime_error("cluster needs --input");
    const auto group = build_group(GroupSpec::parse(args.group));
    const LabeledPoints data = load_labeled_points(args.input);
    if (data.points.empty())
        throw std::runtime_error("input '" + args.input + "' holds no data lines");

    ClusterConfig config;
    config.k = k;
    config.metric = parse_metric(args.metric);
    config.mean_subsample = subsample;
    config.max_iters = kmeans_iters;
    config.seed = args.seed;
    config.rounding = {args.m, args.c};
    config.sdp_tol = args.tol;
    config.sdp_max_iters = args.max_iters;

    const std::vector<int>* truth = data.labels.empty() ? nullptr : &data.labels;
    const auto t0 = std::chrono::steady_clock::now();
    ClusterResult result;
    if (baseline == "quotient") {
        const auto irreps = irreps_of(group);
        result = kmeans_quotient(data.points, config, group, irreps, truth);
    } else if (baseline == "fundamental") {
        result = kmeans_fundamental_baseline(data.points, config, group, truth);
    } else {
        throw std::runtime_error("--baseline must be 'quotient' or 'fundamental'");
    }
    const auto t1 = std::chrono::steady_clock::now();

    json doc;
    doc["command"] = "cluster";
    doc["config"] = {{"group", group.spec().name()},
                     {"metric", args.metric},
                     {"baseline", baseline},
                     {"k", k},
                     {"subsample", subsample},
                     {"kmeans_iters", kmeans_iters},
                     {"seed", args.seed},
                     {"m", args.m},
                     {"c", args.c},
                     {"tol", args.tol}};
    doc["labels"] = result.labels;
    json centers = json::array();
    for (const auto& c : result.centers)
        centers.push_back({c.x(), c.y(), c.z()});
    doc["centers"] = std::move(centers);
    doc["objective_trace"] = result.objective_trace;
    doc["iterations"] = result.iterations;
    if (result.accuracy >= 0.0)
        doc["accuracy"] = result.accuracy;
    doc["timing"] = {{"total_seconds", std::chrono::duration<double>(t1 - t0).count()}};
    write_output(args.output, doc);

    if (!plot_path.empty()) {
        LabeledPoints plot{data.points, result.labels};
        std::ofstream out(plot_path);
        if (!out)
            throw std::runtime_error("cannot write '" + plot_path + "'");
        out << "# x y z cluster\n";
        write_labeled_points(out, plot);
    }
    std::cerr << "cluster: " << baseline << " k=" << k;
    if (result.accuracy >= 0.0)
        std::cerr << " accuracy=" << 100 * result.accuracy << "%";
    std::cerr << " iterations=" << result.iterations << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Means, variances, and clustering of orientations under "
                 "molecular symmetry"};
    app.require_subcommand(1);

    CommonArgs args;
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Stream solver diagnostics to stderr");

    const auto add_common = [&](CLI::App* cmd, bool with_pipeline) {
        cmd->add_option("--group", args.group, "Symmetry group: Cn, Dn, T, O, I");
        cmd->add_option("--seed", args.seed, "Master seed");
        cmd->add_option("--output", args.output, "Output file (stdout when omitted)");
        if (with_pipeline) {
            cmd->add_option("--metric", args.metric, "Distance family: arith | geo");
            cmd->add_option("--m", args.m, "Hypothesis capacity")->check(CLI::PositiveNumber);
            cmd->add_option("--c", args.c, "Mass threshold in [0,1]")
                ->check(CLI::Range(0.0, 1.0));
            cmd->add_option("--tol", args.tol, "Solver tolerance")->check(CLI::PositiveNumber);
            cmd->add_option("--max-iters", args.max_iters, "Solver iteration cap")
                ->check(CLI::PositiveNumber);
        }
    };

    auto* meanvar = app.add_subcommand("meanvar", "Mean and variance of one orientation set");
    add_common(meanvar, true);
    meanvar->add_option("--mode", args.mode, "Data kind: rotation | projection");
    meanvar->add_option("--input", args.input, "Input file of quaternions or directions");

    auto* bench = app.add_subcommand("bench", "Simulation benchmarks");
    add_common(bench, true);
    std::string suite = "nug";
    std::vector<std::string> bench_groups;
    std::vector<double> c_list;
    std::vector<int> m_list, n_list;
    bool with_reports = false;
    bench->add_option("--suite", suite, "approx | nug | singer | sweep | timing");
    bench->add_option("--groups", bench_groups, "Groups to benchmark (repeatable)");
    bench->add_option("--trials", args.trials, "Trials per cell")->check(CLI::PositiveNumber);
    bench->add_option("--jobs", args.jobs, "Worker threads (0 = hardware)");
    bench->add_option("--c-list", c_list, "Sweep values for c");
    bench->add_option("--m-list", m_list, "Sweep values for m");
    bench->add_option("--n-list", n_list, "Sizes for the timing suite");
    bench->add_flag("--per-trial", with_reports, "Embed per-trial rows in the output");

    auto* gen = app.add_subcommand("gen", "Generate labeled synthetic projection directions");
    add_common(gen, false);
    std::string centers_file;
    double radius = 0.2;
    int count = 100;
    gen->add_option("--centers", centers_file, "File of class centers, one 'x y z' per line");
    gen->add_option("--radius", radius, "Circle chord radius")->check(CLI::Range(1e-9, 0.999));
    gen->add_option("--count", count, "Points per class")->check(CLI::PositiveNumber);

    auto* cluster = app.add_subcommand("cluster", "K-means on labeled or unlabeled directions");
    add_common(cluster, true);
    std::string baseline = "quotient";
    int k = 5, subsample = 10, kmeans_iters = 50;
    std::string plot_path;
    cluster->add_option("--input", args.input, "Input 'x y z [label]' file");
    cluster->add_option("--baseline", baseline, "quotient | fundamental");
    cluster->add_option("--k", k, "Cluster count")->check(CLI::PositiveNumber);
    cluster->add_option("--subsample", subsample, "Points per cluster for the mean step")
        ->check(CLI::PositiveNumber);
    cluster->add_option("--kmeans-iters", kmeans_iters, "Iteration cap")
        ->check(CLI::PositiveNumber);
    cluster->add_option("--plot-data", plot_path, "Write 'x y z cluster' rows for plotting");

    CLI11_PARSE(app, argc, argv);

    try {
        if (meanvar->parsed())
            return cmd_meanvar(args, verbose);
        if (bench->parsed())
            return cmd_bench(args, suite, bench_groups, c_list, m_list, n_list, with_reports);
        if (gen->parsed())
            return cmd_gen(args, centers_file, radius, count);
        if (cluster->parsed())
            return cmd_cluster(args, baseline, k, subsample, kmeans_iters, plot_path);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
