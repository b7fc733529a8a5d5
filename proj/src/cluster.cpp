#include "orientstat/cluster.hpp"

#include "orientstat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace orientstat {

namespace {

using std::numbers::pi;

Eigen::Vector3d orthonormal_to(const Direction& c) {
    const Eigen::Vector3d axis =
        std::abs(c.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    return axis.cross(c).normalized();
}

std::vector<int> sample_without_replacement(int count, int population, Rng& rng) {
    std::vector<int> indices(population);
    std::iota(indices.begin(), indices.end(), 0);
    for (int t = 0; t < count; ++t)
        std::swap(indices[t], indices[t + rng.next_index(population - t)]);
    indices.resize(count);
    return indices;
}

/// Relaxed quotient mean of a point subset: align the subset with the
/// relaxation + greedy rounding, then average the aligned representatives.
Direction quotient_mean(std::span<const Direction> points, const std::vector<int>& subset,
                        const ClusterConfig& config, const FiniteRotationGroup& group,
                        const IrrepSet& irreps) {
    std::vector<Direction> sample;
    sample.reserve(subset.size());
    for (int idx : subset)
        sample.push_back(points[idx]);
    if (sample.size() == 1)
        return sample.front();

    const NugProblem problem = build_problem(sample, group, irreps, config.metric);
    SolveOptions opts;
    opts.tol = config.sdp_tol;
    opts.max_iters = config.sdp_max_iters;
    const NugSolution solution = solve_sdp(problem, opts);
    const Assignment assignment = greedy_round(solution, problem.costs, group, config.rounding);

    std::vector<Direction> moved;
    moved.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        moved.push_back(group.element_matrix(assignment[i]).transpose() * sample[i]);
    return mean_s2_arith(moved);
}

double quotient_objective(std::span<const Direction> points, const std::vector<int>& labels,
                          const std::vector<Direction>& centers,
                          const FiniteRotationGroup& group, Metric metric) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = quotient_dist_s2(points[i], centers[labels[i]], group, metric).first;
        total += d * d;
    }
    return total;
}

void fix_empty_clusters(std::span<const Direction> points, std::vector<int>& labels,
                        std::vector<Direction>& centers, const FiniteRotationGroup& group,
                        Metric metric) {
    const int k = static_cast<int>(centers.size());
    std::vector<int> sizes(k, 0);
    for (int label : labels)
        ++sizes[label];
    for (int c = 0; c < k; ++c) {
        if (sizes[c] > 0)
            continue;
        // Re-seed from the point farthest from its current center.
        int farthest = 0;
        double worst = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (sizes[labels[i]] <= 1)
                continue;
            const double d =
                quotient_dist_s2(points[i], centers[labels[i]], group, metric).first;
            if (d > worst) {
                worst = d;
                farthest = static_cast<int>(i);
            }
        }
        centers[c] = points[farthest];
        --sizes[labels[farthest]];
        labels[farthest] = c;
        ++sizes[c];
    }
}

} // namespace

LabeledPoints gen_synthetic(std::span<const SyntheticClass> classes,
                            const FiniteRotationGroup& group, std::uint64_t seed) {
    LabeledPoints out;
    Rng rng(derive_seed(seed, 0x67656e)); // "gen"
    int label = 0;
    for (const auto& cls : classes) {
        if (cls.radius <= 0.0 || cls.radius >= 1.0)
            throw std::invalid_argument("synthetic class radius must lie in (0, 1)");
        const Direction c = cls.center.normalized();
        const Eigen::Vector3d u = orthonormal_to(c);
        const Eigen::Vector3d v = c.cross(u);
        // Chord radius r corresponds to polar angle 2*asin(r/2) about the center.
        const double theta = 2.0 * std::asin(cls.radius / 2.0);
        for (int t = 0; t < cls.count; ++t) {
            const double phi = 2.0 * pi * double(t) / double(cls.count);
            Direction p = std::cos(theta) * c +
                          std::sin(theta) * (std::cos(phi) * u + std::sin(phi) * v);
            const int g = rng.next_index(group.order());
            out.points.push_back(group.element_matrix(g).transpose() * p);
            out.labels.push_back(label);
        }
        ++label;
    }
    return out;
}

std::vector<SyntheticClass> default_c3_classes() {
    const double h = std::sqrt(3.0) / 2.0;
    return {
        {Direction(0.0, 0.5, h), 0.2, 100},
        {Direction(0.75, std::sqrt(3.0) / 4.0, 0.5), 0.2, 100},
        {Direction(1.0, 0.0, 0.0), 0.2, 100},
        {Direction(0.75, std::sqrt(3.0) / 4.0, -0.5), 0.2, 100},
        {Direction(0.0, 0.5, -h), 0.2, 100},
    };
}

ClusterResult kmeans_quotient(std::span<const Direction> points, const ClusterConfig& config,
                              const FiniteRotationGroup& group, const IrrepSet& irreps,
                              const std::vector<int>* true_labels) {
    const int n = static_cast<int>(points.size());
    const int k = config.k;
    if (k < 1 || k > n)
        throw std::invalid_argument("cluster count must lie in [1, point count]");

    ClusterResult result;
    result.centers.reserve(k);

    // Greedy farthest-first seeding keeps one center per well-separated blob.
    Rng rng(derive_seed(config.seed, 0x696e6974)); // "init"
    result.centers.push_back(points[rng.next_index(n)]);
    std::vector<double> min_dist(n, 0.0);
    for (int i = 0; i < n; ++i)
        min_dist[i] = quotient_dist_s2(points[i], result.centers[0], group, config.metric).first;
    while (static_cast<int>(result.centers.size()) < k) {
        const int next = static_cast<int>(
            std::max_element(min_dist.begin(), min_dist.end()) - min_dist.begin());
        result.centers.push_back(points[next]);
        for (int i = 0; i < n; ++i)
            min_dist[i] = std::min(
                min_dist[i],
                quotient_dist_s2(points[i], result.centers.back(), group, config.metric).first);
    }

    result.labels.assign(n, 0);
    std::vector<int> previous(n, -1);
    for (result.iterations = 0; result.iterations < config.max_iters; ++result.iterations) {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int c = 0; c < k; ++c) {
                const double d =
                    quotient_dist_s2(points[i], result.centers[c], group, config.metric).first;
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            result.labels[i] = arg;
        }
        fix_empty_clusters(points, result.labels, result.centers, group, config.metric);
        result.objective_trace.push_back(
            quotient_objective(points, result.labels, result.centers, group, config.metric));
        if (result.labels == previous) {
            ++result.iterations;
            break;
        }
        previous = result.labels;

        for (int c = 0; c < k; ++c) {
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (result.labels[i] == c)
                    members.push_back(i);
            const int draw = std::min<int>(config.mean_subsample, members.size());
            Rng mean_rng(derive_seed(config.seed, 0x6d65616e, // "mean"
                                     std::uint64_t(result.iterations) * k + c));
            const auto picks = sample_without_replacement(draw, members.size(), mean_rng);
            std::vector<int> subset;
            subset.reserve(draw);
            for (int p : picks)
                subset.push_back(members[p]);
            result.centers[c] = quotient_mean(points, subset, config, group, irreps);
        }
    }

    if (true_labels)
        result.accuracy = permutation_accuracy(result.labels, *true_labels, k);
    return result;
}

Direction fundamental_domain_representative(const Direction& p, int fold) {
    const double phi = std::atan2(p.y(), p.x());
    const double sector = 2.0 * pi / fold;
    const double wrapped = phi - sector * std::floor(phi / sector);
    const double shift = wrapped - phi;
    const double c = std::cos(shift), s = std::sin(shift);
    return Direction(c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z());
}

ClusterResult kmeans_fundamental_baseline(std::span<const Direction> points,
                                          const ClusterConfig& config,
                                          const FiniteRotationGroup& group,
                                          const std::vector<int>* true_labels) {
    if (group.spec().family != GroupFamily::cyclic)
        throw std::invalid_argument(
            "the fundamental-domain baseline is defined for cyclic groups only");
    const int n = static_cast<int>(points.size());
    const int k = config.k;
    if (k < 1 || k > n)
        throw std::invalid_argument("cluster count must lie in [1, point count]");

    std::vector<Direction> mapped;
    mapped.reserve(n);
    for (const auto& p : points)
        mapped.push_back(fundamental_domain_representative(p, group.spec().n));

    ClusterResult result;
    Rng rng(derive_seed(config.seed, 0x62617365)); // "base"
    std::vector<int> seeds = sample_without_replacement(k, n, rng);
    for (int idx : seeds)
        result.centers.push_back(mapped[idx]);

    result.labels.assign(n, 0);
    std::vector<int> previous(n, -1);
    for (result.iterations = 0; result.iterations < config.max_iters; ++result.iterations) {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int c = 0; c < k; ++c) {
                const double d = dist_s2(mapped[i], result.centers[c], Metric::arithmetic);
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            result.labels[i] = arg;
        }
        // Classical K-means: an emptied cluster keeps its previous center.
        double objective = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = dist_s2(mapped[i], result.centers[result.labels[i]],
                                     Metric::arithmetic);
            objective += d * d;
        }
        result.objective_trace.push_back(objective);
        if (result.labels == previous) {
            ++result.iterations;
            break;
        }
        previous = result.labels;

        for (int c = 0; c < k; ++c) {
            std::vector<Direction> members;
            for (int i = 0; i < n; ++i)
                if (result.labels[i] == c)
                    members.push_back(mapped[i]);
            if (!members.empty())
                result.centers[c] = mean_s2_arith(members);
        }
    }

    if (true_labels)
        result.accuracy = permutation_accuracy(result.labels, *true_labels, k);
    return result;
}

double permutation_accuracy(std::span<const int> labels, std::span<const int> truth, int k) {
    if (labels.size() != truth.size() || labels.empty())
        throw std::invalid_argument("label vectors must be nonempty and equally sized");
    if (k > 8)
        throw std::invalid_argument("permutation-matched accuracy supports k <= 8");
    std::vector<std::vector<int>> confusion(k, std::vector<int>(k, 0));
    for (std::size_t i = 0; i < labels.size(); ++i)
        ++confusion[labels[i]][truth[i]];
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    int best = 0;
    do {
        int agree = 0;
        for (int c = 0; c < k; ++c)
            agree += confusion[c][perm[c]];
        best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return double(best) / double(labels.size());
}

} // namespace orientstat
