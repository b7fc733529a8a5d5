#pragma once

#include "orientstat/oracle.hpp"

namespace orientstat {

struct ClusterConfig {
    int k = 1;
    Metric metric = Metric::arithmetic;
    int mean_subsample = 10; // points drawn per cluster for the relaxed mean
    int max_iters = 50;
    std::uint64_t seed = 0;
    RoundingParams rounding;
    double sdp_tol = 1e-6;
    int sdp_max_iters = 20000;
};

/// One synthetic class: points evenly spaced on the circle of Euclidean
/// (chord) radius about the center.
struct SyntheticClass {
    Direction center;
    double radius = 0.2;
    int count = 100;
};

struct LabeledPoints {
    std::vector<Direction> points;
    std::vector<int> labels;
};

/// Circle construction with true labels; each point is then moved by a
/// seeded random symmetry element, which leaves its quotient class intact.
LabeledPoints gen_synthetic(std::span<const SyntheticClass> classes,
                            const FiniteRotationGroup& group, std::uint64_t seed);

/// The five-class arrangement used by the C3 clustering benchmark.
std::vector<SyntheticClass> default_c3_classes();

struct ClusterResult {
    std::vector<int> labels;
    std::vector<Direction> centers;
    std::vector<double> objective_trace; // after each assignment step
    int iterations = 0;
    double accuracy = -1.0; // permutation-matched, -1 when truth unknown
};

/// K-means in the quotient metric: labels by quotient distance, centers by
/// the relaxation-plus-rounding mean of a per-cluster subsample. Greedy
/// farthest-first seeding from a seeded uniform first pick; empty clusters
/// are re-seeded from the farthest point.
ClusterResult kmeans_quotient(std::span<const Direction> points, const ClusterConfig& config,
                              const FiniteRotationGroup& group, const IrrepSet& irreps,
                              const std::vector<int>* true_labels = nullptr);

/// Conventional baseline: rotate every point into the fundamental domain of
/// a cyclic group (azimuthal sector phi in [0, 2*pi/n)), then classical
/// K-means under the chordal distance with plain random seeding.
ClusterResult kmeans_fundamental_baseline(std::span<const Direction> points,
                                          const ClusterConfig& config,
                                          const FiniteRotationGroup& group,
                                          const std::vector<int>* true_labels = nullptr);

/// Representative of the point inside the cyclic fundamental domain.
Direction fundamental_domain_representative(const Direction& p, int fold);

/// Agreement fraction maximized over label permutations (exhaustive, k <= 8).
double permutation_accuracy(std::span<const int> labels, std::span<const int> truth, int k);

} // namespace orientstat
