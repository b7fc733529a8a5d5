#pragma once

#include "orientstat/nug.hpp"

namespace orientstat {

struct RoundingParams {
    int m = 20;     // hypothesis capacity, >= 1
    double c = 0.99; // probability-mass threshold in [0, 1]
};

/// Partially decided relative elements s(i, j) stored as a component forest:
/// every index carries the group element relating it to its component root,
/// so s(i, j) = offset_i * offset_j^{-1} whenever i and j share a component.
/// Symmetric/transitive completion is therefore implicit, and deciding one
/// cross-component pair closes all pairs between the two components at once.
class PartialSolution {
public:
    PartialSolution(int n, const FiniteRotationGroup& group, const PairCostTable& costs);

    bool decided(int i, int j) const { return root_[i] == root_[j]; }
    /// s(i, j); requires decided(i, j).
    int rel(int i, int j) const;
    /// Sum of f_ij(s(i, j)) over all decided ordered pairs.
    double partial_cost() const { return cost_; }
    bool complete() const { return component_count_ == 1; }
    int component_count() const { return component_count_; }

    /// Records g_i g_j^{-1} = g. The pair must be undecided; merging two
    /// components closes every pair between them and accumulates their costs.
    void decide(int i, int j, int g);

    /// Recomputes the partial cost from scratch (consistency checks).
    double recompute_cost() const;

private:
    const FiniteRotationGroup* group_;
    const PairCostTable* costs_;
    std::vector<int> root_;
    std::vector<int> offset_; // offset_[i] = s(i, root of i)
    std::vector<std::vector<int>> members_;
    int component_count_;
    double cost_ = 0.0;
};

struct RoundingStats {
    int iterations = 0;
    int max_hypotheses = 0;
    int max_spread = 0; // largest candidate count L encountered
};

/// Greedy multi-hypothesis rounding over the lambda tensor. Deterministic:
/// ties sort by lowest element index, then lexicographic pair order. The
/// output is gauge-fixed so the first point carries the identity.
Assignment greedy_round(const NugSolution& solution, const PairCostTable& costs,
                        const FiniteRotationGroup& group, const RoundingParams& params = {},
                        RoundingStats* stats = nullptr);

/// Baseline rounding from the top eigenvector of X^1; valid for cyclic
/// groups only, where the first nontrivial irrep separates all elements.
Assignment singer_round(const NugSolution& solution, const FiniteRotationGroup& group,
                        const IrrepSet& irreps);

} // namespace orientstat
