#include "orientstat/rounding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace orientstat {

PartialSolution::PartialSolution(int n, const FiniteRotationGroup& group,
                                 const PairCostTable& costs)
    : group_(&group), costs_(&costs), root_(n), offset_(n, 0), members_(n),
      component_count_(n) {
    std::iota(root_.begin(), root_.end(), 0);
    for (int i = 0; i < n; ++i)
        members_[i] = {i};
    // Diagonal pairs are decided from the start; f_ii(e) = 0 contributes nothing.
}

int PartialSolution::rel(int i, int j) const {
    if (!decided(i, j))
        throw std::logic_error("relative element queried for an undecided pair");
    return group_->multiply(offset_[i], group_->inverse(offset_[j]));
}

void PartialSolution::decide(int i, int j, int g) {
    if (decided(i, j))
        throw std::logic_error("pair is already decided");
    int ra = root_[i];
    int rb = root_[j];
    // Relation between the roots implied by s(i, j) = g.
    int root_rel = group_->multiply(group_->inverse(offset_[i]), group_->multiply(g, offset_[j]));
    if (members_[ra].size() < members_[rb].size()) {
        std::swap(ra, rb);
        std::swap(i, j);
        root_rel = group_->inverse(root_rel);
    }

    // Fold component rb into ra: offsets become relative to ra.
    for (int q : members_[rb]) {
        offset_[q] = group_->multiply(offset_[q], group_->inverse(root_rel));
        root_[q] = ra;
    }
    for (int p : members_[ra]) {
        for (int q : members_[rb]) {
            const int pq = group_->multiply(offset_[p], group_->inverse(offset_[q]));
            cost_ += costs_->at(p, q, pq) + costs_->at(q, p, group_->inverse(pq));
        }
    }
    auto& into = members_[ra];
    into.insert(into.end(), members_[rb].begin(), members_[rb].end());
    members_[rb].clear();
    --component_count_;
}

double PartialSolution::recompute_cost() const {
    const int n = static_cast<int>(root_.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && decided(i, j))
                total += costs_->at(i, j, rel(i, j));
    return total;
}

Assignment greedy_round(const NugSolution& solution, const PairCostTable& costs,
                        const FiniteRotationGroup& group, const RoundingParams& params,
                        RoundingStats* stats) {
    if (params.m < 1)
        throw std::invalid_argument("hypothesis capacity must be at least 1");
    if (params.c < 0.0 || params.c > 1.0)
        throw std::invalid_argument("mass threshold must lie in [0, 1]");
    const int n = solution.N;
    const int m = solution.M;
    RoundingStats local_stats;

    if (n == 1) {
        if (stats)
            *stats = local_stats;
        return {0};
    }

    // Per pair: elements sorted by descending lambda (clamped to [0, 1]),
    // ties by lowest element index.
    struct PairOrder {
        std::vector<int> order;
        std::vector<double> sorted; // lambda in sorted order
    };
    std::vector<PairOrder> pairs(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            auto& po = pairs[std::size_t(i) * n + j];
            std::vector<double> lam(m);
            for (int g = 0; g < m; ++g)
                lam[g] = std::clamp(solution.lambda_at(i, j, g), 0.0, 1.0);
            po.order.resize(m);
            std::iota(po.order.begin(), po.order.end(), 0);
            std::stable_sort(po.order.begin(), po.order.end(),
                             [&](int a, int b) { return lam[a] > lam[b]; });
            po.sorted.resize(m);
            for (int t = 0; t < m; ++t)
                po.sorted[t] = lam[po.order[t]];
        }

    // Static pair priority: descending top mass, ties by pair order. Decided
    // pairs stay decided, so one forward cursor suffices.
    std::vector<int> pair_order;
    pair_order.reserve(std::size_t(n) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                pair_order.push_back(i * n + j);
    std::stable_sort(pair_order.begin(), pair_order.end(), [&](int a, int b) {
        return pairs[a].sorted[0] > pairs[b].sorted[0];
    });
    std::size_t cursor = 0;

    std::vector<PartialSolution> hypotheses{PartialSolution(n, group, costs)};

    struct Candidate {
        PartialSolution state;
        double cost;
    };

    while (!hypotheses.front().complete()) {
        // All hypotheses share one component structure, so the pair chosen
        // from the best hypothesis is undecided in every one of them.
        while (cursor < pair_order.size() &&
               hypotheses.front().decided(pair_order[cursor] / n, pair_order[cursor] % n))
            ++cursor;
        const int best_i = pair_order[cursor] / n;
        const int best_j = pair_order[cursor] % n;

        const auto& po = pairs[std::size_t(best_i) * n + best_j];
        int spread = m;
        double mass = 0.0;
        for (int t = 0; t < m; ++t) {
            mass += po.sorted[t];
            if (mass >= params.c) {
                spread = t + 1;
                break;
            }
        }

        std::vector<Candidate> candidates;
        candidates.reserve(hypotheses.size() * spread);
        for (const auto& hyp : hypotheses)
            for (int t = 0; t < spread; ++t) {
                Candidate cand{hyp, 0.0};
                cand.state.decide(best_i, best_j, po.order[t]);
                cand.cost = cand.state.partial_cost();
                candidates.push_back(std::move(cand));
            }

        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
        const int keep = std::min<int>(static_cast<int>(candidates.size()), params.m);
        hypotheses.clear();
        for (int t = 0; t < keep; ++t)
            hypotheses.push_back(std::move(candidates[t].state));

        ++local_stats.iterations;
        local_stats.max_spread = std::max(local_stats.max_spread, spread);
        local_stats.max_hypotheses =
            std::max(local_stats.max_hypotheses, static_cast<int>(hypotheses.size()));
    }

    Assignment out(n);
    for (int i = 0; i < n; ++i)
        out[i] = hypotheses.front().rel(i, 0);
    if (stats)
        *stats = local_stats;
    return out;
}

Assignment singer_round(const NugSolution& solution, const FiniteRotationGroup& group,
                        const IrrepSet& irreps) {
    if (group.spec().family != GroupFamily::cyclic)
        throw std::invalid_argument("eigenvector rounding needs a cyclic group: the first "
                                    "nontrivial irrep is not injective otherwise");
    const int n = solution.N;
    const int order = group.order();
    if (order == 1 || n == 1)
        return Assignment(n, 0);

    // Top eigenvector of X^1 approximates (rho_1(g_i))_i up to a global phase.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(solution.X[1]);
    Eigen::VectorXcd top = es.eigenvectors().col(n - 1);

    Assignment raw(n, 0);
    for (int i = 0; i < n; ++i) {
        // Nearest image of rho_1 (an order-th root of unity) to the row value.
        double best = -std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int g = 0; g < order; ++g) {
            const std::complex<double> image = irreps.image(1, g)(0, 0);
            const double align = (top(i) * std::conj(image)).real();
            if (align > best) {
                best = align;
                arg = g;
            }
        }
        raw[i] = arg;
    }

    // Gauge fix: divide out the first row's element.
    Assignment out(n);
    const int fix = group.inverse(raw[0]);
    for (int i = 0; i < n; ++i)
        out[i] = group.multiply(raw[i], fix);
    return out;
}

} // namespace orientstat
