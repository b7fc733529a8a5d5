#pragma once

#include "orientstat/irreps.hpp"
#include "orientstat/meanvar.hpp"

#include <iosfwd>
#include <optional>
#include <span>

namespace orientstat {

enum class Mode { rotation, projection };

struct ProblemTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pairwise alignment costs f_ij(g) with the 1/(2N^2) normalization baked in.
/// Rotation mode: d(R_i g, R_j)^2; projection mode: d(g^T n_i, n_j)^2.
struct PairCostTable {
    int N = 0;
    int M = 0;
    std::vector<double> values; // [(i*N + j)*M + g]

    double at(int i, int j, int g) const { return values[(std::size_t(i) * N + j) * M + g]; }
    double& at(int i, int j, int g) { return values[(std::size_t(i) * N + j) * M + g]; }

    /// Surrogate cost of an assignment: sum over ordered pairs of
    /// f_ij(g_i g_j^{-1}), evaluated through the multiplication table.
    double assignment_cost(const Assignment& assignment, const FiniteRotationGroup& group) const;
};

PairCostTable build_costs(std::span<const UnitQuaternion> rotations,
                          const FiniteRotationGroup& group, Metric metric);
PairCostTable build_costs(std::span<const Direction> directions,
                          const FiniteRotationGroup& group, Metric metric);

/// Relaxation input: the cost table plus its per-irrep Fourier blocks
/// F_k = d_k (f_hat_ij(k))_ij of size (N d_k) x (N d_k).
struct NugProblem {
    PairCostTable costs;
    std::vector<Eigen::MatrixXcd> fourier_blocks;
    const FiniteRotationGroup* group = nullptr;
    const IrrepSet* irreps = nullptr;

    int block_dim(int k) const { return costs.N * irreps->dim(k); }
};

NugProblem build_problem(std::span<const UnitQuaternion> rotations,
                         const FiniteRotationGroup& group, const IrrepSet& irreps,
                         Metric metric);
NugProblem build_problem(std::span<const Direction> directions,
                         const FiniteRotationGroup& group, const IrrepSet& irreps,
                         Metric metric);

struct SolveOptions {
    double tol = 1e-6;
    int max_iters = 20000;
    std::ostream* log = nullptr;
    int log_every = 200;
};

struct SolveDiagnostics {
    int iterations = 0;
    bool converged = false;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double max_psd_violation = 0.0;
    double max_affine_violation = 0.0;
    double min_lambda = 0.0;
};

/// Relaxed solution. X holds one Hermitian block per irrep, reconstructed
/// from the final feasible lambda iterate, so the simplex constraints hold
/// exactly and the PSD violation is bounded by the primal residual.
struct NugSolution {
    int N = 0;
    int M = 0;
    std::vector<Eigen::MatrixXcd> X;
    std::vector<double> lambda; // [(i*N + j)*M + g], nonnegative, unit row sums
    double objective = 0.0;
    SolveDiagnostics diag;

    double lambda_at(int i, int j, int g) const {
        return lambda[(std::size_t(i) * N + j) * M + g];
    }
};

struct SdpNonConvergence : std::runtime_error {
    NugSolution last;
    SdpNonConvergence(std::string msg, NugSolution state)
        : std::runtime_error(std::move(msg)), last(std::move(state)) {}
};

/// Splitting solver: alternates between the lambda polytope (simplex rows,
/// fixed diagonal, inverse symmetry) and the per-irrep PSD cone, coupled by
/// the linear map X^k_ij = sum_g lambda_ij(g) rho_k(g). Throws
/// SdpNonConvergence carrying the last iterate if max_iters is exhausted.
NugSolution solve_sdp(const NugProblem& problem, const SolveOptions& options = {});

/// lambda_ij(g) = (1/|G|) sum_k d_k Tr(X^k_ij rho_k(g)^H) read back from the
/// stored blocks. Imaginary residue above 1e-6 signals inconsistent irreps.
Eigen::VectorXd lambda_of(const NugSolution& solution, const IrrepSet& irreps, int i, int j);

/// Rank-one feasible point of the relaxation for a discrete assignment:
/// X^k_ij = rho_k(g_i g_j^{-1}). Objective at the lift equals the surrogate
/// cost of the assignment.
std::vector<Eigen::MatrixXcd> rank_one_lift(const Assignment& assignment,
                                            const FiniteRotationGroup& group,
                                            const IrrepSet& irreps);

/// sum_k Tr(F_k X^k); the imaginary part must cancel for Hermitian inputs.
double relaxation_objective(const NugProblem& problem, const std::vector<Eigen::MatrixXcd>& X);

} // namespace orientstat
