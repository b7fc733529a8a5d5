#pragma once

#include "orientstat/symmetry.hpp"

#include <span>
#include <vector>

namespace orientstat {

/// Per-point group element indices (g_1, ..., g_N).
using Assignment = std::vector<int>;

struct DegenerateMeanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the iterative geodesic mean fails to settle; carries the last
/// iterate (3x1 for directions, 3x3 for rotations).
struct KarcherNonConvergence : std::runtime_error {
    Eigen::MatrixXd last_iterate;
    explicit KarcherNonConvergence(Eigen::MatrixXd last)
        : std::runtime_error("geodesic mean did not converge within 100 iterations"),
          last_iterate(std::move(last)) {}
};

struct KarcherInfo {
    bool converged = true;
    int iterations = 0;
};

/// Chordal mean of rotations: SVD of the Euclidean average with determinant
/// sign correction. Degenerate when sigma2 + eps*sigma3 = 0 (minimizer not
/// unique); the SVD candidate is still returned and *degenerate set if given.
RotationMatrix mean_so3_arith(std::span<const RotationMatrix> rotations,
                              bool* degenerate = nullptr);
RotationMatrix mean_so3_arith(std::span<const UnitQuaternion> rotations,
                              bool* degenerate = nullptr);

/// Normalized Euclidean mean; throws DegenerateMeanError when the resultant
/// is shorter than 1e-9.
Direction mean_s2_arith(std::span<const Direction> dirs);

/// Geodesic (Karcher) mean by tangent-space averaging; stops when the update
/// norm drops below 1e-10 or after 100 iterations. Throws on non-convergence
/// unless info is supplied, in which case the last iterate is returned with
/// info->converged = false.
RotationMatrix mean_so3_geometric(std::span<const RotationMatrix> rotations,
                                  KarcherInfo* info = nullptr);
Direction mean_s2_geometric(std::span<const Direction> dirs, KarcherInfo* info = nullptr);

/// Cost of the best common representative: min over the manifold of the mean
/// squared distance to the assigned points (closed form for the arithmetic
/// metric, Karcher mean for the geometric one).
double eval_L_so3(std::span<const UnitQuaternion> data, const Assignment& assignment,
                  const FiniteRotationGroup& group, Metric metric);
double eval_L_s2(std::span<const Direction> data, const Assignment& assignment,
                 const FiniteRotationGroup& group, Metric metric);

/// Pairwise surrogate: (1/2N^2) sum over ordered pairs of squared distances
/// with the assignment applied (i = j terms included; they vanish).
double eval_L_tilde_so3(std::span<const UnitQuaternion> data, const Assignment& assignment,
                        const FiniteRotationGroup& group, Metric metric);
double eval_L_tilde_s2(std::span<const Direction> data, const Assignment& assignment,
                       const FiniteRotationGroup& group, Metric metric);

/// Exact map between the sphere costs under the arithmetic metric:
/// pairwise surrogate = f(exact cost), f(x) = x - x^2/4.
double bound_f(double x);

/// Sandwich bounds for the rotation costs under the arithmetic metric:
/// f1(L) <= L_tilde <= f2(L) on [0, 6], f2(x) = x - x^2/12 and f1 piecewise.
double bound_f1(double x);
double bound_f2(double x);
/// Inverse of f2 on [0, 3]: f2_inv(y) = 6 - sqrt(36 - 12 y).
double bound_f2_inv(double y);

} // namespace orientstat
