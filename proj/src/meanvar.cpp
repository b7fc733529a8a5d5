#include "orientstat/meanvar.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace orientstat {

namespace {

constexpr double kKarcherTol = 1e-10;
constexpr int kKarcherMaxIters = 100;

RotationMatrix kabsch(const Eigen::Matrix3d& average, bool* degenerate) {
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(average,
                                                Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Matrix3d u = svd.matrixU();
    const Eigen::Matrix3d v = svd.matrixV();
    const double eps = (u * v.transpose()).determinant() >= 0.0 ? 1.0 : -1.0;
    const Eigen::Vector3d s = svd.singularValues();
    if (degenerate)
        *degenerate = std::abs(s(1) + eps * s(2)) < 1e-12;
    return u * Eigen::Vector3d(1.0, 1.0, eps).asDiagonal() * v.transpose();
}

/// Axis-angle of the relative rotation base^T target, as a tangent vector.
Eigen::Vector3d so3_log(const UnitQuaternion& base, const UnitQuaternion& target) {
    UnitQuaternion rel = base.conjugate() * target;
    if (rel.w < 0.0)
        rel = UnitQuaternion::unchecked(-rel.w, -rel.x, -rel.y, -rel.z);
    const Eigen::Vector3d v(rel.x, rel.y, rel.z);
    const double s = v.norm();
    if (s < 1e-15)
        return Eigen::Vector3d::Zero();
    const double angle = 2.0 * std::atan2(s, rel.w);
    return (angle / s) * v;
}

UnitQuaternion so3_exp(const UnitQuaternion& base, const Eigen::Vector3d& tangent) {
    const double angle = tangent.norm();
    if (angle < 1e-15)
        return base;
    return base * UnitQuaternion::from_axis_angle(tangent, angle);
}

UnitQuaternion karcher_so3(std::span<const UnitQuaternion> rotations, KarcherInfo& info) {
    // Chordal mean as the starting point.
    std::vector<RotationMatrix> mats;
    mats.reserve(rotations.size());
    for (const auto& q : rotations)
        mats.push_back(q.matrix());
    UnitQuaternion mean = UnitQuaternion::from_matrix(mean_so3_arith(mats));

    info.converged = false;
    for (info.iterations = 0; info.iterations < kKarcherMaxIters; ++info.iterations) {
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        for (const auto& q : rotations)
            step += so3_log(mean, q);
        step /= double(rotations.size());
        mean = so3_exp(mean, step);
        if (step.norm() < kKarcherTol) {
            info.converged = true;
            ++info.iterations;
            break;
        }
    }
    return mean;
}

Eigen::Vector3d s2_log(const Direction& base, const Direction& target) {
    const double c = clamp_unit(base.dot(target));
    const Eigen::Vector3d residual = target - c * base;
    const double r = residual.norm();
    if (r < 1e-15) {
        if (c < 0.0)
            throw DegenerateMeanError("geodesic tangent undefined at an antipodal point");
        return Eigen::Vector3d::Zero();
    }
    return (std::acos(c) / r) * residual;
}

Direction s2_exp(const Direction& base, const Eigen::Vector3d& tangent) {
    const double t = tangent.norm();
    if (t < 1e-15)
        return base;
    return std::cos(t) * base + (std::sin(t) / t) * tangent;
}

Direction karcher_s2(std::span<const Direction> dirs, KarcherInfo& info) {
    Direction mean = mean_s2_arith(dirs);
    info.converged = false;
    for (info.iterations = 0; info.iterations < kKarcherMaxIters; ++info.iterations) {
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        for (const auto& n : dirs)
            step += s2_log(mean, n);
        step /= double(dirs.size());
        mean = s2_exp(mean, step).normalized();
        if (step.norm() < kKarcherTol) {
            info.converged = true;
            ++info.iterations;
            break;
        }
    }
    return mean;
}

void check_nonempty(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("mean of an empty set is undefined");
}

} // namespace

RotationMatrix mean_so3_arith(std::span<const RotationMatrix> rotations, bool* degenerate) {
    check_nonempty(rotations.size());
    Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
    for (const auto& r : rotations)
        sum += r;
    return kabsch(sum / double(rotations.size()), degenerate);
}

RotationMatrix mean_so3_arith(std::span<const UnitQuaternion> rotations, bool* degenerate) {
    check_nonempty(rotations.size());
    Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
    for (const auto& q : rotations)
        sum += q.matrix();
    return kabsch(sum / double(rotations.size()), degenerate);
}

Direction mean_s2_arith(std::span<const Direction> dirs) {
    check_nonempty(dirs.size());
    Direction sum = Direction::Zero();
    for (const auto& n : dirs)
        sum += n;
    sum /= double(dirs.size());
    const double len = sum.norm();
    if (len < 1e-9)
        throw DegenerateMeanError("resultant vector vanishes; the sphere mean is not unique");
    return sum / len;
}

RotationMatrix mean_so3_geometric(std::span<const RotationMatrix> rotations, KarcherInfo* info) {
    check_nonempty(rotations.size());
    std::vector<UnitQuaternion> quats;
    quats.reserve(rotations.size());
    for (const auto& r : rotations)
        quats.push_back(UnitQuaternion::from_matrix(r));
    KarcherInfo local;
    const UnitQuaternion mean = karcher_so3(quats, local);
    if (info)
        *info = local;
    else if (!local.converged)
        throw KarcherNonConvergence(mean.matrix());
    return mean.matrix();
}

Direction mean_s2_geometric(std::span<const Direction> dirs, KarcherInfo* info) {
    check_nonempty(dirs.size());
    KarcherInfo local;
    const Direction mean = karcher_s2(dirs, local);
    if (info)
        *info = local;
    else if (!local.converged)
        throw KarcherNonConvergence(mean);
    return mean;
}

double eval_L_so3(std::span<const UnitQuaternion> data, const Assignment& assignment,
                  const FiniteRotationGroup& group, Metric metric) {
    check_nonempty(data.size());
    std::vector<UnitQuaternion> moved;
    moved.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        moved.push_back(data[i] * group.element(assignment[i]));

    UnitQuaternion mean;
    if (metric == Metric::arithmetic) {
        mean = UnitQuaternion::from_matrix(mean_so3_arith(std::span<const UnitQuaternion>(moved)));
    } else {
        KarcherInfo info;
        mean = karcher_so3(moved, info);
    }
    double total = 0.0;
    for (const auto& q : moved) {
        const double d = dist_so3(mean, q, metric);
        total += d * d;
    }
    return total / double(moved.size());
}

double eval_L_s2(std::span<const Direction> data, const Assignment& assignment,
                 const FiniteRotationGroup& group, Metric metric) {
    check_nonempty(data.size());
    std::vector<Direction> moved;
    moved.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        moved.push_back(group.element_matrix(assignment[i]).transpose() * data[i]);

    Direction mean;
    if (metric == Metric::arithmetic) {
        mean = mean_s2_arith(moved);
    } else {
        KarcherInfo info;
        mean = karcher_s2(moved, info);
    }
    double total = 0.0;
    for (const auto& n : moved) {
        const double d = dist_s2(mean, n, metric);
        total += d * d;
    }
    return total / double(moved.size());
}

double eval_L_tilde_so3(std::span<const UnitQuaternion> data, const Assignment& assignment,
                        const FiniteRotationGroup& group, Metric metric) {
    const std::size_t n = data.size();
    std::vector<UnitQuaternion> moved;
    moved.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        moved.push_back(data[i] * group.element(assignment[i]));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist_so3(moved[i], moved[j], metric);
            total += d * d;
        }
    }
    return total / (2.0 * double(n) * double(n));
}

double eval_L_tilde_s2(std::span<const Direction> data, const Assignment& assignment,
                       const FiniteRotationGroup& group, Metric metric) {
    const std::size_t n = data.size();
    std::vector<Direction> moved;
    moved.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        moved.push_back(group.element_matrix(assignment[i]).transpose() * data[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist_s2(moved[i], moved[j], metric);
            total += d * d;
        }
    }
    return total / (2.0 * double(n) * double(n));
}

double bound_f(double x) {
    if (x < -1e-12 || x > 2.0 + 1e-12)
        throw std::domain_error("bound_f is defined on [0, 2]");
    return x - 0.25 * x * x;
}

double bound_f1(double x) {
    if (x < -1e-12 || x > 6.0 + 1e-12)
        throw std::domain_error("bound_f1 is defined on [0, 6]");
    if (x <= 4.0)
        return x - x * x / 8.0;
    if (x <= 16.0 / 3.0)
        return -8.0 + 4.0 * x - 3.0 * x * x / 8.0;
    return -24.0 + 9.0 * x - 0.75 * x * x;
}

double bound_f2(double x) {
    if (x < -1e-12 || x > 6.0 + 1e-12)
        throw std::domain_error("bound_f2 is defined on [0, 6]");
    return x - x * x / 12.0;
}

double bound_f2_inv(double y) {
    if (y < -1e-12 || y > 3.0 + 1e-12)
        throw std::domain_error("bound_f2_inv is defined on [0, 3]");
    return 6.0 - std::sqrt(std::max(0.0, 36.0 - 12.0 * y));
}

} // namespace orientstat
