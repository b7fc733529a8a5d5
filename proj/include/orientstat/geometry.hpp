#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace orientstat {

/// Distance family used on SO(3) and the unit sphere.
enum class Metric { arithmetic, geometric };

using RotationMatrix = Eigen::Matrix3d;
using Direction = Eigen::Vector3d;

/// Rotation stored as a unit quaternion (w, x, y, z). q and -q describe the
/// same rotation; nothing downstream depends on the sign.
struct UnitQuaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    UnitQuaternion() = default;

    /// Validates |norm - 1| <= 1e-6, then renormalizes exactly.
    UnitQuaternion(double w_, double x_, double y_, double z_);

    static UnitQuaternion identity() { return {}; }
    static UnitQuaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);
    static UnitQuaternion from_matrix(const RotationMatrix& m);

    double norm() const;
    UnitQuaternion conjugate() const { return unchecked(w, -x, -y, -z); }
    double dot(const UnitQuaternion& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }

    /// Hamilton product; matrix(a * b) == matrix(a) * matrix(b).
    UnitQuaternion operator*(const UnitQuaternion& o) const;

    RotationMatrix matrix() const;
    Eigen::Vector3d rotate(const Eigen::Vector3d& v) const;

    /// True if the two quaternions describe the same rotation (up to sign).
    bool same_rotation(const UnitQuaternion& o, double tol = 1e-6) const;

    /// Bypasses validation; caller guarantees unit norm.
    static UnitQuaternion unchecked(double w_, double x_, double y_, double z_);

private:
    void renormalize();
};

/// Arithmetic: Frobenius norm, range [0, 2*sqrt(2)].
/// Geometric: rotation angle of r1^T r2, range [0, pi].
double dist_so3(const RotationMatrix& r1, const RotationMatrix& r2, Metric m);
double dist_so3(const UnitQuaternion& q1, const UnitQuaternion& q2, Metric m);

/// Arithmetic: chord length, range [0, 2]. Geometric: arc length, range [0, pi].
double dist_s2(const Direction& n1, const Direction& n2, Metric m);

/// Clamp to [-1, 1] before acos/sqrt; roundoff can push dot products past 1.
inline double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

} // namespace orientstat
