#include "orientstat/geometry.hpp"

#include <cmath>
#include <numbers>

namespace orientstat {

UnitQuaternion::UnitQuaternion(double w_, double x_, double y_, double z_)
    : w(w_), x(x_), y(y_), z(z_) {
    const double n = norm();
    if (std::abs(n - 1.0) > 1e-6)
        throw std::invalid_argument("quaternion norm deviates from 1 by more than 1e-6");
    renormalize();
}

UnitQuaternion UnitQuaternion::unchecked(double w_, double x_, double y_, double z_) {
    UnitQuaternion q;
    q.w = w_; q.x = x_; q.y = y_; q.z = z_;
    return q;
}

double UnitQuaternion::norm() const {
    return std::sqrt(w * w + x * x + y * y + z * z);
}

void UnitQuaternion::renormalize() {
    const double n = norm();
    w /= n; x /= n; y /= n; z /= n;
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
    const Eigen::Vector3d a = axis.normalized();
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    return unchecked(std::cos(h), s * a.x(), s * a.y(), s * a.z());
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
    UnitQuaternion q = unchecked(
        w * o.w - x * o.x - y * o.y - z * o.z,
        w * o.x + x * o.w + y * o.z - z * o.y,
        w * o.y - x * o.z + y * o.w + z * o.x,
        w * o.z + x * o.y - y * o.x + z * o.w);
    q.renormalize();
    return q;
}

RotationMatrix UnitQuaternion::matrix() const {
    RotationMatrix m;
    m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
         2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y);
    return m;
}

Eigen::Vector3d UnitQuaternion::rotate(const Eigen::Vector3d& v) const {
    const Eigen::Vector3d u(x, y, z);
    return v + 2.0 * (w * u.cross(v) + u.cross(u.cross(v)));
}

UnitQuaternion UnitQuaternion::from_matrix(const RotationMatrix& m) {
    // Shepperd's method: pick the largest of the four squared components.
    const double t = m.trace();
    double w, x, y, z;
    if (t > m(0, 0) && t > m(1, 1) && t > m(2, 2)) {
        const double r = std::sqrt(1.0 + t);
        const double s = 0.5 / r;
        w = 0.5 * r;
        x = (m(2, 1) - m(1, 2)) * s;
        y = (m(0, 2) - m(2, 0)) * s;
        z = (m(1, 0) - m(0, 1)) * s;
    } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        const double r = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
        const double s = 0.5 / r;
        x = 0.5 * r;
        w = (m(2, 1) - m(1, 2)) * s;
        y = (m(0, 1) + m(1, 0)) * s;
        z = (m(0, 2) + m(2, 0)) * s;
    } else if (m(1, 1) > m(2, 2)) {
        const double r = std::sqrt(1.0 - m(0, 0) + m(1, 1) - m(2, 2));
        const double s = 0.5 / r;
        y = 0.5 * r;
        w = (m(0, 2) - m(2, 0)) * s;
        x = (m(0, 1) + m(1, 0)) * s;
        z = (m(1, 2) + m(2, 1)) * s;
    } else {
        const double r = std::sqrt(1.0 - m(0, 0) - m(1, 1) + m(2, 2));
        const double s = 0.5 / r;
        z = 0.5 * r;
        w = (m(1, 0) - m(0, 1)) * s;
        x = (m(0, 2) + m(2, 0)) * s;
        y = (m(1, 2) + m(2, 1)) * s;
    }
    UnitQuaternion q = unchecked(w, x, y, z);
    q.renormalize();
    return q;
}

bool UnitQuaternion::same_rotation(const UnitQuaternion& o, double tol) const {
    const double dp = std::abs(dot(o));
    // |<q,p>| = |cos(delta/2)|; 1 - |<q,p>| ~ delta^2/8 for small delta.
    return 1.0 - dp <= tol * tol;
}

double dist_so3(const UnitQuaternion& q1, const UnitQuaternion& q2, Metric m) {
    // Work with the sign-aligned quaternion chord 2 sin(theta/4): unlike
    // acos of the inner product, it loses no precision at theta near 0.
    const double s = q1.dot(q2) >= 0.0 ? 1.0 : -1.0;
    const double dw = q1.w - s * q2.w, dx = q1.x - s * q2.x;
    const double dy = q1.y - s * q2.y, dz = q1.z - s * q2.z;
    const double half_chord =
        0.5 * std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
    const double theta = 4.0 * std::asin(std::min(half_chord, std::numbers::sqrt2 / 2.0));
    if (m == Metric::geometric)
        return std::min(theta, std::numbers::pi);
    // ||R1 - R2||_F = 2 sqrt(2) sin(theta / 2)
    return 2.0 * std::numbers::sqrt2 * std::sin(0.5 * std::min(theta, std::numbers::pi));
}

double dist_so3(const RotationMatrix& r1, const RotationMatrix& r2, Metric m) {
    if (m == Metric::arithmetic)
        return (r1 - r2).norm();
    return dist_so3(UnitQuaternion::from_matrix(r1), UnitQuaternion::from_matrix(r2),
                    Metric::geometric);
}

double dist_s2(const Direction& n1, const Direction& n2, Metric m) {
    if (m == Metric::arithmetic)
        return (n1 - n2).norm();
    // Chord-based arc length; acos of the dot product degrades near 0 and pi.
    if (n1.dot(n2) >= 0.0)
        return 2.0 * std::asin(std::min(1.0, 0.5 * (n1 - n2).norm()));
    return std::numbers::pi - 2.0 * std::asin(std::min(1.0, 0.5 * (n1 + n2).norm()));
}

} // namespace orientstat
