#include "orientstat/geometry.hpp"
#include "orientstat/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace orientstat;

namespace {
const double kSqrt8 = 2.0 * std::sqrt(2.0);
}

TEST_CASE("quaternion to matrix on the reference rotations") {
    CHECK((UnitQuaternion(1, 0, 0, 0).matrix() - Eigen::Matrix3d::Identity()).norm() ==
          doctest::Approx(0.0).epsilon(1e-15));

    const Eigen::Matrix3d half_turn_z = UnitQuaternion(0, 0, 0, 1).matrix();
    Eigen::Matrix3d expected;
    expected << -1, 0, 0, 0, -1, 0, 0, 0, 1;
    CHECK((half_turn_z - expected).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("quaternion to matrix yields proper rotations and ignores sign") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        const UnitQuaternion q = rng.rotation();
        const Eigen::Matrix3d r = q.matrix();
        CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        const UnitQuaternion neg = UnitQuaternion::unchecked(-q.w, -q.x, -q.y, -q.z);
        CHECK((r - neg.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("non-unit quaternions are rejected") {
    CHECK_THROWS_AS(UnitQuaternion(1.0, 0.0, 0.0, 1e-2), std::invalid_argument);
    CHECK_NOTHROW(UnitQuaternion(1.0 + 5e-7, 0.0, 0.0, 0.0));
}

TEST_CASE("matrix round trip") {
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        const UnitQuaternion q = rng.rotation();
        const UnitQuaternion back = UnitQuaternion::from_matrix(q.matrix());
        CHECK(std::abs(q.dot(back)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rotation distances on reference pairs") {
    const Eigen::Matrix3d identity = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d half_turn;
    half_turn << -1, 0, 0, 0, -1, 0, 0, 0, 1;

    CHECK(dist_so3(identity, identity, Metric::arithmetic) == doctest::Approx(0.0));
    CHECK(dist_so3(half_turn, half_turn, Metric::geometric) == doctest::Approx(0.0));
    CHECK(dist_so3(identity, half_turn, Metric::arithmetic) == doctest::Approx(kSqrt8));
    CHECK(dist_so3(identity, half_turn, Metric::geometric) == doctest::Approx(M_PI));
}

TEST_CASE("chordal and angular rotation distances obey the trace identity") {
    Rng rng(13);
    for (int t = 0; t < 500; ++t) {
        const UnitQuaternion a = rng.rotation(), b = rng.rotation();
        const double da = dist_so3(a, b, Metric::arithmetic);
        const double dg = dist_so3(a, b, Metric::geometric);
        CHECK(da == doctest::Approx(kSqrt8 * std::sin(dg / 2.0)).epsilon(1e-10));
        // Matrix and quaternion paths agree.
        CHECK(dist_so3(a.matrix(), b.matrix(), Metric::arithmetic) ==
              doctest::Approx(da).epsilon(1e-9));
        CHECK(dist_so3(a.matrix(), b.matrix(), Metric::geometric) ==
              doctest::Approx(dg).epsilon(1e-9));
    }
}

TEST_CASE("sphere distances on reference pairs") {
    const Direction px(1, 0, 0), mx(-1, 0, 0);
    CHECK(dist_s2(px, px, Metric::arithmetic) == doctest::Approx(0.0));
    CHECK(dist_s2(px, px, Metric::geometric) == doctest::Approx(0.0));
    CHECK(dist_s2(px, mx, Metric::arithmetic) == doctest::Approx(2.0));
    CHECK(dist_s2(px, mx, Metric::geometric) == doctest::Approx(M_PI));
}

TEST_CASE("metric axioms hold on random triples") {
    Rng rng(14);
    for (int t = 0; t < 1000; ++t) {
        const UnitQuaternion qa = rng.rotation(), qb = rng.rotation(), qc = rng.rotation();
        const Direction na = rng.direction(), nb = rng.direction(), nc = rng.direction();
        for (Metric m : {Metric::arithmetic, Metric::geometric}) {
            const double ab = dist_so3(qa, qb, m);
            const double ba = dist_so3(qb, qa, m);
            const double ac = dist_so3(qa, qc, m);
            const double cb = dist_so3(qc, qb, m);
            CHECK(ab >= 0.0);
            CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
            CHECK(ab <= ac + cb + 1e-9);
            CHECK(dist_so3(qa, qa, m) <= 1e-9);

            const double sab = dist_s2(na, nb, m);
            CHECK(sab >= 0.0);
            CHECK(sab == doctest::Approx(dist_s2(nb, na, m)).epsilon(1e-12));
            CHECK(sab <= dist_s2(na, nc, m) + dist_s2(nc, nb, m) + 1e-9);
            CHECK(dist_s2(na, na, m) <= 1e-9);
        }
    }
}

TEST_CASE("rotation distance is right invariant, sphere distance rotation invariant") {
    Rng rng(15);
    for (int t = 0; t < 1000; ++t) {
        const UnitQuaternion a = rng.rotation(), b = rng.rotation(), r = rng.rotation();
        const Direction n1 = rng.direction(), n2 = rng.direction();
        for (Metric m : {Metric::arithmetic, Metric::geometric}) {
            CHECK(dist_so3(a * r, b * r, m) == doctest::Approx(dist_so3(a, b, m)).epsilon(1e-10));
            CHECK(dist_s2(r.rotate(n1), r.rotate(n2), m) ==
                  doctest::Approx(dist_s2(n1, n2, m)).epsilon(1e-10));
        }
    }
}

TEST_CASE("identity of indiscernibles at the class level") {
    Rng rng(16);
    for (int t = 0; t < 100; ++t) {
        const UnitQuaternion a = rng.rotation();
        const UnitQuaternion perturbed =
            a * UnitQuaternion::from_axis_angle(rng.direction(), 1e-3);
        CHECK(dist_so3(a, perturbed, Metric::geometric) > 1e-5);
        CHECK(dist_so3(a, perturbed, Metric::arithmetic) > 1e-5);
    }
}
