#include "orientstat/meanvar.hpp"
#include "orientstat/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace orientstat;

namespace {

Assignment random_assignment(int n, int order, Rng& rng) {
    Assignment a(n);
    for (int i = 0; i < n; ++i)
        a[i] = rng.next_index(order);
    return a;
}

double chordal_cost(const RotationMatrix& candidate, std::span<const RotationMatrix> rotations) {
    double total = 0.0;
    for (const auto& r : rotations)
        total += (candidate - r).squaredNorm();
    return total;
}

Direction tangent_step(const Direction& p, const Eigen::Vector3d& v) {
    const double t = v.norm();
    if (t < 1e-18)
        return p;
    return (std::cos(t) * p + (std::sin(t) / t) * v).normalized();
}

} // namespace

TEST_CASE("chordal rotation mean on reference inputs") {
    Rng rng(41);
    const RotationMatrix r = rng.rotation().matrix();
    std::vector<RotationMatrix> single{r};
    CHECK((mean_so3_arith(single) - r).cwiseAbs().maxCoeff() < 1e-12);
    std::vector<RotationMatrix> twice{r, r};
    CHECK((mean_so3_arith(twice) - r).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("chordal rotation mean beats ten thousand random probes") {
    Rng rng(42);
    std::vector<RotationMatrix> rotations;
    for (int i = 0; i < 5; ++i)
        rotations.push_back(rng.rotation().matrix());
    const RotationMatrix mean = mean_so3_arith(rotations);
    const double mean_cost = chordal_cost(mean, rotations);
    for (int t = 0; t < 10000; ++t)
        CHECK(mean_cost <= chordal_cost(rng.rotation().matrix(), rotations) + 1e-12);
}

TEST_CASE("degenerate chordal mean is flagged") {
    Eigen::Matrix3d flip;
    flip << 1, 0, 0, 0, -1, 0, 0, 0, -1;
    std::vector<RotationMatrix> pair{Eigen::Matrix3d::Identity(), flip};
    bool degenerate = false;
    const RotationMatrix mean = mean_so3_arith(pair, &degenerate);
    CHECK(degenerate);
    CHECK((mean.transpose() * mean - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);

    Rng rng(43);
    std::vector<RotationMatrix> generic;
    for (int i = 0; i < 4; ++i)
        generic.push_back(rng.rotation().matrix());
    degenerate = true;
    mean_so3_arith(generic, &degenerate);
    CHECK_FALSE(degenerate);
}

TEST_CASE("sphere mean on reference inputs") {
    std::vector<Direction> single{Direction(0, 0, 1)};
    CHECK((mean_s2_arith(single) - Direction(0, 0, 1)).norm() < 1e-12);

    std::vector<Direction> two{Direction(1, 0, 0), Direction(0, 1, 0)};
    const Direction m = mean_s2_arith(two);
    CHECK((m - Direction(1, 1, 0).normalized()).norm() < 1e-12);

    std::vector<Direction> antipodal{Direction(1, 0, 0), Direction(-1, 0, 0)};
    CHECK_THROWS_AS(mean_s2_arith(antipodal), DegenerateMeanError);
}

TEST_CASE("geodesic mean of two sphere points is the midpoint") {
    Rng rng(44);
    for (int t = 0; t < 20; ++t) {
        const Direction a = rng.direction();
        Direction b = rng.direction();
        if (a.dot(b) < -0.99)
            b = (b + 0.1 * a).normalized();
        const Direction mid = mean_s2_geometric(std::vector<Direction>{a, b});
        CHECK(dist_s2(mid, a, Metric::geometric) ==
              doctest::Approx(dist_s2(mid, b, Metric::geometric)).epsilon(1e-8));
        CHECK(dist_s2(a, mid, Metric::geometric) + dist_s2(mid, b, Metric::geometric) ==
              doctest::Approx(dist_s2(a, b, Metric::geometric)).epsilon(1e-8));
    }
}

TEST_CASE("geodesic sphere mean zeroes the objective gradient") {
    Rng rng(45);
    for (int t = 0; t < 10; ++t) {
        std::vector<Direction> points;
        const Direction base = rng.direction();
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d noise(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian());
            points.push_back((base + 0.5 * noise).normalized());
        }
        const Direction mean = mean_s2_geometric(points);

        const auto objective = [&](const Direction& x) {
            double total = 0.0;
            for (const auto& p : points) {
                const double d = dist_s2(x, p, Metric::geometric);
                total += d * d;
            }
            return total;
        };
        const Eigen::Vector3d u =
            (std::abs(mean.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX())
                .cross(mean)
                .normalized();
        const Eigen::Vector3d v = mean.cross(u);
        const double h = 1e-5;
        const double gu =
            (objective(tangent_step(mean, h * u)) - objective(tangent_step(mean, -h * u))) /
            (2 * h);
        const double gv =
            (objective(tangent_step(mean, h * v)) - objective(tangent_step(mean, -h * v))) /
            (2 * h);
        CHECK(std::sqrt(gu * gu + gv * gv) < 1e-8);
    }
}

TEST_CASE("geodesic rotation mean zeroes the objective gradient") {
    Rng rng(46);
    std::vector<RotationMatrix> rotations;
    const UnitQuaternion base = rng.rotation();
    for (int i = 0; i < 4; ++i)
        rotations.push_back(
            (base * UnitQuaternion::from_axis_angle(rng.direction(), 0.4 * rng.next_double()))
                .matrix());
    const RotationMatrix mean = mean_so3_geometric(rotations);
    const UnitQuaternion mq = UnitQuaternion::from_matrix(mean);

    const auto objective = [&](const UnitQuaternion& q) {
        double total = 0.0;
        for (const auto& r : rotations) {
            const double d = dist_so3(q, UnitQuaternion::from_matrix(r), Metric::geometric);
            total += d * d;
        }
        return total;
    };
    const double h = 1e-5;
    double grad_sq = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
        const double plus = objective(mq * UnitQuaternion::from_axis_angle(e, h));
        const double minus = objective(mq * UnitQuaternion::from_axis_angle(e, -h));
        const double g = (plus - minus) / (2 * h);
        grad_sq += g * g;
    }
    CHECK(std::sqrt(grad_sq) < 1e-8);
}

TEST_CASE("exact costs on degenerate reference assignments") {
    const auto group = build_group(GroupSpec::parse("C7"));
    Rng rng(47);
    const UnitQuaternion q = rng.rotation();
    std::vector<UnitQuaternion> copies{q, q, q};
    const Assignment identity_assign(3, 0);
    for (Metric m : {Metric::arithmetic, Metric::geometric}) {
        CHECK(eval_L_so3(copies, identity_assign, group, m) < 1e-12);
        CHECK(eval_L_tilde_so3(copies, identity_assign, group, m) < 1e-12);
    }

    std::vector<UnitQuaternion> one{q};
    for (int g = 0; g < group.order(); ++g)
        CHECK(eval_L_so3(one, Assignment{g}, group, Metric::arithmetic) < 1e-12);
}

TEST_CASE("sphere exact cost matches the resultant-length closed form") {
    const auto group = build_group(GroupSpec::parse("T"));
    Rng rng(48);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + rng.next_index(5);
        std::vector<Direction> dirs;
        for (int i = 0; i < n; ++i)
            dirs.push_back(rng.direction());
        const Assignment a = random_assignment(n, group.order(), rng);
        Direction resultant = Direction::Zero();
        for (int i = 0; i < n; ++i)
            resultant += group.element_matrix(a[i]).transpose() * dirs[i];
        resultant /= double(n);
        const double expected = 2.0 * (1.0 - resultant.norm());
        CHECK(eval_L_s2(dirs, a, group, Metric::arithmetic) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("rotation surrogate cost matches the averaged-matrix closed form") {
    const auto group = build_group(GroupSpec::parse("D2"));
    Rng rng(49);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + rng.next_index(5);
        std::vector<UnitQuaternion> quats;
        for (int i = 0; i < n; ++i)
            quats.push_back(rng.rotation());
        const Assignment a = random_assignment(n, group.order(), rng);
        Eigen::Matrix3d avg = Eigen::Matrix3d::Zero();
        for (int i = 0; i < n; ++i)
            avg += (quats[i] * group.element(a[i])).matrix();
        avg /= double(n);
        const double expected = 3.0 - avg.squaredNorm();
        CHECK(eval_L_tilde_so3(quats, a, group, Metric::arithmetic) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("sphere surrogate equals the mapped exact cost for every assignment") {
    Rng rng(50);
    for (const char* name : {"C2", "D7", "I"}) {
        CAPTURE(name);
        const auto group = build_group(GroupSpec::parse(name));
        for (int t = 0; t < 30; ++t) {
            const int n = 2 + rng.next_index(4);
            std::vector<Direction> dirs;
            for (int i = 0; i < n; ++i)
                dirs.push_back(rng.direction());
            const Assignment a = random_assignment(n, group.order(), rng);
            const double exact = eval_L_s2(dirs, a, group, Metric::arithmetic);
            const double surrogate = eval_L_tilde_s2(dirs, a, group, Metric::arithmetic);
            CHECK(std::abs(surrogate - bound_f(exact)) < 1e-10);
        }
    }
}

TEST_CASE("rotation surrogate stays inside the sandwich bounds") {
    Rng rng(51);
    const auto group = build_group(GroupSpec::parse("O"));
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + rng.next_index(6);
        std::vector<UnitQuaternion> quats;
        for (int i = 0; i < n; ++i)
            quats.push_back(rng.rotation());
        const Assignment a = random_assignment(n, group.order(), rng);
        const double exact = eval_L_so3(quats, a, group, Metric::arithmetic);
        const double surrogate = eval_L_tilde_so3(quats, a, group, Metric::arithmetic);
        CHECK(surrogate >= bound_f1(exact) - 1e-9);
        CHECK(surrogate <= bound_f2(exact) + 1e-9);
    }
}

TEST_CASE("costs are invariant under a global right multiplication") {
    Rng rng(52);
    const auto group = build_group(GroupSpec::parse("D7"));
    for (int t = 0; t < 20; ++t) {
        const int n = 3 + rng.next_index(3);
        std::vector<UnitQuaternion> quats;
        std::vector<Direction> dirs;
        for (int i = 0; i < n; ++i) {
            quats.push_back(rng.rotation());
            dirs.push_back(rng.direction());
        }
        const Assignment a = random_assignment(n, group.order(), rng);
        const int h = rng.next_index(group.order());
        Assignment shifted(n);
        for (int i = 0; i < n; ++i)
            shifted[i] = group.multiply(a[i], h);
        for (Metric m : {Metric::arithmetic, Metric::geometric}) {
            CHECK(std::abs(eval_L_tilde_so3(quats, a, group, m) -
                           eval_L_tilde_so3(quats, shifted, group, m)) < 1e-12);
            CHECK(std::abs(eval_L_tilde_s2(dirs, a, group, m) -
                           eval_L_tilde_s2(dirs, shifted, group, m)) < 1e-12);
        }
        CHECK(std::abs(eval_L_so3(quats, a, group, Metric::arithmetic) -
                       eval_L_so3(quats, shifted, group, Metric::arithmetic)) < 1e-12);
        CHECK(std::abs(eval_L_s2(dirs, a, group, Metric::arithmetic) -
                       eval_L_s2(dirs, shifted, group, Metric::arithmetic)) < 1e-12);
    }
}

TEST_CASE("bound functions hit their anchor values") {
    CHECK(bound_f1(0.0) == doctest::Approx(0.0));
    CHECK(bound_f2(0.0) == doctest::Approx(0.0));
    CHECK(bound_f1(6.0) == doctest::Approx(3.0));
    CHECK(bound_f2(6.0) == doctest::Approx(3.0));
    CHECK(bound_f2(4.0) == doctest::Approx(8.0 / 3.0));
    CHECK(bound_f1(4.0) == doctest::Approx(2.0));
    CHECK(bound_f1(16.0 / 3.0) == doctest::Approx(8.0 / 3.0));
    CHECK_THROWS_AS(bound_f1(6.5), std::domain_error);
    CHECK_THROWS_AS(bound_f2(-0.5), std::domain_error);
    CHECK_THROWS_AS(bound_f2_inv(3.5), std::domain_error);
}

TEST_CASE("bound inverse composes to the identity on its domain") {
    for (int i = 0; i <= 600; ++i) {
        const double x = 6.0 * i / 600.0;
        CHECK(bound_f2_inv(bound_f2(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("bound functions are monotone increasing") {
    double prev_f = -1, prev_f1 = -1, prev_f2 = -1;
    for (int i = 0; i <= 1000; ++i) {
        const double x1 = 2.0 * i / 1000.0;
        const double f = bound_f(x1);
        CHECK(f >= prev_f - 1e-12);
        prev_f = f;
        const double x2 = 6.0 * i / 1000.0;
        const double f1 = bound_f1(x2), f2 = bound_f2(x2);
        CHECK(f1 >= prev_f1 - 1e-12);
        CHECK(f2 >= prev_f2 - 1e-12);
        CHECK(f1 <= f2 + 1e-12);
        prev_f1 = f1;
        prev_f2 = f2;
    }
}
