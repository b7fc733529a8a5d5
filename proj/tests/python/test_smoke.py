"""Smoke tests for the compiled extension."""

import math

import numpy as np
import pytest

import orientstat as osl


def random_quats(rng, n):
    q = rng.standard_normal((n, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def random_dirs(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def test_group_tables():
    for name, order in [("C2", 2), ("C7", 7), ("D2", 4), ("D7", 14), ("T", 12), ("O", 24),
                        ("I", 60)]:
        g = osl.Group(name)
        assert len(g) == order
        assert g.name == name
        for j in range(order):
            assert g.multiply(0, j) == j
            assert g.multiply(j, g.inverse(j)) == 0
        m = g.element_matrix(1)
        assert np.allclose(m @ m.T, np.eye(3), atol=1e-12)


def test_quat_to_matrix_reference():
    assert np.allclose(osl.quat_to_matrix(1, 0, 0, 0), np.eye(3))
    assert np.allclose(osl.quat_to_matrix(0, 0, 0, 1), np.diag([-1.0, -1.0, 1.0]))


def test_distances():
    rng = np.random.default_rng(5)
    r1 = osl.quat_to_matrix(*random_quats(rng, 1)[0])
    r2 = osl.quat_to_matrix(*random_quats(rng, 1)[0])
    da = osl.dist_rotation(r1, r2, "arith")
    dg = osl.dist_rotation(r1, r2, "geo")
    assert da == pytest.approx(2 * math.sqrt(2) * math.sin(dg / 2), abs=1e-10)
    assert osl.dist_direction([1, 0, 0], [-1, 0, 0], "arith") == pytest.approx(2.0)

    group = osl.Group("T")
    d, arg = osl.quotient_dist_rotation(r1, r2, group, "arith")
    assert 0 <= arg < 12
    assert d <= da + 1e-12


def test_mean_variance_rotations_recovers_cluster():
    rng = np.random.default_rng(11)
    group = osl.Group("C7")
    base = random_quats(rng, 1)[0]
    result = osl.mean_variance_rotations(np.stack([base] * 4), group)
    assert result["variance"] == pytest.approx(0.0, abs=1e-9)
    assert result["representatives"][0] == 0
    assert result["diagnostics"]["max_psd_violation"] <= 1e-5


def test_mean_variance_directions_matches_brute_force():
    rng = np.random.default_rng(13)
    group = osl.Group("C2")
    dirs = random_dirs(rng, 5)
    result = osl.mean_variance_directions(dirs, group, metric="arith")
    assert result["sdp_objective"] <= result["rounded_surrogate_cost"] + 1e-6
    assert result["variance"] >= 0.0


def test_brute_force_agrees_with_pipeline():
    rng = np.random.default_rng(17)
    group = osl.Group("C2")
    quats = random_quats(rng, 4)
    assignment, cost = osl.brute_force_rotations(quats, group, "arith", "surrogate")
    result = osl.mean_variance_rotations(quats, group, metric="arith")
    assert result["rounded_surrogate_cost"] == pytest.approx(cost, abs=1e-8)
    assert assignment[0] == 0


def test_oversized_problem_raises():
    rng = np.random.default_rng(19)
    group = osl.Group("I")
    with pytest.raises(osl.ProblemTooLargeError):
        osl.mean_variance_rotations(random_quats(rng, 60), group)


def test_kmeans_quotient_on_benchmark_classes():
    group = osl.Group("C3")
    points, labels = osl.generate_benchmark_classes(group, seed=1)
    assert points.shape == (500, 3)
    keep = slice(0, 500, 5)  # 100 points, 20 per class, for speed
    result = osl.kmeans(points[keep], group, k=5, baseline="quotient", seed=0,
                        subsample=6, labels=list(labels[keep]))
    assert result["accuracy"] == pytest.approx(1.0)
