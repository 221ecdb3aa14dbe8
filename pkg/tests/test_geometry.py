import math

import numpy as np
import pytest

from ragd.errors import DomainError
from ragd.geometry import SPD, Euclidean, Hyperbolic, Sphere
from ragd.problems import manifold_from_dict, manifold_to_dict

tol = 1e-9

CASES = [
    ("euclidean", Euclidean(12), 5.0),
    ("hyperbolic", Hyperbolic(8, kappa=1.0), 2.0),
    ("hyperbolic-k2", Hyperbolic(5, kappa=2.0), 1.5),
    ("sphere", Sphere(7, sigma=1.0), 0.35),
    ("spd", SPD(4), 2.0),
]


def sample(m, scale, seed=0, n=30):
    rng = np.random.default_rng(seed)
    base = m.base_point()
    for _ in range(n):
        x = m.random_point(rng, base, scale)
        v = m.random_tangent(rng, x, scale=scale)
        yield x, v


@pytest.mark.parametrize("label,m,scale", CASES)
def test_exp_log_roundtrip(label, m, scale):
    for x, v in sample(m, scale):
        y = m.exp(x, v)
        back = m.log(x, y)
        err = m.norm(x, back - v) / (1.0 + m.norm(x, v))
        assert err < tol


@pytest.mark.parametrize("label,m,scale", CASES)
def test_distance_matches_tangent_norm(label, m, scale):
    for x, v in sample(m, scale):
        y = m.exp(x, v)
        nv = m.norm(x, v)
        assert abs(m.distance(x, y) - nv) < tol * (1.0 + nv)


@pytest.mark.parametrize("label,m,scale", CASES)
def test_distance_symmetry_and_triangle(label, m, scale):
    rng = np.random.default_rng(1)
    base = m.base_point()
    for _ in range(30):
        x = m.random_point(rng, base, scale)
        y = m.random_point(rng, base, scale)
        z = m.random_point(rng, base, scale)
        assert abs(m.distance(x, y) - m.distance(y, x)) < tol
        assert m.distance(x, z) <= m.distance(x, y) + m.distance(y, z) + tol


@pytest.mark.parametrize("label,m,scale", CASES)
def test_identity_point(label, m, scale):
    for x, _ in sample(m, scale, n=5):
        assert m.distance(x, x) < tol
        assert m.norm(x, m.log(x, x)) < tol


@pytest.mark.parametrize("label,m,scale", CASES)
def test_log_outputs_are_tangent(label, m, scale):
    for x, v in sample(m, scale, n=10):
        y = m.exp(x, v)
        m.check_tangent(x, m.log(x, y).coords)


@pytest.mark.parametrize("label,m,scale", CASES)
def test_projected_distance_is_tangent_gap(label, m, scale):
    rng = np.random.default_rng(2)
    base = m.base_point()
    for _ in range(20):
        x = m.random_point(rng, base, scale)
        y = m.random_point(rng, base, scale)
        z = m.random_point(rng, base, scale)
        pd = m.projected_distance(x, y, z)
        direct = m.norm(x, m.log(x, y) - m.log(x, z))
        assert abs(pd - direct) < tol * (1.0 + direct)
        assert m.projected_distance(x, y, y) < tol


def test_euclidean_projected_distance_equals_distance():
    m = Euclidean(6)
    rng = np.random.default_rng(3)
    base = m.base_point()
    for _ in range(20):
        x = m.random_point(rng, base, 4.0)
        y = m.random_point(rng, base, 4.0)
        z = m.random_point(rng, base, 4.0)
        assert abs(m.projected_distance(x, y, z) - m.distance(y, z)) < tol


def test_small_distance_accuracy_hyperbolic():
    # chordal formulation keeps tiny separations far below the ~sqrt(eps)
    # absolute floor of the plain arccosh formula
    m = Hyperbolic(4, kappa=1.0)
    rng = np.random.default_rng(4)
    x = m.random_point(rng, m.base_point(), 1.0)
    for h in (1e-3, 1e-6, 1e-9):
        v = m.random_tangent(rng, x, scale=1.0)
        v = (h / m.norm(x, v)) * v
        y = m.exp(x, v)
        assert abs(m.distance(x, y) - h) < 1e-13


def test_hyperbolic_membership_and_far_points():
    m = Hyperbolic(6, kappa=1.0)
    rng = np.random.default_rng(5)
    b = m.base_point()
    x = m.random_point(rng, b, 2.0)
    m.check_point(x.coords)
    # far excursions keep finite coordinates and a scale-relative membership
    v = m.random_tangent(rng, x, scale=25.0)
    y = m.exp(x, v)
    m.check_point(y.coords)
    assert np.all(np.isfinite(y.coords))
    w = m.log(x, y)
    assert abs(m.norm(x, w) - m.norm(x, v)) < 1e-6 * m.norm(x, v)


def test_hyperbolic_rejects_overlong_geodesics():
    m = Hyperbolic(4, kappa=1.0)
    x = m.base_point()
    rng = np.random.default_rng(6)
    v = m.random_tangent(rng, x, scale=1.0)
    v = (400.0 / m.norm(x, v)) * v
    with pytest.raises(DomainError):
        m.exp(x, v)


def test_sphere_antipodal_guard():
    m = Sphere(3, sigma=1.0)
    x = m.base_point()
    y = m.point(-x.coords)
    with pytest.raises(DomainError):
        m.log(x, y)


def test_spd_outputs_symmetric():
    m = SPD(4)
    rng = np.random.default_rng(7)
    x = m.random_point(rng, m.base_point(), 2.0)
    v = m.random_tangent(rng, x, scale=2.0)
    y = m.exp(x, v)
    mat = y.coords
    assert np.allclose(mat, mat.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(mat) > 0.0)


def test_tangent_algebra_requires_shared_base():
    m = Euclidean(3)
    rng = np.random.default_rng(8)
    b = m.base_point()
    x = m.random_point(rng, b, 1.0)
    y = m.random_point(rng, b, 1.0)
    u = m.random_tangent(rng, x)
    v = m.random_tangent(rng, x)
    w = m.random_tangent(rng, y)
    s = u + v - v
    assert np.allclose(s.coords, u.coords, atol=1e-15)
    with pytest.raises(DomainError):
        _ = u + w


@pytest.mark.parametrize("label,m,scale", CASES)
def test_random_point_respects_radius(label, m, scale):
    rng = np.random.default_rng(9)
    base = m.base_point()
    for _ in range(20):
        x = m.random_point(rng, base, scale)
        assert m.distance(base, x) <= scale + tol


@pytest.mark.parametrize("label,m,scale", CASES)
def test_manifold_dict_roundtrip(label, m, scale):
    again = manifold_from_dict(manifold_to_dict(m))
    assert repr(again) == repr(m)
