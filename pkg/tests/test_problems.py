import math

import numpy as np
import pytest

from ragd.distortion import trig_coeff
from ragd.errors import DomainError, MissingDataError
from ragd.geometry import SPD, Hyperbolic, Sphere
from ragd.problems import (
    gradient_audit,
    make_quadratic,
    oracle_optimum,
    problem_from_dict,
    problem_to_dict,
    random_karcher,
    random_sphere_mean,
    rng_from_seed,
)

tol = 1e-9
audit_tol = 1e-5


def test_rng_is_reproducible():
    a = rng_from_seed(42).normal(size=5)
    b = rng_from_seed(42).normal(size=5)
    assert np.array_equal(a, b)
    c = rng_from_seed(43).normal(size=5)
    assert not np.array_equal(a, c)


def test_quadratic_spectrum_and_optimum():
    prob = make_quadratic(12, 2.0, 30.0, seed=0)
    h = np.asarray(prob.payload["hessian"])
    eigs = np.linalg.eigvalsh(h)
    assert abs(eigs.min() - 2.0) < 1e-10
    assert abs(eigs.max() - 30.0) < 1e-10
    assert prob.optimum is not None
    g = prob.grad(prob.optimum)
    assert np.linalg.norm(g.coords) < tol
    assert prob.value(prob.optimum) <= prob.value(prob.start)


def test_quadratic_gradient_audit():
    prob = make_quadratic(8, 1.0, 10.0, seed=1)
    rep = gradient_audit(prob, seed=1)
    assert rep["max_fd_rel_err"] < audit_tol
    assert rep["strong_convexity_violations"] == 0
    assert rep["smoothness_violations"] == 0


def test_karcher_constants():
    m = Hyperbolic(6, kappa=1.0)
    prob = random_karcher(m, 5, 1.5, seed=2)
    assert prob.mu == 1.0
    spread = prob.feasible_radius
    assert abs(prob.L - trig_coeff(1.0, 2.0 * spread)) < tol
    rep = gradient_audit(prob, seed=2)
    assert rep["max_fd_rel_err"] < audit_tol
    assert rep["strong_convexity_violations"] == 0
    assert rep["smoothness_violations"] == 0


def test_karcher_audit_spd():
    prob = random_karcher(SPD(3), 5, 1.0, seed=3)
    rep = gradient_audit(prob, seed=3)
    assert rep["max_fd_rel_err"] < audit_tol
    assert rep["strong_convexity_violations"] == 0
    assert rep["smoothness_violations"] == 0


def test_sphere_mean_constants_and_audit():
    m = Sphere(6, sigma=1.0)
    prob = random_sphere_mean(m, 5, 0.3, seed=4)
    assert prob.L == 1.0
    assert 0.0 < prob.mu < 1.0
    assert abs(prob.containment_radius - math.pi / 4.0) < tol
    rep = gradient_audit(prob, seed=4)
    assert rep["max_fd_rel_err"] < audit_tol
    assert rep["strong_convexity_violations"] == 0
    assert rep["smoothness_violations"] == 0


def test_oracle_optimum_matches_gradient_zero():
    prob = random_karcher(Hyperbolic(5, kappa=1.0), 4, 1.0, seed=5)
    opt = oracle_optimum(prob, tol=1e-12)
    assert prob.optimum is opt
    g = prob.grad(opt)
    assert prob.manifold.norm(opt, g) < 1e-10
    # optimum value caches and lower-bounds nearby values
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = prob.manifold.random_point(rng, opt, 0.5)
        assert prob.value(x) >= prob.optimum_value - 1e-12


def test_optimum_required_before_use():
    prob = random_karcher(Hyperbolic(4, kappa=1.0), 4, 1.0, seed=6)
    with pytest.raises(MissingDataError):
        _ = prob.optimum_value


def test_problem_dict_roundtrip_quadratic():
    prob = make_quadratic(6, 1.0, 9.0, seed=7)
    doc = problem_to_dict(prob)
    again = problem_from_dict(doc)
    x = prob.manifold.point(np.linspace(-1.0, 1.0, 6))
    assert abs(prob.value(x) - again.value(x)) < tol
    assert np.allclose(prob.optimum.coords, again.optimum.coords)


def test_problem_dict_roundtrip_karcher():
    prob = random_karcher(Hyperbolic(5, kappa=1.0), 4, 1.2, seed=8)
    doc = problem_to_dict(prob)
    again = problem_from_dict(doc)
    assert again.mu == prob.mu
    assert abs(again.L - prob.L) < tol
    x = prob.start
    assert abs(prob.value(x) - again.value(x)) < tol


def test_problem_from_generator_block():
    doc = {
        "kind": "karcher",
        "manifold": {"kind": "hyperbolic", "dim": 5, "kappa": 1.0},
        "n_anchors": 4,
        "radius": 1.2,
        "seed": 8,
    }
    a = problem_from_dict(doc)
    b = problem_from_dict(doc)
    assert abs(a.value(a.start) - b.value(b.start)) < tol
    with pytest.raises(DomainError):
        problem_from_dict({"kind": "mystery"})


def test_declared_constants_validated():
    with pytest.raises(DomainError):
        make_quadratic(4, -1.0, 2.0, seed=0)
    with pytest.raises(DomainError):
        random_karcher(Hyperbolic(4, kappa=1.0), 0, 1.0, seed=0)
    with pytest.raises(DomainError):
        random_karcher(Hyperbolic(4, kappa=1.0), 3, -2.0, seed=0)
