"""Seeded property suites behind the verify subcommand."""

import logging

import pytest

from ragd.errors import DomainError
from ragd.verify import VERIFY_SUITES, run_suite

logging.getLogger("ragd.solvers").setLevel(logging.ERROR)


@pytest.mark.parametrize("suite", ["geometry", "distortion", "xi"])
def test_suite_passes_and_reports_shape(suite):
    report = run_suite(suite, seed=0)
    assert report["suite"] == suite
    assert report["seed"] == 0
    assert report["ok"] is True
    assert report["checks"]
    for check in report["checks"]:
        assert check["violations"] == 0
        assert check["ok"] is True
        assert check["count"] > 0
        assert "worst" in check and "tol" in check


def test_suite_listing():
    assert VERIFY_SUITES == ("geometry", "distortion", "xi", "potential", "all")


def test_all_suite_aggregates():
    report = run_suite("all", seed=0)
    assert report["suite"] == "all"
    assert report["ok"] is True
    names = [s["suite"] for s in report["suites"]]
    assert names == ["geometry", "distortion", "xi", "potential"]
    assert all(s["ok"] for s in report["suites"])


def test_unknown_suite_is_rejected():
    with pytest.raises(DomainError):
        run_suite("thermodynamics", seed=0)


def test_suites_depend_on_seed_but_stay_clean():
    first = run_suite("xi", seed=1)
    second = run_suite("xi", seed=1)
    assert first == second
    other = run_suite("xi", seed=2)
    assert other["ok"] is True
    assert other != first
