"""Parameter sweeps over a base experiment configuration.

One row per swept value: the measured contraction rate from the trailing
half of the log-gap curve next to its fixed-point prediction, the mean
distortion rate that produced it, and the predicted iteration count for
the momentum to settle.  Swept axes rebuild either the solver (gamma,
delta_const) or the problem (condition_number, curvature) and rows are
emitted in the order the values were given.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import DomainError, MissingDataError
from .problems import Problem, oracle_optimum, problem_from_dict
from .solvers import SolverConfig, run
from .trace import ConvergenceTrace, estimate_rate
from .xi import XiParams, contraction_factor, fixed_point_xi

__all__ = ["SWEEP_AXES", "SweepPoint", "run_sweep", "write_sweep_csv"]

SWEEP_AXES = ("gamma", "condition_number", "curvature", "delta_const")

SWEEP_COLUMNS = (
    "axis",
    "value",
    "solver",
    "final_gap",
    "slope",
    "rate",
    "delta_bar",
    "xi_pred",
    "pred_rate",
    "xi_settle_iters",
)

# Momentum settling tolerance used for the predicted iteration count.
_XI_SETTLE_TOL = 1e-3


@dataclass(frozen=True)
class SweepPoint:
    """One sweep row; ``rate`` is the measured per-step error contraction
    exp(slope / 2) and ``pred_rate`` its 1 - xi counterpart."""

    axis: str
    value: float
    solver: str
    final_gap: float
    slope: float
    rate: float
    delta_bar: float
    xi_pred: float
    pred_rate: float
    xi_settle_iters: int

    def as_row(self) -> list:
        return [getattr(self, c) for c in SWEEP_COLUMNS]


def _settle_iters(xi0: float, params: XiParams) -> int:
    star = fixed_point_xi(params)
    gap0 = abs(xi0 - star)
    if gap0 <= _XI_SETTLE_TOL:
        return 0
    lam = contraction_factor(params)
    return int(math.ceil(math.log(_XI_SETTLE_TOL / gap0) / math.log(lam)))


def _point(
    axis: str, value: float, problem: Problem, config: SolverConfig
) -> SweepPoint:
    if problem.optimum is None:
        oracle_optimum(problem)
    trace: ConvergenceTrace = run(problem, config)
    gaps = trace.column("f_gap")
    est = estimate_rate(gaps)
    if config.mode == "rgd":
        delta_bar = 1.0
        xi_pred = math.nan
        pred = 1.0 - config.mu * config.resolved_gamma
        settle = 0
    else:
        deltas = trace.column("delta_rate")
        delta_bar = float(deltas[1:].mean()) if len(deltas) > 1 else 1.0
        params = XiParams(a=config.a, delta=delta_bar)
        xi_pred = fixed_point_xi(params)
        pred = 1.0 - xi_pred
        settle = _settle_iters(config.resolved_xi0, params)
    return SweepPoint(
        axis=axis,
        value=float(value),
        solver=config.mode,
        final_gap=float(gaps[-1]),
        slope=est.slope,
        rate=est.rate,
        delta_bar=delta_bar,
        xi_pred=xi_pred,
        pred_rate=pred,
        xi_settle_iters=settle,
    )


def _solver_kwargs(entry: dict, problem: Problem) -> dict:
    kwargs = dict(entry)
    kwargs.setdefault("mu", problem.mu)
    kwargs.setdefault("L", problem.L)
    return kwargs


def run_sweep(
    config: dict, axis: str, values: list[float], seed: int | None = None
) -> list[SweepPoint]:
    """Run the first configured solver across ``values`` of ``axis``."""
    if axis not in SWEEP_AXES:
        raise DomainError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    if not values:
        raise DomainError("sweep needs at least one axis value")
    solvers = config.get("solvers") or []
    if not solvers:
        raise MissingDataError("config lists no solvers")
    entry = dict(solvers[0])
    problem_desc = config.get("problem")
    if problem_desc is None:
        raise MissingDataError("config has no problem description")
    problem_desc = dict(problem_desc)
    if seed is None:
        seed = config.get("seed")
    if seed is not None:
        problem_desc.setdefault("seed", int(seed))

    points: list[SweepPoint] = []
    if axis == "gamma":
        problem = problem_from_dict(problem_desc)
        for v in values:
            kwargs = _solver_kwargs(entry, problem)
            kwargs["gamma"] = float(v) / kwargs["L"]
            points.append(_point(axis, v, problem, SolverConfig(**kwargs)))
    elif axis == "delta_const":
        problem = problem_from_dict(problem_desc)
        for v in values:
            kwargs = _solver_kwargs(entry, problem)
            kwargs["mode"] = "ragd_constant_delta"
            kwargs["delta_const"] = float(v)
            points.append(_point(axis, v, problem, SolverConfig(**kwargs)))
    elif axis == "condition_number":
        if problem_desc.get("kind") != "quadratic":
            raise DomainError("condition_number sweeps need a quadratic problem")
        for v in values:
            desc = dict(problem_desc)
            big = float(desc.get("L", 1.0))
            desc["mu"] = float(v) * big
            desc["L"] = big
            problem = problem_from_dict(desc)
            kwargs = dict(entry)
            kwargs["mu"] = problem.mu
            kwargs["L"] = problem.L
            points.append(_point(axis, v, problem, SolverConfig(**kwargs)))
    else:  # curvature
        manifold_desc = problem_desc.get("manifold")
        if manifold_desc is None:
            raise DomainError("curvature sweeps need a problem with a manifold block")
        for v in values:
            desc = dict(problem_desc)
            desc["manifold"] = dict(manifold_desc)
            desc["manifold"]["kappa"] = float(v)
            problem = problem_from_dict(desc)
            kwargs = dict(entry)
            kwargs["mu"] = problem.mu
            kwargs["L"] = problem.L
            points.append(_point(axis, v, problem, SolverConfig(**kwargs)))
    return points


def write_sweep_csv(points: list[SweepPoint], path) -> None:
    """Write sweep rows in axis order with a fixed column header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for p in points:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in p.as_row()])
