"""Benchmark harness: synthetic instances, reference optima, experiment
orchestration, trace CSV emission, and log-log slope fitting.

Instances are synthetic with a planted solution, so noise-free variants
have a machine-precision optimum and slope measurements stay clean.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baselines
from .core import (DivergenceError, MixedGradConfig, RunTrace, TraceRecord,
                   run as run_mixedgrad)
from .geometry import project_ball
from .losses import (LEAST_SQUARES, LOGISTIC, Dataset, ProblemInstance,
                     full_objective, mean_gradient)
from .oracle import OracleCounters

TRACE_COLUMNS = ["solver", "seed", "epoch", "step", "stoch_calls",
                 "full_calls", "objective", "error", "status"]
SUMMARY_COLUMNS = ["solver", "seed", "final_error", "stoch_calls",
                   "full_calls", "wall_ms"]

# Errors below this are considered indistinguishable from the reference
# noise floor; they are clipped before logs and excluded from slope fits.
ERROR_FLOOR = 1e-14


def gen_synthetic(seed: int, n: int, d: int, noise_sd: float,
                  loss_kind: str, radius: float) -> ProblemInstance:
    """Synthetic instance with unit-norm feature rows and a planted
    solution of norm radius/2 (so the optimum tends to be interior).

    Least-squares labels are <w0, x_i> + noise; logistic labels are the
    sign of the same quantity. Deterministic per seed.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    if noise_sd < 0:
        raise ValueError("noise_sd must be nonnegative")
    rng = np.random.Generator(np.random.Philox(seed))
    X = rng.standard_normal((n, d))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    w0 = rng.standard_normal(d)
    w0 *= (radius / 2.0) / np.linalg.norm(w0)
    raw = X @ w0 + noise_sd * rng.standard_normal(n)
    if loss_kind == LEAST_SQUARES:
        y = raw
    elif loss_kind == LOGISTIC:
        y = np.where(raw >= 0, 1.0, -1.0)
    else:
        raise ValueError(f"unknown loss kind: {loss_kind!r}")
    return ProblemInstance.create(Dataset(X, y), loss_kind, radius)


class ReferenceSolveError(RuntimeError):
    """The reference solve hit its iteration cap or failed certification."""


def compute_reference_optimum(instance: ProblemInstance, tolerance: float,
                              max_iterations: int = 10 ** 6
                              ) -> tuple[np.ndarray, float]:
    """High-precision constrained optimum via accelerated projected
    gradient with uncounted gradients.

    Stops once the projected-gradient residual (the fixed-point gap of a
    step-1/beta projected gradient step) falls below the tolerance, then
    certifies the result by re-checking that residual (<= 10 * tolerance).
    """
    if not 0 < tolerance <= 1e-6:
        raise ValueError("tolerance must lie in (0, 1e-6]")
    beta = instance.smoothness
    R = instance.domain_radius
    eta = 1.0 / beta
    w = np.zeros(instance.d)
    w_prev = w.copy()
    theta_prev = 1.0
    converged = False
    for _ in range(max_iterations):
        theta = (1.0 + math.sqrt(1.0 + 4.0 * theta_prev * theta_prev)) / 2.0
        y = w + ((theta_prev - 1.0) / theta) * (w - w_prev)
        w_next = project_ball(y - eta * mean_gradient(instance, y), R)
        w_prev, w = w, w_next
        theta_prev = theta
        residual = float(np.linalg.norm(
            w - project_ball(w - eta * mean_gradient(instance, w), R)))
        if residual < tolerance:
            converged = True
            break
    if not converged:
        raise ReferenceSolveError(
            f"reference solve did not reach tolerance {tolerance} within "
            f"{max_iterations} iterations")
    residual = float(np.linalg.norm(
        w - project_ball(w - eta * mean_gradient(instance, w), R)))
    if residual > 10.0 * tolerance:
        raise ReferenceSolveError(
            f"first-order certification failed: residual {residual:.3e} > "
            f"{10.0 * tolerance:.3e}")
    return w, full_objective(instance, w)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float
    x_min: float
    x_max: float
    n_points: int
    n_clipped: int = 0


def fit_slope(records, x_field: str, error_field: str,
              skip_head: int = 0) -> SlopeFit:
    """Ordinary least squares on (log10 x, log10 error).

    Accepts TraceRecord objects or mappings (e.g. parsed CSV rows). Points
    at or below the error floor are excluded and counted as clipped.
    Requires >= 4 usable points with strictly increasing x.
    """
    def get(rec, name):
        if isinstance(rec, dict):
            return float(rec[name])
        return float(getattr(rec, name))

    pts = [(get(r, x_field), get(r, error_field)) for r in records]
    pts = pts[skip_head:]
    if any(e <= 0 for _, e in pts if not math.isnan(e)):
        raise ValueError("nonpositive error values; reference optimum too loose")
    usable = [(x, e) for x, e in pts if not math.isnan(e) and e > ERROR_FLOOR]
    n_clipped = len(pts) - len(usable)
    if len(usable) < 4:
        raise ValueError(f"need >= 4 usable points, got {len(usable)}")
    xs = np.array([x for x, _ in usable])
    if not np.all(np.diff(xs) > 0):
        raise ValueError("x values must be strictly increasing")
    lx = np.log10(xs)
    le = np.log10([e for _, e in usable])
    slope, intercept = np.polyfit(lx, le, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((le - pred) ** 2))
    ss_tot = float(np.sum((le - np.mean(le)) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return SlopeFit(float(slope), float(intercept), min(r2, 1.0),
                    float(xs[0]), float(xs[-1]), len(usable), n_clipped)


@dataclass
class SolverSpec:
    """One solver entry of an experiment: a name plus its config object."""

    name: str                       # mixedgrad | sgd | gd | nag
    config: object                  # MixedGradConfig or BaselineConfig


@dataclass
class ExperimentSpec:
    instance: ProblemInstance
    solvers: list[SolverSpec]
    seeds: list[int]
    out_dir: Path
    reference_tolerance: float = 1e-10

    def __post_init__(self):
        if not self.solvers:
            raise ValueError("experiment needs at least one solver")
        if not self.seeds:
            raise ValueError("experiment needs at least one seed")
        if not 0 < self.reference_tolerance <= 1e-6:
            raise ValueError("reference tolerance must lie in (0, 1e-6]")
        self.out_dir = Path(self.out_dir)


def write_trace_csv(path, solver: str, seed: int, trace: RunTrace,
                    status: str = "ok") -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(TRACE_COLUMNS)
        for rec in trace:
            writer.writerow([solver, seed, rec.epoch, rec.step,
                             rec.stoch_calls, rec.full_calls,
                             repr(float(rec.objective)), repr(float(rec.error)),
                             rec.status if status == "ok" else status])


def read_trace_csv(path) -> list[dict]:
    """Parse a trace CSV back into typed row dicts (round-trips emit)."""
    rows = []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            rows.append({
                "solver": row["solver"],
                "seed": int(row["seed"]),
                "epoch": int(row["epoch"]),
                "step": int(row["step"]),
                "stoch_calls": int(row["stoch_calls"]),
                "full_calls": int(row["full_calls"]),
                "objective": float(row["objective"]),
                "error": float(row["error"]),
                "status": row["status"],
            })
    return rows


def _run_one(instance: ProblemInstance, solver: SolverSpec, seed: int,
             reference_value: float) -> tuple[np.ndarray | None, RunTrace,
                                              OracleCounters, str]:
    counters = OracleCounters()
    if solver.name == "mixedgrad":
        result = run_mixedgrad(instance, solver.config, seed, reference_value)
        return result.point, result.trace, result.counters, "ok"
    if solver.name == "sgd":
        point, trace = baselines.run_sgd(instance, solver.config, seed,
                                         counters, reference_value)
    elif solver.name == "gd":
        point, trace = baselines.run_gd(instance, solver.config, counters,
                                        reference_value)
    elif solver.name == "nag":
        point, trace = baselines.run_nag(instance, solver.config, counters,
                                         reference_value)
    else:
        raise ValueError(f"unknown solver: {solver.name!r}")
    return point, trace, counters, "ok"


def run_experiment(spec: ExperimentSpec) -> dict:
    """Run every (solver, seed) pair with fresh counters, writing one trace
    CSV per run plus an aggregate summary CSV.

    A diverging run is recorded in the summary with a 'diverged' status row
    in its trace; the experiment continues. Returns a manifest with the
    written paths.
    """
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    w_star, g_star = compute_reference_optimum(spec.instance,
                                               spec.reference_tolerance)
    trace_paths = []
    summary_rows = []
    for solver in spec.solvers:
        for seed in spec.seeds:
            t0 = time.perf_counter()
            status = "ok"
            try:
                point, trace, counters, status = _run_one(
                    spec.instance, solver, seed, g_star)
                final_error = full_objective(spec.instance, point) - g_star
            except DivergenceError:
                status = "diverged"
                trace = RunTrace()
                trace.append(TraceRecord(0, 0, 0, 0, math.nan, math.nan,
                                         "diverged"))
                counters = OracleCounters()
                final_error = math.nan
            wall_ms = (time.perf_counter() - t0) * 1000.0
            path = spec.out_dir / f"trace_{solver.name}_seed{seed}.csv"
            write_trace_csv(path, solver.name, seed, trace, status)
            trace_paths.append(path)
            summary_rows.append([solver.name, seed, repr(float(final_error)),
                                 counters.stochastic_calls,
                                 counters.full_calls, f"{wall_ms:.3f}"])
    summary_path = spec.out_dir / "summary.csv"
    with open(summary_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerows(summary_rows)
    return {"traces": trace_paths, "summary": summary_path,
            "reference_point": w_star, "reference_value": g_star}
