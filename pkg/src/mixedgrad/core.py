"""Epoch-based mixed stochastic/full-gradient solver.

Each epoch recenters the problem at the current anchor, adds an L2 term
whose weight shrinks by gamma per epoch, computes one exact averaged
gradient at the anchor, and then runs variance-reduced projected
stochastic steps inside a domain whose radius also shrinks by gamma.
The number of inner steps grows by gamma^2 per epoch, so the stochastic
budget after m epochs is T1 * (gamma^{2m} - 1) / (gamma^2 - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import EpochDomain, project_ball, project_epoch_domain
from .losses import ProblemInstance, full_objective, loss_grad
from .oracle import OracleCounters, SeededSampler, full_grad, sample_loss

# Largest delta (failure probability) the theory-mode parameter formulas
# accept: exp(-9/2).
MAX_FAILURE_PROBABILITY = math.exp(-4.5)


class DivergenceError(RuntimeError):
    """Raised when an iterate or gradient stops being finite."""


@dataclass(frozen=True)
class MixedGradConfig:
    eta1: float                # first-epoch step size
    delta1: float              # first-epoch domain radius
    t1: int                    # first-epoch inner iteration count
    epochs: int                # number of epochs m
    lambda1: float             # first-epoch regularization weight
    gamma: float = 2.0         # per-epoch shrink factor
    checkpoint_stride: int = 100

    def __post_init__(self):
        if not (self.eta1 > 0 and self.delta1 > 0 and self.lambda1 > 0):
            raise ValueError("eta1, delta1, lambda1 must be positive")
        if self.t1 < 1 or self.epochs < 1 or self.checkpoint_stride < 1:
            raise ValueError("t1, epochs, checkpoint_stride must be >= 1")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")


def theory_params(beta: float, radius: float, failure_prob: float,
                  epochs: int) -> MixedGradConfig:
    """Config from the high-probability analysis: gamma=2, lambda1=16*beta,
    Delta1=R, T1=ceil(300 ln(m/delta)), eta1=1/(2 beta sqrt(3 T1))."""
    if not (beta > 0 and radius > 0 and epochs >= 1):
        raise ValueError("beta, radius must be positive and epochs >= 1")
    if not 0 < failure_prob <= MAX_FAILURE_PROBABILITY:
        raise ValueError(
            f"failure probability must lie in (0, e^-4.5 ~ "
            f"{MAX_FAILURE_PROBABILITY:.4g}]")
    t1 = math.ceil(300.0 * math.log(epochs / failure_prob))
    eta1 = 1.0 / (2.0 * beta * math.sqrt(3.0 * t1))
    return MixedGradConfig(eta1=eta1, delta1=radius, t1=t1, epochs=epochs,
                           lambda1=16.0 * beta, gamma=2.0)


@dataclass
class EpochState:
    """Mutable per-epoch quantities of the solver."""

    epoch_index: int           # k, starting at 1
    anchor: np.ndarray         # running solution the epoch recenters on
    delta: float               # inner domain radius
    lam: float                 # regularization weight
    eta: float                 # step size
    inner_iters: int           # number of stochastic steps this epoch
    anchor_grad: np.ndarray | None = None  # lam*anchor + mean gradient


@dataclass
class TraceRecord:
    epoch: int
    step: int
    stoch_calls: int
    full_calls: int
    objective: float
    error: float               # objective minus reference (nan if none)
    status: str = "ok"


@dataclass
class RunTrace:
    records: list[TraceRecord] = field(default_factory=list)

    def append(self, rec: TraceRecord):
        self.records.append(rec)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass
class EpochSummary:
    """End-of-epoch diagnostics."""

    epoch: int
    delta: float
    lam: float
    eta: float
    inner_iters: int
    anchor_after: np.ndarray
    objective_after: float
    stoch_calls: int           # cumulative at epoch end
    full_calls: int
    max_step_norm_sq: float    # max ||grad correction + lam*w||^2 observed


@dataclass
class MixedGradResult:
    point: np.ndarray
    trace: RunTrace
    counters: OracleCounters
    epoch_summaries: list[EpochSummary]


def anchor_gradient(instance: ProblemInstance, anchor: np.ndarray, lam: float,
                    counters: OracleCounters) -> np.ndarray:
    """lam * anchor + averaged gradient at the anchor (one full-oracle call)."""
    return lam * anchor + full_grad(instance, anchor, counters)


def vr_gradient(instance: ProblemInstance, i: int, w: np.ndarray,
                anchor: np.ndarray, anchor_grad: np.ndarray) -> np.ndarray:
    """Variance-reduced stochastic gradient
    anchor_grad + grad g_i(w + anchor) - grad g_i(anchor).

    The correction difference is formed first, so at w = 0 the result is
    bitwise equal to anchor_grad.
    """
    correction = loss_grad(instance, i, w + anchor) - loss_grad(instance, i, anchor)
    return anchor_grad + correction


def inner_step(w: np.ndarray, g_hat: np.ndarray, lam: float, eta: float,
               domain: EpochDomain) -> np.ndarray:
    """Projected step w <- P_domain(w - eta * (lam*w + g_hat))."""
    if not np.all(np.isfinite(g_hat)):
        raise DivergenceError("non-finite stochastic gradient")
    return project_epoch_domain(w - eta * (lam * w + g_hat), domain)


def run_epoch(instance: ProblemInstance, state: EpochState,
              sampler: SeededSampler, counters: OracleCounters,
              trace: RunTrace | None = None, checkpoint_stride: int = 100,
              reference_value: float | None = None) -> tuple[np.ndarray, float]:
    """One epoch of inner stochastic steps starting from 0.

    Returns the uniform average over the inner_iters + 1 iterates and the
    largest squared norm of (gradient correction + lam * w) seen, a
    diagnostic for the bounded-step property. Checkpoints are appended to
    the trace every checkpoint_stride steps; their objective evaluations
    do not touch the oracle counters.
    """
    anchor = state.anchor
    g_k = state.anchor_grad
    if g_k is None:
        raise ValueError("epoch state is missing the anchor gradient")
    lam, eta, T = state.lam, state.eta, state.inner_iters
    delta = state.delta
    R = instance.domain_radius
    domain = EpochDomain(anchor, R, delta)
    n = instance.n
    X = instance.dataset.features
    y = instance.dataset.labels
    least_squares = instance.loss_kind == "least_squares"

    # Per-example gradients at the anchor are fixed for the whole epoch;
    # cache them once (pure caching, no extra oracle access).
    margins = X @ anchor
    if least_squares:
        anchor_rows = (-2.0 * (y - margins))[:, None] * X
    else:
        z = y * margins
        s = np.where(z >= 0, np.exp(-np.minimum(z, 700)) / (1.0 + np.exp(-np.minimum(z, 700))),
                     1.0 / (1.0 + np.exp(np.maximum(z, -700))))
        anchor_rows = (-y * s)[:, None] * X

    w = np.zeros(instance.d)
    mean = w.copy()            # running mean over iterates seen so far
    count = 1
    max_step_sq = 0.0
    norm = np.linalg.norm
    for t in range(1, T + 1):
        i = sample_loss(sampler, counters, n)
        x = X[i]
        margin = float((w + anchor) @ x)
        if least_squares:
            grad_at = (-2.0 * (y[i] - margin)) * x
        else:
            z = y[i] * margin
            if z >= 0:
                ez = np.exp(-z)
                s_i = ez / (1.0 + ez)
            else:
                s_i = 1.0 / (1.0 + np.exp(z))
            grad_at = (-y[i] * s_i) * x
        correction = grad_at - anchor_rows[i]
        step_vec = correction + lam * w
        step_sq = float(step_vec @ step_vec)
        if step_sq > max_step_sq:
            max_step_sq = step_sq
        v = w - eta * (g_k + step_vec)
        if not np.all(np.isfinite(v)):
            raise DivergenceError(
                f"non-finite iterate at epoch {state.epoch_index}, step {t}")
        # Projection fast path: inside both balls means no work.
        if norm(v) <= delta and norm(v + anchor) <= R:
            w = v
        else:
            w = project_epoch_domain(v, domain)
        count += 1
        mean += (w - mean) / count
        if trace is not None and t % checkpoint_stride == 0:
            obj = full_objective(instance, w + anchor)
            err = obj - reference_value if reference_value is not None else math.nan
            trace.append(TraceRecord(state.epoch_index, t,
                                     counters.stochastic_calls,
                                     counters.full_calls, obj, err))
    return mean, max_step_sq


def shrink_schedule(state: EpochState, gamma: float,
                    w_tilde: np.ndarray) -> EpochState:
    """Advance to the next epoch: shift the anchor by the epoch average,
    divide delta/lam/eta by gamma, multiply the step budget by gamma^2."""
    return EpochState(
        epoch_index=state.epoch_index + 1,
        anchor=state.anchor + w_tilde,
        delta=state.delta / gamma,
        lam=state.lam / gamma,
        eta=state.eta / gamma,
        inner_iters=int(round(gamma * gamma * state.inner_iters)),
        anchor_grad=None,
    )


def epoch_objective(instance: ProblemInstance, anchor: np.ndarray, lam: float,
                    w: np.ndarray) -> float:
    """Recentered epoch objective
    (lam/2)||w||^2 + lam <w, anchor> + G(w + anchor)."""
    return (0.5 * lam * float(w @ w) + lam * float(w @ anchor)
            + full_objective(instance, w + anchor))


def epoch_subproblem_optimum(instance: ProblemInstance, anchor: np.ndarray,
                             lam: float, inner_radius: float,
                             tol: float = 1e-12,
                             max_iterations: int = 200_000) -> np.ndarray:
    """Deterministic high-precision minimizer of the recentered epoch
    objective over the two-ball domain, by projected gradient descent.

    Gradients here are diagnostic and never touch oracle counters.
    """
    from .losses import mean_gradient

    domain = EpochDomain(anchor, instance.domain_radius, inner_radius)
    eta = 1.0 / (instance.smoothness + lam)
    w = np.zeros(instance.d)
    for _ in range(max_iterations):
        grad = lam * (w + anchor) + mean_gradient(instance, w + anchor)
        w_next = project_epoch_domain(w - eta * grad, domain)
        if np.linalg.norm(w_next - w) < tol:
            return w_next
        w = w_next
    return w


def run(instance: ProblemInstance, config: MixedGradConfig, seed: int,
        reference_value: float | None = None) -> MixedGradResult:
    """Full multi-epoch run; returns the final anchor, trace, counters,
    and per-epoch diagnostics.

    Oracle accounting: exactly one full-oracle call per epoch and one
    stochastic call per inner step.
    """
    counters = OracleCounters()
    sampler = SeededSampler(seed)
    trace = RunTrace()
    summaries: list[EpochSummary] = []
    R = instance.domain_radius

    state = EpochState(
        epoch_index=1,
        anchor=np.zeros(instance.d),
        delta=config.delta1,
        lam=config.lambda1,
        eta=config.eta1,
        inner_iters=config.t1,
    )
    for _ in range(config.epochs):
        state.anchor_grad = anchor_gradient(instance, state.anchor, state.lam, counters)
        w_tilde, max_step_sq = run_epoch(
            instance, state, sampler, counters, trace,
            config.checkpoint_stride, reference_value)
        next_state = shrink_schedule(state, config.gamma, w_tilde)
        # The new anchor is a convex combination of feasible points, so it
        # lies in the R-ball up to roundoff; clamp the tiny excess.
        nrm = float(np.linalg.norm(next_state.anchor))
        if nrm > R:
            if nrm > R + 1e-9:
                raise DivergenceError(
                    f"anchor left the feasible ball after epoch {state.epoch_index}")
            next_state.anchor = project_ball(next_state.anchor, R)
        obj = full_objective(instance, next_state.anchor)
        err = obj - reference_value if reference_value is not None else math.nan
        trace.append(TraceRecord(state.epoch_index, state.inner_iters + 1,
                                 counters.stochastic_calls, counters.full_calls,
                                 obj, err))
        summaries.append(EpochSummary(
            epoch=state.epoch_index, delta=state.delta, lam=state.lam,
            eta=state.eta, inner_iters=state.inner_iters,
            anchor_after=next_state.anchor.copy(), objective_after=obj,
            stoch_calls=counters.stochastic_calls,
            full_calls=counters.full_calls,
            max_step_norm_sq=max_step_sq))
        state = next_state

    return MixedGradResult(state.anchor, trace, counters, summaries)
