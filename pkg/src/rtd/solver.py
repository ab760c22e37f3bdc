"""Augmented-Lagrangian solver for reshuffled low-rank decomposition.

Recovers matrices A_1..A_N from an observation X = sum_i R_i(A_i) by
minimizing the sum of nuclear norms subject to that equality constraint.
Each sweep updates the components sequentially (Gauss-Seidel) through a
singular-value soft-threshold, then performs dual ascent on the multiplier
tensor and grows the penalty weight kappa.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DivergenceDetected, NonFinite, ShapeMismatch
from .linalg import nuclear_norm, spectral_norm, svt_with_values

# Residual blowing up past this multiple of its starting value aborts the run.
DIVERGENCE_FACTOR = 1e6

SCHEDULES = ("geometric", "harmonic")


@dataclass
class SolverConfig:
    """Penalty schedule and stopping parameters.

    kappa0 defaults to 1.25 over the largest pullback spectral norm (1.0
    for a zero observation), so the first threshold sits just under the
    biggest component any single operator could claim.  The geometric
    schedule multiplies kappa by rho each iteration; the harmonic
    schedule uses kappa0 * k, whose inverse sum diverges and so satisfies
    the convergence theory that the geometric schedule does not.
    """

    rho: float = 1.01
    kappa0: float | None = None
    max_iter: int = 2000
    tol: float = 1e-7
    kappa_schedule: str = "geometric"
    kappa_max: float | None = None

    def __post_init__(self):
        if not self.rho > 1.0:
            raise ValueError(f"rho must be > 1, got {self.rho}")
        if self.kappa0 is not None and not self.kappa0 > 0.0:
            raise ValueError(f"kappa0 must be > 0, got {self.kappa0}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.kappa_schedule not in SCHEDULES:
            raise ValueError(f"kappa_schedule must be one of {SCHEDULES}")
        if self.kappa_max is not None and not self.kappa_max > 0.0:
            raise ValueError(f"kappa_max must be > 0, got {self.kappa_max}")


@dataclass
class Problem:
    """Observation tensor plus one reshuffle per latent component."""

    X: np.ndarray
    ops: list

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=float)
        if len(self.ops) < 1:
            raise ShapeMismatch("need at least one component")
        for op in self.ops:
            if tuple(op.dst_shape) != self.X.shape:
                raise ShapeMismatch(
                    f"operator maps into {op.dst_shape}, observation has shape {self.X.shape}"
                )


@dataclass
class SolverResult:
    components: list
    iterations: int
    converged: bool
    residual_history: list
    final_kappa: float
    # Per-iteration metadata, parallel to residual_history.
    objective_history: list = field(default_factory=list)
    kappa_history: list = field(default_factory=list)
    dual_history: list = field(default_factory=list)


def default_kappa0(problem):
    """Initial penalty so the first threshold 1/kappa sits just under the
    largest spectral norm any single component could claim.

    Starting the threshold high keeps every iterate genuinely low rank
    while kappa grows; starting it low lets one component absorb the
    whole observation and stall the residual at a feasible, wrong split.
    """
    top = max(spectral_norm(op.adjoint(problem.X)) for op in problem.ops)
    if top == 0.0:
        return 1.0
    return 1.25 / top


def _kappa_at(config, k, kappa0):
    """Penalty weight in effect during iteration k (1-indexed)."""
    if config.kappa_schedule == "harmonic":
        kappa = kappa0 * k
    else:
        kappa = kappa0 * config.rho ** (k - 1)
    if config.kappa_max is not None:
        kappa = min(kappa, config.kappa_max)
    return kappa


def decompose(problem, config=None):
    """Run the alternating singular-value-thresholding scheme.

    Initialization: Y = sgn(X) elementwise (sgn(0) = 0), A_i = adjoint_i(X)/N.
    Each iteration, for i = 1..N in order and using the freshest A_j:

        A_i <- svt( adjoint_i( X - sum_{j != i} R_j(A_j) + Y/kappa ), 1/kappa )

    then Y += kappa * (X - sum_i R_i(A_i)) and kappa advances per schedule.
    Stops when the relative primal residual drops to config.tol or max_iter
    is hit; raises DivergenceDetected if the residual blows up instead.
    """
    if config is None:
        config = SolverConfig()
    X, ops = problem.X, problem.ops
    if not np.isfinite(X).all():
        raise NonFinite("observation contains NaN or Inf")
    n_comp = len(ops)

    x = X.ravel()
    norm_x = float(np.linalg.norm(x))
    if not math.isfinite(norm_x):
        raise NonFinite("observation norm overflows float64")
    scale = max(1.0, norm_x)
    kappa0 = config.kappa0 if config.kappa0 is not None else default_kappa0(problem)

    y = np.sign(x)
    comps = [np.ascontiguousarray(op.adjoint(X) / n_comp) for op in ops]
    bufs = [np.empty(op.size) for op in ops]
    s_sum = np.zeros(x.size)
    for op, a in zip(ops, comps):
        kernels.scatter_add(s_sum, op.perm, a.ravel())

    residuals, objectives, kappas, duals = [], [], [], []
    converged = False
    iterations = 0
    divergence_ref = None

    for k in range(1, config.max_iter + 1):
        kappa = _kappa_at(config, k, kappa0)
        inv_kappa = 1.0 / kappa
        objective = 0.0
        delta_sq = 0.0
        for i, op in enumerate(ops):
            a_old = comps[i]
            buf = bufs[i]
            kernels.pullback_residual(x, s_sum, y, inv_kappa, op.perm, a_old.ravel(), buf)
            a_new, values = svt_with_values(buf.reshape(op.m, op.n), inv_kappa)
            objective += float(values.sum())
            delta_sq += float(np.sum((a_new - a_old) ** 2))
            kernels.scatter_add_delta(s_sum, op.perm, a_new.ravel(), a_old.ravel())
            comps[i] = a_new
        # Refresh the running sum from scratch so scatter-add rounding
        # cannot accumulate across iterations.
        s_sum[:] = 0.0
        for op, a in zip(ops, comps):
            kernels.scatter_add(s_sum, op.perm, a.ravel())
        diff = x - s_sum
        y += kappa * diff
        residual = float(np.linalg.norm(diff)) / scale

        iterations = k
        residuals.append(residual)
        objectives.append(objective)
        kappas.append(kappa)
        duals.append(kappa * math.sqrt(delta_sq) / scale)

        if divergence_ref is None:
            divergence_ref = max(residual, config.tol)
        if not math.isfinite(residual) or residual > DIVERGENCE_FACTOR * divergence_ref:
            raise DivergenceDetected(
                f"residual {residual:.3e} exceeds {DIVERGENCE_FACTOR:.0e} x initial at iteration {k}"
            )
        if residual <= config.tol:
            converged = True
            break

    final_kappa = _kappa_at(config, iterations + 1, kappa0)
    return SolverResult(
        components=comps,
        iterations=iterations,
        converged=converged,
        residual_history=residuals,
        final_kappa=final_kappa,
        objective_history=objectives,
        kappa_history=kappas,
        dual_history=duals,
    )


def primal_residual(problem, components):
    """||X - sum_i R_i(A_i)||_F / max(1, ||X||_F)."""
    X, ops = problem.X, problem.ops
    if len(components) != len(ops):
        raise ShapeMismatch(f"{len(components)} components for {len(ops)} operators")
    total = np.zeros(X.shape)
    for op, a in zip(ops, components):
        total += op.apply(a)
    return float(np.linalg.norm(X - total)) / max(1.0, float(np.linalg.norm(X)))


def objective(components):
    """Sum of nuclear norms of the components."""
    return float(sum(nuclear_norm(a) for a in components))


def history_csv(result):
    """Per-iteration log as CSV: iteration, residual, objective, kappa, dual."""
    lines = ["iteration,residual,objective,kappa,dual_residual"]
    for k in range(result.iterations):
        lines.append(
            f"{k + 1},{float(result.residual_history[k])!r},"
            f"{float(result.objective_history[k])!r},"
            f"{float(result.kappa_history[k])!r},{float(result.dual_history[k])!r}"
        )
    return "\n".join(lines) + "\n"
