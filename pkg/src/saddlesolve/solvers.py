"""Primal-dual solvers with predicted/corrected step sizes, plus baselines.

The main algorithm alternates a primal prox step with step size lambda_n, an
extrapolation z = x + delta*(x_new - x), and a dual prox step with step size
beta*lambda_{n+1}; the next step size is predicted from the local inverse
Lipschitz ratio alpha*||dy|| / (sqrt(beta)*||K* dy||) so the operator norm is
never needed. For delta < 1 a correction loop shrinks lambda_n until the
primal displacement satisfies ||x_{n+1} - x_n|| <= min(nu*zeta_0, mu*zeta_n),
a condition weak enough that it fires only a handful of times per run.
The accelerated variant grows beta geometrically using the strong-convexity
constant gamma of g.

Baselines: fixed-step PDA, the linesearch PDA, the proximal gradient method,
and FISTA with backtracking.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .problems import pd_gap_game
from .prox import QuadShift

__all__ = [
    "DELTA_LOWER",
    "SolverConfig",
    "BaselineConfig",
    "SolverState",
    "PdaState",
    "PdalState",
    "PgmState",
    "FistaState",
    "ConfigError",
    "LinesearchStallError",
    "DivergenceError",
    "IterationTrace",
    "TRACE_HEADER",
    "default_lambda0",
    "init_state",
    "phi_schedule",
    "predict_step",
    "correction_pass",
    "pdac_iterate",
    "apdac_iterate",
    "init_pda",
    "pda_iterate",
    "init_pdal",
    "pdal_iterate",
    "init_pgm",
    "pgm_iterate",
    "init_fista",
    "fista_iterate",
    "run",
]

DELTA_LOWER = (math.sqrt(5.0) - 1.0) / 2.0

_MAX_SHRINKS = 200


class ConfigError(ValueError):
    """A solver parameter violates its admissible range."""


class LinesearchStallError(RuntimeError):
    """A backtracking loop exceeded the shrink cap; signals a bug or a
    degenerate problem since the correction is guaranteed to terminate."""


class DivergenceError(RuntimeError):
    """Non-finite iterate detected. ``iteration`` records where; ``trace``
    may carry the partial run trace."""

    def __init__(self, message, iteration):
        super().__init__(message)
        self.iteration = iteration
        self.trace = None


@dataclass
class SolverConfig:
    """Parameters for the corrected primal-dual solver and its acceleration.

    Admissible ranges (checked by ``validate``): delta > (sqrt(5)-1)/2,
    0 < alpha < 1/sqrt(delta), 1 < nu_corr <= mu_corr, 0 < rho < 1. The
    accelerated variant additionally needs delta >= 1 and gamma >= 0.
    """

    delta: float = 0.62
    alpha: float = 1.27
    rho: float = 0.7
    mu_corr: float = 10.0
    nu_corr: float = 1.5
    beta0: float = 1.0
    gamma: float = 0.0
    lambda0: float = 1.0
    lambda_cap: float = 1e6
    n_hat: int = 5000
    n_zero: int = 10000
    max_iter: int = 1000
    nonmonotone: bool = False
    seed: int = 0
    # experimentation only: skip the delta < 1 correction loop; no
    # convergence guarantee holds with this set
    unsafe_no_correction: bool = False

    def validate(self, kind="pdac"):
        if not self.delta > DELTA_LOWER:
            raise ConfigError(
                f"delta must exceed (sqrt(5)-1)/2 = {DELTA_LOWER:.12f}; got {self.delta}"
            )
        if kind == "apdac" and not self.delta >= 1.0:
            raise ConfigError(f"accelerated solver needs delta >= 1; got {self.delta}")
        alpha_bound = 1.0 / math.sqrt(self.delta)
        if not 0.0 < self.alpha < alpha_bound:
            raise ConfigError(
                f"alpha must lie in ]0, 1/sqrt(delta)[ = ]0, {alpha_bound:.12f}[; got {self.alpha}"
            )
        if not 1.0 < self.nu_corr <= self.mu_corr:
            raise ConfigError(
                f"correction bounds need 1 < nu <= mu; got nu={self.nu_corr}, mu={self.mu_corr}"
            )
        if not 0.0 < self.rho < 1.0:
            raise ConfigError(f"backtrack factor rho must lie in ]0, 1[; got {self.rho}")
        if not self.lambda0 > 0:
            raise ConfigError(f"lambda0 must be positive; got {self.lambda0}")
        if not self.lambda_cap > 0:
            raise ConfigError(f"lambda_cap must be positive; got {self.lambda_cap}")
        if not self.beta0 > 0:
            raise ConfigError(f"beta must be positive; got {self.beta0}")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be nonnegative; got {self.gamma}")
        if self.n_hat > self.n_zero:
            raise ConfigError(
                f"schedule needs n_hat <= n_zero; got n_hat={self.n_hat}, n_zero={self.n_zero}"
            )
        return self


@dataclass
class BaselineConfig:
    """Parameters for the baseline solvers. ``beta`` is the primal-dual step
    ratio used by the linesearch PDA; ``step`` the fixed gradient step."""

    tau: float = 1.0
    sigma: float = 1.0
    theta: float = 1.0
    alpha_ls: float = 0.99
    mu_ls: float = 0.7
    fista_beta: float = 0.7
    step: float = 1.0
    beta: float = 1.0

    def validate(self):
        for name in ("tau", "sigma", "mu_ls", "fista_beta", "step", "beta"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive; got {getattr(self, name)}")
        if not 0.0 < self.alpha_ls < 1.0:
            raise ConfigError(f"alpha_ls must lie in ]0, 1[; got {self.alpha_ls}")
        if not self.mu_ls < 1.0:
            raise ConfigError(f"mu_ls must lie in ]0, 1[; got {self.mu_ls}")
        if not self.fista_beta < 1.0:
            raise ConfigError(f"fista_beta must lie in ]0, 1[; got {self.fista_beta}")
        return self


@dataclass
class SolverState:
    """Evolving iterates of the corrected solver.

    ``lam_cur``/``lam_next`` hold lambda_n and lambda_{n+1}; ``Ky_cur`` and
    ``Ky_prev`` cache the adjoint images K*y_n and K*y_{n-1} so each outer
    iteration spends exactly one forward and one adjoint application.
    """

    x_prev: np.ndarray
    x_cur: np.ndarray
    y_prev: np.ndarray
    y_cur: np.ndarray
    lam_cur: float
    lam_next: float
    beta_cur: float
    zeta0: float
    zeta_cur: float
    iter: int
    correction_backtracks: int
    Ky_cur: np.ndarray
    Ky_prev: np.ndarray


@dataclass
class PdaState:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


@dataclass
class PdalState:
    x: np.ndarray
    y: np.ndarray
    tau: float
    theta: float
    Kx: np.ndarray
    Ky: np.ndarray
    shrinks: int = 0


@dataclass
class PgmState:
    x: np.ndarray


@dataclass
class FistaState:
    x: np.ndarray
    v: np.ndarray
    t: float
    lam: float
    shrinks: int = 0


def default_lambda0(problem, beta):
    """Norm-free-ish default start step: 1 / (sqrt(beta) * ||K||_F).

    The Frobenius norm upper-bounds the operator norm, so the implied first
    step stays on the safe side without a spectral estimate.
    """
    fro = problem.K.frobenius_norm()
    if fro == 0.0:
        return 1.0
    return 1.0 / (math.sqrt(beta) * fro)


def init_state(problem, x0, y0, cfg, kind="pdac"):
    """Validate the configuration and build the initial solver state.

    zeta_0 is the larger of the two prox fixed-point residuals at (x0, y0);
    it vanishes exactly at saddle points.
    """
    cfg.validate(kind)
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if x0.shape != (problem.K.cols,):
        raise ValueError(f"x0 must have length {problem.K.cols}, got shape {x0.shape}")
    if y0.shape != (problem.K.rows,):
        raise ValueError(f"y0 must have length {problem.K.rows}, got shape {y0.shape}")
    lam = cfg.lambda0
    beta = cfg.beta0
    Ky0 = problem.K.adjoint_apply(y0)
    px = problem.g.prox(x0 - lam * Ky0, lam)
    s = beta * lam
    py = problem.fstar.prox(y0 + s * problem.K.apply(x0), s)
    zeta0 = max(float(np.linalg.norm(x0 - px)), float(np.linalg.norm(y0 - py)))
    return SolverState(
        x_prev=x0.copy(),
        x_cur=x0.copy(),
        y_prev=y0.copy(),
        y_cur=y0.copy(),
        lam_cur=lam,
        lam_next=lam,
        beta_cur=beta,
        zeta0=zeta0,
        zeta_cur=zeta0,
        iter=0,
        correction_backtracks=0,
        Ky_cur=Ky0,
        Ky_prev=Ky0.copy(),
    )


def phi_schedule(n, cfg):
    """Step-growth multiplier phi_n in [1, (1+delta)/delta].

    Flat at the ceiling through n_hat, then decays as
    (1 + delta + n - n_hat) / (delta + n - n_hat) until n_zero, then 1.
    Monotone mode pins phi_n = 1.
    """
    if not cfg.nonmonotone:
        return 1.0
    d = cfg.delta
    if n <= cfg.n_hat:
        return (1.0 + d) / d
    if n <= cfg.n_zero:
        k = n - cfg.n_hat
        return (1.0 + d + k) / (d + k)
    return 1.0


def predict_step(dy_norm, kdy_norm, lam_next, phi, cfg):
    """Next step size from the local inverse Lipschitz ratio.

    Monotone mode: min(alpha*||dy|| / (sqrt(beta)*||K* dy||), lam_next).
    Nonmonotone mode allows growth up to phi*lam_next, capped at lambda_cap.
    A zero adjoint difference carries lam_next forward (times phi when
    growth is allowed).
    """
    if kdy_norm == 0.0:
        if cfg.nonmonotone:
            return min(lam_next * phi, cfg.lambda_cap)
        return lam_next
    ratio = cfg.alpha * dy_norm / (math.sqrt(cfg.beta0) * kdy_norm)
    if cfg.nonmonotone:
        return min(ratio, phi * lam_next, cfg.lambda_cap)
    return min(ratio, lam_next)


def correction_pass(state, problem, cfg, x_candidate, zeta_candidate, phi_n):
    """Shrink lambda_n until ||x_{n+1} - x_n|| <= min(nu*zeta_0, mu*zeta_n).

    nu caps the displacement against its starting value (zeta_n <= nu*zeta_0
    for all n) while mu >= nu allows generous growth relative to the previous
    displacement, so the loop fires rarely. Each shrink multiplies lambda_n
    by rho, caps lambda_{n+1} at min(phi_n*lambda_n, lambda_{n+1}) (phi_n = 1
    in monotone mode), and recomputes the primal candidate from the cached
    adjoint image - no new matrix applications. Returns the accepted
    candidate and its displacement; mutates the step sizes and the backtrack
    counter in place.
    """
    bound = min(cfg.nu_corr * state.zeta0, cfg.mu_corr * state.zeta_cur)
    shrinks = 0
    while zeta_candidate > bound:
        if shrinks >= _MAX_SHRINKS:
            raise LinesearchStallError(
                f"correction exceeded {_MAX_SHRINKS} shrinks at iteration {state.iter}; "
                f"displacement {zeta_candidate:.3e} vs bound {bound:.3e}"
            )
        state.lam_cur *= cfg.rho
        cap = phi_n * state.lam_cur if cfg.nonmonotone else state.lam_cur
        state.lam_next = min(cap, state.lam_next)
        x_candidate = problem.g.prox(state.x_cur - state.lam_cur * state.Ky_cur, state.lam_cur)
        zeta_candidate = float(np.linalg.norm(x_candidate - state.x_cur))
        shrinks += 1
    state.correction_backtracks += shrinks
    return x_candidate, zeta_candidate


def _check_finite(state, n):
    if not (np.all(np.isfinite(state.x_cur)) and np.all(np.isfinite(state.y_cur))):
        raise DivergenceError(f"non-finite iterate at iteration {n}", n)


def pdac_iterate(state, problem, cfg):
    """One outer iteration of the corrected primal-dual solver.

    Primal prox with lambda_n, correction when delta < 1, extrapolation,
    dual prox with beta*lambda_{n+1}, then step prediction for lambda_{n+2}.
    """
    n = state.iter
    K = problem.K
    phi_n = phi_schedule(n, cfg)
    x_next = problem.g.prox(state.x_cur - state.lam_cur * state.Ky_cur, state.lam_cur)
    zeta_next = float(np.linalg.norm(x_next - state.x_cur))
    if cfg.delta < 1.0 and not cfg.unsafe_no_correction:
        x_next, zeta_next = correction_pass(state, problem, cfg, x_next, zeta_next, phi_n)
    z_next = x_next + cfg.delta * (x_next - state.x_cur)
    s = cfg.beta0 * state.lam_next
    y_next = problem.fstar.prox(state.y_cur + s * K.apply(z_next), s)
    Ky_next = K.adjoint_apply(y_next)
    dy = float(np.linalg.norm(y_next - state.y_cur))
    kdy = float(np.linalg.norm(Ky_next - state.Ky_cur))
    lam_after = predict_step(dy, kdy, state.lam_next, phi_n, cfg)

    state.x_prev = state.x_cur
    state.x_cur = x_next
    state.y_prev = state.y_cur
    state.y_cur = y_next
    state.Ky_prev = state.Ky_cur
    state.Ky_cur = Ky_next
    state.lam_cur = state.lam_next
    state.lam_next = lam_after
    state.zeta_cur = zeta_next
    state.iter = n + 1
    _check_finite(state, n + 1)
    return state


def apdac_iterate(state, problem, cfg):
    """One iteration of the accelerated variant (delta >= 1, g strongly convex).

    beta grows as beta_{n+1} = beta_n * (1 + gamma*lambda_{n+1}); the dual
    prox uses beta_{n+1}*lambda_{n+1} and the step prediction caps at
    sqrt(beta_n / beta_{n+1}) * lambda_{n+1}. With gamma = 0 the iterates
    coincide bitwise with the monotone base solver.
    """
    n = state.iter
    K = problem.K
    x_next = problem.g.prox(state.x_cur - state.lam_cur * state.Ky_cur, state.lam_cur)
    zeta_next = float(np.linalg.norm(x_next - state.x_cur))
    z_next = x_next + cfg.delta * (x_next - state.x_cur)
    beta_next = state.beta_cur * (1.0 + cfg.gamma * state.lam_next)
    s = beta_next * state.lam_next
    y_next = problem.fstar.prox(state.y_cur + s * K.apply(z_next), s)
    Ky_next = K.adjoint_apply(y_next)
    dy = float(np.linalg.norm(y_next - state.y_cur))
    kdy = float(np.linalg.norm(Ky_next - state.Ky_cur))
    cap = math.sqrt(state.beta_cur / beta_next) * state.lam_next
    if kdy == 0.0:
        lam_after = cap
    else:
        lam_after = min(cfg.alpha * dy / (math.sqrt(beta_next) * kdy), cap)

    state.x_prev = state.x_cur
    state.x_cur = x_next
    state.y_prev = state.y_cur
    state.y_cur = y_next
    state.Ky_prev = state.Ky_cur
    state.Ky_cur = Ky_next
    state.lam_cur = state.lam_next
    state.lam_next = lam_after
    state.beta_cur = beta_next
    state.zeta_cur = zeta_next
    state.iter = n + 1
    _check_finite(state, n + 1)
    return state


def init_pda(problem, x0, y0, bcfg, norm_estimate=None):
    """Check the step product tau*sigma*L^2 (power-iteration L) and build state."""
    bcfg.validate()
    L = norm_estimate if norm_estimate is not None else problem.K.operator_norm()
    if bcfg.tau * bcfg.sigma * L * L > 1.0 + 1e-12:
        raise ConfigError(
            f"fixed-step PDA needs tau*sigma*L^2 <= 1; got {bcfg.tau * bcfg.sigma * L * L:.6f}"
        )
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    return PdaState(x=x0.copy(), y=y0.copy(), z=x0.copy())


def pda_iterate(state, problem, bcfg):
    """Fixed-step primal-dual iteration (dual ascent first, extrapolation 2x - x)."""
    K = problem.K
    y_next = problem.fstar.prox(state.y + bcfg.sigma * K.apply(state.z), bcfg.sigma)
    x_next = problem.g.prox(state.x - bcfg.tau * K.adjoint_apply(y_next), bcfg.tau)
    state.z = 2.0 * x_next - state.x
    state.x = x_next
    state.y = y_next
    return state


def init_pdal(problem, x0, y0, bcfg):
    bcfg.validate()
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    return PdalState(
        x=x0.copy(),
        y=y0.copy(),
        tau=bcfg.tau,
        theta=bcfg.theta,
        Kx=problem.K.apply(x0),
        Ky=problem.K.adjoint_apply(y0),
    )


def pdal_iterate(state, problem, bcfg):
    """One iteration of the linesearch primal-dual baseline.

    The trial step grows by sqrt(1 + theta) and shrinks by mu_ls until
    sqrt(beta)*tau*||K*(y+ - y)|| <= alpha_ls*||y+ - y||. The extrapolated
    image K z is recombined from cached K x values, so each inner trial costs
    one adjoint application only.
    """
    K = problem.K
    x_next = problem.g.prox(state.x - state.tau * state.Ky, state.tau)
    Kx_next = K.apply(x_next)
    trial = state.tau * math.sqrt(1.0 + state.theta)
    sqrt_beta = math.sqrt(bcfg.beta)
    shrinks = 0
    while True:
        theta = trial / state.tau
        Kz = (1.0 + theta) * Kx_next - theta * state.Kx
        s = bcfg.beta * trial
        y_next = problem.fstar.prox(state.y + s * Kz, s)
        Ky_next = K.adjoint_apply(y_next)
        lhs = sqrt_beta * trial * float(np.linalg.norm(Ky_next - state.Ky))
        rhs = bcfg.alpha_ls * float(np.linalg.norm(y_next - state.y))
        if lhs <= rhs:
            break
        if shrinks >= _MAX_SHRINKS:
            raise LinesearchStallError(
                f"linesearch exceeded {_MAX_SHRINKS} shrinks (tau trial {trial:.3e})"
            )
        trial *= bcfg.mu_ls
        shrinks += 1
    state.shrinks += shrinks
    state.x = x_next
    state.Kx = Kx_next
    state.y = y_next
    state.Ky = Ky_next
    state.theta = theta
    state.tau = trial
    return state


def _smooth_shift(problem):
    fstar = problem.fstar
    if not isinstance(fstar, QuadShift) or problem.objective_var != "x":
        raise ConfigError(
            "gradient baselines need a least-squares objective 0.5||Kx - b||^2"
        )
    return fstar.shift


def init_pgm(problem, x0, bcfg):
    bcfg.validate()
    _smooth_shift(problem)
    return PgmState(x=np.asarray(x0, dtype=float).copy())


def pgm_iterate(state, problem, bcfg):
    """Proximal gradient step with the fixed step size ``bcfg.step``."""
    b = _smooth_shift(problem)
    grad = problem.K.adjoint_apply(problem.K.apply(state.x) - b)
    state.x = problem.g.prox(state.x - bcfg.step * grad, bcfg.step)
    return state


def init_fista(problem, x0, bcfg, lam0=1.0):
    bcfg.validate()
    _smooth_shift(problem)
    x0 = np.asarray(x0, dtype=float)
    return FistaState(x=x0.copy(), v=x0.copy(), t=1.0, lam=lam0)


def fista_iterate(state, problem, bcfg):
    """Accelerated proximal gradient step with backtracking.

    Backtracks on the quadratic upper bound
    h(x+) <= h(v) + <grad h(v), x+ - v> + ||x+ - v||^2 / (2 lam),
    shrinking lam by fista_beta. A small relative slack keeps long
    high-accuracy runs stable against roundoff in the comparison.
    """
    K = problem.K
    b = _smooth_shift(problem)
    rv = K.apply(state.v) - b
    hv = 0.5 * float(rv @ rv)
    grad = K.adjoint_apply(rv)
    slack = 1e-12 * (1.0 + abs(hv))
    shrinks = 0
    while True:
        x_next = problem.g.prox(state.v - state.lam * grad, state.lam)
        d = x_next - state.v
        rx = K.apply(x_next) - b
        hx = 0.5 * float(rx @ rx)
        if hx <= hv + float(grad @ d) + float(d @ d) / (2.0 * state.lam) + slack:
            break
        if shrinks >= _MAX_SHRINKS:
            raise LinesearchStallError(
                f"FISTA backtracking exceeded {_MAX_SHRINKS} shrinks (lam {state.lam:.3e})"
            )
        state.lam *= bcfg.fista_beta
        shrinks += 1
    state.shrinks += shrinks
    t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * state.t * state.t))
    state.v = x_next + ((state.t - 1.0) / t_next) * (x_next - state.x)
    state.x = x_next
    state.t = t_next
    return state


TRACE_HEADER = "iter,seconds,metric,lambda,beta,corrections"


@dataclass
class IterationTrace:
    """Per-iteration records of one run plus summary accessors."""

    rows: list = field(default_factory=list)  # (iter, seconds, metric, lam, beta, corr)
    solver: str = ""
    problem: str = ""

    def append(self, it, seconds, metric, lam, beta, corrections):
        self.rows.append((int(it), float(seconds), float(metric), float(lam), float(beta), int(corrections)))

    @property
    def final_metric(self):
        return self.rows[-1][2] if self.rows else float("nan")

    @property
    def total_corrections(self):
        return self.rows[-1][5] if self.rows else 0

    @property
    def wall_time(self):
        return self.rows[-1][1] if self.rows else 0.0

    def column(self, name):
        idx = TRACE_HEADER.split(",").index(name)
        return [row[idx] for row in self.rows]

    def to_csv(self, path):
        with open(path, "w", encoding="ascii") as fh:
            fh.write(TRACE_HEADER + "\n")
            for it, sec, met, lam, beta, corr in self.rows:
                fh.write(f"{it},{sec!r},{met!r},{lam!r},{beta!r},{corr}\n")

    @classmethod
    def from_csv(cls, path):
        trace = cls()
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().strip()
            if header != TRACE_HEADER:
                raise ValueError(f"unexpected trace header {header!r}")
            for line in fh:
                it, sec, met, lam, beta, corr = line.strip().split(",")
                trace.rows.append(
                    (int(it), float(sec), float(met), float(lam), float(beta), int(corr))
                )
        return trace


class _ErgodicAccumulator:
    """Weighted running average of (z_l, y_l) with the head term delta*w1*x0."""

    def __init__(self, head_point, delta):
        self.head_point = np.asarray(head_point, dtype=float).copy()
        self.delta = delta
        self.head_weight = 0.0
        self.s = 0.0
        self.x_num = np.zeros_like(self.head_point)
        self.y_num = None

    def update(self, weight, z, y):
        if self.s == 0.0:
            self.head_weight = self.delta * weight
            self.y_num = np.zeros_like(np.asarray(y, dtype=float))
        self.s += weight
        self.x_num += weight * z
        self.y_num += weight * y

    @property
    def X(self):
        return (self.head_weight * self.head_point + self.x_num) / (self.head_weight + self.s)

    @property
    def Y(self):
        return self.y_num / self.s


def run(
    solver_kind,
    problem,
    cfg,
    x0,
    y0,
    *,
    max_iter=None,
    max_seconds=None,
    trace_every=1,
    reference_value=None,
):
    """Drive one solver for a budget and collect an IterationTrace.

    ``solver_kind`` is one of pdac, apdac, pda, pdal, pgm, fista. ``cfg`` is a
    SolverConfig for the first two and a BaselineConfig otherwise. The metric
    column holds the problem objective (minus ``reference_value`` when given)
    for least-squares families, and the primal-dual gap of the running ergodic
    average for matrix games. Runs are deterministic for a fixed iteration
    budget.
    """
    if max_iter is None:
        max_iter = cfg.max_iter if isinstance(cfg, SolverConfig) else 0
    if max_iter < 0:
        raise ValueError("max_iter must be nonnegative")
    if trace_every < 1:
        raise ValueError("trace_every must be at least 1")
    is_game = problem.metric_kind == "pd_gap"
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)

    ergodic = None
    if solver_kind in ("pdac", "apdac"):
        state = init_state(problem, x0, y0, cfg, kind=solver_kind)
        if is_game:
            ergodic = _ErgodicAccumulator(x0, cfg.delta)
    elif solver_kind == "pda":
        state = init_pda(problem, x0, y0, cfg)
        if is_game:
            ergodic = _ErgodicAccumulator(x0, 1.0)
    elif solver_kind == "pdal":
        state = init_pdal(problem, x0, y0, cfg)
        if is_game:
            ergodic = _ErgodicAccumulator(x0, 1.0)
    elif solver_kind == "pgm":
        if is_game:
            raise ConfigError("pgm does not support matrix games")
        state = init_pgm(problem, x0, cfg)
    elif solver_kind == "fista":
        if is_game:
            raise ConfigError("fista does not support matrix games")
        state = init_fista(problem, x0, cfg)
    else:
        raise ConfigError(f"unknown solver kind {solver_kind!r}")

    def metric_now():
        if is_game:
            if ergodic is not None and ergodic.s > 0.0:
                return pd_gap_game(problem.K, ergodic.X, ergodic.Y)
            return pd_gap_game(problem.K, x0, y0)
        if problem.objective is None:
            return float("nan")
        if solver_kind in ("pdac", "apdac"):
            point = state.y_cur if problem.objective_var == "y" else state.x_cur
        elif solver_kind in ("pda", "pdal"):
            point = state.y if problem.objective_var == "y" else state.x
        else:
            point = state.x
        value = problem.objective(point)
        if reference_value is not None:
            value -= reference_value
        return value

    def lam_beta_corr():
        if solver_kind in ("pdac", "apdac"):
            return state.lam_cur, state.beta_cur, state.correction_backtracks
        if solver_kind == "pda":
            return cfg.tau, cfg.sigma / cfg.tau, 0
        if solver_kind == "pdal":
            return state.tau, cfg.beta, state.shrinks
        if solver_kind == "pgm":
            return cfg.step, 0.0, 0
        return state.lam, 0.0, state.shrinks

    trace = IterationTrace(solver=solver_kind, problem=problem.label)
    t0 = time.perf_counter()
    lam, beta, corr = lam_beta_corr()
    trace.append(0, 0.0, metric_now(), lam, beta, corr)

    step_fns = {
        "pdac": pdac_iterate,
        "apdac": apdac_iterate,
        "pda": pda_iterate,
        "pdal": pdal_iterate,
        "pgm": pgm_iterate,
        "fista": fista_iterate,
    }
    step = step_fns[solver_kind]

    for n in range(max_iter):
        try:
            step(state, problem, cfg)
        except DivergenceError as err:
            err.trace = trace
            raise
        if ergodic is not None:
            if solver_kind == "pdac":
                z = state.x_cur + cfg.delta * (state.x_cur - state.x_prev)
                ergodic.update(state.lam_cur, z, state.y_cur)
            elif solver_kind == "apdac":
                z = state.x_cur + cfg.delta * (state.x_cur - state.x_prev)
                ergodic.update(state.beta_cur * state.lam_cur, z, state.y_cur)
            elif solver_kind == "pda":
                ergodic.update(1.0, state.x, state.y)
            else:  # pdal
                ergodic.update(state.tau, state.x, state.y)
        done = n + 1 == max_iter
        if (n + 1) % trace_every == 0 or done:
            lam, beta, corr = lam_beta_corr()
            trace.append(n + 1, time.perf_counter() - t0, metric_now(), lam, beta, corr)
        if max_seconds is not None and time.perf_counter() - t0 > max_seconds:
            break
    return trace
