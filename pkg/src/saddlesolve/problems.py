"""Builders for the benchmark problem families.

Three families: sparse-recovery LASSO instances with Gaussian data, min-max
matrix games over simplices, and nonnegative least squares on Matrix Market
data. Every generator is a pure function of its ProblemSpec: same spec, same
bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .linop import DenseMatrix, LinearOperator, SparseMatrix, read_matrix_market
from .prox import IndNonneg, IndSimplex, QuadShift, ScaledL1

__all__ = [
    "ProblemSpec",
    "GroundTruth",
    "SaddleProblem",
    "FeasibilityError",
    "UnsupportedMetricError",
    "gen_lasso",
    "gen_matrix_game",
    "build_nnls",
    "load_nnls",
    "primal_objective",
    "pd_gap_game",
    "LASSO_FAMILIES",
    "GAME_FAMILIES",
    "NNLS_FAMILIES",
]

LASSO_FAMILIES = {
    "lasso1": dict(m=200, n=1000, s=10, mu=0.1, signal="uniform"),
    "lasso2": dict(m=1000, n=2000, s=100, mu=0.1, signal="normal"),
}

GAME_FAMILIES = {
    "game1": dict(m=100, n=100, dist="uniform", a=-1.0, b=1.0),
    "game2": dict(m=100, n=100, dist="normal", mean=0.0, sd=1.0),
    "game3": dict(m=500, n=100, dist="normal", mean=0.0, sd=10.0),
    "game4": dict(m=100, n=200, dist="uniform", a=0.0, b=1.0),
}

NNLS_FAMILIES = {
    "nnls-well": "well1033.mtx",
    "nnls-illc": "illc1033.mtx",
}


class FeasibilityError(ValueError):
    """An input violates a feasibility requirement (named in the message)."""


class UnsupportedMetricError(ValueError):
    """The requested metric is undefined for this problem family."""


@dataclass(frozen=True)
class ProblemSpec:
    """Recipe for one problem instance. ``m``/``n``/``s``/``mu`` override the
    family defaults (used for desk-scale reruns)."""

    family: str
    seed: int = 1
    m: Optional[int] = None
    n: Optional[int] = None
    s: Optional[int] = None
    mu: Optional[float] = None
    data_path: Optional[str] = None


@dataclass
class GroundTruth:
    """Planted signal and the observation built from it."""

    w: np.ndarray
    b: np.ndarray


@dataclass
class SaddleProblem:
    """One saddle-point instance: min_x max_y g(x) + <Kx, y> - fstar(y).

    ``gamma`` is the known strong-convexity constant of g (0 if none).
    ``objective`` evaluates the underlying minimization objective;
    ``objective_var`` names which iterate ("x" or "y") it consumes, which
    matters for swapped formulations. ``start`` is the conventional initial
    point pair for the family.
    """

    g: object
    fstar: object
    K: LinearOperator
    gamma: float = 0.0
    label: str = ""
    objective: Optional[Callable[[np.ndarray], float]] = None
    objective_var: str = "x"
    metric_kind: Optional[str] = None  # "objective" | "pd_gap"
    start: Optional[tuple] = field(default=None, repr=False)


def gen_lasso(spec):
    """Generate a LASSO instance: K Gaussian, sparse planted w, b = Kw + noise.

    Returns (SaddleProblem, GroundTruth). Way 1 draws the s signal entries
    uniformly from [-10, 10]; way 2 draws them standard normal. Noise entries
    are N(0, 0.1) with 0.1 the standard deviation.
    """
    if spec.family not in LASSO_FAMILIES:
        raise ValueError(f"not a LASSO family: {spec.family!r}")
    fam = LASSO_FAMILIES[spec.family]
    m = spec.m if spec.m is not None else fam["m"]
    n = spec.n if spec.n is not None else fam["n"]
    s = spec.s if spec.s is not None else fam["s"]
    mu = spec.mu if spec.mu is not None else fam["mu"]
    if m <= 0 or n <= 0:
        raise ValueError("dimensions must be positive")
    if not 0 <= s <= n:
        raise ValueError("sparsity s must satisfy 0 <= s <= n")
    rng = np.random.default_rng(spec.seed)
    K = rng.standard_normal((m, n))
    support = np.sort(rng.choice(n, size=s, replace=False))
    if fam["signal"] == "uniform":
        vals = rng.uniform(-10.0, 10.0, size=s)
    else:
        vals = rng.standard_normal(s)
    noise = rng.normal(0.0, 0.1, size=m)
    w = np.zeros(n)
    w[support] = vals
    b = K @ w + noise
    op = LinearOperator(DenseMatrix(K))
    prob = SaddleProblem(
        g=ScaledL1(mu),
        fstar=QuadShift(b),
        K=op,
        gamma=0.0,
        label=spec.family,
        metric_kind="objective",
        start=(np.zeros(n), -b.copy()),
    )
    prob.objective = lambda x: primal_objective(prob, x)
    return prob, GroundTruth(w=w, b=b)


def gen_matrix_game(spec):
    """Generate a min-max matrix game over unit simplices."""
    if spec.family not in GAME_FAMILIES:
        raise ValueError(f"not a matrix-game family: {spec.family!r}")
    fam = GAME_FAMILIES[spec.family]
    m = spec.m if spec.m is not None else fam["m"]
    n = spec.n if spec.n is not None else fam["n"]
    if m <= 0 or n <= 0:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(spec.seed)
    if fam["dist"] == "uniform":
        K = rng.uniform(fam["a"], fam["b"], size=(m, n))
    else:
        K = rng.normal(fam["mean"], fam["sd"], size=(m, n))
    op = LinearOperator(DenseMatrix(K))
    return SaddleProblem(
        g=IndSimplex(),
        fstar=IndSimplex(),
        K=op,
        gamma=0.0,
        label=spec.family,
        metric_kind="pd_gap",
        start=(np.full(n, 1.0 / n), np.full(m, 1.0 / m)),
    )


def build_nnls(sparse, b, swapped=False, label="nnls"):
    """Assemble a nonnegative-least-squares saddle problem from CSR data.

    Unswapped: min over x >= 0 of 0.5||Kx - b||^2 with g the nonnegativity
    indicator and fstar the shifted quadratic. Swapped (for the accelerated
    solver, exploiting primal/dual symmetry): the roles trade places, the
    coupling operator becomes the negated adjoint, and g picks up strong
    convexity gamma = 1/2. The swapped problem's dual iterate is the original
    primal variable, so the objective evaluator consumes "y".
    """
    if not isinstance(sparse, SparseMatrix):
        sparse = SparseMatrix.from_dense(np.asarray(sparse, dtype=float))
    m, n = sparse.rows, sparse.cols
    b = np.asarray(b, dtype=float)
    if b.shape != (m,):
        raise ValueError(f"observation must have length {m}, got {b.shape}")
    orig_op = LinearOperator(sparse)

    def original_objective(v):
        v = np.asarray(v, dtype=float)
        if v.size and v.min() < -1e-12:
            return float("inf")
        r = orig_op.apply(v) - b
        return 0.5 * float(r @ r)

    if not swapped:
        prob = SaddleProblem(
            g=IndNonneg(),
            fstar=QuadShift(b),
            K=orig_op,
            gamma=0.0,
            label=label,
            metric_kind="objective",
            start=(np.zeros(n), -b.copy()),
        )
        prob.objective = lambda x: primal_objective(prob, x)
        return prob

    swapped_op = LinearOperator(sparse.transposed(negate=True))
    prob = SaddleProblem(
        g=QuadShift(b),
        fstar=IndNonneg(),
        K=swapped_op,
        gamma=0.5,
        label=f"{label}-swapped",
        metric_kind="objective",
        objective_var="y",
        start=(np.zeros(m), np.zeros(n)),
    )
    prob.objective = original_objective
    return prob


def load_nnls(spec, swapped=False):
    """Load an NNLS instance from a Matrix Market file named by the spec."""
    if spec.family not in NNLS_FAMILIES:
        raise ValueError(f"not an NNLS family: {spec.family!r}")
    if spec.data_path is None:
        raise ValueError("NNLS problems need a data_path to the Matrix Market file")
    sparse = read_matrix_market(spec.data_path)
    rng = np.random.default_rng(spec.seed)
    b = rng.standard_normal(sparse.rows)
    return build_nnls(sparse, b, swapped=swapped, label=spec.family)


def primal_objective(problem, x):
    """Objective of the underlying minimization at a primal point.

    LASSO: 0.5||Kx - b||^2 + mu ||x||_1. NNLS: 0.5||Kx - b||^2 for x within
    -1e-12 of the orthant, +inf otherwise. Matrix games have no primal
    objective here.
    """
    g, fstar = problem.g, problem.fstar
    if isinstance(fstar, QuadShift) and isinstance(g, (ScaledL1, IndNonneg)):
        x = np.asarray(x, dtype=float)
        r = problem.K.apply(x) - fstar.shift
        quad = 0.5 * float(r @ r)
        if isinstance(g, ScaledL1):
            return quad + g.mu * float(np.sum(np.abs(x)))
        if x.size and x.min() < -1e-12:
            return float("inf")
        return quad
    raise UnsupportedMetricError(
        f"problem {problem.label!r} has no primal objective in this form"
    )


def pd_gap_game(K, x, y):
    """Primal-dual gap of a feasible matrix-game pair:
    max_i (Kx)_i - min_j (K*y)_j."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (K.cols,):
        raise ValueError(f"x must have length {K.cols}, got shape {x.shape}")
    if y.shape != (K.rows,):
        raise ValueError(f"y must have length {K.rows}, got shape {y.shape}")
    if x.min() < -1e-10:
        raise FeasibilityError(
            f"x infeasible: component {int(np.argmin(x))} is {x.min():.3e} < -1e-10"
        )
    if y.min() < -1e-10:
        raise FeasibilityError(
            f"y infeasible: component {int(np.argmin(y))} is {y.min():.3e} < -1e-10"
        )
    if abs(x.sum() - 1.0) > 1e-8:
        raise FeasibilityError(f"x infeasible: sum is {x.sum():.12f}, not 1 within 1e-8")
    if abs(y.sum() - 1.0) > 1e-8:
        raise FeasibilityError(f"y infeasible: sum is {y.sum():.12f}, not 1 within 1e-8")
    return float(K.apply(x).max() - K.adjoint_apply(y).min())
