import numpy as np
import pytest

from saddlesolve.linop import LinearOperator, SparseMatrix
from saddlesolve.problems import (
    FeasibilityError,
    ProblemSpec,
    UnsupportedMetricError,
    build_nnls,
    gen_lasso,
    gen_matrix_game,
    load_nnls,
    pd_gap_game,
    primal_objective,
)
from saddlesolve.prox import IndNonneg, QuadShift, ScaledL1
from saddlesolve.oracle import solve_reference


def test_lasso_way1_shapes():
    prob, gt = gen_lasso(ProblemSpec("lasso1", seed=1))
    assert prob.K.shape == (200, 1000)
    assert np.count_nonzero(gt.w) == 10
    assert prob.g.mu == 0.1
    assert prob.gamma == 0.0
    x0, y0 = prob.start
    assert np.all(x0 == 0.0) and np.allclose(y0, -gt.b)


def test_lasso_way2_shapes():
    prob, gt = gen_lasso(ProblemSpec("lasso2", seed=1))
    assert prob.K.shape == (1000, 2000)
    assert np.count_nonzero(gt.w) == 100
    assert prob.g.mu == 0.1


def test_lasso_deterministic():
    a1, g1 = gen_lasso(ProblemSpec("lasso1", seed=4, m=20, n=30, s=3))
    a2, g2 = gen_lasso(ProblemSpec("lasso1", seed=4, m=20, n=30, s=3))
    assert np.array_equal(a1.K.backing.entries, a2.K.backing.entries)
    assert np.array_equal(g1.w, g2.w)
    assert np.array_equal(g1.b, g2.b)
    b1, _ = gen_lasso(ProblemSpec("lasso1", seed=5, m=20, n=30, s=3))
    assert not np.array_equal(a1.K.backing.entries, b1.K.backing.entries)


def test_lasso_invalid_family():
    with pytest.raises(ValueError, match="not a LASSO family"):
        gen_lasso(ProblemSpec("game1"))
    with pytest.raises(ValueError, match="sparsity"):
        gen_lasso(ProblemSpec("lasso1", m=5, n=5, s=9))


def test_game_instances():
    g3 = gen_matrix_game(ProblemSpec("game3", seed=100))
    assert g3.K.shape == (500, 100)
    g1 = gen_matrix_game(ProblemSpec("game1", seed=100))
    entries = g1.K.backing.entries
    assert entries.min() >= -1.0 and entries.max() <= 1.0
    again = gen_matrix_game(ProblemSpec("game1", seed=100))
    assert np.array_equal(entries, again.K.backing.entries)
    g4 = gen_matrix_game(ProblemSpec("game4", seed=100))
    assert g4.K.shape == (100, 200)
    assert g4.K.backing.entries.min() >= 0.0
    x0, y0 = g1.start
    assert np.allclose(x0.sum(), 1.0) and np.allclose(y0.sum(), 1.0)


def _toy_sparse(m=6, n=4, seed=2):
    rng = np.random.default_rng(seed)
    K = rng.standard_normal((m, n))
    K[np.abs(K) < 0.4] = 0.0
    return SparseMatrix.from_dense(K), rng.standard_normal(m)


def test_nnls_unswapped_structure():
    sp, b = _toy_sparse()
    prob = build_nnls(sp, b)
    assert isinstance(prob.g, IndNonneg) and isinstance(prob.fstar, QuadShift)
    assert prob.gamma == 0.0
    assert prob.K.shape == (6, 4)
    x0, y0 = prob.start
    assert np.allclose(y0, -b)


def test_nnls_swapped_structure():
    sp, b = _toy_sparse()
    prob = build_nnls(sp, b, swapped=True)
    assert isinstance(prob.g, QuadShift) and isinstance(prob.fstar, IndNonneg)
    assert prob.gamma == 0.5
    # coupling operator is the negated adjoint of the original
    assert prob.K.shape == (4, 6)
    assert np.array_equal(prob.K.backing.to_dense(), -sp.to_dense().T)
    assert prob.objective_var == "y"


def test_nnls_swapped_objective_evaluates_original():
    sp, b = _toy_sparse()
    swapped = build_nnls(sp, b, swapped=True)
    unswapped = build_nnls(sp, b)
    v = np.array([0.5, 0.0, 1.2, 0.3])
    assert swapped.objective(v) == pytest.approx(primal_objective(unswapped, v))
    assert swapped.objective(np.array([-1.0, 0, 0, 0])) == np.inf


def test_load_nnls_file(tmp_path):
    text = "%%MatrixMarket matrix coordinate real general\n3 2 3\n1 1 1.0\n2 2 2.0\n3 1 -1.5\n"
    path = tmp_path / "toy.mtx"
    path.write_text(text)
    spec = ProblemSpec("nnls-well", seed=9, data_path=str(path))
    p1 = load_nnls(spec)
    p2 = load_nnls(spec)
    assert p1.K.shape == (3, 2)
    assert np.array_equal(p1.fstar.shift, p2.fstar.shift)
    swapped = load_nnls(spec, swapped=True)
    assert swapped.gamma == 0.5


def test_primal_objective_lasso_formula(fixtures):
    op = LinearOperator(np.array([[1.0]]))
    from saddlesolve.problems import SaddleProblem

    prob = SaddleProblem(g=ScaledL1(0.1), fstar=QuadShift(np.array([1.0])), K=op)
    assert primal_objective(prob, np.array([0.0])) == pytest.approx(
        fixtures["lasso_obj_1d"]["out"]
    )


def test_primal_objective_zero_noise_ground_truth():
    # with zero noise, phi(w) = mu*||w||_1 at the planted signal
    rng = np.random.default_rng(3)
    K = rng.standard_normal((10, 20))
    w = np.zeros(20)
    w[[2, 7]] = [1.5, -2.0]
    from saddlesolve.problems import SaddleProblem

    prob = SaddleProblem(g=ScaledL1(0.1), fstar=QuadShift(K @ w), K=LinearOperator(K))
    assert primal_objective(prob, w) == pytest.approx(0.1 * 3.5)


def test_primal_objective_nnls_sentinel():
    sp, b = _toy_sparse()
    prob = build_nnls(sp, b)
    assert primal_objective(prob, np.array([0.0, 0.0, -1.0, 0.0])) == np.inf


def test_primal_objective_unsupported_on_games():
    game = gen_matrix_game(ProblemSpec("game1", seed=1, m=4, n=4))
    with pytest.raises(UnsupportedMetricError):
        primal_objective(game, np.full(4, 0.25))


def test_pd_gap_cases(fixtures):
    op = LinearOperator(np.eye(2))
    assert pd_gap_game(op, [0.5, 0.5], [0.5, 0.5]) == pytest.approx(
        fixtures["gap_game_identity"]["out"]
    )
    op2 = LinearOperator(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert pd_gap_game(op2, [1.0, 0.0], [1.0, 0.0]) == pytest.approx(
        fixtures["gap_game_1234"]["out"]
    )


def test_pd_gap_feasibility_errors():
    op = LinearOperator(np.eye(2))
    with pytest.raises(FeasibilityError, match="component 0"):
        pd_gap_game(op, [-0.1, 1.1], [0.5, 0.5])
    with pytest.raises(FeasibilityError, match="sum"):
        pd_gap_game(op, [0.7, 0.7], [0.5, 0.5])


def test_pd_gap_nonnegative_on_random_feasible(rng):
    game = gen_matrix_game(ProblemSpec("game2", seed=8, m=6, n=5))
    from saddlesolve.prox import proj_simplex

    # gap dominates the brute-force vertex gap and stays nonnegative
    K = game.K.backing.entries
    for _ in range(100):
        x = proj_simplex(rng.uniform(-1, 1, 5))
        y = proj_simplex(rng.uniform(-1, 1, 6))
        gap = pd_gap_game(game.K, x, y)
        assert gap >= -1e-9
        vertex_gap = (K @ x).max() - (K.T @ y).min()
        assert gap == pytest.approx(vertex_gap)


def test_lasso_saddle_inclusion():
    # dual image y = Kx - b of a high-accuracy solution satisfies the
    # prox fixed-point inclusion at lambda = 1
    prob, _ = gen_lasso(ProblemSpec("lasso1", seed=6, m=15, n=40, s=4))
    ref, _, _ = solve_reference(prob, max_iter=100000)
    x, y = ref.x_bar, ref.y_bar
    res = x - prob.g.prox(x - prob.K.adjoint_apply(y), 1.0)
    assert np.linalg.norm(res) <= 1e-6
