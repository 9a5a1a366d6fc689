import numpy as np
import pytest

from pysafeset.sdp import (SdpProblem, SdpStatus, CvxpySolver, LogdetScaling, get_solver, relative_gap, solve,
                           solve_logdet)


def test_simple_lmi():
    # maximize y with [[1, y], [y, 1]] >= 0
    prob = SdpProblem()
    y, = prob.add_variables(1)
    prob.add_lmi(np.eye(2), {y: np.array([[0., 1.], [1., 0.]])})
    prob.set_objective({y: 1.})
    sol = solve(prob)
    assert sol.status == SdpStatus.OPTIMAL
    assert sol.value(y) == pytest.approx(1., abs=1e-5)


def test_gram_with_equality():
    # 2x2 gram with trace 1, maximize off-diagonal
    prob = SdpProblem()
    idx = prob.add_gram(2)
    prob.add_equality({int(idx[0, 0]): 1., int(idx[1, 1]): 1.}, 1.)
    prob.set_objective({int(idx[0, 1]): 1.})
    sol = CvxpySolver().solve(prob)
    assert sol.is_optimal
    assert sol.grams[0] == pytest.approx(np.full((2, 2), 0.5), abs=1e-5)
    assert np.linalg.eigvalsh(sol.grams[0])[0] >= -1e-9


def test_infeasible():
    prob = SdpProblem()
    y, = prob.add_variables(1)
    prob.add_nonnegative({y: 1.}, -1.)
    prob.add_nonnegative({y: -1.})
    sol = solve(prob)
    assert sol.status == SdpStatus.INFEASIBLE
    assert not sol.is_optimal


def test_get_solver():
    assert isinstance(get_solver(), CvxpySolver)
    solver = get_solver({'class': 'pysafeset.sdp.CvxpySolver', 'solver': 'SCS', 'feastol': 1e-5})
    assert solver.feastol == 1e-5

    with pytest.raises(TypeError):
        get_solver({'class': 'pysafeset.data.ConstantSignal'})


def test_logdet_ball():
    # all zeta with |x - zeta phi|^2 <= omega for phi=1 and x=0, i.e. the interval [-1, 1]
    c = [np.array([[-1.]])]
    b = [np.array([[0.]])]
    a = [np.array([[1.]])]
    A, B, tau, _ = solve_logdet(c, b, a)
    assert -np.linalg.solve(A, B) == pytest.approx(np.zeros((1, 1)), abs=1e-5)
    assert 1. / np.sqrt(A[0, 0]) == pytest.approx(1., rel=1e-3)


def test_relative_gap():
    X = np.array([[1., 0.], [0., 0.]])
    Z = np.array([[0., 0.], [0., 2.]])
    assert relative_gap([(Z, X)]) == 0.
    gap = relative_gap([(X, X), (Z, Z)], objective=1.)
    assert 0. < gap <= 1.


def test_backend_tolerances():
    solver = CvxpySolver()
    assert solver.max_iter == 200
    assert solver._solver_options() == pytest.approx({'tol_feas': 1e-9, 'tol_gap_abs': 1e-8, 'tol_gap_rel': 1e-8,
                                                      'max_iter': 200})

    # never looser than the verification
    solver = CvxpySolver(feastol=1e-3, gaptol=1e-3)
    assert solver.backend_feastol == 1e-8 and solver.backend_gaptol == 1e-8


def test_large_objective():
    # maximize y with [[100, y], [y, 100]] >= 0, accepted although sum <Z, X> is of order 1e2 * tolerance
    prob = SdpProblem()
    y, = prob.add_variables(1)
    prob.add_lmi(100. * np.eye(2), {y: np.array([[0., 1.], [1., 0.]])})
    prob.set_objective({y: 1.})
    sol = solve(prob)
    assert sol.status == SdpStatus.OPTIMAL
    assert sol.value(y) == pytest.approx(100., rel=1e-6)
    assert sol.residuals['gap'] <= 1e-6


def test_logdet_scaling():
    omega = 1e-4
    scaling = LogdetScaling.from_params([[[4. - omega]]], [[[-2.]]], [[[1.]]])
    assert scaling.zeta0 == pytest.approx(np.array([[2.]]))
    assert scaling.kappa == pytest.approx(omega)
    assert scaling.s == pytest.approx([1e-2])

    # unit slab in delta
    c, b, a = scaling.apply([[[4. - omega]]], [[[-2.]]], [[[1.]]])
    assert c[0] == pytest.approx([[-1.]])
    assert b[0] == pytest.approx([[0.]], abs=1e-9)
    assert a[0] == pytest.approx([[1.]])

    # and back
    A, B, tau = scaling.restore(np.eye(1), np.zeros((1, 1)), np.ones(1))
    assert A == pytest.approx([[1. / omega]])
    assert -np.linalg.solve(A, B) == pytest.approx([[2.]])
    assert tau == pytest.approx([1. / omega])


def test_logdet_tiny_omega():
    # noiseless x' = -x + 2u with omega = 1e-12
    omega = 1e-12
    x, u = np.array([0.5, -1.2, 2.]), np.array([1., 0.3, -0.7])
    phi = np.column_stack([x, u])
    xdot = -x + 2. * u
    c = [np.array([[xd ** 2 - omega]]) for xd in xdot]
    b = [-p[:, None] * xd for p, xd in zip(phi, xdot)]
    a = [np.outer(p, p) for p in phi]
    A, B, tau, sol = solve_logdet(c, b, a)
    assert np.linalg.eigvalsh(A)[0] >= 1e-9
    assert -np.linalg.solve(A, B) == pytest.approx(np.array([[-1.], [2.]]), abs=1e-5)
    assert sol.residuals['containment'] <= 1e-7
    assert np.all(tau >= 0.)
