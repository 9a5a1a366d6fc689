import numpy as np
import pytest

from pysafeset.data import PolySystem
from pysafeset.poly import MatrixPolynomial, Polynomial, parse_column, parse_matrix, parse_polynomial
from pysafeset.verify import simulate_closed_loop, sample_initial_states, level_grid


def _system(a: float, z: str = 'x1') -> PolySystem:
    return PolySystem([[a]], [[1.]], parse_column([z], 1), parse_matrix([['1']], 1))


def _zero() -> MatrixPolynomial:
    return MatrixPolynomial.column([Polynomial(1)])


def test_stays_inside():
    h = parse_polynomial('x1^2 - 1', 1)
    run = simulate_closed_loop(_system(-1.), _zero(), [[0.99], [-0.5]], 5., 0.01, h=h)
    assert run.X.shape == (501, 2, 1)
    assert run.X[-1, 0, 0] == pytest.approx(0.99 * np.exp(-5.), rel=1e-6)
    assert np.all(run.entered)
    assert not np.any(run.escapes)


def test_escape():
    # x' = x leaves h <= 0
    h = parse_polynomial('x1^2 - 1', 1)
    run = simulate_closed_loop(_system(1.), _zero(), [[0.5]], 2., 0.01, h=h)
    assert np.all(run.escapes)
    assert run.to_dict()['escapes'] == 1

    # stabilized by K = -2 x1
    K = MatrixPolynomial.column([parse_polynomial('-2*x1', 1)])
    run = simulate_closed_loop(_system(1.), K, [[0.5]], 2., 0.01, h=h)
    assert not np.any(run.escapes)


def test_blow_up():
    run = simulate_closed_loop(_system(1., 'x1^3'), _zero(), [[2.], [0.]], 1., 0.01,
                               h=parse_polynomial('x1^2 - 1', 1))
    assert list(run.blown_up) == [True, False]
    assert list(run.escapes) == [False, False]
    assert np.isnan(run.H[-1, 0])


def test_step_size():
    with pytest.raises(ValueError):
        simulate_closed_loop(_system(-1.), _zero(), [[0.5]], 1., 0.1)

    # halving the step changes little
    a = simulate_closed_loop(_system(-1.), _zero(), [[0.5]], 1., 0.01)
    b = simulate_closed_loop(_system(-1.), _zero(), [[0.5]], 1., 0.005)
    assert a.X[-1] == pytest.approx(b.X[-1], rel=1e-8)


def test_table():
    run = simulate_closed_loop(_system(-1.), _zero(), [[0.5], [1.]], 1., 0.01, h=parse_polynomial('x1^2 - 1', 1),
                               sample_every=10)
    table = run.to_table()
    assert list(table.columns) == ['traj_id', 't', 'x1', 'h']
    assert len(table) == 2 * 11
    assert table['x1'].iloc[0] == 0.5


def test_initial_states():
    h = parse_polynomial('x1^2 - 1', 1)
    x0 = sample_initial_states(h, np.array([[-2., 2.]]), 20, seed=2)
    values = h.evaluate_many(x0)
    assert len(x0) == 20
    assert np.all(values > 0.)

    # max |h| on [-2, 2] is 3
    assert np.all(values <= 0.05 * 3. + 1e-6)


def test_level_grid():
    h = parse_polynomial('x1^2 + x2^2 - 1', 2)
    table = level_grid(h, parse_polynomial('x1^2 + x2^2', 2), [parse_polynomial('x1 - 1', 2)],
                       np.array([[-1., 1.], [-1., 1.]]), resolution=5)
    assert len(table) == 25
    assert list(table.columns) == ['x1', 'x2', 'h', 'lambda', 'max_sigma']
    assert table['h'].min() == pytest.approx(-1.)
