import numpy as np
import pytest

from pysafeset.poly import MatrixPolynomial, parse_polynomial
from pysafeset.sos import SosProgram, Affine


def test_affine():
    y0, y1 = Affine.variable(0), Affine.variable(1, 2.)
    e = 3. + y0 - y1 * 0.5
    assert e.evaluate([1., 4.]) == pytest.approx(0.)
    assert (y0 * 2.).coeffs == {0: 2.}

    # not affine anymore
    with pytest.raises(ValueError):
        y0 * y1


def test_square_is_sos():
    prog = SosProgram(1)
    prog.add_sos(parse_polynomial('(x1 + 1)^2', 1))
    sol = prog.solve()
    assert sol.is_optimal

    certs = sol.certificates()
    assert len(certs) == 1
    assert certs[0].valid
    assert certs[0].residual <= 1e-6


@pytest.mark.parametrize('expression', ['x1', 'x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1'])
def test_not_sos(expression):
    # odd degree and the Motzkin polynomial
    prog = SosProgram(2)
    prog.add_sos(parse_polynomial(expression, 2))
    sol = prog.solve()
    assert not sol.is_optimal


def test_indefinite_matrix():
    prog = SosProgram(1)
    prog.add_matrix_sos(MatrixPolynomial.from_array(1, np.array([[0., 1.], [1., 0.]])))
    assert not prog.solve().is_optimal


def test_template():
    # largest c with x^2 - 2x + c SOS is unbounded, smallest is 1
    prog = SosProgram(1)
    c = prog.new_variable()
    prog.add_sos(parse_polynomial('x1^2 - 2*x1', 1) + c)
    prog.maximize(-c)
    sol = prog.solve()
    assert sol.is_optimal
    assert sol.value(c) == pytest.approx(1., abs=1e-4)


def test_sos_template_and_pin():
    prog = SosProgram(1)
    s = prog.new_sos_polynomial(2, name='s')
    p = prog.new_polynomial(2, fixed={(0,): 1.})

    # p - s == 0 ties both together
    prog.add_equality(p.polynomial - s.polynomial)
    sol = prog.solve()
    assert sol.is_optimal
    assert sol.value(p).coefficient((0,)) == pytest.approx(1.)
    assert all(c.valid for c in sol.certificates())


def test_diagnose():
    prog = SosProgram(1)
    prog.add_sos(parse_polynomial('x1^2 + 1', 1), family='good')
    prog.add_sos(parse_polynomial('-x1^2 - 1', 1), family='bad')
    sol = prog.solve(diagnose=True)
    assert not sol.is_optimal
    assert sol.diagnostic['failing'] == ['bad']
