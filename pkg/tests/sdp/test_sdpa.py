import numpy as np
import pytest

from pysafeset.exceptions import InfeasibleError
from pysafeset.sdp import SdpProblem, write_sdpa, read_sdpa, eliminate_equalities


def _problem() -> SdpProblem:
    prob = SdpProblem()
    y = prob.add_variables(2)
    prob.add_nonnegative({y[0]: 1.}, 1.)
    prob.add_nonnegative({y[1]: -1.}, 2.)
    prob.add_lmi(np.eye(2), {y[0]: np.array([[0., 1.], [1., 0.]]), y[1]: np.diag([1., -1.])})
    prob.set_objective({y[0]: 1., y[1]: 0.5})
    return prob


def test_export_import():
    text = write_sdpa(_problem())
    assert write_sdpa(read_sdpa(text)) == text

    # 1x1 blocks merged into one diagonal block
    lines = [l for l in text.splitlines() if not l.startswith('"')]
    assert '-2' in lines[2].split()


def test_export_needs_lmi_form():
    prob = _problem()
    prob.add_gram(2)
    with pytest.raises(ValueError):
        write_sdpa(prob)


def test_eliminate_equalities():
    prob = SdpProblem()
    y = prob.add_variables(3)
    prob.add_equality({y[0]: 1., y[1]: 1.}, 1.)
    prob.add_equality({y[2]: 1.}, 2.)
    reduced, y0, N = eliminate_equalities(prob)

    # one degree of freedom left
    assert N.shape == (3, 1)
    assert np.allclose(np.array([[1., 1., 0.], [0., 0., 1.]]) @ (y0 + N @ np.array([0.3])), [1., 2.])


def test_eliminate_inconsistent():
    prob = SdpProblem()
    y = prob.add_variables(1)
    prob.add_equality({y[0]: 1.}, 1.)
    prob.add_equality({y[0]: 2.}, 3.)
    with pytest.raises(InfeasibleError):
        eliminate_equalities(prob)
