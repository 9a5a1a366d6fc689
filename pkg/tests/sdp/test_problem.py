import numpy as np
import pytest

from pysafeset.sdp import SdpProblem


def test_gram():
    prob = SdpProblem()
    idx = prob.add_gram(3)

    # symmetric indices, 6 scalars
    assert prob.n_vars == 6
    assert idx[0, 2] == idx[2, 0]
    assert prob.free_variables == []


def test_lmi_checks():
    prob = SdpProblem()
    y = prob.add_variables(2)

    with pytest.raises(ValueError):
        prob.add_lmi(np.array([[1., 2.], [0., 1.]]), {})
    with pytest.raises(ValueError):
        prob.add_lmi(np.eye(2), {y[0]: np.eye(3)})
    with pytest.raises(ValueError):
        prob.add_lmi(np.eye(2), {5: np.eye(2)})


def test_equality():
    prob = SdpProblem()
    y = prob.add_variables(2)
    prob.add_equality({y[0]: 1., y[1]: 1.}, 2.)
    E, b = prob.equality_matrix()
    assert E.toarray().tolist() == [[1., 1.]]
    assert b.tolist() == [2.]

    # trivially false
    with pytest.raises(ValueError):
        prob.add_equality({y[0]: 0.}, 1.)


def test_to_lmi():
    prob = SdpProblem()
    idx = prob.add_gram(2)
    prob.set_logdet('gram', 0)
    lowered = prob.to_lmi()

    # gram block is now an LMI with the same variables
    assert lowered.grams == []
    assert len(lowered.lmis) == 1
    assert lowered.logdet == ('lmi', 0)
    y = np.zeros(prob.n_vars)
    y[idx[0, 1]] = 3.
    assert lowered.lmis[0].evaluate(y) == pytest.approx(np.array([[0., 3.], [3., 0.]]))


def test_presolve():
    prob = SdpProblem()
    y = prob.add_variables(3)
    prob.add_nonnegative({y[0]: 1.})
    prob.add_equality({y[0]: 1., y[1]: 2.}, 4.)
    prob.add_equality({y[0]: 1., y[2]: 1.}, 1.)
    reduced, eliminations = prob.presolve()

    # y1 and y2 only occur in one row each
    assert len(reduced.equalities) == 0
    assert len(eliminations) == 2
    values = SdpProblem.recover(np.array([2., 0., 0.]), eliminations)
    assert values == pytest.approx([2., 1., -1.])
