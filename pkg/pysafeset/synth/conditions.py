import logging

import numpy as np

from .matrix import build_H, model_based_condition
from ..data.ellipsoid import ConsistencyEllipsoid
from ..data.system import PolySystem
from ..poly import Polynomial, MatrixPolynomial
from ..sos import SosProgram

log = logging.getLogger(__name__)


class InvarianceCondition:
    """SOS condition that makes {h <= 0} invariant under the controller K."""

    # family name for constraints and diagnostics
    family = 'invariance'

    def __init__(self, Z: MatrixPolynomial, W: MatrixPolynomial, *args, **kwargs):
        if Z.cols != 1 or Z.n != W.n:
            raise ValueError('Z must be a column and use the same variables as W.')
        self.Z = Z
        self.W = W

    @property
    def n(self) -> int:
        return self.Z.n

    @property
    def m(self) -> int:
        return self.W.cols

    @property
    def provenance(self) -> str:
        raise NotImplementedError

    def add_to(self, program: SosProgram, h: Polynomial, K: MatrixPolynomial, l: Polynomial, eta: Polynomial,
               eps: float):
        """Adds the condition to a program, at most one of the two alternation groups may be unknown."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class DataDrivenCondition(InvarianceCondition):
    """-H is an SOS matrix, robust against all parameters in the consistency ellipsoid."""

    def __init__(self, ellipsoid: ConsistencyEllipsoid, Z: MatrixPolynomial, W: MatrixPolynomial, *args, **kwargs):
        InvarianceCondition.__init__(self, Z, W, *args, **kwargs)
        if ellipsoid.N != Z.rows + W.rows or ellipsoid.n != Z.n:
            raise ValueError('Ellipsoid does not match Z and W.')
        self.ellipsoid = ellipsoid

    @property
    def provenance(self) -> str:
        return self.ellipsoid.provenance

    def add_to(self, program: SosProgram, h: Polynomial, K: MatrixPolynomial, l: Polynomial, eta: Polynomial,
               eps: float):
        H = build_H(h, K, l, eta, eps, self.ellipsoid, self.Z, self.W)
        program.add_matrix_sos(-H, name='invariance', family=self.family)

    def to_dict(self) -> dict:
        return self.ellipsoid.to_dict()


class ModelBasedCondition(InvarianceCondition):
    """-(l h + eps + dh (A Z + B W K)) is SOS, for a known system."""

    def __init__(self, A: np.ndarray, B: np.ndarray, Z: MatrixPolynomial, W: MatrixPolynomial, *args, **kwargs):
        InvarianceCondition.__init__(self, Z, W, *args, **kwargs)
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.B = np.atleast_2d(np.asarray(B, dtype=float))
        if self.A.shape != (Z.n, Z.rows) or self.B.shape != (Z.n, W.rows):
            raise ValueError('A and B do not match Z and W.')

    @staticmethod
    def from_system(system: PolySystem) -> 'ModelBasedCondition':
        return ModelBasedCondition(system.A, system.B, system.Z, system.W)

    @property
    def provenance(self) -> str:
        return 'model'

    def add_to(self, program: SosProgram, h: Polynomial, K: MatrixPolynomial, l: Polynomial, eta: Polynomial,
               eps: float):
        # eta does not occur without parameter uncertainty
        p = model_based_condition(h, K, l, eps, self.A, self.B, self.Z, self.W)
        program.add_sos(-p, name='invariance', family=self.family)

    def to_dict(self) -> None:
        return None


__all__ = ['InvarianceCondition', 'DataDrivenCondition', 'ModelBasedCondition']
