from enum import Enum
from typing import Dict, List, Optional

import numpy as np


class SdpStatus(Enum):
    """Outcome of an SDP solve."""
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'
    NUMERICAL_FAILURE = 'numerical-failure'


class SdpSolution:
    """Result of solving an SdpProblem."""

    def __init__(self, status: SdpStatus, y: Optional[np.ndarray] = None, grams: List[np.ndarray] = None,
                 lmis: List[np.ndarray] = None, objective: float = None, residuals: Dict[str, float] = None,
                 iterations: int = None, solver: str = None, message: str = None):
        """Creates a new solution.

        Args:
            status: Solver status.
            y: Values of all scalar variables.
            grams: Values of Gram blocks, projected onto the PSD cone.
            lmis: Values of LMI blocks.
            objective: Achieved objective.
            residuals: Max residuals, keys 'equality', 'psd', 'gap'.
            iterations: Number of solver iterations.
            solver: Name of backend.
            message: Diagnostic for failed solves.
        """
        self.status = status
        self.y = y
        self.grams = [] if grams is None else grams
        self.lmis = [] if lmis is None else lmis
        self.objective = objective
        self.residuals = {} if residuals is None else residuals
        self.iterations = iterations
        self.solver = solver
        self.message = message

    @property
    def is_optimal(self) -> bool:
        return self.status == SdpStatus.OPTIMAL

    def value(self, index: int) -> float:
        return float(self.y[index])

    def values(self, indices) -> np.ndarray:
        return np.asarray(self.y)[np.asarray(indices, dtype=int)]

    def stats(self) -> dict:
        """Summary for iteration logs."""
        return {
            'status': self.status.value,
            'objective': None if self.objective is None else float(self.objective),
            'iterations': self.iterations,
            'residuals': {k: float(v) for k, v in sorted(self.residuals.items())},
        }

    def __repr__(self):
        return 'SdpSolution(status=%s, objective=%s)' % (self.status.value, self.objective)


__all__ = ['SdpStatus', 'SdpSolution']
