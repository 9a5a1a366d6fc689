import logging
from typing import Union

from .alternation import SynthesisResult, alternate
from .conditions import ModelBasedCondition
from .spec import SafeSpec, DegreeProfile
from ..data.system import PolySystem
from ..poly import Polynomial
from ..sdp import SdpSolver

log = logging.getLogger(__name__)


def synthesize_model_based(system: PolySystem, spec: SafeSpec, profile: DegreeProfile, init_h: Polynomial = None,
                           solver: Union[SdpSolver, dict] = None) -> SynthesisResult:
    """Runs the alternation with the true system instead of the consistency ellipsoid, as baseline.

    Args:
        system: Ground truth system.
        spec: Safe set specification.
        profile: Degrees and settings.
        init_h: Initial h.
        solver: SDP solver.

    Returns:
        Synthesis result with provenance 'model'.
    """
    log.info('Running model-based synthesis as baseline...')
    return alternate(spec, profile, ModelBasedCondition.from_system(system), init_h=init_h, solver=solver)


__all__ = ['synthesize_model_based']
