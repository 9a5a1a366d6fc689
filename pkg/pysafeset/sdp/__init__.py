"""Semidefinite programs, their backends and the SDPA file format."""
from .problem import *
from .solution import *
from .solver import *
from .sdpa import *
from .logdet import *
