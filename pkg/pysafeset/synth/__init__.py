"""Alternating SOS synthesis of a controller and an invariant set inside a safe set."""
from .spec import *
from .matrix import *
from .conditions import *
from .steps import *
from .alternation import *
from .baseline import *
