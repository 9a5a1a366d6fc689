"""Experiments, data sets and the set of parameters consistent with them."""
from .system import *
from .signals import *
from .dataset import *
from .experiment import *
from .ellipsoid import *
