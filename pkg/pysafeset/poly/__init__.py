"""Sparse multivariate polynomials and matrices of them."""
from .monomial import *
from .polynomial import *
from .matrix import *
from .parse import *
