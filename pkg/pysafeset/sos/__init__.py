"""Sum-of-squares programs compiled to semidefinite programs."""
from .affine import *
from .program import *
from .certificate import *
