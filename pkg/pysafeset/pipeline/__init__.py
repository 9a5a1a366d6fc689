"""Config driven pipeline from experiment to verified controller."""
from .config import *
from .stages import *
from .demos import *
