"""Independent checks of synthesis results by sampling and simulation."""
from .members import *
from .checks import *
from .simulation import *
from .report import *
