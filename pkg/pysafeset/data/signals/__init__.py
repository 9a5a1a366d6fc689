"""Input signals for experiments."""
from .base import *
from .sinusoid import *
