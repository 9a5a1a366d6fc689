"""Data-driven synthesis of safe polynomial controllers with sum of squares programs."""
from .object import get_object
from .exceptions import *
from .application import Application
