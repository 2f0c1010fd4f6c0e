"""Lugiato-Lefever microresonator comb solver."""

from ._llesim import *  # noqa: F401,F403
from ._llesim import __doc__  # noqa: F401

__version__ = "0.1.0"
