"""Regularized solvers for ill-posed operator equations with noisy data."""

from ._illposed import *  # noqa: F401,F403
from ._illposed import __doc__  # noqa: F401
