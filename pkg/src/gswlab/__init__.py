"""Numerical laboratory for quaternionic spin geometry and generalized Seiberg-Witten equations.

Submodules:

* ``quat`` and ``clifford``: quaternion and Clifford algebra, double covers, projectors
* ``lattice4``: forms on the periodic 4d lattice, exterior calculus, gauge fields
* ``dirac``: Fueter and Dirac operators on quaternion-valued lattice fields
* ``sw``: the sigma map and abelian Seiberg-Witten residuals and descent
* ``gsw``: Vafa-Witten and complex ASD targets, hyperKahler checks, the 5d flow
* ``adhm``: ADHM data and moment maps
* ``spin7``: the Cayley form and the Spin(7) split criterion
"""
from . import adhm, clifford, dirac, gsw, lattice4, quat, spin7, sw
from ._backend import available as available_backends
from ._backend import name as backend_name
from ._backend import use as use_backend
from .errors import *  # noqa: F401,F403
from .lattice4 import FormField, Grid4

__version__ = "0.1.0"

__all__ = [
    "adhm",
    "clifford",
    "dirac",
    "gsw",
    "lattice4",
    "quat",
    "spin7",
    "sw",
    "FormField",
    "Grid4",
    "available_backends",
    "backend_name",
    "use_backend",
]
