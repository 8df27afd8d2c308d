"""Generalized Hasse-Witt matrices of hypersurfaces over finite fields and
the mod-p congruences they satisfy with the zeta function."""

from .errors import GenHWError, InputError, InternalInvariantError
from .field import FieldElement, make_field
from .instance import HypersurfaceSpec, build_spec, load_spec, parse_spec

__version__ = "0.1.0"

__all__ = [
    "GenHWError", "InputError", "InternalInvariantError", "FieldElement", "make_field",
    "HypersurfaceSpec", "build_spec", "load_spec", "parse_spec",
]
