"""Exact spectral independence, local-to-global walks and matroid bases-exchange tools."""
from ._kernels import BACKEND
from .errors import CapExceeded, Caps, InputError, MatroidAxiomError, SpecIndError
from .gibbs import Graph, Pinning, SpinSystem, build_hardcore, load_table

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapExceeded", "Caps", "Graph", "InputError", "MatroidAxiomError", "Pinning", "SpecIndError",
    "SpinSystem", "__version__", "build_hardcore", "load_table",
]
