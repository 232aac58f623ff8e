"""Kernel backend selection.

The compiled kernel is used when it imports; ``KCHANGE_BACKEND=python`` forces
the pure-Python fallback for the whole process.
"""

import os

from ..errors import ConfigurationError
from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = ("auto", "compiled", "python")


def compiled_available() -> bool:
    return _ckernel is not None


def default_backend() -> str:
    forced = os.environ.get("KCHANGE_BACKEND", "").strip().lower()
    if forced in ("python", "compiled"):
        return forced
    return "compiled" if _ckernel is not None else "python"


def resolve(name: str = "auto") -> str:
    if name not in BACKENDS:
        raise ConfigurationError(f"unknown backend {name!r}; choose from {', '.join(BACKENDS)}")
    if name == "auto":
        return default_backend()
    if name == "compiled" and _ckernel is None:
        raise ConfigurationError("compiled kernel is not built; reinstall with a C++ compiler and Cython")
    return name


def kernel_class(name: str = "auto"):
    return _ckernel.Kernel if resolve(name) == "compiled" else _pykernel.Kernel
