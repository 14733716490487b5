"""Kernel backend selection.

The hot kernels (chain products, Doob increments, spectral norms) exist twice:
a Cython extension ``matconc._kernels`` and a pure-numpy fallback
``matconc._py_kernels`` with identical signatures. The compiled backend is
used when importable; ``MATCONC_BACKEND=python|compiled`` forces a choice.
Both produce values equal well within every tolerance in this package, but
not bitwise-identical (different floating-point summation order), so
reproducibility guarantees are per-backend.
"""

import os

from . import _py_kernels
from .errors import ConfigError

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built; pure-python install still works
    _compiled = None

_active = None


def available_backends():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def _resolve(name):
    if name == "python":
        return _py_kernels
    if name == "compiled":
        if _compiled is None:
            raise ConfigError(
                "compiled backend requested but the matconc._kernels "
                "extension is not built"
            )
        return _compiled
    raise ConfigError(f"unknown backend {name!r} (use 'compiled' or 'python')")


def set_backend(name):
    """Force a backend for this process; returns the module."""
    global _active
    _active = _resolve(name)
    return _active


def get_backend():
    global _active
    if _active is None:
        forced = os.environ.get("MATCONC_BACKEND")
        if forced:
            _active = _resolve(forced)
        else:
            _active = _compiled if _compiled is not None else _py_kernels
    return _active


def backend_name():
    return get_backend().NAME
