"""Element kernel backends.

The compiled Cython core is used when its extension module importable; the
NumPy implementation is the always-available fallback.  Selection happens at
import time and can be forced with ``MIXED_SPECTRA_KERNELS=numpy|cython``.
"""
import os

from . import numpy_backend

try:
    from . import cy_kernels as _compiled
except ImportError:  # pure-Python install
    _compiled = None

_FORCED = os.environ.get("MIXED_SPECTRA_KERNELS", "").strip().lower()
if _FORCED == "numpy":
    _default = numpy_backend
elif _FORCED == "cython":
    if _compiled is None:
        raise ImportError("MIXED_SPECTRA_KERNELS=cython but the extension is not built")
    _default = _compiled
else:
    _default = _compiled if _compiled is not None else numpy_backend


def available_backends() -> dict:
    out = {"numpy": numpy_backend}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def get_backend(name: str | None = None):
    """Return a kernel namespace by name; default is the selected backend."""
    if name is None:
        return _default
    try:
        return available_backends()[name]
    except KeyError:
        raise ImportError(f"kernel backend {name!r} not available") from None


def backend_name() -> str:
    return _default.name
