"""Hot kernels with a compiled (Cython) implementation and a pure-Python fallback.

The compiled module is used when it has been built; set the environment
variable ``METACYCLIC_KERNELS=python`` to force the fallback.
"""

import importlib
import os

from . import _pykernels


def load_backend(name):
    """Return the kernel module called ``name`` (``"cython"`` or ``"python"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("._ckernels", __name__)
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("METACYCLIC_KERNELS", "").strip().lower() == "python":
    _impl = _pykernels
else:
    try:
        _impl = load_backend("cython")
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

jacobi_eigvalsh_batch = _impl.jacobi_eigvalsh_batch
bfs_two_coloring = _impl.bfs_two_coloring

__all__ = ["BACKEND", "available_backends", "bfs_two_coloring", "jacobi_eigvalsh_batch", "load_backend"]
