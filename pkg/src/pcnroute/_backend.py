"""Kernel selection.

The compiled kernel is used when it imports; set ``PCNROUTE_BACKEND=python``
to force the pure-Python fallback, or ``=cython`` to fail loudly without it.
"""
import os

from . import _pykernel

KERNELS = {"python": _pykernel.search}

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None
else:
    KERNELS["cython"] = _ckernel.search

_choice = os.environ.get("PCNROUTE_BACKEND", "auto").lower()
if _choice == "python":
    BACKEND = "python"
elif _choice in ("cython", "auto"):
    if _ckernel is None and _choice == "cython":
        raise ImportError("PCNROUTE_BACKEND=cython but pcnroute._ckernel is not built")
    BACKEND = "cython" if _ckernel is not None else "python"
else:
    raise ImportError(f"unknown PCNROUTE_BACKEND {_choice!r}")


def get_kernel(name=None):
    name = name or BACKEND
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(KERNELS)}") from None
