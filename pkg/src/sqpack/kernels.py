"""Backend selection for the hot geometric kernels.

The compiled extension (built from ``_kernels.pyx``) is used when it
imported cleanly; otherwise the pure-Python fallback takes over. Set
``SQPACK_PURE=1`` to force the fallback regardless. ``use()`` swaps the
active backend at runtime, which is how the benchmark compares the two.
"""

from __future__ import annotations

import os

from . import _kernels_py

_backends = {"python": _kernels_py}

if os.environ.get("SQPACK_PURE") != "1":
    try:
        from . import _kernels as _kernels_c
    except ImportError:
        pass
    else:
        _backends["compiled"] = _kernels_c

_impl = _backends.get("compiled", _kernels_py)


def available() -> list[str]:
    """Names of the importable backends."""
    return sorted(_backends)


def active() -> str:
    """Name of the backend currently dispatched to."""
    for name, mod in _backends.items():
        if mod is _impl:
            return name
    raise RuntimeError("active kernel backend not in registry")


def use(name: str) -> None:
    """Switch the active backend ("python" or "compiled")."""
    global _impl
    try:
        _impl = _backends[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available()}"
        ) from None


def first_collision(xs, ys, ss, n, cx, cy, cw, ch, eps):
    return _impl.first_collision(xs, ys, ss, n, cx, cy, cw, ch, eps)


def first_overlap_pair(xs, ys, ss, n, eps):
    return _impl.first_overlap_pair(xs, ys, ss, n, eps)


def first_outside_unit(xs, ys, ss, n, eps):
    return _impl.first_outside_unit(xs, ys, ss, n, eps)
