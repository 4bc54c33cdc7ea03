"""Decoder backend selection.

The hot decode kernels exist twice: a compiled extension (_ckernels,
Cython) and a pure-Python mirror (_pykernels).  The compiled one is
preferred when importable; BOXLABELS_BACKEND=py|c forces a choice.
Both expose the same functions and agree bit for bit (tested).
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCED = os.environ.get("BOXLABELS_BACKEND")

_ckernels = None
if _FORCED != "py":
    try:
        from . import _ckernels  # type: ignore
    except ImportError:
        _ckernels = None
        if _FORCED == "c":
            raise ImportError(
                "BOXLABELS_BACKEND=c but the compiled extension is unavailable"
            )

_active = _ckernels if _ckernels is not None else _pykernels


def get_backend(name: str | None = None):
    """The active kernel module, or a specific one by name ('py'/'c')."""
    if name is None:
        return _active
    if name == "py":
        return _pykernels
    if name == "c":
        if _ckernels is None:
            raise ValueError("compiled backend not available")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def backend_name() -> str:
    return getattr(_active, "BACKEND_NAME", "py")


def available_backends() -> list:
    return ["py"] + (["c"] if _ckernels is not None else [])
