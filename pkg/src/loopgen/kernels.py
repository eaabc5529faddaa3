"""Kernel dispatch: the compiled kernels when importable, else pure Python.

Set ``LOOPGEN_PURE_PYTHON=1`` to force the fallback at import time, or use
:func:`use_backend` to switch at runtime.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _pykernels
from ._pykernels import KernelFallback

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

COMPILED_AVAILABLE = _ckernels is not None
_active = _ckernels if COMPILED_AVAILABLE and not os.environ.get("LOOPGEN_PURE_PYTHON") else None


def backend() -> str:
    return "cython" if _active is not None else "python"


@contextmanager
def use_backend(name: str):
    """Temporarily select ``"python"`` or ``"cython"``."""
    global _active
    if name == "cython" and not COMPILED_AVAILABLE:
        raise RuntimeError("compiled kernels are not built")
    if name not in ("python", "cython"):
        raise ValueError(f"unknown backend {name!r}")
    saved = _active
    _active = _ckernels if name == "cython" else None
    try:
        yield
    finally:
        _active = saved


def _used_vars(*series) -> tuple[int, ...]:
    """Indices of variables with a nonzero exponent somewhere in ``series``."""
    used = 0
    for s in series:
        for k in s:
            for d, e in enumerate(k):
                if e:
                    used |= 1 << d
    return tuple(d for d in range(used.bit_length()) if used >> d & 1)


def _compiled(fn, series, caps, nv, *args):
    """Run a compiled kernel on the variables the inputs actually use, then re-embed."""
    act = _used_vars(*series)
    if len(act) == nv:
        return fn(*series, tuple(caps), *args)
    sub = [{tuple(k[d] for d in act): c for k, c in s.items()} for s in series]
    out = fn(*sub, tuple(caps[d] for d in act), *args)
    full = [0] * nv
    res = {}
    for k, c in out.items():
        for d, e in zip(act, k):
            full[d] = e
        res[tuple(full)] = c
    return res


def mul(a, b, caps, total=None):
    if _active is not None:
        try:
            return _compiled(lambda x, y, c: _active.mul(x, y, c, total), (a, b), caps, len(caps))
        except KernelFallback:
            pass
    return _pykernels.mul(a, b, caps, total)


def power(s, n, caps, total=None):
    if _active is not None and n != 0:
        try:
            return _compiled(lambda x, c: _active.power(x, n, c, total), (s,), caps, len(caps))
        except KernelFallback:
            pass
    return _pykernels.power(s, n, caps, total)


def exp(s, caps, total=None):
    return _pykernels.exp(s, caps, total)
