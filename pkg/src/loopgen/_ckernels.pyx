# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled series kernels on a dense exponent lattice.

Integer coefficients only, held in int64 with overflow checks.  Anything the
kernels cannot handle exactly (non-integer coefficients, values beyond int64,
lattices too large to allocate, constant term other than 1 for powers)
raises ``KernelFallback`` and the caller reruns the pure-Python kernel.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

from loopgen._pykernels import KernelFallback

cnp.import_array()

cdef extern from *:
    """
    static inline int lg_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int lg_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int lg_mul_ovf(long long a, long long b, long long *r) nogil
    int lg_add_ovf(long long a, long long b, long long *r) nogil

# 2**22 int64 cells = 32 MiB
MAX_LATTICE = 1 << 22


cdef tuple _lattice(tuple caps):
    cdef Py_ssize_t nv = len(caps)
    strides = np.empty(nv, dtype=np.int64)
    cdef int64_t size = 1
    cdef Py_ssize_t d
    for d in range(nv - 1, -1, -1):
        strides[d] = size
        size *= <int64_t>(caps[d]) + 1
        if size > MAX_LATTICE:
            raise KernelFallback("lattice too large")
    return strides, size


cdef _to_arrays(dict terms, Py_ssize_t nv):
    coefs_list = list(terms.values())
    for c in coefs_list:
        if type(c) is not int:
            raise KernelFallback("non-integer coefficient")
    try:
        coefs = np.array(coefs_list, dtype=np.int64)
    except OverflowError:
        raise KernelFallback("coefficient exceeds int64") from None
    exps = np.array(list(terms.keys()), dtype=np.int64).reshape(len(coefs_list), nv)
    return exps, coefs


cdef dict _from_dense(cnp.ndarray out, tuple caps):
    idx = np.flatnonzero(out)
    digits = np.stack(np.unravel_index(idx, tuple(c + 1 for c in caps)), axis=1) if len(caps) else np.zeros((len(idx), 0), np.int64)
    return dict(zip(map(tuple, digits.tolist()), out[idx].tolist()))


def mul(dict a, dict b, tuple caps, total=None):
    """Truncated product of two aligned integer series."""
    cdef Py_ssize_t nv = len(caps)
    strides, size_obj = _lattice(caps)
    cdef int64_t size = size_obj
    ea, ca = _to_arrays(a, nv)
    eb, cb = _to_arrays(b, nv)
    cdef int64_t[:, :] xa = ea
    cdef int64_t[:, :] xb = eb
    cdef int64_t[:] va = ca
    cdef int64_t[:] vb = cb
    cdef int64_t[:] st = strides
    capv = np.asarray(caps, dtype=np.int64)
    cdef int64_t[:] cv = capv
    cdef int64_t limit = total if total is not None else int(capv.sum())
    out = np.zeros(size, dtype=np.int64)
    cdef int64_t[:] o = out
    cdef Py_ssize_t na = xa.shape[0], nb = xb.shape[0], i, j, d
    ia_np = ea @ np.asarray(strides) if na else np.zeros(0, np.int64)
    ib_np = eb @ np.asarray(strides) if nb else np.zeros(0, np.int64)
    da_np = ea.sum(axis=1) if na else np.zeros(0, np.int64)
    db_np = eb.sum(axis=1) if nb else np.zeros(0, np.int64)
    cdef int64_t[:] ia = ia_np
    cdef int64_t[:] ib = ib_np
    cdef int64_t[:] dga = da_np
    cdef int64_t[:] dgb = db_np
    cdef long long prod, acc
    cdef bint ok, overflow = False
    with nogil:
        for i in range(na):
            for j in range(nb):
                if dga[i] + dgb[j] > limit:
                    continue
                ok = True
                for d in range(nv):
                    if xa[i, d] + xb[j, d] > cv[d]:
                        ok = False
                        break
                if not ok:
                    continue
                if lg_mul_ovf(va[i], vb[j], &prod) or lg_add_ovf(o[ia[i] + ib[j]], prod, &acc):
                    overflow = True
                    break
                o[ia[i] + ib[j]] = acc
            if overflow:
                break
    if overflow:
        raise KernelFallback("int64 overflow")
    return _from_dense(out, caps)


def power(dict s, long long n, tuple caps, total=None):
    """``s ** n`` for an integer series with constant term 1, via the Euler-operator recurrence.

    Cells are settled in lattice order; each nonzero cell pushes its
    contributions forward, so zero cells cost one comparison.
    """
    cdef Py_ssize_t nv = len(caps)
    zero = (0,) * nv
    if s.get(zero, 0) != 1 or n == 0:
        raise KernelFallback("constant term must be 1")
    strides, size_obj = _lattice(caps)
    cdef int64_t size = size_obj
    rest = {k: c for k, c in s.items() if k != zero and c}
    es, cs = _to_arrays(rest, nv)
    cdef int64_t[:, :] xs = es
    cdef int64_t[:] vs = cs
    cdef Py_ssize_t ns = xs.shape[0], i, d
    ks_np = es @ np.asarray(strides) if ns else np.zeros(0, np.int64)
    dk_np = es.sum(axis=1) if ns else np.zeros(0, np.int64)
    cdef int64_t[:] koff = ks_np
    cdef int64_t[:] dk = dk_np
    capv = np.asarray(caps, dtype=np.int64)
    cdef int64_t[:] cv = capv
    cdef int64_t limit = total if total is not None else int(capv.sum())
    out = np.zeros(size, dtype=np.int64)
    cdef int64_t[:] f = out
    digits_np = np.zeros(nv, dtype=np.int64)
    cdef int64_t[:] dig = digits_np
    cdef int64_t idx, dm = 0
    cdef long long w, t, val
    cdef bint ok, bad = False
    f[0] = 1
    with nogil:
        for idx in range(size):
            if idx:
                # advance mixed-radix counter; last variable fastest
                d = nv - 1
                while dig[d] == cv[d]:
                    dm -= dig[d]
                    dig[d] = 0
                    d -= 1
                dig[d] += 1
                dm += 1
                if f[idx] == 0:
                    continue
                if f[idx] % dm != 0:
                    bad = True
                    break
                f[idx] = f[idx] // dm
            val = f[idx]
            for i in range(ns):
                if dm + dk[i] > limit:
                    continue
                ok = True
                for d in range(nv):
                    if dig[d] + xs[i, d] > cv[d]:
                        ok = False
                        break
                if not ok:
                    continue
                # contribution to m = p + k: (n deg k - deg p) s_k f[p]
                w = n * dk[i] - dm
                if lg_mul_ovf(w, vs[i], &w) or lg_mul_ovf(w, val, &t) or lg_add_ovf(f[idx + koff[i]], t, &t):
                    bad = True
                    break
                f[idx + koff[i]] = t
            if bad:
                break
    if bad:
        raise KernelFallback("int64 overflow or inexact division")
    return _from_dense(out, caps)
