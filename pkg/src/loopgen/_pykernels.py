"""Pure-Python sparse series kernels.

Series are dicts mapping exponent tuples to int/Fraction coefficients.
Exponents are packed into single integers with a guard bit per field, so a
sum of two packed keys is carry-free and a cap violation shows up as a set
guard bit after adding a per-field offset.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

Terms = Mapping[tuple, object]


class KernelFallback(Exception):
    """A compiled kernel declined the input; the Python path must be used."""


class _Layout:
    __slots__ = ("caps", "shifts", "widths", "adj", "guard", "total")

    def __init__(self, caps: Sequence[int], total: int | None):
        self.caps = tuple(caps)
        shifts, widths = [], []
        off = adj = guard = 0
        for c in self.caps:
            w = max(c, 1).bit_length() + 1
            shifts.append(off)
            widths.append(w)
            adj |= ((1 << (w - 1)) - 1 - c) << off
            guard |= (1 << (w - 1)) << off
            off += w
        self.shifts, self.widths = tuple(shifts), tuple(widths)
        self.adj, self.guard = adj, guard
        self.total = total

    def pack(self, exps: tuple) -> int:
        k = 0
        for e, s in zip(exps, self.shifts):
            k |= e << s
        return k

    def unpack(self, key: int) -> tuple:
        return tuple((key >> s) & ((1 << w) - 1) for s, w in zip(self.shifts, self.widths))

    def fits(self, key: int) -> bool:
        return not ((key + self.adj) & self.guard)


def _div(a, d):
    if isinstance(a, int) and isinstance(d, int):
        q, r = divmod(a, d)
        return q if not r else Fraction(a, d)
    v = Fraction(a) / d
    return v.numerator if v.denominator == 1 else v


def mul(a: Terms, b: Terms, caps: Sequence[int], total: int | None = None) -> dict:
    """Truncated product of two aligned series."""
    if len(a) > len(b):
        a, b = b, a
    lay = _Layout(caps, total)
    adj, guard = lay.adj, lay.guard
    pa = [(lay.pack(k), sum(k), c) for k, c in a.items()]
    pb = [(lay.pack(k), sum(k), c) for k, c in b.items()]
    limit = total if total is not None else sum(caps)
    acc: dict[int, object] = {}
    get = acc.get
    for ka, da, ca in pa:
        room = limit - da
        for kb, db, cb in pb:
            if db > room:
                continue
            k = ka + kb
            if (k + adj) & guard:
                continue
            acc[k] = get(k, 0) + ca * cb
    return {lay.unpack(k): c for k, c in acc.items() if c}


def _by_degree(s: Terms, lay: _Layout):
    const = 0
    rest = []
    for k, c in s.items():
        d = sum(k)
        if d == 0:
            const = c
        elif c:
            rest.append((lay.pack(k), d, c))
    return const, rest


def _recurrence(seed, rest, lay: _Layout, weight, scale) -> dict:
    """Solve ``deg(m) * scale * f[m] = sum_k weight(deg k, deg p) * s_k * f[p]`` with ``p + k = m``.

    Monomials are settled in order of total degree; each settled term pushes
    its contributions forward, so no exponent subtraction is needed.
    """
    limit = lay.total if lay.total is not None else sum(lay.caps)
    adj, guard = lay.adj, lay.guard
    buckets: list[dict[int, object]] = [dict() for _ in range(limit + 1)]
    buckets[0][0] = seed
    out: dict[int, object] = {}
    for d in range(limit + 1):
        bucket = buckets[d]
        for key, acc in bucket.items():
            val = seed if d == 0 else _div(acc, d * scale)
            if not val:
                continue
            out[key] = val
            for kk, dk, ck in rest:
                dm = d + dk
                if dm > limit:
                    continue
                m = key + kk
                if (m + adj) & guard:
                    continue
                b = buckets[dm]
                b[m] = b.get(m, 0) + weight(dk, d) * ck * val
    return {lay.unpack(k): c for k, c in out.items()}


def power(s: Terms, n: int, caps: Sequence[int], total: int | None = None) -> dict:
    """``s ** n`` truncated; ``n`` may be negative when the constant term is nonzero."""
    nv = len(caps)
    zero = (0,) * nv
    if n == 0:
        return {zero: 1}
    lay = _Layout(caps, total)
    const, rest = _by_degree(s, lay)
    if not const:
        if n < 0:
            raise ZeroDivisionError("negative power of a series without constant term")
        result: dict = {zero: 1}
        base = dict(s)
        while n:
            if n & 1:
                result = mul(result, base, caps, total)
            n >>= 1
            if n:
                base = mul(base, base, caps, total)
        return result
    seed = Fraction(const) ** n
    if seed.denominator == 1:
        seed = seed.numerator
    return _recurrence(seed, rest, lay, lambda dk, dp: n * dk - dp, const)


def exp(s: Terms, caps: Sequence[int], total: int | None = None) -> dict:
    """``exp(s)`` truncated; ``s`` must have no constant term."""
    lay = _Layout(caps, total)
    const, rest = _by_degree(s, lay)
    if const:
        raise ValueError("exp needs a series with zero constant term")
    return _recurrence(1, rest, lay, lambda dk, dp: dk, 1)
