"""Sparse truncated multivariate power series over exact rationals.

A series knows its variables, a degree cap per variable and optionally a cap
on total degree.  Terms beyond any cap are dropped, so every operation is the
exact result modulo the ideal of monomials above the caps.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import kernels
from .curves import MultilinearPolynomial, var_key

__all__ = ["TruncatedSeries", "CapError", "glue_series"]


class CapError(ValueError):
    """A coefficient beyond the expansion order was requested."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _min_total(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    __slots__ = ("variables", "caps", "total", "terms")

    def __init__(
        self,
        variables: Sequence[str],
        caps: Sequence[int] | Mapping[str, int] | int,
        terms: Mapping[tuple, int | Fraction] | None = None,
        total: int | None = None,
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        if isinstance(caps, int):
            caps = (caps,) * len(variables)
        elif isinstance(caps, Mapping):
            caps = tuple(caps[v] for v in variables)
        caps = tuple(caps)
        if len(caps) != len(variables) or any(c < 0 for c in caps):
            raise ValueError("need one non-negative cap per variable")
        order = sorted(range(len(variables)), key=lambda i: var_key(variables[i]))
        self.variables = tuple(variables[i] for i in order)
        self.caps = tuple(caps[i] for i in order)
        self.total = total
        out = {}
        for k, c in (terms or {}).items():
            if len(k) != len(order):
                raise ValueError(f"exponent {k} does not match {len(order)} variables")
            k = tuple(k[i] for i in order)
            if not c or any(e > cap for e, cap in zip(k, self.caps)):
                continue
            if total is not None and sum(k) > total:
                continue
            out[k] = _norm(c)
        self.terms = out

    @classmethod
    def _make(cls, variables, caps, terms, total):
        s = object.__new__(cls)
        s.variables, s.caps, s.terms, s.total = variables, caps, terms, total
        return s

    # constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, value, variables: Sequence[str] = (), caps=0, total: int | None = None) -> "TruncatedSeries":
        return cls(variables, caps, {(0,) * len(tuple(variables)): value}, total)

    @classmethod
    def from_polynomial(
        cls,
        poly: MultilinearPolynomial | Mapping,
        variables: Sequence[str] | None = None,
        caps=1,
        total: int | None = None,
    ) -> "TruncatedSeries":
        """Embed a multilinear polynomial (or ``{monomial: coeff}`` with monomials as variable multisets)."""
        terms_in = poly.terms if isinstance(poly, MultilinearPolynomial) else poly
        if variables is None:
            variables = sorted({v for m in terms_in for v in m}, key=var_key)
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        terms: dict[tuple, int] = {}
        for mono, c in terms_in.items():
            e = [0] * len(variables)
            for v in mono:
                if v not in index:
                    raise ValueError(f"variable {v!r} not in {variables}")
                e[index[v]] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        return cls(variables, caps, terms, total)

    # layout ---------------------------------------------------------------

    def cap_of(self, name: str) -> int:
        return self.caps[self.variables.index(name)]

    def _embed(self, variables: tuple[str, ...], caps: tuple[int, ...], total) -> dict:
        if variables == self.variables and caps == self.caps and total == self.total:
            return self.terms
        pos = [variables.index(v) for v in self.variables]
        n = len(variables)
        out = {}
        for k, c in self.terms.items():
            e = [0] * n
            for p, x in zip(pos, k):
                e[p] = x
            if any(x > caps[p] for p, x in zip(pos, k)):
                continue
            if total is not None and sum(k) > total:
                continue
            out[tuple(e)] = c
        return out

    def _common(self, other: "TruncatedSeries"):
        names = sorted(set(self.variables) | set(other.variables), key=var_key)
        mine = dict(zip(self.variables, self.caps))
        theirs = dict(zip(other.variables, other.caps))
        caps = []
        for v in names:
            if v in mine and v in theirs:
                caps.append(min(mine[v], theirs[v]))
            else:
                caps.append(mine.get(v, theirs.get(v)))
        variables, caps = tuple(names), tuple(caps)
        total = _min_total(self.total, other.total)
        return variables, caps, total, self._embed(variables, caps, total), other._embed(variables, caps, total)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.variables, self.caps, self.total)
        if isinstance(other, MultilinearPolynomial):
            return TruncatedSeries.from_polynomial(other, caps=1)
        raise TypeError(f"cannot combine series with {type(other).__name__}")

    def truncate(self, caps: Mapping[str, int] | None = None, total: int | None = None) -> "TruncatedSeries":
        """Lower caps (never raises them)."""
        new = tuple(min(c, caps.get(v, c)) if caps else c for v, c in zip(self.variables, self.caps))
        total = _min_total(self.total, total)
        return TruncatedSeries._make(self.variables, new, self._embed(self.variables, new, total), total)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        variables, caps, total, a, b = self._common(other)
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return TruncatedSeries._make(variables, caps, out, total)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries._make(self.variables, self.caps, {k: -c for k, c in self.terms.items()}, self.total)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            if not other:
                return TruncatedSeries._make(self.variables, self.caps, {}, self.total)
            return TruncatedSeries._make(
                self.variables, self.caps, {k: _norm(c * other) for k, c in self.terms.items()}, self.total
            )
        other = self._coerce(other)
        variables, caps, total, a, b = self._common(other)
        return TruncatedSeries._make(variables, caps, kernels.mul(a, b, caps, total), total)

    __rmul__ = __mul__

    def power(self, n: int) -> "TruncatedSeries":
        """``self ** n``; negative ``n`` needs a nonzero constant term."""
        if n < 0 and not self.constant_term():
            raise ZeroDivisionError("negative power of a series whose constant term is 0")
        return TruncatedSeries._make(
            self.variables, self.caps, kernels.power(self.terms, n, self.caps, self.total), self.total
        )

    __pow__ = power

    def reciprocal(self) -> "TruncatedSeries":
        return self.power(-1)

    def exp(self) -> "TruncatedSeries":
        if self.constant_term():
            raise ValueError("exp needs a series with zero constant term")
        return TruncatedSeries._make(self.variables, self.caps, kernels.exp(self.terms, self.caps, self.total), self.total)

    # access ---------------------------------------------------------------

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), 0)

    def _exponent(self, exps: Mapping[str, int] | Sequence[int]) -> tuple:
        if isinstance(exps, Mapping):
            unknown = set(exps) - set(self.variables)
            if unknown:
                raise KeyError(f"unknown variables {sorted(unknown)}")
            return tuple(exps.get(v, 0) for v in self.variables)
        exps = tuple(exps)
        if len(exps) != len(self.variables):
            raise ValueError("exponent vector length mismatch")
        return exps

    def coefficient(self, exps: Mapping[str, int] | Sequence[int]):
        """Exact coefficient of a monomial; ``CapError`` beyond the expansion order."""
        k = self._exponent(exps)
        for v, e, cap in zip(self.variables, k, self.caps):
            if e < 0:
                raise ValueError(f"negative exponent for {v}")
            if e > cap:
                raise CapError(f"exponent {e} of {v} exceeds cap {cap}")
        if self.total is not None and sum(k) > self.total:
            raise CapError(f"total degree {sum(k)} exceeds cap {self.total}")
        return self.terms.get(k, 0)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.caps == other.caps
            and self.total == other.total
            and self.terms == other.terms
        )

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality of the two series on their common caps."""
        variables, caps, total, a, b = self._common(other)
        return a == b

    def __str__(self):
        if not self.terms:
            return "0"
        def key(item):
            k, _ = item
            return (sum(k), tuple(-x for x in k))
        parts = []
        for i, (k, c) in enumerate(sorted(self.terms.items(), key=key)):
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, k) if e)
            mag = abs(c)
            text = str(mag) if not body else body if mag == 1 else f"{mag}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append(("-" + text if c < 0 else text) if i == 0 else f"{sign} {text}")
        return " ".join(parts)

    def __repr__(self):
        return f"TruncatedSeries({self.variables}, caps={self.caps}, total={self.total}, {len(self.terms)} terms)"


def _split(s: TruncatedSeries, names: Iterable[str]):
    """Group terms by the exponents of ``names``; the rest forms a residual key."""
    names = list(names)
    pos = [s.variables.index(v) if v in s.variables else None for v in names]
    keep = [i for i, v in enumerate(s.variables) if v not in names]
    groups: dict[tuple, dict[tuple, object]] = {}
    for k, c in s.terms.items():
        g = tuple(k[p] if p is not None else 0 for p in pos)
        groups.setdefault(g, {})[tuple(k[i] for i in keep)] = c
    return groups, tuple(s.variables[i] for i in keep), tuple(s.caps[i] for i in keep)


def glue_series(
    F: TruncatedSeries,
    leg_1: tuple[str, str],
    leg_2: tuple[str, str],
    new: str,
    other: TruncatedSeries | None = None,
) -> TruncatedSeries:
    """Join legs ``leg_1 = (A1, A1bar)`` and ``leg_2 = (A2, A2bar)`` into an internal line ``new``.

    A term ``A1^p1 A1bar^q1 A2^p2 A2bar^q2 R`` survives only when ``p1 == q2``
    and ``q1 == p2``; it becomes ``(-1)**p1 * new**(p1 + p2) * R``.  This is
    the residue of the unit-circle contour prescription evaluated exactly.

    With ``other`` given, glues ``F * other`` without forming the product;
    ``leg_1`` must then belong to ``F`` and ``leg_2`` to ``other``.
    """
    a1, a1b = leg_1
    a2, a2b = leg_2
    if other is None:
        missing = {a1, a1b, a2, a2b} - set(F.variables)
        if missing:
            raise KeyError(f"series lacks variables {sorted(missing)}")
        if new in F.variables:
            raise ValueError(f"{new!r} already a variable")
        groups, rest_vars, rest_caps = _split(F, (a1, a1b, a2, a2b))
        n_cap = min(F.cap_of(a1), F.cap_of(a1b), F.cap_of(a2), F.cap_of(a2b))
        total = None if F.total is None else F.total - n_cap
        variables = rest_vars + (new,)
        caps = rest_caps + (n_cap,)
        out: dict[tuple, object] = {}
        for (p1, q1, p2, q2), residual in groups.items():
            if p1 != q2 or q1 != p2 or p1 + p2 > n_cap:
                continue
            sign = -1 if p1 % 2 else 1
            for r, c in residual.items():
                k = r + (p1 + p2,)
                if total is not None and sum(k) > total:
                    continue
                out[k] = out.get(k, 0) + sign * c
        return TruncatedSeries(variables, caps, out, total)

    missing = ({a1, a1b} - set(F.variables)) | ({a2, a2b} - set(other.variables))
    if missing:
        raise KeyError(f"series lack variables {sorted(missing)}")
    if set(F.variables) & set(other.variables):
        raise ValueError("glued factors must have disjoint variables")
    gF, vF, cF = _split(F, (a1, a1b))
    gG, vG, cG = _split(other, (a2, a2b))
    n_cap = min(F.cap_of(a1), F.cap_of(a1b), other.cap_of(a2), other.cap_of(a2b))
    total = _min_total(F.total, other.total)
    variables = vF + vG + (new,)
    caps = cF + cG + (n_cap,)
    out = {}
    for (p1, q1), rF in gF.items():
        rG = gG.get((q1, p1))  # p2 = q1, q2 = p1
        if rG is None or p1 + q1 > n_cap:
            continue
        sign = -1 if p1 % 2 else 1
        for kf, cf in rF.items():
            for kg, cg in rG.items():
                k = kf + kg + (p1 + q1,)
                if total is not None and sum(k) > total:
                    continue
                out[k] = out.get(k, 0) + sign * cf * cg
    return TruncatedSeries(variables, caps, out, total)
