"""Exact integer polynomials and matrices with polynomial entries.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable
name, so polynomials over different variable sets mix freely.  A
``PolyMatrix`` maps monomials to dense int64 coefficient matrices.
"""
from __future__ import annotations

from itertools import product as _cartesian

import numpy as np

ONE = ()
_LIMIT = 1 << 52


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m, variables=None) -> int:
    if variables is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if v in variables)


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({ONE: c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, (Poly, int)) and self.terms == _lift(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)

    @property
    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def is_homogeneous(self, degree: int, variables=None) -> bool:
        return all(mono_degree(m, variables) == degree for m in self.terms)

    def substitute(self, values: dict) -> "Poly":
        """Replace variables by polynomials (or ints); others stay."""
        out = Poly()
        cache: dict = {}
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = _lift(values[v]) ** e
                    term = term * cache[key]
                else:
                    term = term * Poly({((v, e),): 1})
            out = out + term
        return out

    def evaluate(self, values: dict, ring=None):
        """Evaluate at integers, or at ring elements when a ring is given."""
        if ring is None:
            total = 0
            for m, c in self.terms.items():
                t = c
                for v, e in m:
                    t *= values[v] ** e
                total += t
            return total
        total = ring.zero
        for m, c in self.terms.items():
            t = ring.from_int(c)
            for v, e in m:
                t = ring.mul(t, ring.power(values[v], e))
            total = ring.add(total, t)
        return total

    def evaluate_batch(self, values: dict, ring):
        """Vectorized evaluation; values map variables to arrays of ring elements."""
        shape = np.shape(next(iter(values.values()))) if values else ()
        total = np.full(shape, ring.zero, dtype=np.int64)
        for m, c in self.terms.items():
            t = np.full(shape, ring.from_int(c), dtype=np.int64)
            for v, e in m:
                base = np.asarray(values[v])
                for _ in range(e):
                    t = ring.mul(t, base)
            total = ring.add(total, t)
        return total

    def to_json(self, variables) -> list:
        """[coefficient, exponent-vector] pairs over the given variable order."""
        pos = {v: i for i, v in enumerate(variables)}
        out = []
        for m, c in sorted(self.terms.items()):
            vec = [0] * len(variables)
            for v, e in m:
                vec[pos[v]] = e
            out.append([c, vec])
        return out


def _lift(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.const(int(x))


class PolyMatrix:
    """Square matrix whose entries are integer polynomials."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        for m, a in (terms or {}).items():
            if np.any(a):
                self.terms[m] = a

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(n, {ONE: np.eye(n, dtype=np.int64)})

    @classmethod
    def from_series(cls, mats, t: Poly) -> "PolyMatrix":
        """sum_k t^k mats[k] for integer matrices mats[0..]."""
        n = mats[0].shape[0]
        out = cls(n)
        power = Poly.const(1)
        for k, mk in enumerate(mats):
            if k:
                power = power * t
            if not np.any(mk):
                continue
            for m, c in power.terms.items():
                out._acc(m, c * mk)
        return out

    def _acc(self, m, a):
        if m in self.terms:
            s = self.terms[m] + a
            if np.any(s):
                self.terms[m] = s
            else:
                del self.terms[m]
        elif np.any(a):
            self.terms[m] = a.copy()

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        out = PolyMatrix(self.n)
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                out._acc(mono_mul(m1, m2), a @ b)
        out._guard()
        return out

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        out = PolyMatrix(self.n, dict(self.terms))
        for m, a in other.terms.items():
            out._acc(m, a)
        return out

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        out = PolyMatrix(self.n, dict(self.terms))
        for m, a in other.terms.items():
            out._acc(m, -a)
        return out

    def _guard(self):
        for a in self.terms.values():
            if np.abs(a).max() >= _LIMIT:
                raise OverflowError("polynomial matrix coefficients exceed the exact int64 range")

    def entry(self, i: int, j: int) -> Poly:
        return Poly({m: int(a[i, j]) for m, a in self.terms.items()})

    def is_identity(self) -> bool:
        eye = np.eye(self.n, dtype=np.int64)
        keys = set(self.terms)
        if keys - {ONE}:
            return False
        return np.array_equal(self.terms.get(ONE, np.zeros_like(eye)), eye)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix) or other.n != self.n:
            return False
        return (self - other).terms == {}

    def evaluate(self, values: dict) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=object)
        for m, a in self.terms.items():
            c = 1
            for v, e in m:
                c *= values[v] ** e
            out = out + c * a.astype(object)
        return out

    @property
    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}


def multilinear_values(vars_by_slot, ring_size: int):
    """All assignments of ring indices to the listed variables."""
    flat = [v for slot in vars_by_slot for v in slot]
    for combo in _cartesian(range(ring_size), repeat=len(flat)):
        yield dict(zip(flat, combo))
