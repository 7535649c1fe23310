"""Small finite commutative rings given by addition and multiplication tables.

Elements are the integers 0..size-1.  Supported constructions are Z/n,
F_p[x]/(f) (which covers F_q and truncated polynomial rings F_p[t]/(t^k)),
and quotients R/I.  All operations accept numpy arrays elementwise.
"""
from __future__ import annotations

import itertools
import re
from functools import cached_property

import numpy as np


class RingError(ValueError):
    pass


class FiniteRing:
    def __init__(self, name: str, add, mul, labels, modulus: int | None = None,
                 char: int | None = None):
        self.name = name
        self.add_table = np.asarray(add, dtype=np.int64)
        self.mul_table = np.asarray(mul, dtype=np.int64)
        self.size = len(labels)
        self.labels = list(labels)
        self.modulus = modulus
        self.zero = 0
        self.one = int(self._find_one())
        self.neg_table = np.array([int(np.nonzero(self.add_table[a] == 0)[0][0])
                                   for a in range(self.size)], dtype=np.int64)
        self.char = char

    def _find_one(self):
        for e in range(self.size):
            if np.array_equal(self.mul_table[e], np.arange(self.size)):
                return e
        raise RingError("ring has no multiplicative identity")

    def __repr__(self):
        return f"FiniteRing({self.name})"

    # arithmetic, vectorized through the tables

    def add(self, a, b):
        return self.add_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def from_int(self, z: int) -> int:
        z = int(z)
        out = self.zero
        step = self.one if z >= 0 else int(self.neg_table[self.one])
        for _ in range(abs(z) % (self.additive_order or abs(z) + 1)):
            out = int(self.add_table[out, step])
        return out

    @cached_property
    def additive_order(self) -> int:
        x, k = self.one, 1
        while x != self.zero:
            x = int(self.add_table[x, self.one])
            k += 1
        return k

    def power(self, a, e: int):
        out = np.full(np.shape(a), self.one, dtype=np.int64) if np.ndim(a) else self.one
        for _ in range(e):
            out = self.mul_table[out, a]
        return out

    @cached_property
    def units(self) -> list:
        return [a for a in range(self.size) if self.one in self.mul_table[a]]

    def inverse(self, a: int) -> int:
        hits = np.nonzero(self.mul_table[a] == self.one)[0]
        if not len(hits):
            raise RingError(f"{self.labels[a]} is not a unit in {self.name}")
        return int(hits[0])

    def is_unit(self, a: int) -> bool:
        return a in set(self.units)

    def format(self, a: int) -> str:
        return self.labels[a]

    def parse(self, text: str) -> int:
        text = text.strip()
        if text in self.labels:
            return self.labels.index(text)
        raise RingError(f"{text!r} is not an element of {self.name}")

    @cached_property
    def additive_generators(self) -> list:
        """A small generating set of (R, +), chosen greedily in element order."""
        span = {self.zero}
        gens = []
        for a in range(self.size):
            if a in span:
                continue
            gens.append(a)
            span = self._additive_span(gens)
        return gens

    def _additive_span(self, gens) -> set:
        span = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.add_table[x, g])
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
        return span

    # ideals

    def ideal_generated(self, gens) -> frozenset:
        multiples = {int(self.mul_table[r, g]) for g in gens for r in range(self.size)}
        return frozenset(self._additive_span(sorted(multiples)))

    @cached_property
    def ideals(self) -> list:
        """All ideals, sorted by size then elements: principal ideals closed under sums."""
        found = {self.ideal_generated([a]) for a in range(self.size)}
        changed = True
        while changed:
            changed = False
            for I, K in itertools.combinations(list(found), 2):
                S = self.ideal_generated(sorted(I | K))
                if S not in found:
                    found.add(S)
                    changed = True
        return sorted(found, key=lambda I: (len(I), sorted(I)))

    @cached_property
    def maximal_ideals(self) -> list:
        proper = [I for I in self.ideals if len(I) < self.size]
        return [I for I in proper if not any(I < K for K in proper)]

    @property
    def is_local(self) -> bool:
        return len(self.maximal_ideals) == 1

    def ideal_label(self, I) -> str:
        if len(I) == 1:
            return "0"
        if len(I) == self.size:
            return "R"
        gens = self.ideal_generators(I)
        return "(" + ",".join(self.labels[g] for g in gens) + ")"

    def ideal_generators(self, I) -> list:
        gens = []
        span = frozenset([self.zero])
        for a in sorted(I):
            if a not in span:
                gens.append(a)
                span = self.ideal_generated(gens)
        return gens

    def quotient(self, I):
        """(R/I, residue map as an array over elements of R)."""
        I = frozenset(I)
        if self.one in I:
            raise RingError("quotient by the unit ideal is the zero ring; not supported")
        rep_of = {}
        reps = []
        for a in range(self.size):
            coset = frozenset(int(self.add_table[a, i]) for i in I)
            key = min(coset)
            if key not in rep_of:
                rep_of[key] = len(reps)
                reps.append(key)
        residue = np.array([rep_of[min(int(self.add_table[a, i]) for i in I)]
                            for a in range(self.size)], dtype=np.int64)
        k = len(reps)
        add = [[int(residue[self.add_table[reps[x], reps[y]]]) for y in range(k)] for x in range(k)]
        mul = [[int(residue[self.mul_table[reps[x], reps[y]]]) for y in range(k)] for x in range(k)]
        labels = [self.labels[r] for r in reps]
        name = f"{self.name}/{self.ideal_label(I)}"
        modulus = k if self.modulus and _is_zmod_table(add, mul) else None
        return FiniteRing(name, add, mul, labels, modulus=modulus, char=None), residue

    def describe(self) -> dict:
        return {"name": self.name, "size": self.size, "local": self.is_local,
                "ideals": [self.ideal_label(I) for I in self.ideals]}


def _is_zmod_table(add, mul) -> bool:
    k = len(add)
    return all(add[x][y] == (x + y) % k and mul[x][y] == (x * y) % k
               for x in range(k) for y in range(k))


def zmod(n: int) -> FiniteRing:
    if n < 2:
        raise RingError("Z/n needs n >= 2")
    idx = np.arange(n)
    add = (idx[:, None] + idx[None, :]) % n
    mul = (idx[:, None] * idx[None, :]) % n
    name = f"F{n}" if _is_prime(n) else f"Z/{n}"
    return FiniteRing(name, add, mul, [str(i) for i in range(n)], modulus=n, char=n)


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def poly_quotient(p: int, f, var: str = "t", name: str | None = None) -> FiniteRing:
    """F_p[var]/(f) with f a monic coefficient list, lowest degree first."""
    if not _is_prime(p):
        raise RingError("base field must be prime")
    f = [c % p for c in f]
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        raise RingError("modulus must be monic of degree >= 1")
    elems = list(itertools.product(range(p), repeat=d))  # little-endian coefficient tuples
    elems.sort(key=lambda c: sum(ci * p ** i for i, ci in enumerate(c)))
    index = {c: i for i, c in enumerate(elems)}

    def mulpoly(a, b):
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d + 1):
                    prod[k - d + i] = (prod[k - d + i] - c * f[i]) % p
        return tuple(prod[:d])

    q = len(elems)
    add = [[index[tuple((x + y) % p for x, y in zip(a, b))] for b in elems] for a in elems]
    mul = [[index[mulpoly(a, b)] for b in elems] for a in elems]
    labels = [_poly_label(c, var) for c in elems]
    if name is None:
        name = f"F{p}[{var}]/({_poly_label(tuple(f), var)})"
    assert q == p ** d
    return FiniteRing(name, add, mul, labels, char=p)


def _poly_label(coeffs, var: str) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) if parts else "0"


def _irreducible(p: int, d: int) -> list:
    """Lexicographically first monic irreducible polynomial of degree d over F_p."""
    for tail in itertools.product(range(p), repeat=d):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        if all(_has_no_factor(f, p, k) for k in range(1, d // 2 + 1)):
            return f
    raise RingError("no irreducible polynomial found")


def _has_no_factor(f, p, k) -> bool:
    for tail in itertools.product(range(p), repeat=k):
        g = list(tail) + [1]
        if _polymod(f, g, p) == [0] * k:
            return False
    return True


def _polymod(f, g, p):
    r = list(f)
    dg = len(g) - 1
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            for i in range(dg + 1):
                r[k - dg + i] = (r[k - dg + i] - c * g[i]) % p
    return r[:dg]


def galois_field(q: int) -> FiniteRing:
    for p in range(2, q + 1):
        if _is_prime(p):
            d, x = 0, q
            while x % p == 0:
                x //= p
                d += 1
            if x == 1 and d >= 1:
                break
    else:
        raise RingError(f"{q} is not a prime power")
    if d == 1:
        return zmod(p)
    return poly_quotient(p, _irreducible(p, d), var="x", name=f"F{q}")


_TRUNC = re.compile(r"^F(\d+)\[(\w)\]/\(\2\^(\d+)\)$")


def parse_ring(text: str) -> FiniteRing:
    """Ring from a descriptor: F5, F4, Z4, Z/4, F2[t]/(t^2)."""
    s = text.replace(" ", "")
    m = _TRUNC.match(s)
    if m:
        p, var, k = int(m.group(1)), m.group(2), int(m.group(3))
        return poly_quotient(p, [0] * k + [1], var=var, name=f"F{p}[{var}]/({var}^{k})")
    m = re.match(r"^Z/?(\d+)$", s)
    if m:
        return zmod(int(m.group(1)))
    m = re.match(r"^F(\d+)$", s)
    if m:
        return galois_field(int(m.group(1)))
    raise RingError(f"cannot parse ring descriptor {text!r}")


def matmul(ring: FiniteRing, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batched matrix product over the ring; shapes (..., n, k) and (..., k, m)."""
    if ring.modulus:
        return np.matmul(A, B) % ring.modulus
    k = A.shape[-1]
    out = None
    for j in range(k):
        term = ring.mul_table[A[..., :, j][..., :, None], B[..., j, :][..., None, :]]
        out = term if out is None else ring.add_table[out, term]
    return out


def identity(ring: FiniteRing, n: int) -> np.ndarray:
    out = np.full((n, n), ring.zero, dtype=np.int64)
    np.fill_diagonal(out, ring.one)
    return out


def integer_matrix(ring: FiniteRing, M: np.ndarray) -> np.ndarray:
    """Image of an integer matrix under Z -> R."""
    vals = {int(v): ring.from_int(int(v)) for v in np.unique(M)}
    out = np.vectorize(lambda v: vals[int(v)], otypes=[np.int64])(M)
    return out
