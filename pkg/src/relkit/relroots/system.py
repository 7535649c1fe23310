"""Projection to relative roots and the relative root system it produces."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from ..rootcore import Permutation, RootSystem, canonical_key, root_neg


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ProjectionSpec:
    """A Gamma-invariant set J of simple-root indices plus the group Gamma."""

    base: RootSystem
    J: tuple
    gamma: tuple

    @classmethod
    def make(cls, base: RootSystem, J, gamma=None) -> "ProjectionSpec":
        J = tuple(sorted(set(J)))
        if not all(0 <= j < base.rank for j in J):
            raise SpecError(f"J={J} out of range for {base.name}")
        if gamma is None:
            gamma = (Permutation(tuple(range(base.rank))),)
        gamma = tuple(sorted(set(gamma), key=lambda p: p.image))
        autos = set(base.automorphisms)
        for g in gamma:
            if g not in autos:
                raise SpecError(f"{g.image} is not a diagram automorphism of {base.name}")
        if not all(a.compose(b) in set(gamma) for a in gamma for b in gamma):
            raise SpecError("Gamma is not closed under composition")
        for g in gamma:
            if sorted(g(j) for j in J) != list(J):
                raise SpecError(f"J={J} is not invariant under {g.image}")
        return cls(base, J, gamma)

    @classmethod
    def split(cls, base: RootSystem) -> "ProjectionSpec":
        return cls.make(base, range(base.rank))

    @cached_property
    def orbits(self) -> list:
        seen = set()
        out = []
        for j in self.J:
            if j in seen:
                continue
            orb = sorted({g(j) for g in self.gamma})
            seen.update(orb)
            out.append(tuple(orb))
        return out

    @cached_property
    def coord_of(self) -> dict:
        return {j: k for k, orb in enumerate(self.orbits) for j in orb}

    @property
    def gamma_is_trivial(self) -> bool:
        return len(self.gamma) == 1

    def project(self, root) -> tuple:
        out = [0] * len(self.orbits)
        for j, k in self.coord_of.items():
            out[k] += root[j]
        return tuple(out)

    def describe(self) -> dict:
        return {
            "series": self.base.series,
            "rank": self.base.rank,
            "J": [j + 1 for j in self.J],
            "Gamma": [[i + 1 for i in g.image] for g in self.gamma],
        }

    @property
    def label(self) -> str:
        J = ",".join(str(j + 1) for j in self.J)
        tag = f"{self.base.name}:J={J}"
        if not self.gamma_is_trivial:
            tag += ":G=" + "|".join("".join(str(i + 1) for i in g.image) for g in self.gamma)
        return tag


def is_zero(v) -> bool:
    return not any(v)


def proportionality(a, b):
    """Return (r, s) with a = r u and b = s u for primitive u, or None if independent."""
    n = len(a)
    for k in range(n):
        for m in range(k + 1, n):
            if a[k] * b[m] - a[m] * b[k]:
                return None
    # dependent: find a common primitive direction
    k = next(i for i in range(n) if a[i] or b[i])
    ref = a if a[k] else b
    gu = 0
    for x in ref:
        gu = gcd(gu, x)
    u = tuple(x // gu for x in ref)
    if u[k] < 0:
        u = tuple(-x for x in u)
    return a[k] // u[k], b[k] // u[k]


def opposite_proportional(a, b) -> bool:
    """True if m a = -n b for some positive integers m, n."""
    rs = proportionality(a, b)
    return rs is not None and rs[0] * rs[1] < 0


class RelativeRootSystem:
    def __init__(self, spec: ProjectionSpec):
        self.spec = spec
        base = spec.base
        fibers: dict = {}
        zero = []
        for r in base.roots:
            p = spec.project(r)
            if is_zero(p):
                zero.append(r)
            else:
                fibers.setdefault(p, []).append(r)
        self.fibers = {k: sorted(v, key=canonical_key) for k, v in fibers.items()}
        self.zero_fiber = zero
        self.elements = sorted(self.fibers, key=canonical_key)
        self.element_set = frozenset(self.elements)
        self.rank = len(spec.orbits)
        self._pair_cache: dict = {}

    # basic structure

    @property
    def base(self) -> RootSystem:
        return self.spec.base

    def is_root(self, v) -> bool:
        return tuple(v) in self.element_set

    @cached_property
    def positive(self) -> list:
        return [a for a in self.elements if sum(a) > 0]

    @cached_property
    def simple(self) -> list:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    @cached_property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.elements)}

    def height(self, a) -> int:
        return sum(a)

    @cached_property
    def multiples(self) -> dict:
        """m_alpha: the largest k with k alpha a relative root."""
        out = {}
        for a in self.elements:
            k = 1
            while self.is_root(tuple((k + 1) * x for x in a)):
                k += 1
            out[a] = k
        return out

    @cached_property
    def highest(self) -> tuple:
        top = max(self.height(a) for a in self.elements)
        tops = [a for a in self.elements if self.height(a) == top]
        if len(tops) != 1:
            raise SpecError(f"no unique maximal-height relative root in {self.spec.label}")
        return tops[0]

    @cached_property
    def components(self) -> list:
        """Irreducible components as lists of simple relative root indices."""
        parent = list(range(self.rank))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.elements:
            support = [i for i, c in enumerate(a) if c]
            for i in support[1:]:
                parent[find(i)] = find(support[0])
        groups: dict = {}
        for i in range(self.rank):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    @property
    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    def maximal_elements(self) -> list:
        """Relative roots with no simple relative root that can be added."""
        return [a for a in self.elements
                if not any(self.is_root(_add(a, s)) for s in self.simple)]

    # brackets

    def pair_bracket(self, a, b) -> frozenset:
        """{i a + j b : i, j > 0} intersected with the relative roots."""
        key = (a, b)
        hit = self._pair_cache.get(key)
        if hit is not None:
            return hit
        rs = proportionality(a, b)
        if rs is None:
            out = self._bracket_independent(a, b)
        else:
            out = self._bracket_dependent(a, b, rs)
        self._pair_cache[key] = out
        return out

    @cached_property
    def _element_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(len(self.elements), self.rank)

    def _bracket_independent(self, a, b) -> frozenset:
        n = self.rank
        k = m = 0
        det = 0
        for k in range(n):
            for m in range(k + 1, n):
                det = a[k] * b[m] - a[m] * b[k]
                if det:
                    break
            if det:
                break
        G = self._element_array
        i_num = G[:, k] * b[m] - G[:, m] * b[k]
        j_num = a[k] * G[:, m] - a[m] * G[:, k]
        ok = (i_num % det == 0) & (j_num % det == 0)
        i = i_num // det
        j = j_num // det
        ok &= (i > 0) & (j > 0)
        A = np.array(a, dtype=np.int64)
        B = np.array(b, dtype=np.int64)
        ok &= np.all(G == i[:, None] * A[None, :] + j[:, None] * B[None, :], axis=1)
        return frozenset(self.elements[t] for t in np.nonzero(ok)[0])

    def _bracket_dependent(self, a, b, rs) -> frozenset:
        r, s = rs
        k = next(i for i in range(self.rank) if a[i])
        u_k = a[k] // r
        out = set()
        for g in self.elements:
            q = proportionality(a, g)
            if q is None:
                continue
            t = g[k] // u_k
            if _positive_combination(r, s, t):
                out.add(g)
        return frozenset(out)

    def bracket(self, S1, S2) -> frozenset:
        out = set()
        for a in S1:
            for b in S2:
                out |= self.pair_bracket(a, b)
        return frozenset(out)

    def is_minimal_in(self, x, S) -> bool:
        """x in S with no simple relative root sigma such that x - sigma is in S."""
        return x in S and not any(_sub(x, s) in S for s in self.simple)

    def is_maximal_in(self, x, S) -> bool:
        return x in S and not any(_add(x, s) in S for s in self.simple)

    # fibers

    def fiber(self, a) -> list:
        return self.fibers.get(tuple(a), [])

    def fiber_extremes(self, a) -> tuple:
        """Unique Pi-maximal and Pi-minimal roots of the fiber over a."""
        if not self.spec.gamma_is_trivial:
            raise SpecError("fiber extremes are defined here for trivial Gamma only")
        fib = self.fiber(a)
        if not fib:
            raise SpecError(f"empty fiber over {a}")
        maxs = fiber_maximal(self.base, fib)
        mins = fiber_minimal(self.base, fib)
        if len(maxs) != 1 or len(mins) != 1:
            raise SpecError(f"fiber over {a} has {len(maxs)} maximal and {len(mins)} minimal roots")
        return maxs[0], mins[0]

    def root_interval(self, a, b) -> tuple:
        """(m, n) such that the line a + Z b meets the relative roots in a - m b .. a + n b."""
        if proportionality(a, b) is not None:
            raise SpecError("root_interval needs linearly independent a, b")
        bound = 2 * max(max(abs(x) for x in e) for e in self.elements) + 2
        hits = [i for i in range(-bound, bound + 1) if self.is_root(_add(a, _scale(i, b)))]
        m, n = -min(hits), max(hits)
        if hits != list(range(-m, n + 1)):
            raise IntervalGap(a, b, hits)
        return m, n

    def to_json(self) -> dict:
        return {
            "case": self.spec.describe(),
            "rank": self.rank,
            "roots": [
                {"alpha": list(a), "fiber": [list(r) for r in self.fibers[a]]}
                for a in self.elements
            ],
        }


class IntervalGap(Exception):
    def __init__(self, a, b, hits):
        super().__init__(f"gap in line {a} + Z {b}: {hits}")
        self.a, self.b, self.hits = a, b, hits


def fiber_maximal(base: RootSystem, fib) -> list:
    fs = set(fib)
    return [r for r in fib if not any(_add(r, s) in fs for s in base.simple)]


def fiber_minimal(base: RootSystem, fib) -> list:
    fs = set(fib)
    return [r for r in fib if not any(_sub(r, s) in fs for s in base.simple)]


def _positive_combination(r: int, s: int, t: int) -> bool:
    """Is t = i r + j s for some integers i, j >= 1?"""
    if r > 0 and s > 0 or r < 0 and s < 0:
        if r < 0:
            r, s, t = -r, -s, -t
        i = 1
        while i * r + s <= t:
            if (t - i * r) % s == 0:
                return True
            i += 1
        return False
    g = gcd(r, s)
    return t % g == 0


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _scale(k, a):
    return tuple(k * x for x in a)


def neg(a):
    return root_neg(a)
