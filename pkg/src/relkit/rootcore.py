"""Irreducible reduced root systems in the simple-root basis.

Roots are integer tuples of length ``rank``.  Simple roots follow Bourbaki
numbering.  The canonical order on roots sorts by height, then
lexicographically on the coefficient tuple.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

from .config import MAX_RANK, SERIES_RANKS

Root = tuple


class RootSystemError(ValueError):
    pass


def _gram_matrix(series: str, rank: int) -> list[list[int]]:
    """Symmetric bilinear form on simple roots, short roots of squared length 2."""
    if series not in SERIES_RANKS or rank not in SERIES_RANKS[series]:
        raise RootSystemError(f"unsupported root system {series}{rank} (rank cap {MAX_RANK})")
    n = rank
    lengths = [2] * n
    edges: list[tuple[int, int]] = []
    if series == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif series == "B":
        lengths = [4] * (n - 1) + [2]
        edges = [(i, i + 1) for i in range(n - 1)]
    elif series == "C":
        lengths = [2] * (n - 1) + [4]
        edges = [(i, i + 1) for i in range(n - 1)]
    elif series == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif series == "E":
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, n - 1)]
    elif series == "F":
        lengths = [4, 4, 2, 2]
        edges = [(0, 1), (1, 2), (2, 3)]
    elif series == "G":
        lengths = [2, 6]
        edges = [(0, 1)]
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = lengths[i]
    for i, j in edges:
        # adjacent nodes: (a, b) = -max(|a|^2, |b|^2) / 2
        val = -max(lengths[i], lengths[j]) // 2
        gram[i][j] = gram[j][i] = val
    return gram


def cartan_matrix(series: str, rank: int) -> list[list[int]]:
    """cartan[i][j] = <a_i, a_j^vee> = 2 (a_i, a_j) / (a_j, a_j)."""
    gram = _gram_matrix(series, rank)
    return [[2 * gram[i][j] // gram[j][j] for j in range(rank)] for i in range(rank)]


def _positive_roots_by_strings(cartan: list[list[int]]) -> list[Root]:
    """Positive roots grown height by height from root strings.

    For a positive root r and simple a_i with r != a_i, r + a_i is a root
    iff p - <r, a_i^vee> > 0, where p is the largest k with r - k a_i a root.
    """
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for r in layer:
            for i in range(n):
                if r == simple[i]:
                    continue
                p = 0
                probe = list(r)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in found:
                        p += 1
                    else:
                        break
                pairing = sum(r[k] * cartan[k][i] for k in range(n))
                if p - pairing > 0:
                    s = list(r)
                    s[i] += 1
                    s = tuple(s)
                    if s not in found:
                        found.add(s)
                        nxt.append(s)
        layer = nxt
    return sorted(found, key=canonical_key)


def reflection_closure(cartan: list[list[int]]) -> set[Root]:
    """All roots as the orbit of the simple roots under simple reflections."""
    n = len(cartan)
    start = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(start)
    todo = list(start)
    while todo:
        x = todo.pop()
        for j in range(n):
            c = sum(x[k] * cartan[k][j] for k in range(n))
            if c:
                y = list(x)
                y[j] -= c
                y = tuple(y)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
    return seen


def canonical_key(root) -> tuple:
    return (sum(root), tuple(root))


def root_sum(a, b) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def root_neg(a) -> Root:
    return tuple(-x for x in a)


def root_scale(k: int, a) -> Root:
    return tuple(k * x for x in a)


@dataclass(frozen=True)
class Permutation:
    """Permutation of simple-root indices: image[i] is where node i goes."""

    image: tuple

    def __call__(self, i: int) -> int:
        return self.image[i]

    def compose(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) = self(other(i))
        return Permutation(tuple(self.image[j] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def act(self, root) -> Root:
        out = [0] * len(root)
        for i, c in enumerate(root):
            out[self.image[i]] = c
        return tuple(out)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))


@dataclass
class RootSystem:
    series: str
    rank: int
    cartan: list = field(repr=False)
    gram: list = field(repr=False)
    roots: list = field(repr=False)

    @classmethod
    def build(cls, series: str, rank: int) -> "RootSystem":
        series = series.upper()
        gram = _gram_matrix(series, rank)
        cartan = cartan_matrix(series, rank)
        pos = _positive_roots_by_strings(cartan)
        roots = sorted(pos + [root_neg(r) for r in pos], key=canonical_key)
        return cls(series, rank, cartan, gram, roots)

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    @cached_property
    def index(self) -> dict:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @cached_property
    def positive(self) -> list:
        return [r for r in self.roots if sum(r) > 0]

    @cached_property
    def simple(self) -> list:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    @cached_property
    def highest_root(self) -> Root:
        return self.roots[-1]

    def height(self, root) -> int:
        return sum(root)

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_set

    def root_sum(self, a, b) -> Root | None:
        """a + b if it is a root of the system, else None."""
        s = root_sum(a, b)
        return s if s in self.root_set else None

    def inner(self, a, b) -> int:
        g = self.gram
        n = self.rank
        return sum(a[i] * g[i][j] * b[j] for i in range(n) if a[i] for j in range(n) if b[j])

    def norm2(self, a) -> int:
        return self.inner(a, a)

    def pairing(self, a, b) -> int:
        """<a, b^vee> = 2 (a, b) / (b, b)."""
        return 2 * self.inner(a, b) // self.norm2(b)

    def string_bounds(self, a, b) -> tuple[int, int]:
        """(p, q) with b - p a, ..., b + q a the a-string through b."""
        p = 0
        while self.is_root(root_sum(b, root_scale(-(p + 1), a))):
            p += 1
        q = 0
        while self.is_root(root_sum(b, root_scale(q + 1, a))):
            q += 1
        return p, q

    def reflect(self, x, j: int) -> Root:
        c = sum(x[k] * self.cartan[k][j] for k in range(self.rank))
        y = list(x)
        y[j] -= c
        return tuple(y)

    @cached_property
    def automorphisms(self) -> list:
        """Diagram automorphisms: node permutations preserving the Cartan matrix."""
        return diagram_automorphisms(self.cartan)

    def automorphism_subgroups(self) -> list:
        return subgroups(self.automorphisms)

    def extended_diagram(self) -> dict:
        """Nodes 0..rank-1 are simple roots, node ``rank`` is minus the highest root."""
        nodes = list(self.simple) + [root_neg(self.highest_root)]
        labels = [f"a{i + 1}" for i in range(self.rank)] + ["-h"]
        edges = []
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if self.inner(nodes[i], nodes[j]) != 0:
                    bond = self.pairing(nodes[i], nodes[j]) * self.pairing(nodes[j], nodes[i])
                    edges.append((i, j, bond))
        return {"nodes": labels, "roots": nodes, "edges": edges}

    def to_json(self) -> dict:
        return {
            "series": self.series,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "roots": [list(r) for r in self.roots],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def diagram_automorphisms(cartan) -> list:
    n = len(cartan)
    found = []

    def extend(partial: list, used: set):
        k = len(partial)
        if k == n:
            found.append(Permutation(tuple(partial)))
            return
        for img in range(n):
            if img in used:
                continue
            if cartan[k][k] != cartan[img][img]:
                continue
            ok = all(
                cartan[k][m] == cartan[img][partial[m]] and cartan[m][k] == cartan[partial[m]][img]
                for m in range(k)
            )
            if ok:
                partial.append(img)
                used.add(img)
                extend(partial, used)
                partial.pop()
                used.discard(img)

    extend([], set())
    found.sort(key=lambda p: p.image)
    return found


def subgroups(group: list) -> list:
    """All subgroups of a small permutation group, each as a sorted tuple."""
    ident = next(p for p in group if p.is_identity)
    others = [p for p in group if not p.is_identity]
    result = set()
    for k in range(len(others) + 1):
        for subset in itertools.combinations(others, k):
            elems = {ident, *subset}
            if all(a.compose(b) in elems for a in elems for b in elems):
                result.add(tuple(sorted(elems, key=lambda p: p.image)))
    return sorted(result, key=lambda s: (len(s), [p.image for p in s]))


def all_systems(max_rank: int = MAX_RANK):
    for series, ranks in SERIES_RANKS.items():
        for r in ranks:
            if r <= max_rank:
                yield series, r


def parse_system(name: str) -> tuple[str, int]:
    name = name.strip()
    try:
        return name[0].upper(), int(name[1:])
    except (ValueError, IndexError):
        raise RootSystemError(f"cannot parse root system name {name!r}") from None
