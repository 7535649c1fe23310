"""Finite presentations of relative Steinberg groups over finite rings.

There is one generator per relative root alpha and nonzero v in V_alpha
tensor R.  Relators encode the sum relation
    X(v) X(w) = X(v + w) prod_{i >= 2} X_{i alpha}(q^i(v, w))
and, for every pair of roots that are not opposite multiples,
    [X_alpha(u), X_beta(v)] = prod_gamma X_gamma(N(u, v)),
with the coefficient maps of the relative calculus evaluated in R.

Words are lists of columns: generator g is column 2g and its inverse 2g + 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..grouplab.cases import GroupCase
from ..relroots.system import _scale
from ..rings import identity, matmul


def inverse_word(word) -> list:
    return [x ^ 1 for x in reversed(word)]


def free_reduce(word) -> list:
    out: list = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    while len(out) > 1 and out[0] == out[-1] ^ 1:
        out = out[1:-1]
    return out


def canonical_relator(word) -> tuple:
    """Least rotation of the word or its inverse, for deduplication."""
    best = None
    for w in (word, inverse_word(word)):
        for k in range(len(w)):
            r = tuple(w[k:] + w[:k])
            if best is None or r < best:
                best = r
    return best


@dataclass
class Presentation:
    case: GroupCase
    generators: list        # (alpha, v) with v a tuple of ring elements
    relators: list          # column words
    tags: list              # "sum" or "commutator", one per relator

    def __post_init__(self):
        self.index = {g: k for k, g in enumerate(self.generators)}

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def letter(self, alpha, v, inverse: bool = False) -> list:
        v = tuple(int(x) for x in v)
        if all(x == self.case.ring.zero for x in v):
            return []
        return [2 * self.index[(tuple(alpha), v)] + int(inverse)]

    def generator_matrices(self) -> np.ndarray:
        """Matrices of all columns, shape (2 * ngens, n, n)."""
        real = self.case.real
        out = []
        for alpha, v in self.generators:
            out.append(real.X(alpha, np.asarray(v)[None])[0])
            out.append(real.X_inv(alpha, np.asarray(v)[None])[0])
        return np.stack(out)

    def evaluate(self, word) -> np.ndarray:
        mats = self.generator_matrices()
        ring = self.case.ring
        M = identity(ring, mats.shape[1])
        for x in word:
            M = matmul(ring, M, mats[x])
        return M

    def relator_violations(self) -> list:
        """Indices of relators whose image is not the identity matrix."""
        mats = self.generator_matrices()
        ring = self.case.ring
        one = identity(ring, mats.shape[1])
        bad = []
        for k, w in enumerate(self.relators):
            M = one
            for x in w:
                M = matmul(ring, M, mats[x])
            if not np.array_equal(M, one):
                bad.append(k)
        return bad

    def level_generators(self, ideal) -> list:
        """Generator ids with every coordinate of v in the ideal."""
        ideal = set(ideal)
        return [k for k, (_, v) in enumerate(self.generators) if set(v) <= ideal]

    # text exchange format

    def to_text(self) -> str:
        ring = self.case.ring
        lines = [f"# {self.case.label}: {self.ngens} generators, {len(self.relators)} relators"]
        for k, (alpha, v) in enumerate(self.generators):
            lines.append(f"gen {k + 1} alpha={','.join(map(str, alpha))} "
                         f"v={','.join(ring.format(x) for x in v)}")
        for w, tag in zip(self.relators, self.tags):
            lines.append("rel " + " ".join(_signed(x) for x in w) + f"  # {tag}")
        return "\n".join(lines) + "\n"


def _signed(x: int) -> str:
    g = x // 2 + 1
    return str(-g if x & 1 else g)


def parse_text(text: str) -> tuple:
    """(generators, relators, tags) from the exchange format; generators keep their labels."""
    gens, rels, tags = [], [], []
    for line in text.splitlines():
        body, _, comment = line.partition("#")
        parts = body.split()
        if not parts:
            continue
        if parts[0] == "gen":
            fields = dict(p.split("=", 1) for p in parts[2:])
            alpha = tuple(int(x) for x in fields["alpha"].split(","))
            gens.append((int(parts[1]), alpha, tuple(fields["v"].split(","))))
        elif parts[0] == "rel":
            rels.append([2 * (abs(int(t)) - 1) + (int(t) < 0) for t in parts[1:]])
            tags.append(comment.strip() or None)
        else:
            raise ValueError(f"unrecognized line {line!r}")
    return gens, rels, tags


def _evaluate_coords(case: GroupCase, polys, assignment) -> np.ndarray:
    """Evaluate a list of coordinate polynomials; result shape (S, len(polys))."""
    cols = [case.real.evaluate(p, assignment) for p in polys]
    return np.stack(cols, axis=1)


def presentation(case: GroupCase) -> Presentation:
    calc = case.calc
    ring = case.ring
    roots = case.roots
    gens = []
    for alpha in roots:
        for v in case.module_elements(alpha):
            gens.append((tuple(alpha), tuple(int(x) for x in v)))
    pres = Presentation(case, gens, [], [])
    seen: dict = {}

    def add(word, tag):
        w = free_reduce(word)
        if not w:
            return
        key = canonical_relator(w)
        if key not in seen:
            seen[key] = len(pres.relators)
            pres.relators.append(w)
            pres.tags.append(tag)

    for alpha in roots:
        vecs = case.module_elements(alpha)
        if not len(vecs):
            continue
        d = calc.dim(alpha)
        V, W = (np.repeat(vecs, len(vecs), axis=0), np.tile(vecs, (len(vecs), 1)))
        assign = {f"v{k}": V[:, k] for k in range(d)}
        assign.update({f"w{k}": W[:, k] for k in range(d)})
        q = calc.q(alpha)
        higher = {i: _evaluate_coords(case, q[i], assign) for i in sorted(q)}
        S = ring.add(V, W)
        for s in range(len(V)):
            rhs = pres.letter(alpha, S[s])
            for i in sorted(higher):
                rhs += pres.letter(_scale(i, alpha), higher[i][s])
            add(pres.letter(alpha, V[s]) + pres.letter(alpha, W[s]) + inverse_word(rhs), "sum")

    for alpha, beta in calc.commuting_pairs:
        A, B = case.module_elements(alpha), case.module_elements(beta)
        if not len(A) or not len(B):
            continue
        U = np.repeat(A, len(B), axis=0)
        V = np.tile(B, (len(A), 1))
        assign = {f"u{k}": U[:, k] for k in range(U.shape[1])}
        assign.update({f"v{k}": V[:, k] for k in range(V.shape[1])})
        terms = [(g, _evaluate_coords(case, coords, assign)) for g, _, coords in calc.commutator(alpha, beta)]
        for s in range(len(U)):
            lhs = (pres.letter(alpha, U[s]) + pres.letter(beta, V[s])
                   + pres.letter(alpha, U[s], inverse=True) + pres.letter(beta, V[s], inverse=True))
            rhs = list(itertools.chain.from_iterable(pres.letter(g, c[s]) for g, c in terms))
            add(lhs + inverse_word(rhs), "commutator")
    return pres
