"""Root elements as matrices over a finite ring, batched over samples.

Arrays of ring elements carry a leading sample axis: a batch of matrices has
shape (S, n, n) and a batch of module vectors for alpha has shape (S, d).
"""
from __future__ import annotations

import numpy as np

from ..chevalley import ConstantsError
from ..rings import FiniteRing, identity, integer_matrix, matmul
from .calculus import FactorizationError, RelCalc


class RingRealization:
    def __init__(self, calc: RelCalc, ring: FiniteRing):
        self.calc = calc
        self.ring = ring
        self.rep = calc.rep
        self.n = calc.rep.dim
        self._powers: dict = {}
        self._entry: dict = {}

    def powers(self, a) -> list:
        a = tuple(a)
        if a not in self._powers:
            self._powers[a] = [integer_matrix(self.ring, m) for m in self.rep.divided_powers(a)]
        return self._powers[a]

    def identity(self, S: int = 1) -> np.ndarray:
        return np.broadcast_to(identity(self.ring, self.n), (S, self.n, self.n)).copy()

    def x(self, a, t) -> np.ndarray:
        """x_a(t) for a batch t of ring elements."""
        R = self.ring
        t = np.asarray(t, dtype=np.int64).reshape(-1)
        mats = self.powers(a)
        out = np.broadcast_to(mats[0], (len(t), self.n, self.n)).copy()
        tk = np.full(len(t), R.one, dtype=np.int64)
        for mk in mats[1:]:
            tk = R.mul(tk, t)
            out = R.add(out, R.mul(tk[:, None, None], mk[None, :, :]))
        return out

    def X(self, alpha, v) -> np.ndarray:
        """X_alpha(v) for a batch v of shape (S, d)."""
        v = np.asarray(v, dtype=np.int64)
        if v.ndim == 1:
            v = v[None, :]
        out = None
        for k, a in enumerate(self.calc.fiber(alpha)):
            m = self.x(a, v[:, k])
            out = m if out is None else self.mul(out, m)
        return out

    def X_inv(self, alpha, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if v.ndim == 1:
            v = v[None, :]
        out = None
        fib = self.calc.fiber(alpha)
        for k in reversed(range(len(fib))):
            m = self.x(fib[k], self.ring.neg(v[:, k]))
            out = m if out is None else self.mul(out, m)
        return out

    def mul(self, A, B) -> np.ndarray:
        return matmul(self.ring, A, B)

    def is_identity(self, M) -> np.ndarray:
        """Per-sample boolean mask."""
        return np.all(M == identity(self.ring, self.n)[None], axis=(1, 2))

    def _reader(self, a):
        a = tuple(a)
        if a not in self._entry:
            i, j, val = self.rep.nonzero_entry(a)
            r = self.ring.from_int(val)
            if not self.ring.is_unit(r):
                raise ConstantsError(f"entry {val} of x_{list(a)} is not a unit in {self.ring.name}")
            self._entry[a] = (i, j, self.ring.inverse(r))
        return self._entry[a]

    def factorize(self, M, targets):
        """(coords, ok) with coords[gamma] of shape (S, d) and ok a per-sample mask."""
        R = self.ring
        cur = np.asarray(M).copy()
        coords = {}
        for gamma in targets:
            cols = []
            for a in self.calc.fiber(gamma):
                i, j, inv = self._reader(a)
                t = R.mul(cur[:, i, j], inv)
                cols.append(t)
                cur = self.mul(self.x(a, R.neg(t)), cur)
            coords[tuple(gamma)] = np.stack(cols, axis=1)
        return coords, self.is_identity(cur)

    def factorize_one(self, M, targets) -> dict:
        coords, ok = self.factorize(np.asarray(M)[None], targets)
        if not ok[0]:
            raise FactorizationError("matrix is not in the product of the given root subgroups")
        return {g: c[0] for g, c in coords.items()}

    def evaluate(self, poly, assignment):
        """Evaluate an integer polynomial at batched ring elements."""
        return poly.evaluate_batch(assignment, self.ring)

    def module_elements(self, alpha, nonzero: bool = True) -> np.ndarray:
        """All vectors of V_alpha tensor R, shape (|R|^d, d)."""
        d = self.calc.dim(alpha)
        grid = np.array(np.meshgrid(*[np.arange(self.ring.size)] * d, indexing="ij"))
        vecs = grid.reshape(d, -1).T.astype(np.int64)
        if nonzero:
            vecs = vecs[np.any(vecs != self.ring.zero, axis=1)]
        return vecs
