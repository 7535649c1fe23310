"""Coset enumeration front end with a compiled kernel and a Python fallback.

The compiled kernel is used when it imports; setting RELKIT_BACKEND=python
forces the fallback.  Both kernels give identical tables and statistics.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..config import BACKEND_ENV, DEFAULT_COSET_BUDGET
from . import _cosets_py

try:
    from . import _coset_kernel
except ImportError:            # extension not built
    _coset_kernel = None

BACKENDS = {"python": _cosets_py.enumerate_cosets}
if _coset_kernel is not None:
    BACKENDS["cython"] = _coset_kernel.enumerate_cosets


def default_backend() -> str:
    wanted = os.environ.get(BACKEND_ENV, "").strip().lower()
    if wanted:
        if wanted not in BACKENDS:
            raise ValueError(f"{BACKEND_ENV}={wanted!r} is not available; have {sorted(BACKENDS)}")
        return wanted
    return "cython" if "cython" in BACKENDS else "python"


BACKEND = default_backend()


class CosetOverflow(RuntimeError):
    """The coset budget was exhausted before the table closed."""


@dataclass
class CosetTable:
    """A completed coset table; column 2g is generator g, column 2g + 1 its inverse."""
    table: np.ndarray
    stats: dict
    backend: str
    _tree: tuple | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def status(self) -> str:
        return "complete"

    def trace(self, word, start: int = 0) -> int:
        c = start
        for x in word:
            c = int(self.table[c, x])
        return c

    def spanning_tree(self) -> tuple:
        """(parent, column) arrays of a BFS tree from coset 0, in column order."""
        if self._tree is None:
            n, ncols = self.table.shape
            parent = np.full(n, -1, dtype=np.int64)
            column = np.full(n, -1, dtype=np.int64)
            seen = np.zeros(n, dtype=bool)
            seen[0] = True
            frontier = np.array([0], dtype=np.int64)
            layers = [frontier]
            while len(frontier):
                # first discovery in (coset, column) order, as a queue would give
                found, first = np.unique(self.table[frontier].reshape(-1), return_index=True)
                fresh = ~seen[found]
                found, first = found[fresh], first[fresh]
                order = np.argsort(first, kind="stable")
                found, first = found[order].astype(np.int64), first[order]
                parent[found] = frontier[first // ncols]
                column[found] = first % ncols
                seen[found] = True
                frontier = found
                layers.append(found)
            self._tree = (parent, column, np.concatenate(layers))
        return self._tree

    def rep_word(self, c: int) -> list:
        parent, column, _ = self.spanning_tree()
        out = []
        while parent[c] >= 0:
            out.append(int(column[c]))
            c = int(parent[c])
        return out[::-1]

    def orbit(self, columns, start: int = 0) -> np.ndarray:
        """Cosets reachable from ``start`` using the given columns."""
        columns = list(columns)
        seen = np.zeros(self.size, dtype=bool)
        seen[start] = True
        frontier = np.array([start])
        while len(frontier):
            nxt = np.unique(self.table[frontier][:, columns].reshape(-1))
            frontier = nxt[~seen[nxt]]
            seen[frontier] = True
        return np.nonzero(seen)[0]


def todd_coxeter(ngens: int, relators, subgroup=(), max_cosets: int = DEFAULT_COSET_BUDGET,
                 backend: str | None = None) -> CosetTable:
    """Enumerate the cosets of a subgroup; raises CosetOverflow past the budget."""
    name = backend or BACKEND
    run = BACKENDS[name]
    status, table, stats = run(2 * ngens, [list(w) for w in relators],
                               [list(w) for w in subgroup], max_cosets)
    if status:
        raise CosetOverflow(f"coset budget {max_cosets} exceeded (peak {stats['peak']})")
    return CosetTable(table, stats, name)
