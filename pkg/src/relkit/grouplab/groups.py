"""Finite matrix groups over finite rings, stored as integer codes.

A matrix over a ring with q elements is encoded as the integer whose base-q
digits are its entries in row-major order.  A group keeps its elements in
BFS order from the identity together with a parent pointer and generator
index, which gives a word witness for every element.  Subgroups are boolean
masks over that order.
"""
from __future__ import annotations

import numpy as np

from ..rings import FiniteRing, identity, matmul

CHUNK = 1 << 18


class GroupSizeError(RuntimeError):
    pass


class Codec:
    def __init__(self, ring: FiniteRing, n: int):
        if ring.size ** (n * n) >= 2 ** 63:
            raise GroupSizeError(f"{n}x{n} matrices over {ring.name} do not fit in 64-bit codes")
        self.ring = ring
        self.n = n
        self.weights = ring.size ** np.arange(n * n, dtype=np.int64)

    def encode(self, M) -> np.ndarray:
        M = np.asarray(M, dtype=np.int64)
        return M.reshape(-1, self.n * self.n) @ self.weights

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).reshape(-1)
        digits = (codes[:, None] // self.weights[None, :]) % self.ring.size
        return digits.reshape(-1, self.n, self.n)


def _lookup(sorted_codes: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Positions of codes in a sorted array, -1 where absent."""
    pos = np.searchsorted(sorted_codes, codes)
    pos = np.minimum(pos, len(sorted_codes) - 1)
    hit = sorted_codes[pos] == codes
    return np.where(hit, pos, -1)


class MatrixGroup:
    """Closure of a list of labelled generator matrices."""

    def __init__(self, ring: FiniteRing, generators, max_size: int = 20_000_000):
        self.ring = ring
        self.labels = [lab for lab, _ in generators]
        self.gen_mats = np.stack([np.asarray(m, dtype=np.int64) for _, m in generators])
        self.n = self.gen_mats.shape[1]
        self.codec = Codec(ring, self.n)
        self.layers: list[int] = []
        self._bfs(max_size)

    def _bfs(self, max_size):
        one = self.codec.encode(identity(self.ring, self.n))
        codes, parent, gen = [one], [np.array([-1])], [np.array([-1])]
        known = one.copy()
        frontier = one
        self.layers = [1]
        total = 1
        k = len(self.gen_mats)
        prev_start = 0
        while len(frontier):
            # flat position = element position * k + generator, across chunks
            new_c = [self.codec.encode(self.multiply(self.codec.decode(frontier[lo:lo + CHUNK]),
                                                     self.gen_mats))
                     for lo in range(0, len(frontier), CHUNK)]
            flat, first = np.unique(np.concatenate(new_c), return_index=True)
            del new_c
            fresh = _lookup(known, flat) < 0      # sorted queries keep this cache friendly
            flat, first = flat[fresh], first[fresh]
            order = np.argsort(first, kind="stable")
            first = first[order]
            frontier = flat[order]
            if total + len(frontier) > max_size:
                raise GroupSizeError(f"group exceeds {max_size} elements")
            if len(frontier):
                codes.append(frontier)
                parent.append(prev_start + first // k)
                gen.append(first % k)
                self.layers.append(len(frontier))
                known = np.sort(np.concatenate([known, frontier]), kind="stable")
            prev_start, total = total, total + len(frontier)
        self.codes = np.concatenate(codes)
        self.parent = np.concatenate(parent).astype(np.int64)
        self.gen_of = np.concatenate(gen).astype(np.int64)
        self._order = np.argsort(self.codes, kind="stable")
        self._sorted = self.codes[self._order]

    @property
    def order(self) -> int:
        return len(self.codes)

    def multiply(self, A, B) -> np.ndarray:
        """All products: A (k, n, n) times B (m, n, n) gives (k * m, n, n), A-major."""
        A = np.asarray(A)[:, None]
        B = np.asarray(B)[None, :]
        return matmul(self.ring, np.broadcast_to(A, (A.shape[0], B.shape[1], self.n, self.n)),
                      np.broadcast_to(B, (A.shape[0], B.shape[1], self.n, self.n))).reshape(
                          -1, self.n, self.n)

    def index_of(self, codes) -> np.ndarray:
        pos = _lookup(self._sorted, np.asarray(codes, dtype=np.int64))
        return np.where(pos >= 0, self._order[np.maximum(pos, 0)], -1)

    def index_of_matrices(self, M) -> np.ndarray:
        return self.index_of(self.codec.encode(M))

    def matrices(self, idx) -> np.ndarray:
        return self.codec.decode(self.codes[np.asarray(idx, dtype=np.int64)])

    def contains(self, M) -> np.ndarray:
        return self.index_of_matrices(M) >= 0

    def word(self, i: int) -> list:
        out = []
        while self.parent[i] >= 0:
            out.append(int(self.gen_of[i]))
            i = int(self.parent[i])
        return out[::-1]

    @property
    def identity_index(self) -> int:
        return 0

    @property
    def generator_indices(self) -> np.ndarray:
        return self.index_of_matrices(self.gen_mats)

    def inverse_indices(self, idx) -> np.ndarray:
        """Inverses through the group's finiteness: x^-1 = x^(k-1) with x^k = 1."""
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty_like(idx)
        for lo in range(0, len(idx), CHUNK):
            block = idx[lo:lo + CHUNK]
            base = self.matrices(block)
            cur = base.copy()
            res = np.full(len(block), -1, dtype=np.int64)
            one = identity(self.ring, self.n)
            while (res < 0).any():
                nxt = matmul(self.ring, cur, base)
                done = (res < 0) & np.all(nxt == one, axis=(1, 2))
                res[done] = self.index_of_matrices(cur[done])
                cur = nxt
            out[lo:lo + CHUNK] = res
        return out

    def products(self, left_idx, right_mats) -> np.ndarray:
        """Indices of x * g for x in left_idx and g in right_mats, left-major."""
        left_idx = np.asarray(left_idx, dtype=np.int64)
        out = []
        step = max(1, CHUNK // max(1, len(right_mats)))
        for lo in range(0, len(left_idx), step):
            prods = self.multiply(self.matrices(left_idx[lo:lo + step]), right_mats)
            out.append(self.index_of_matrices(prods))
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def conjugates(self, idx, g, g_inv) -> np.ndarray:
        """Indices of g x g^-1 for x in idx."""
        idx = np.asarray(idx, dtype=np.int64)
        out = []
        for lo in range(0, len(idx), CHUNK):
            X = self.matrices(idx[lo:lo + CHUNK])
            C = matmul(self.ring, matmul(self.ring, g[None], X), g_inv[None])
            out.append(self.index_of_matrices(C))
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def mask(self, idx=()) -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        m[np.asarray(idx, dtype=np.int64)] = True
        return m

    def residue_mask(self, residue: np.ndarray) -> np.ndarray:
        """Elements whose entrywise image under a ring map is the identity."""
        out = np.zeros(self.order, dtype=bool)
        target = identity(self.ring, self.n)
        target = residue[target]
        for lo in range(0, self.order, CHUNK):
            M = residue[self.codec.decode(self.codes[lo:lo + CHUNK])]
            out[lo:lo + CHUNK] = np.all(M == target[None], axis=(1, 2))
        return out

    def diagonal_mask(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=bool)
        off = ~np.eye(self.n, dtype=bool)
        for lo in range(0, self.order, CHUNK):
            M = self.codec.decode(self.codes[lo:lo + CHUNK])
            out[lo:lo + CHUNK] = np.all(M[:, off] == self.ring.zero, axis=1)
        return out


def subgroup_closure(G: MatrixGroup, gen_idx, full_exit: bool = True) -> np.ndarray:
    """Mask of the subgroup generated by the given elements.

    Generators are added one at a time and skipped when already present.  With
    ``full_exit`` the closure stops as soon as it holds every generator of G.
    """
    mask = G.mask([G.identity_index])
    members = np.array([G.identity_index], dtype=np.int64)
    gens: list = []
    g_idx = G.generator_indices
    for g in np.asarray(gen_idx, dtype=np.int64):
        if mask[g]:
            continue
        if full_exit and mask[g_idx].all():
            break
        gens.append(G.matrices([g])[0])
        gm = np.stack(gens)
        frontier = np.unique(G.products(members, gm[-1:]))
        frontier = frontier[~mask[frontier]]
        while len(frontier):
            mask[frontier] = True
            members = np.concatenate([members, frontier])
            if full_exit and mask[g_idx].all():
                break
            nxt = np.unique(G.products(frontier, gm))
            frontier = nxt[~mask[nxt]]
        if full_exit and mask[g_idx].all():
            break
    if full_exit and mask[g_idx].all():
        mask[:] = True
    return mask


def normal_closure(G: MatrixGroup, seed_idx) -> np.ndarray:
    """Mask of the smallest normal subgroup of G containing the seeds.

    Search over the moves s -> s * seed and s -> g s g^-1 (g a generator of
    G) from the identity; the reachable set is exactly the set of products of
    conjugates of seeds.  Stops early once every generator of G is reached.
    """
    seed_idx = np.unique(np.asarray(seed_idx, dtype=np.int64))
    seeds = G.matrices(seed_idx)
    gens = G.gen_mats
    inv = G.matrices(G.inverse_indices(G.generator_indices))
    g_idx = G.generator_indices
    mask = G.mask([G.identity_index])
    frontier = np.array([G.identity_index], dtype=np.int64)
    while len(frontier):
        if mask[g_idx].all():
            mask[:] = True
            break
        found = [G.products(frontier, seeds)] if len(seeds) else []
        for g, gi in zip(gens, inv):
            found.append(G.conjugates(frontier, g, gi))
        nxt = np.unique(np.concatenate(found))
        frontier = nxt[~mask[nxt]]
        mask[frontier] = True
    return mask


def is_normal(G: MatrixGroup, mask: np.ndarray) -> bool:
    if mask.all() or mask.sum() == 1:
        return True
    members = np.nonzero(mask)[0]
    inv = G.matrices(G.inverse_indices(G.generator_indices))
    for g, gi in zip(G.gen_mats, inv):
        if not mask[G.conjugates(members, g, gi)].all():
            return False
    return True
