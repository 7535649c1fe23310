"""Chevalley basis data: structure constants, adjoint and classical representations.

Structure constants follow the extraspecial-pair convention relative to the
canonical root order: for each positive non-simple root x, its extraspecial
pair (a, b) has a the first positive root with x - a positive, and
N[a, b] = p + 1 > 0.  All other signs are forced by the Chevalley basis
identities.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property
from math import factorial

import numpy as np
import scipy.sparse as sp

from .poly import ONE, Poly, PolyMatrix
from .rootcore import RootSystem, canonical_key, root_neg, root_sum


class ConstantsError(ValueError):
    pass


class StructureConstants:
    def __init__(self, system: RootSystem):
        self.system = system
        self._table: dict = {}
        self.extraspecial: dict = {}
        self._build()

    def _build(self):
        R = self.system
        pos = R.positive
        order = {r: i for i, r in enumerate(pos)}
        for x in pos:
            if sum(x) == 1:
                continue
            a = next(r for r in pos if R.is_root(_sub(x, r)) and sum(_sub(x, r)) > 0)
            b = _sub(x, a)
            p, _ = R.string_bounds(a, b)
            self.extraspecial[x] = (a, b)
            self._table[(a, b)] = p + 1
            # remaining special pairs for x
            for r in pos:
                s = _sub(x, r)
                if r == a or order[r] >= order.get(s, -1) or not R.is_root(s):
                    continue
                self._table[(r, s)] = self._special(r, s, x, a, b)

    def _special(self, r, s, x, g, d):
        """N[r, s] for a special pair from the extraspecial pair (g, d) of x = r + s."""
        R = self.system
        val = Fraction(0)
        bg = _sub(s, g)
        if R.is_root(bg):
            val += Fraction(self.N(s, root_neg(g)) * self.N(r, root_neg(d)), R.norm2(bg))
        ag = _sub(r, g)
        if R.is_root(ag):
            val += Fraction(self.N(root_neg(g), r) * self.N(s, root_neg(d)), R.norm2(ag))
        out = val * R.norm2(x) / self.N(g, d)
        if out.denominator != 1:
            raise ConstantsError(f"non-integral structure constant for {r}, {s}")
        return int(out)

    def N(self, r, s) -> int:
        """Signed constant with [e_r, e_s] = N(r, s) e_{r+s}; zero if r + s is not a root."""
        R = self.system
        r, s = tuple(r), tuple(s)
        w = root_sum(r, s)
        if not R.is_root(w):
            return 0
        hr, hs = sum(r), sum(s)
        if hr > 0 and hs > 0:
            if (r, s) in self._table:
                return self._table[(r, s)]
            return -self._table[(s, r)]
        if hr < 0 and hs < 0:
            return -self.N(root_neg(r), root_neg(s))
        if hr < 0:
            return -self.N(s, r)
        # r positive, s negative
        if sum(w) > 0:
            val = Fraction(-R.norm2(w), R.norm2(r)) * self.N(root_neg(s), w)
        else:
            val = Fraction(R.norm2(w), R.norm2(s)) * self.N(root_neg(w), r)
        if val.denominator != 1:
            raise ConstantsError(f"non-integral constant for {r}, {s}")
        return int(val)

    def pairs(self):
        """All (a, b, N) with a + b a root, in canonical order."""
        R = self.system
        for a in R.roots:
            for b in R.roots:
                n = self.N(a, b)
                if n:
                    yield a, b, n

    def to_json(self) -> dict:
        return {
            "system": self.system.name,
            "convention": "extraspecial",
            "pairs": [{"a": list(a), "b": list(b), "N": n} for a, b, n in self.pairs()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def coroot_coefficients(system: RootSystem, a) -> list:
    """h_a in the basis of simple coroots h_i."""
    na = system.norm2(a)
    out = []
    for i, m in enumerate(a):
        v = Fraction(m * system.gram[i][i], na)
        if v.denominator != 1:
            raise ConstantsError("non-integral coroot")
        out.append(int(v))
    return out


class Representation:
    """Common root-element machinery for matrix realizations of a Chevalley basis."""

    dim: int
    system: RootSystem

    def root_vector(self, a) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def _powers(self) -> dict:
        return {}

    def divided_powers(self, a) -> list:
        """[I, X, X^2/2!, ...] for X the root vector of a; integrality asserted."""
        a = tuple(a)
        hit = self._powers.get(a)
        if hit is not None:
            return hit
        X = self.root_vector(a)
        mats = [np.eye(self.dim, dtype=np.int64)]
        power = np.eye(self.dim, dtype=np.int64)
        k = 0
        while True:
            k += 1
            power = power @ X
            if not np.any(power):
                break
            if np.any(power % factorial(k)):
                raise ConstantsError(f"exp(t ad e_{a}) is not integral at degree {k}")
            mats.append(power // factorial(k))
        self._powers[a] = mats
        return mats

    def root_element(self, a, t) -> PolyMatrix:
        """x_a(t) = exp(t X_a) for a polynomial (or integer) t."""
        if not isinstance(t, Poly):
            t = Poly.const(int(t))
        return PolyMatrix.from_series(self.divided_powers(a), t)

    def root_element_mod(self, a, t: int, p: int) -> np.ndarray:
        mats = self.divided_powers(a)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        tk = 1
        for mk in mats:
            out = (out + tk * mk) % p
            tk = tk * t % p
        return out

    def nonzero_entry(self, a) -> tuple:
        """(row, col, value) of the first nonzero entry of X_a with value +-1 if possible."""
        X = self.root_vector(a)
        rows, cols = np.nonzero(X)
        best = None
        for i, j in zip(rows, cols):
            v = int(X[i, j])
            if abs(v) == 1:
                return int(i), int(j), v
            best = best or (int(i), int(j), v)
        if best is None:
            raise ConstantsError(f"zero root vector for {a}")
        return best


class AdjointRep(Representation):
    """Adjoint action on the Chevalley basis: roots in canonical order, then h_1..h_rank."""

    def __init__(self, system: RootSystem, constants: StructureConstants | None = None):
        self.system = system
        self.constants = constants or StructureConstants(system)
        self.dim = len(system.roots) + system.rank
        self._ad: dict = {}

    def basis_index(self, a) -> int:
        return self.system.index[tuple(a)]

    def root_vector(self, a) -> np.ndarray:
        a = tuple(a)
        if a in self._ad:
            return self._ad[a]
        R = self.system
        n = len(R.roots)
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        for j, b in enumerate(R.roots):
            if b == root_neg(a):
                for i, c in enumerate(coroot_coefficients(R, a)):
                    M[n + i, j] = c
                continue
            c = self.constants.N(a, b)
            if c:
                M[R.index[root_sum(a, b)], j] = c
        j_a = R.index[a]
        for i in range(R.rank):
            # [e_a, h_i] = -<a, a_i^vee> e_a
            M[j_a, n + i] = -sum(a[k] * R.cartan[k][i] for k in range(R.rank))
        self._ad[a] = M
        return M

    def sparse_root_vector(self, a):
        return sp.csr_matrix(self.root_vector(a))


class ClassicalRep(Representation):
    """Natural SL_{n+1} (type A) or symplectic Sp_{2n} (type C) realization.

    Simple root vectors are fixed; the others are generated by brackets along
    extraspecial pairs so that [X_a, X_b] = N(a, b) X_{a+b} for the same
    constants as the adjoint representation.
    """

    def __init__(self, system: RootSystem, constants: StructureConstants | None = None):
        if system.series not in ("A", "C"):
            raise ConstantsError("classical realizations exist here for types A and C only")
        self.system = system
        self.constants = constants or StructureConstants(system)
        n = system.rank
        self.dim = n + 1 if system.series == "A" else 2 * n
        self._vectors = self._generate()

    def _simple_vectors(self):
        n = self.system.rank
        d = self.dim
        pos, neg = [], []
        for i in range(n):
            E = np.zeros((d, d), dtype=np.int64)
            F = np.zeros((d, d), dtype=np.int64)
            if self.system.series == "A":
                E[i, i + 1] = 1
                F[i + 1, i] = 1
            elif i < n - 1:
                E[i, i + 1] = 1
                E[n + i + 1, n + i] = -1
                F[i + 1, i] = 1
                F[n + i, n + i + 1] = -1
            else:
                E[n - 1, 2 * n - 1] = 1
                F[2 * n - 1, n - 1] = 1
            pos.append(E)
            neg.append(F)
        return pos, neg

    def _generate(self) -> dict:
        R = self.system
        C = self.constants
        pos, neg = self._simple_vectors()
        vec = {}
        for i, s in enumerate(R.simple):
            vec[s] = pos[i]
            vec[root_neg(s)] = neg[i]
        for x in R.positive:
            if x in vec:
                continue
            a, b = C.extraspecial[x]
            for sign in (1, -1):
                aa = tuple(sign * c for c in a)
                bb = tuple(sign * c for c in b)
                br = vec[aa] @ vec[bb] - vec[bb] @ vec[aa]
                n = C.N(aa, bb)
                if np.any(br % n):
                    raise ConstantsError("classical bracket not divisible by the structure constant")
                vec[tuple(sign * c for c in x)] = br // n
        return vec

    def root_vector(self, a) -> np.ndarray:
        return self._vectors[tuple(a)]

    def check_brackets(self) -> list:
        """Pairs where [X_a, X_b] disagrees with the structure constants or the coroot."""
        R = self.system
        bad = []
        for a in R.roots:
            for b in R.roots:
                Xa, Xb = self._vectors[a], self._vectors[b]
                br = Xa @ Xb - Xb @ Xa
                if b == root_neg(a):
                    want = self.coroot_matrix(a)
                else:
                    s = root_sum(a, b)
                    want = self.constants.N(a, b) * self._vectors[s] if R.is_root(s) else 0 * br
                if not np.array_equal(br, want):
                    bad.append((a, b))
        return bad

    def coroot_matrix(self, a) -> np.ndarray:
        R = self.system
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, c in enumerate(coroot_coefficients(R, a)):
            s = R.simple[i]
            X, Y = self._vectors[s], self._vectors[root_neg(s)]
            out += c * (X @ Y - Y @ X)
        return out

    def preserves_form(self, g: np.ndarray) -> bool:
        if self.system.series == "A":
            return round(np.linalg.det(g.astype(float))) == 1
        n = self.system.rank
        Jf = np.block([[np.zeros((n, n), dtype=np.int64), np.eye(n, dtype=np.int64)],
                       [-np.eye(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64)]])
        return np.array_equal(g.T @ Jf @ g, Jf)


def make_rep(system: RootSystem, kind: str = "adjoint", constants=None) -> Representation:
    if kind == "adjoint":
        return AdjointRep(system, constants)
    if kind == "classical":
        return ClassicalRep(system, constants)
    raise ValueError(f"unknown representation kind {kind!r}")


def jacobi_violations(system: RootSystem, constants: StructureConstants | None = None) -> int:
    """Count basis pairs (x, y) where ad[x, y] != [ad x, ad y], x a root vector."""
    rep = AdjointRep(system, constants)
    R = system
    mats = {a: rep.sparse_root_vector(a) for a in R.roots}
    n = len(R.roots)
    bad = 0
    for a in R.roots:
        A = mats[a]
        for b in R.roots:
            B = mats[b]
            lhs = A @ B - B @ A
            if b == root_neg(a):
                # ad h_a is diagonal: <root, a^vee> on e_root, 0 on the Cartan part
                diag = [R.pairing(c, a) for c in R.roots] + [0] * R.rank
                rhs = sp.diags(diag)
            else:
                c = rep.constants.N(a, b)
                rhs = c * mats[root_sum(a, b)] if c else None
            diff = lhs if rhs is None else lhs - rhs
            if sp.csr_matrix(diff).count_nonzero():
                bad += 1
    assert n == len(R.roots)
    return bad


def commutator_targets(system: RootSystem, a, b) -> list:
    """Roots i a + j b (i, j > 0) with their (i, j), ordered by i + j then canonically."""
    out = []
    for i in range(1, 4):
        for j in range(1, 4):
            x = tuple(i * p + j * q for p, q in zip(a, b))
            if system.is_root(x):
                out.append((i, j, x))
    out.sort(key=lambda t: (t[0] + t[1], canonical_key(t[2])))
    return out


def symbolic_commutator(rep: Representation, a, b):
    """Extract C_ij with [x_a(s), x_b(t)] = prod x_{ia+jb}(C_ij s^i t^j).

    Returns (constants dict, ok flag).  Commutator is x y x^-1 y^-1.
    """
    s, t = Poly.var("s"), Poly.var("t")
    xa, xb = rep.root_element(a, s), rep.root_element(b, t)
    comm = xa @ xb @ rep.root_element(a, -s) @ rep.root_element(b, -t)
    targets = commutator_targets(rep.system, a, b)
    coords = factorize(rep, comm, [x for _, _, x in targets])
    found = {}
    ok = coords is not None
    if ok:
        for (i, j, x), c in zip(targets, coords):
            mono = (("s", i), ("t", j))
            if set(c.terms) - {mono}:
                ok = False
            found[(i, j)] = c.terms.get(mono, 0)
    return found, ok


def factorize(rep: Representation, M: PolyMatrix, roots) -> list | None:
    """Coordinates t_c with M = prod_c x_c(t_c) in the given order, or None.

    The order must be compatible with a positive additive grading so that
    the leftmost remaining factor can be read off a single matrix entry.
    """
    coords = []
    cur = M
    for c in roots:
        i, j, v = rep.nonzero_entry(c)
        e = cur.entry(i, j)
        if any(coef % v for coef in e.terms.values()):
            return None
        t = Poly({m: coef // v for m, coef in e.terms.items()})
        coords.append(t)
        cur = rep.root_element(c, -t) @ cur
    return coords if cur.is_identity() else None


def verify_commutator_symbolic(system: RootSystem, rep: Representation | None = None) -> dict:
    rep = rep or AdjointRep(system)
    C = rep.constants
    pairs = 0
    failures = []
    c11_match = 0
    table = {}
    for a in system.roots:
        for b in system.roots:
            if a == b or a == root_neg(b):
                continue
            found, ok = symbolic_commutator(rep, a, b)
            pairs += 1
            n = C.N(a, b)
            c11 = found.get((1, 1), 0)
            if ok and c11 == n:
                c11_match += 1
            else:
                failures.append({"a": list(a), "b": list(b), "ok": ok, "C11": c11, "N": n})
            table[(a, b)] = found
    return {"system": system.name, "mode": "symbolic", "pairs": pairs, "failures": failures,
            "c11_match": c11_match, "constants": table}


def _crt_centered(residues: dict) -> int:
    """Integer of least absolute value with the given residues mod pairwise coprime primes."""
    m, r = 1, 0
    for p, x in residues.items():
        while r % p != x % p:
            r += m
        m *= p
    return r if r <= m // 2 else r - m


def verify_commutator_numeric(system: RootSystem, primes=(5, 7, 11), samples_per_prime=34,
                              seed: int = 0) -> dict:
    """Random-evaluation check mod p, applying both sides to random vectors.

    Each sample draws (s, t) and a random vector v; the check compares
    [x_a(s), x_b(t)] v with prod x_{ia+jb}(C_ij s^i t^j) v.  The coordinates
    of the commutator at the first sample are peeled off one target at a
    time, reading a single entry of a tracked column per target; C_ij is that
    coordinate divided by s^i t^j, the identity is then checked on every
    sample, and C_ij is lifted to an integer from its residues by the Chinese
    remainder theorem.
    """
    rng = np.random.default_rng(seed)
    rep = AdjointRep(system)
    C = rep.constants
    R = system
    dim = rep.dim
    powers = {a: [sp.csr_matrix(m) for m in rep.divided_powers(a)[1:]] for a in R.roots}

    def apply(a, svals, V, p):
        out = V.copy()
        sk = np.ones_like(svals)
        for mk in powers[a]:
            sk = sk * svals % p
            out = (out + (mk @ V) * sk[None, :]) % p
        return out

    def commutator(a, b, s, t, V, p):
        out = apply(b, (p - t) % p, V, p)
        out = apply(a, (p - s) % p, out, p)
        out = apply(b, t, out, p)
        return apply(a, s, out, p)

    pairs = 0
    failures = []
    c11_match = 0
    samples = 0
    table = {}
    for a in R.roots:
        for b in R.roots:
            if a == b or a == root_neg(b):
                continue
            pairs += 1
            targets = commutator_targets(R, a, b)
            entries = [rep.nonzero_entry(x) for _, _, x in targets]
            k = len(targets)
            pair_ok = True
            residues = [{} for _ in targets]
            for p in primes:
                S = samples_per_prime
                s = rng.integers(1, p, size=S)
                t = rng.integers(1, p, size=S)
                V = rng.integers(0, p, size=(dim, S))
                samples += S
                lhs = commutator(a, b, s, t, V, p)
                if not k:
                    pair_ok &= np.array_equal(lhs, V % p)
                    continue
                # peel the coordinates of the first sample off one tracked column per target
                basis = np.zeros((dim, k), dtype=np.int64)
                for q, (_, col, _) in enumerate(entries):
                    basis[col, q] = 1
                s0, t0 = np.full(k, s[0]), np.full(k, t[0])
                cur = commutator(a, b, s0, t0, basis, p)
                coeffs = []
                for q, ((i, j, x), (row, _, val)) in enumerate(zip(targets, entries)):
                    c = int(cur[row, q]) * pow(val, -1, p) % p
                    cur = apply(x, np.full(k, (p - c) % p), cur, p)
                    c = c * pow(int(s[0]) ** i * int(t[0]) ** j, -1, p) % p
                    coeffs.append(c)
                    residues[q][p] = c
                pair_ok &= np.array_equal(cur, basis)
                rhs = V % p
                for (i, j, x), c in reversed(list(zip(targets, coeffs))):
                    rhs = apply(x, c * _pow_mod(s, i, p) * _pow_mod(t, j, p) % p, rhs, p)
                pair_ok &= np.array_equal(lhs, rhs)
            found = {(i, j): _crt_centered(res) for (i, j, _), res in zip(targets, residues)}
            table[(a, b)] = found
            n = C.N(a, b)
            if k and found.get((1, 1), 0) != n:
                pair_ok = False
            if pair_ok:
                c11_match += 1
            else:
                failures.append({"a": list(a), "b": list(b), "C": {f"{i},{j}": c for (i, j), c in found.items()},
                                 "N": n})
    return {"system": system.name, "mode": "numeric", "primes": list(primes), "pairs": pairs,
            "samples": samples, "samples_per_pair": samples // max(pairs, 1),
            "failures": failures, "c11_match": c11_match, "constants": table}


def _pow_mod(x: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(x)
    for _ in range(e):
        out = out * x % p
    return out
