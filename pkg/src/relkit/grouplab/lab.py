"""Congruence subgroups, normal closures and ideal extraction in E(R)."""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

import numpy as np

from ..relroots.system import _scale, neg
from .cases import GateError, GroupCase
from .groups import MatrixGroup, is_normal, normal_closure, subgroup_closure

GAUSS_MAX_ORDER = 1_000_000
DIAMETER_MAX_PRODUCTS = 500_000_000


@dataclass
class Lab:
    """A case together with its enumerated elementary group."""
    case: GroupCase
    E: MatrixGroup
    _root_idx: dict = field(default_factory=dict, repr=False)

    @property
    def ring(self):
        return self.case.ring

    def root_indices(self, alpha) -> tuple:
        """(vectors of V_alpha tensor R, E-indices of X_alpha(v)), zero vector included."""
        alpha = tuple(alpha)
        if alpha not in self._root_idx:
            vecs = self.case.module_elements(alpha, nonzero=False)
            idx = self.E.index_of_matrices(self.case.real.X(alpha, vecs))
            if (idx < 0).any():
                raise RuntimeError(f"X_{list(alpha)} leaves the enumerated group")
            self._root_idx[alpha] = (vecs, idx)
        return self._root_idx[alpha]

    def level_elements(self, alpha, ideal) -> np.ndarray:
        vecs, idx = self.root_indices(alpha)
        keep = np.all(np.isin(vecs, sorted(ideal)), axis=1)
        return idx[keep]

    def level_seeds(self, ideal) -> np.ndarray:
        return np.unique(np.concatenate([self.level_elements(a, ideal) for a in self.case.roots]))


def build_lab(case: GroupCase, max_size: int = 20_000_000) -> Lab:
    return Lab(case, case.elementary_group(max_size))


def _full_ideal(ring) -> frozenset:
    return frozenset(range(ring.size))


# level subgroups

def congruence_subgroup(lab: Lab, ideal) -> np.ndarray:
    """E*_P(R, I): elements of E congruent to the identity modulo I."""
    ideal = frozenset(ideal)
    if len(ideal) == lab.ring.size:
        return np.ones(lab.E.order, dtype=bool)
    _, residue = lab.ring.quotient(ideal)
    return lab.E.residue_mask(residue)


def elementary_level(lab: Lab, ideal) -> np.ndarray:
    """E_P(I), generated by the root elements with coordinates in I."""
    return subgroup_closure(lab.E, lab.level_seeds(ideal))


def elementary_normal_level(lab: Lab, ideal) -> np.ndarray:
    """E_P(R, I), the normal closure of E_P(I) in E."""
    return normal_closure(lab.E, lab.level_seeds(ideal))


def level_report(lab: Lab, ideal) -> dict:
    low = elementary_level(lab, ideal)
    mid = elementary_normal_level(lab, ideal)
    top = congruence_subgroup(lab, ideal)
    return {
        "ideal": lab.ring.ideal_label(ideal),
        "E_I": int(low.sum()), "E_RI": int(mid.sum()), "E_star": int(top.sum()),
        "containments": bool(np.all(mid[low]) and np.all(top[mid])),
        "E_RI_equals_E_star": bool(np.array_equal(mid, top)),
        "E_I_equals_E_RI": bool(np.array_equal(low, mid)),
    }


# ideal extraction

@dataclass
class IdealWitness:
    ideal: frozenset
    label: str
    modules: dict          # alpha -> sorted list of coordinate tuples in M_alpha


def root_intersections(lab: Lab, N: np.ndarray) -> dict:
    """M_alpha = {v : X_alpha(v) in N} for every relative root."""
    out = {}
    for alpha in lab.case.roots:
        vecs, idx = lab.root_indices(alpha)
        out[alpha] = vecs[N[idx]]
    return out


def _is_submodule(ring, vecs: np.ndarray) -> bool:
    have = {tuple(v) for v in vecs.tolist()}
    if tuple([ring.zero] * vecs.shape[1]) not in have:
        return False
    arr = np.asarray(sorted(have), dtype=np.int64)
    sums = ring.add(arr[:, None, :], arr[None, :, :]).reshape(-1, arr.shape[1])
    if not {tuple(v) for v in sums.tolist()} <= have:
        return False
    scaled = ring.mul(np.arange(ring.size)[:, None, None], arr[None]).reshape(-1, arr.shape[1])
    return {tuple(v) for v in scaled.tolist()} <= have


def extract_ideal(lab: Lab, N: np.ndarray, check_normal: bool = True) -> dict:
    """Find the ideal I with N meeting every root subgroup in X_alpha(I V_alpha)."""
    if lab.case.rs.rank < 2:
        raise GateError("ideal extraction needs relative rank at least 2")
    if check_normal and not is_normal(lab.E, N):
        raise ValueError("N is not normal in E")
    ring = lab.ring
    M = root_intersections(lab, N)
    fits = []
    for I in ring.ideals:
        if all(_same_rows(M[a], lab.case.ideal_vectors(a, I)) for a in M):
            fits.append(I)
    submodules = all(_is_submodule(ring, M[a]) for a in M)
    row = {"order": int(N.sum()), "fits": len(fits), "submodules": submodules}
    if len(fits) == 1:
        I = fits[0]
        row.update(status="ok", ideal=ring.ideal_label(I),
                   witness=IdealWitness(I, ring.ideal_label(I),
                                        {a: [tuple(v) for v in M[a].tolist()] for a in M}))
    else:
        row.update(status="counterexample", ideal=None,
                   sizes={",".join(map(str, a)): int(len(M[a])) for a in M})
    return row


def _same_rows(A: np.ndarray, B: np.ndarray) -> bool:
    return {tuple(r) for r in A.tolist()} == {tuple(r) for r in B.tolist()}


def finite_index_ideal(lab: Lab, N: np.ndarray) -> dict:
    """Over a finite ring every ideal has finite index; report the extraction."""
    row = extract_ideal(lab, N)
    I = row["witness"].ideal if row["status"] == "ok" else None
    return {"status": row["status"], "ideal": row["ideal"],
            "index": None if I is None else lab.ring.size // len(I)}


# generation of E(R, I) by conjugated unipotents

def _multiples(rs, alpha) -> list:
    out = []
    k = 1
    while rs.is_root(_scale(k, alpha)):
        out.append(_scale(k, alpha))
        k += 1
    return out


def rank_one_subgroup(lab: Lab, alpha) -> np.ndarray:
    """E_alpha(R) = <U_(alpha)(R), U_(-alpha)(R)>."""
    full = _full_ideal(lab.ring)
    seeds = [lab.level_elements(g, full) for g in _multiples(lab.case.rs, alpha)]
    seeds += [lab.level_elements(g, full) for g in _multiples(lab.case.rs, neg(alpha))]
    return subgroup_closure(lab.E, np.concatenate(seeds), full_exit=False)


def verify_E_gen(lab: Lab, ideal) -> dict:
    """Compare <Z_alpha(a, u)> with E_P(R, I) element by element."""
    E = lab.E
    zs = []
    for alpha in lab.case.roots:
        seeds = np.concatenate([lab.level_elements(g, ideal) for g in _multiples(lab.case.rs, alpha)])
        U = np.nonzero(subgroup_closure(E, seeds, full_exit=False))[0]
        A = np.nonzero(rank_one_subgroup(lab, alpha))[0]
        A_mats = E.matrices(A)
        A_inv = E.matrices(E.inverse_indices(A))
        for a, ai in zip(A_mats, A_inv):
            zs.append(E.conjugates(U, a, ai))
    Z = np.unique(np.concatenate(zs))
    generated = subgroup_closure(E, Z)
    target = elementary_normal_level(lab, ideal)
    return {"ideal": lab.ring.ideal_label(ideal), "generators": int(len(Z)),
            "generated": int(generated.sum()), "E_RI": int(target.sum()),
            "equal": bool(np.array_equal(generated, target))}


# Gauss decomposition and Cayley diameter

def unipotent_radical(lab: Lab, sign: int) -> np.ndarray:
    full = _full_ideal(lab.ring)
    roots = [a for a in lab.case.roots if (sum(a) > 0) == (sign > 0)]
    seeds = np.concatenate([lab.level_elements(a, full) for a in roots])
    return subgroup_closure(lab.E, seeds, full_exit=False)


def gauss_and_diameter(lab: Lab) -> dict:
    E = lab.E
    U = np.nonzero(unipotent_radical(lab, 1))[0]
    Um = np.nonzero(unipotent_radical(lab, -1))[0]
    row = {"order": E.order, "U": int(len(U)), "U_minus": int(len(Um))}
    split = len(lab.case.J) == lab.case.spec.base.rank
    if not split:
        row["gauss"] = {"status": "not applicable", "reason": "parabolic is not a Borel"}
    elif E.order > GAUSS_MAX_ORDER:
        row["gauss"] = {"status": "skipped", "reason": f"|E| > {GAUSS_MAX_ORDER}"}
    else:
        T = np.nonzero(E.diagonal_mask())[0]
        S = U
        for factor in (Um, T, U):
            S = np.unique(E.products(S, E.matrices(factor)))
        covered = int(len(S)) if (S >= 0).all() else -1
        row["gauss"] = {"status": "ok" if covered == E.order else "fail",
                        "T": int(len(T)), "covered": covered}
    gens = np.setdiff1d(np.union1d(U, Um), [E.identity_index])
    if E.order * len(gens) > DIAMETER_MAX_PRODUCTS:
        row["diameter"] = None
        row["histogram"] = None
        row["diameter_reason"] = f"|E| * |U u U-| > {DIAMETER_MAX_PRODUCTS}"
        return row
    gm = E.matrices(gens)
    seen = E.mask([E.identity_index])
    frontier = np.array([E.identity_index], dtype=np.int64)
    hist = [1]
    while True:
        nxt = np.unique(E.products(frontier, gm))
        frontier = nxt[~seen[nxt]]
        if not len(frontier):
            break
        seen[frontier] = True
        hist.append(int(len(frontier)))
    row["diameter"] = len(hist) - 1 if seen.all() else None
    row["histogram"] = hist
    return row


# normality campaign

def _fingerprint(mask: np.ndarray) -> str:
    return hashlib.sha1(np.packbits(mask).tobytes()).hexdigest()


def random_root_seeds(lab: Lab, count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    roots = lab.case.roots
    out = []
    for _ in range(count):
        alpha = roots[int(rng.integers(len(roots)))]
        vecs, idx = lab.root_indices(alpha)
        nz = np.nonzero(np.any(vecs != lab.ring.zero, axis=1))[0]
        k = int(nz[int(rng.integers(len(nz)))])
        out.append((alpha, tuple(int(x) for x in vecs[k]), int(idx[k])))
    return out


def normality_case(lab: Lab, seeds: int = 25, seed: int = 0) -> dict:
    """extract_ideal over every E(R, I) and over seeded random normal closures."""
    ring = lab.ring
    rows = []
    subgroups = {}           # fingerprint -> (mask, ideal)
    for I in ring.ideals:
        N = elementary_normal_level(lab, I)
        top = congruence_subgroup(lab, I)
        got = extract_ideal(lab, N)
        equal_star = bool(np.array_equal(N, top))
        rows.append({
            "N": f"E(R,{ring.ideal_label(I)})", "order": got["order"], "ideal": got["ideal"],
            "status": got["status"], "E_RI_equals_E_star": equal_star,
            "ideal_matches": got["ideal"] == ring.ideal_label(I),
            "submodules": got["submodules"],
        })
        if got["status"] == "ok":
            subgroups.setdefault(_fingerprint(N), (N, got["witness"].ideal))
    for k, (alpha, v, idx) in enumerate(random_root_seeds(lab, seeds, seed)):
        N = normal_closure(lab.E, [idx])
        got = extract_ideal(lab, N)
        rows.append({
            "N": "<<X_{}({})>>".format(list(alpha), ",".join(ring.format(x) for x in v)),
            "order": got["order"], "ideal": got["ideal"], "status": got["status"],
            "submodules": got["submodules"],
        })
        if got["status"] == "ok":
            subgroups.setdefault(_fingerprint(N), (N, got["witness"].ideal))
    monotone = True
    for (A, IA), (B, IB) in itertools.permutations(subgroups.values(), 2):
        if np.all(B[A]) and not IA <= IB:
            monotone = False
    failures = [r for r in rows if r["status"] != "ok"
                or (r.get("E_RI_equals_E_star") and not r["ideal_matches"])]
    return {"case": lab.case.label, "order": lab.E.order, "seed": seed, "seeds": seeds,
            "rows": rows, "distinct_subgroups": len(subgroups), "monotone": monotone,
            "failures": len(failures), "status": "ok" if not failures and monotone else "fail"}
