"""Identity checks for the relative calculus on a fixed roster of split cases."""
from __future__ import annotations

import itertools

import numpy as np

from ..chevalley import ClassicalRep
from ..poly import Poly
from ..relroots import ProjectionSpec, RelativeRootSystem
from ..relroots.chains import (
    construct_chain_max,
    dominance_minimal,
    enumerate_special_chains,
    find_special_chain,
)
from ..relroots.system import _add, _sub, neg, proportionality
from ..rings import FiniteRing, zmod
from ..rootcore import RootSystem, canonical_key
from .calculus import FactorizationError, RelCalc, symbols
from .ringrep import RingRealization

# (series, rank, J as 1-based simple-root labels)
ROSTER = (
    ("A", 2, (1, 2)),
    ("A", 3, (1, 3)),
    ("C", 2, (1,)),
    ("C", 2, (1, 2)),
    ("C", 3, (1, 2)),
)


def roster_specs() -> list:
    return [ProjectionSpec.make(RootSystem.build(s, r), [j - 1 for j in J]) for s, r, J in ROSTER]


def constants_invertible(base: RootSystem, ring: FiniteRing) -> bool:
    """Are the structure constants of the base system units in the ring?"""
    need = {"B": (2,), "C": (2,), "F": (2,), "G": (2, 3)}.get(base.series, ())
    return all(ring.is_unit(ring.from_int(k)) for k in need)


# exact polynomial identities

def verify_sum(calc: RelCalc, alpha) -> dict:
    d = calc.dim(alpha)
    v, w = symbols("v", d), symbols("w", d)
    q = calc.q(alpha)
    lhs = calc.element(alpha, v) @ calc.element(alpha, w)
    rhs = calc.element(alpha, [x + y for x, y in zip(v, w)])
    for i, comp in sorted(q.items()):
        rhs = rhs @ calc.element(tuple(i * x for x in alpha), comp)
    lam = Poly.var("lam")
    scaled = {f"v{k}": lam * v[k] for k in range(d)} | {f"w{k}": lam * w[k] for k in range(d)}
    homogeneous = all(c.substitute(scaled) == (lam ** i) * c for i, comp in q.items() for c in comp)
    vanishes = all(not c.substitute({f"w{k}": 0 for k in range(d)}) for comp in q.values() for c in comp)
    return {"alpha": list(alpha), "identity": lhs == rhs, "homogeneous": homogeneous,
            "q_at_zero": vanishes, "degrees": sorted(q)}


def verify_chev(calc: RelCalc, alpha, beta) -> dict:
    u, v = symbols("u", calc.dim(alpha)), symbols("v", calc.dim(beta))
    comm = calc.commutator(alpha, beta)
    lhs = (calc.element(alpha, u) @ calc.element(beta, v)
           @ calc.element_inverse(alpha, u) @ calc.element_inverse(beta, v))
    rhs = calc.product([(g, c) for g, _, c in comm])
    out = {"alpha": list(alpha), "beta": list(beta), "identity": lhs == rhs,
           "targets": [list(g) for g, _, _ in comm]}
    if proportionality(tuple(alpha), tuple(beta)) is None:
        lam, mu = Poly.var("lam"), Poly.var("mu")
        scaled = {f"u{k}": lam * u[k] for k in range(len(u))} | {f"v{k}": mu * v[k] for k in range(len(v))}
        out["bidegree"] = all(c.substitute(scaled) == (lam ** i) * (mu ** j) * c
                              for _, (i, j), comp in comm for c in comp)
        out["biadditive"] = _biadditive(calc, alpha, beta)
    return out


def _biadditive(calc: RelCalc, alpha, beta) -> bool:
    maps = calc.N(alpha, beta).get((1, 1))
    if maps is None:
        return True
    da, db = calc.dim(alpha), calc.dim(beta)
    u1, u2, v1, v2 = symbols("x", da), symbols("y", da), symbols("z", db), symbols("t", db)

    def at(us, vs):
        sub = {f"u{k}": us[k] for k in range(da)} | {f"v{k}": vs[k] for k in range(db)}
        return [m.substitute(sub) for m in maps]

    s12 = [a + b for a, b in zip(u1, u2)]
    t12 = [a + b for a, b in zip(v1, v2)]
    left = all(p == a + b for p, a, b in zip(at(s12, v1), at(u1, v1), at(u2, v1)))
    right = all(p == a + b for p, a, b in zip(at(u1, t12), at(u1, v1), at(u1, v2)))
    return left and right


def verify_round_trip(calc: RelCalc) -> dict:
    """Factorizing an ordered product over the positive relative roots recovers its inputs."""
    pos = sorted(calc.rs.positive, key=lambda a: (sum(a), canonical_key(a)))
    orders = {"canonical": pos,
              "layer-reversed": sorted(pos, key=lambda a: (sum(a), [-x for x in canonical_key(a)[1]]))}
    results = {}
    for name, order in orders.items():
        vals = {a: symbols(f"p{k}_", calc.dim(a)) for k, a in enumerate(order)}
        M = calc.product([(a, vals[a]) for a in order])
        try:
            got = calc.unipotent_factorize(M, order)
            results[name] = all(got[a] == vals[a] for a in order)
        except FactorizationError:
            results[name] = False
    return results


def rep_independence(calc: RelCalc) -> list:
    """Mismatches between q, N computed in the adjoint and the classical realization."""
    other = RelCalc(calc.rs, ClassicalRep(calc.base, calc.rep.constants))
    bad = []
    for a in calc.rs.elements:
        if calc.q(a) != other.q(a):
            bad.append({"q": list(a)})
    for a, b in calc.commuting_pairs:
        if calc.commutator(a, b) != other.commutator(a, b):
            bad.append({"pair": [list(a), list(b)]})
    return bad


def verify_identities(calc: RelCalc) -> dict:
    sums = [verify_sum(calc, a) for a in calc.rs.elements]
    chev = [verify_chev(calc, a, b) for a, b in calc.commuting_pairs]
    out = {
        "case": calc.label,
        "sum": {"checked": len(sums), "failures": [s for s in sums if not
                                                    (s["identity"] and s["homogeneous"] and s["q_at_zero"])]},
        "chev": {"checked": len(chev), "failures": [c for c in chev if not
                                                     (c["identity"] and c.get("bidegree", True)
                                                      and c.get("biadditive", True))]},
        "round_trip": verify_round_trip(calc),
    }
    if calc.base.series in ("A", "C"):
        out["rep_independence"] = rep_independence(calc)
    return out


# Lemma-level checks over finite rings

def check_ABe(calc: RelCalc, A, B, ring: FiniteRing) -> dict:
    """For each 0 != u in V_B (x) R some basis vector e_i of V_A has N_AB11(e_i, u) != 0."""
    A, B = tuple(A), tuple(B)
    rs = calc.rs
    if proportionality(A, B) is not None or not rs.is_root(_add(A, B)):
        raise ValueError("check_ABe needs independent A, B with A + B a relative root")
    if rs.is_root(_sub(A, B)) and not constants_invertible(calc.base, ring):
        raise ValueError("structure constants are not invertible and A - B is a relative root")
    real = RingRealization(calc, ring)
    maps = calc.N11(A, B)
    us = real.module_elements(B)
    da = calc.dim(A)
    hit = np.zeros(len(us), dtype=bool)
    for i in range(da):
        assign = {f"u{k}": np.full(len(us), ring.one if k == i else ring.zero) for k in range(da)}
        assign.update({f"v{k}": us[:, k] for k in range(us.shape[1])})
        vals = np.stack([real.evaluate(m, assign) for m in maps], axis=1)
        hit |= np.any(vals != ring.zero, axis=1)
    bad = us[~hit]
    return {"A": list(A), "B": list(B), "ring": ring.name, "checked": int(len(us)),
            "counterexamples": [[ring.format(int(x)) for x in u] for u in bad[:5]],
            "failures": int(len(bad))}


def check_ABe_all(calc: RelCalc, ring: FiniteRing) -> dict:
    rows, skipped = [], 0
    for A in calc.rs.elements:
        for B in calc.rs.elements:
            if proportionality(A, B) is not None or not calc.rs.is_root(_add(A, B)):
                continue
            try:
                rows.append(check_ABe(calc, A, B, ring))
            except ValueError:
                skipped += 1
    return {"case": calc.label, "ring": ring.name, "pairs": len(rows), "skipped": skipped,
            "checked": sum(r["checked"] for r in rows),
            "failures": [r for r in rows if r["failures"]]}


def lemma_chains(rs: RelativeRootSystem) -> list:
    """(delta, gamma, chain): special chains ending at the maximal root, plus the descending one."""
    top = rs.highest
    out = []
    for d in [neg(top)] + [a for a in rs.positive if a != top]:
        chain = find_special_chain(rs, d, top)
        if chain:
            out.append((d, top, chain))
    info = construct_chain_max(rs)
    out.append((top, neg(top), [tuple(b) for b in info["chain"]]))
    return out


def check_chain_comm(real: RingRealization, delta, gamma, chain, samples) -> dict:
    """Nested commutator against X_gamma(n_chain) times factors beyond gamma.

    ``samples`` holds one (S, d) array of ring elements per root of
    delta, beta_1, ..., beta_n.
    """
    calc = real.calc
    rs = calc.rs
    roots = [tuple(delta)] + [tuple(b) for b in chain]
    C, Cinv = real.X(roots[0], samples[0]), real.X_inv(roots[0], samples[0])
    for beta, v in zip(roots[1:], samples[1:]):
        Y, Yi = real.X(beta, v), real.X_inv(beta, v)
        C, Cinv = (real.mul(real.mul(C, Y), real.mul(Cinv, Yi)),
                   real.mul(real.mul(Y, C), real.mul(Yi, Cinv)))
    values = [[s[:, k] for k in range(s.shape[1])] for s in samples]
    expected = np.stack(calc.n_chain(roots, values, evaluate=real.evaluate), axis=1)
    rest = real.mul(real.X_inv(gamma, expected), C)
    up = sum(roots[1]) > 0
    h = sum(gamma)
    if up:
        tail = sorted([a for a in rs.elements if sum(a) > h], key=lambda a: (sum(a), canonical_key(a)))
    else:
        tail = sorted([a for a in rs.elements if sum(a) < h], key=lambda a: (-sum(a), canonical_key(a)))
    if any(sum(a) <= 0 for a in tail) if up else any(sum(a) >= 0 for a in tail):
        raise ValueError("roots beyond gamma do not form a unipotent subgroup")
    _, ok = real.factorize(rest, tail)
    bad = np.nonzero(~ok)[0]
    return {"delta": list(delta), "gamma": list(gamma), "chain": [list(b) for b in chain],
            "samples": int(len(ok)), "failures": int(len(bad)),
            "tail_roots": len(tail),
            "counterexample": None if not len(bad) else
            [[real.ring.format(int(x)) for x in s[bad[0]]] for s in samples]}


def chain_samples(real: RingRealization, roots, exhaustive: bool, count: int, rng) -> list:
    calc = real.calc
    dims = [calc.dim(r) for r in roots]
    q = real.ring.size
    if exhaustive:
        grid = np.array(list(itertools.product(range(q), repeat=sum(dims))), dtype=np.int64)
    else:
        grid = rng.integers(0, q, size=(count, sum(dims)), dtype=np.int64)
    out, k = [], 0
    for d in dims:
        out.append(grid[:, k:k + d])
        k += d
    return out


def check_chains_case(calc: RelCalc, ring: FiniteRing, random_count: int = 1000, seed: int = 0,
                      exhaustive: bool | None = None) -> dict:
    """Every lemma chain of the case, exhaustively for base rank 2, else sampled."""
    real = RingRealization(calc, ring)
    rng = np.random.default_rng(seed)
    if exhaustive is None:
        exhaustive = calc.base.rank <= 2
    rows = []
    for delta, gamma, chain in lemma_chains(calc.rs):
        samples = chain_samples(real, [delta] + list(chain), exhaustive, random_count, rng)
        rows.append(check_chain_comm(real, delta, gamma, chain, samples))
    return {"case": calc.label, "ring": ring.name, "mode": "exhaustive" if exhaustive else "random",
            "seed": seed, "chains": len(rows), "samples": sum(r["samples"] for r in rows),
            "min_samples_per_chain": min(r["samples"] for r in rows),
            "failures": [r for r in rows if r["failures"]]}


def special_chain_census(calc: RelCalc, ring: FiniteRing, random_count: int = 1000,
                         seed: int = 0) -> dict:
    """Every special chain from -top to top, checked against the nested-commutator formula.

    Each row also records whether the partial sums are minimal in the
    dominance order, which is stronger than the simple-root minimality used by
    the definition.
    """
    rs = calc.rs
    top = rs.highest
    real = RingRealization(calc, ring)
    rng = np.random.default_rng(seed)
    exhaustive = calc.base.rank <= 2
    rows = []
    for chain in enumerate_special_chains(rs, neg(top), top, max_len=2 * sum(top) + 2):
        samples = chain_samples(real, [neg(top)] + chain, exhaustive, random_count, rng)
        r = check_chain_comm(real, neg(top), top, chain, samples)
        rows.append({"chain": r["chain"], "failures": r["failures"], "samples": r["samples"],
                     "dominance_minimal": dominance_minimal(rs, neg(top), chain)})
    failing = [r for r in rows if r["failures"]]
    return {"case": calc.label, "ring": ring.name, "chains": len(rows), "failing": failing,
            "failing_all_non_dominance": all(not r["dominance_minimal"] for r in failing),
            "dominance_chains_pass": all(not r["failures"] for r in rows if r["dominance_minimal"])}


def rank_mod_p(rows: np.ndarray, p: int) -> int:
    A = np.array(rows, dtype=np.int64) % p
    rank = 0
    nrows, ncols = A.shape
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if A[r, col]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        A[rank] = A[rank] * pow(int(A[rank, col]), -1, p) % p
        others = np.nonzero(A[:, col])[0]
        for r in others:
            if r != rank:
                A[r] = (A[r] - A[r, col] * A[rank]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def check_F_surjective(calc: RelCalc, p: int) -> dict:
    """Span of the images of basis tensors under F inside End(V_top), over F_p."""
    ring = zmod(p)
    if not constants_invertible(calc.base, ring):
        raise ValueError(f"structure constants of {calc.base.name} are not invertible mod {p}")
    rs = calc.rs
    top = rs.highest
    chain = [tuple(b) for b in construct_chain_max(rs)["chain"]]
    slots = chain + [neg(b) for b in chain]
    roots = [top] + slots
    d = calc.dim(top)
    a = symbols("a", d)
    images = []
    for pick in itertools.product(*[range(calc.dim(b)) for b in slots]):
        values = [a] + [[int(k == i) for k in range(calc.dim(b))] for b, i in zip(slots, pick)]
        res = calc.n_chain(roots, values)
        mat = [[c.terms.get(((f"a{j}", 1),), 0) for j in range(d)] for c in res]
        if any(set(c.terms) - {((f"a{j}", 1),) for j in range(d)} for c in res):
            raise ValueError("F image is not linear in the first argument")
        images.append(np.array(mat, dtype=np.int64).reshape(-1))
    rank = rank_mod_p(np.array(images), p)
    return {"case": calc.label, "field": ring.name, "chain": [list(b) for b in chain],
            "tensors": len(images), "span": rank, "target": d * d, "surjective": rank == d * d}


def verify_case(spec: ProjectionSpec, rings=("F2", "F3", "Z/4"), chain_ring: str = "F3",
                random_count: int = 1000, seed: int = 0) -> dict:
    """All relcalc checks for one roster case."""
    from ..rings import parse_ring

    calc = RelCalc(spec)
    out = {"case": calc.label, "identities": verify_identities(calc)}
    if calc.rs.rank < 2:
        return out
    abe = []
    for name in rings:
        ring = parse_ring(name)
        if calc.base.series != "A" and not constants_invertible(calc.base, ring):
            continue
        abe.append(check_ABe_all(calc, ring))
    out["ABe"] = abe
    ring = parse_ring(chain_ring)
    out["chain_comm"] = check_chains_case(calc, ring, random_count, seed)
    out["chain_census"] = special_chain_census(calc, ring, random_count, seed)
    fmaps = []
    for p in (2, 3):
        if constants_invertible(calc.base, zmod(p)):
            fmaps.append(check_F_surjective(calc, p))
    out["F_surjective"] = fmaps
    return out
