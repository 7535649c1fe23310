"""Desk-scale checks on Steinberg groups against the elementary matrix group."""
from __future__ import annotations

import numpy as np

from ..config import DEFAULT_COSET_BUDGET
from ..grouplab.cases import GateError, GroupCase, make_case
from ..grouplab.groups import MatrixGroup
from ..relroots.system import _add, _scale, opposite_proportional
from ..rings import identity, matmul
from .cosets import CosetTable, todd_coxeter
from .presentation import Presentation, presentation


def enumerate_steinberg(pres: Presentation, budget: int = DEFAULT_COSET_BUDGET,
                        subgroup=(), extra_relators=(), backend=None) -> CosetTable:
    return todd_coxeter(pres.ngens, list(pres.relators) + list(extra_relators), subgroup,
                        max_cosets=budget, backend=backend)


def coset_matrices(pres: Presentation, T: CosetTable) -> np.ndarray:
    """Image in E of the representative word of every coset, built along the BFS tree."""
    parent, column, order = T.spanning_tree()
    mats = pres.generator_matrices()
    ring = pres.case.ring
    n = mats.shape[1]
    out = np.empty((T.size, n, n), dtype=np.int64)
    out[0] = identity(ring, n)
    depth = np.zeros(T.size, dtype=np.int64)
    for c in order[1:]:
        depth[c] = depth[parent[c]] + 1
    for d in range(1, int(depth.max()) + 1 if T.size > 1 else 1):
        layer = order[depth[order] == d]
        out[layer] = matmul(ring, out[parent[layer]], mats[column[layer]])
    return out


def _gate_theorem(case: GroupCase):
    if case.rs.rank < 2:
        raise GateError("relative rank must be at least 2")
    if not case.ring.is_local:
        raise GateError(f"{case.ring.name} is not local")


def verify_K2_centrality(case: GroupCase, budget: int = DEFAULT_COSET_BUDGET,
                         E: MatrixGroup | None = None, backend=None) -> dict:
    """Relators hold in E, |E| divides |St|, and the kernel commutes with all generators.

    Commuting with every generator is enough for centrality since the
    generators generate the group.
    """
    _gate_theorem(case)
    pres = presentation(case)
    bad = pres.relator_violations()
    T = enumerate_steinberg(pres, budget, backend=backend)
    E = E or case.elementary_group()
    mats = coset_matrices(pres, T)
    codes = E.codec.encode(mats)
    kernel = np.nonzero(codes == E.codec.encode(identity(case.ring, E.n))[0])[0]
    image = len(np.unique(codes))
    violations = []
    for k in kernel:
        word = T.rep_word(int(k))
        for g in range(pres.ngens):
            left = int(T.table[k, 2 * g])                 # k * g
            right = T.trace(word, int(T.table[0, 2 * g]))  # g * k
            if left != right:
                violations.append({"kernel_coset": int(k), "generator": g})
    divides = T.size % E.order == 0
    ok = not bad and divides and image == E.order and len(kernel) * E.order == T.size and not violations
    return {
        "case": case.label, "generators": pres.ngens, "relators": len(pres.relators),
        "relator_failures": len(bad), "St": T.size, "E": E.order, "divides": divides,
        "image": image, "kernel_order": int(len(kernel)),
        "central": not violations, "violations": violations[:10],
        "centrality_basis": "kernel representatives against every generator",
        "stats": T.stats, "backend": T.backend, "status": "ok" if ok else "fail",
    }


def _check_closed(case: GroupCase, S) -> list:
    S = [tuple(a) for a in S]
    rs = case.rs
    for a in S:
        for b in S:
            if a != b and opposite_proportional(a, b):
                raise GateError(f"{list(a)} and {list(b)} are opposite multiples")
    for a in S:
        for b in S:
            for i in range(1, 4):
                for j in range(1, 4):
                    g = _add(_scale(i, a), _scale(j, b))
                    if rs.is_root(g) and g not in S:
                        raise GateError(f"{list(g)} = {i}*{list(a)} + {j}*{list(b)} is missing from S")
    return S


def verify_mono(case: GroupCase, S, T: CosetTable | None = None, pres: Presentation | None = None,
                budget: int = DEFAULT_COSET_BUDGET) -> dict:
    """The image of U~_S in St has the order of U_S(R)."""
    S = _check_closed(case, S)
    pres = pres or presentation(case)
    T = T or enumerate_steinberg(pres, budget)
    cols = [2 * k + e for k, (a, _) in enumerate(pres.generators) if a in S for e in (0, 1)]
    lifted = len(T.orbit(cols)) if cols else 1
    gens = []
    for a in S:
        for v in case.module_elements(a):
            gens.append(((a, tuple(v)), case.root_matrix(a, v)))
    n = case.calc.rep.dim
    U = MatrixGroup(case.ring, gens or [(None, identity(case.ring, n))])
    return {"S": [list(a) for a in S], "St_image": lifted, "U": U.order,
            "status": "ok" if lifted == U.order else "fail"}


def _quotient_case(case: GroupCase, ideal):
    if len(ideal) == case.ring.size:
        return None
    quotient, _ = case.ring.quotient(ideal)
    return make_case(case.series, case.rank, case.J, quotient)


def verify_st_ker(case: GroupCase, ideal, budget: int = DEFAULT_COSET_BUDGET) -> dict:
    """|St(R)| = |St(R/I)| * |normal closure of the level-I generators|.

    The level-I generators are enumerated as a subgroup (its index is
    reported) and also killed as relators, which gives the order of
    St(R) modulo their normal closure.
    """
    ideal = frozenset(ideal)
    pres = presentation(case)
    T = enumerate_steinberg(pres, budget)
    level = pres.level_generators(ideal)
    sub = [[2 * g] for g in level]
    index = enumerate_steinberg(pres, budget, subgroup=sub).size
    quotient = enumerate_steinberg(pres, budget, extra_relators=sub).size
    qcase = _quotient_case(case, ideal)
    if qcase is None:
        st_quot = 1                      # St over the zero ring is trivial
    else:
        qp = presentation(qcase)
        st_quot = enumerate_steinberg(qp, budget).size
    closure = T.size // quotient
    ok = quotient == st_quot and T.size == st_quot * closure
    return {
        "case": case.label, "ideal": case.ring.ideal_label(ideal), "St": T.size,
        "St_quotient": st_quot, "level_generators": len(level), "subgroup_index": index,
        "quotient_order": quotient, "normal_closure": closure,
        "level_subgroup_normal": index == quotient, "status": "ok" if ok else "fail",
    }
