"""Chains of relative roots: searches, constructions and an independent checker.

A special chain from delta to gamma is a sequence of positive relative roots
beta_1..beta_n with delta + beta_1 + ... + beta_n = gamma such that

* every partial sum p_i = delta + beta_1 + ... + beta_i is a relative root,
* with S_0 = {delta} and S_i = [S_{i-1}, beta_i], no element of S_{i-1} is a
  negative rational multiple of beta_i (so 0 never enters the iterated bracket),
* p_{i+1} is minimal, with respect to subtracting simple relative roots, among
  the relative roots k p_i + l beta_{i+1} with k, l > 0.

A chain of negative relative roots is special when its negation is special
between -delta and -gamma.
"""
from __future__ import annotations

from collections import deque

from .system import (
    RelativeRootSystem,
    SpecError,
    _add,
    _scale,
    _sub,
    fiber_minimal,
    neg,
    opposite_proportional,
    proportionality,
)


def _nonneg(v) -> bool:
    return all(x >= 0 for x in v)


def _nonpos(v) -> bool:
    return all(x <= 0 for x in v)


def check_special_chain(rs: RelativeRootSystem, delta, gamma, chain) -> list:
    """Return the list of violated conditions; empty means the chain is special."""
    delta, gamma = tuple(delta), tuple(gamma)
    chain = [tuple(b) for b in chain]
    if not chain:
        return [] if delta == gamma else ["sum"]
    if all(sum(b) > 0 for b in chain):
        return _check_positive(rs, delta, gamma, chain)
    if all(sum(b) < 0 for b in chain):
        return _check_positive(rs, neg(delta), neg(gamma), [neg(b) for b in chain])
    return ["sign"]


def _check_positive(rs, delta, gamma, chain) -> list:
    bad = []
    for b in chain:
        if not rs.is_root(b):
            bad.append(f"not a relative root: {list(b)}")
    if bad:
        return bad
    total = delta
    for b in chain:
        total = _add(total, b)
    if total != gamma:
        bad.append("sum")
    partial = [delta]
    for b in chain:
        partial.append(_add(partial[-1], b))
    for i, p in enumerate(partial[1:], start=1):
        if not rs.is_root(p):
            bad.append(f"partial sum {i} not a relative root")
    S = frozenset([delta])
    for i, b in enumerate(chain, start=1):
        if any(opposite_proportional(x, b) for x in S):
            bad.append(f"zero in bracket at step {i}")
            break
        S = rs.bracket(S, [b])
    for i in range(len(chain)):
        p, b, nxt = partial[i], chain[i], partial[i + 1]
        T = rs.pair_bracket(p, b)
        if not rs.is_minimal_in(nxt, T):
            bad.append(f"partial sum {i + 1} not minimal")
    return bad


def find_special_chain(rs: RelativeRootSystem, delta, gamma):
    """Shortest, then lexicographically smallest, special chain or None."""
    delta, gamma = tuple(delta), tuple(gamma)
    if delta == gamma:
        return []
    diff = _sub(gamma, delta)
    if _nonneg(diff):
        return _search_positive(rs, delta, gamma)
    if _nonpos(diff):
        found = _search_positive(rs, neg(delta), neg(gamma))
        return None if found is None else [neg(b) for b in found]
    return None


def _search_positive(rs, delta, gamma):
    start = (delta, frozenset([delta]))
    parent = {start: None}
    queue = deque([start])
    positives = rs.positive
    while queue:
        state = queue.popleft()
        p, S = state
        for b in positives:
            q = _add(p, b)
            if not rs.is_root(q) or not _nonneg(_sub(gamma, q)):
                continue
            if any(opposite_proportional(x, b) for x in S):
                continue
            if not rs.is_minimal_in(q, rs.pair_bracket(p, b)):
                continue
            nstate = (q, rs.bracket(S, [b]))
            if nstate in parent:
                continue
            parent[nstate] = (state, b)
            if q == gamma:
                return _unwind(parent, nstate)
            queue.append(nstate)
    return None


def enumerate_special_chains(rs: RelativeRootSystem, delta, gamma, max_len: int) -> list:
    """Every positive special chain from delta to gamma of length at most max_len."""
    delta, gamma = tuple(delta), tuple(gamma)
    out = []

    def extend(p, chain):
        if p == gamma and chain:
            out.append(list(chain))
            return
        if len(chain) >= max_len:
            return
        for b in rs.positive:
            q = _add(p, b)
            if not rs.is_root(q) or not _nonneg(_sub(gamma, q)):
                continue
            chain.append(b)
            if not check_special_chain(rs, delta, q, chain):
                extend(q, chain)
            chain.pop()

    extend(delta, [])
    return out


def dominance_minimal(rs: RelativeRootSystem, delta, chain) -> bool:
    """Is every partial sum minimal in the dominance order within its bracket set?"""
    p = tuple(delta)
    for b in chain:
        q = _add(p, b)
        for y in rs.pair_bracket(p, b):
            if y != q and _nonneg(_sub(q, y)):
                return False
        p = q
    return True


def _unwind(parent, state) -> list:
    out = []
    while parent[state] is not None:
        state, b = parent[state]
        out.append(b)
    return out[::-1]


def check_chain_to_max(rs: RelativeRootSystem, alpha0, chain) -> list:
    """Conditions for a chain from alpha0 up to the maximal relative root."""
    bad = []
    top = rs.highest
    p = tuple(alpha0)
    for i, b in enumerate(chain):
        if not rs.is_root(b) or sum(b) <= 0:
            bad.append(f"step {i + 1} not a positive relative root")
            continue
        if opposite_proportional(p, b):
            bad.append(f"opposite multiples at step {i + 1}")
        if sum(alpha0) > 0 and b not in rs.simple:
            bad.append(f"step {i + 1} not simple")
        if sum(alpha0) < 0 and i == 0 and proportionality(alpha0, b) is not None:
            bad.append("first step proportional to start")
        p = _add(p, b)
        if not rs.is_root(p):
            bad.append(f"partial sum {i + 1} not a relative root")
    if p != top:
        bad.append("does not end at the maximal relative root")
    return bad


def chain_to_max(rs: RelativeRootSystem, alpha0):
    """Breadth-first chain from alpha0 to the maximal relative root, or None."""
    alpha0 = tuple(alpha0)
    top = rs.highest
    if alpha0 == top:
        return []
    positive_start = sum(alpha0) > 0
    steps = rs.simple if positive_start else rs.positive
    parent = {alpha0: None}
    queue = deque([alpha0])
    while queue:
        p = queue.popleft()
        for b in steps:
            q = _add(p, b)
            if q in parent or not rs.is_root(q) or not _nonneg(_sub(top, q)):
                continue
            if opposite_proportional(p, b):
                continue
            if p == alpha0 and not positive_start and proportionality(p, b) is not None:
                continue
            parent[q] = (p, b)
            if q == top:
                return _unwind(parent, q)
            queue.append(q)
    return None


def _nearest_paths(rs: RelativeRootSystem):
    """Shortest extended-diagram paths from each nearest J-node to the -h node."""
    base = rs.base
    diagram = base.extended_diagram()
    n = len(diagram["nodes"])
    adj = {i: [] for i in range(n)}
    for i, j, _ in diagram["edges"]:
        adj[i].append(j)
        adj[j].append(i)
    low = n - 1
    dist = {low: 0}
    order = deque([low])
    while order:
        x = order.popleft()
        for y in sorted(adj[x]):
            if y not in dist:
                dist[y] = dist[x] + 1
                order.append(y)
    J = rs.spec.J
    dmin = min(dist[j] for j in J)
    nearest = [j for j in J if dist[j] == dmin]
    for s0 in nearest:
        # enumerate all shortest paths s0 -> low
        paths = [[s0]]
        for _ in range(dmin - 1):
            paths = [path + [y] for path in paths for y in sorted(adj[path[-1]])
                     if dist[y] == dist[path[-1]] - 1]
        for path in paths:
            yield s0, path


def construct_chain_max(rs: RelativeRootSystem) -> dict:
    """Find sigma, the case tag and the chain from the maximal relative root to its negative.

    Candidates for s come first from the extended-diagram recipe (path from
    the nearest J-node to the lowest-root node), then from all positive
    roots in canonical order.  The first candidate for which every claimed
    identity holds is returned; recipe candidates that fail are listed under
    ``recipe_gaps``.
    """
    if rs.rank < 2 or not rs.is_irreducible:
        raise SpecError("construction needs an irreducible relative system of rank >= 2")
    base = rs.base
    top_abs = base.highest_root
    if rs.spec.project(top_abs) != rs.highest:
        raise ChainFailure("maximal relative root is not the image of the highest root", {})
    recipe = []
    for s0, path in _nearest_paths(rs):
        s = tuple(sum(base.simple[i][k] for i in path) for k in range(base.rank))
        if s not in recipe:
            recipe.append(s)
    candidates = [(s, True) for s in recipe] + [(s, False) for s in base.positive if s not in recipe]
    gaps = []
    first_bad = None
    for s, from_recipe in candidates:
        out = _evaluate_candidate(rs, s)
        if out is None:
            if from_recipe:
                gaps.append({"s": list(s), "failed_checks": ["admissibility"]})
            continue
        failed = [k for k, v in out["checks"].items() if not v]
        ok = not failed and not out["special_violations"] and out["witnesses"] is not None
        if ok:
            out["from_recipe"] = from_recipe
            out["recipe_gaps"] = gaps
            return out
        if from_recipe:
            gaps.append({"s": list(s), "case": out["case"], "k": out["k"], "failed_checks": failed})
        first_bad = first_bad or out
    if first_bad is None:
        raise ChainFailure("no admissible s", {"recipe_gaps": gaps})
    first_bad["from_recipe"] = False
    first_bad["recipe_gaps"] = gaps
    return first_bad


def _evaluate_candidate(rs: RelativeRootSystem, s):
    base = rs.base
    top_abs = base.highest_root
    top = rs.highest
    sigma = rs.spec.project(s)
    rest = _sub(top_abs, s)
    if not (base.is_root(s) and base.is_root(rest) and sum(rest) > 0 and sigma in rs.simple):
        return None
    k = 1
    while rs.is_root(_sub(top, _scale(k + 1, sigma))):
        k += 1
    checks = {}
    mismatch = {}
    if k == 1:
        case = "a"
        plane = {x for x in rs.elements if _in_plane(x, top, sigma)}
        expect = {top, neg(top), sigma, neg(sigma), _sub(top, sigma), neg(_sub(top, sigma))}
        checks["plane"] = plane == expect
        checks["[h,-s]"] = rs.pair_bracket(top, neg(sigma)) == {_sub(top, sigma)}
        checks["[h-s,-h]"] = rs.pair_bracket(_sub(top, sigma), neg(top)) == {neg(sigma)}
        checks["[-s,-h+s]"] = rs.pair_bracket(neg(sigma), _sub(sigma, top)) == {neg(top)}
        chain = [neg(sigma), neg(top), _sub(sigma, top)]
    else:
        case = "b"
        top_k = _sub(top, _scale(k, sigma))
        s_k1 = _scale(k - 1, sigma)
        checks["(k-1)s root"] = rs.is_root(s_k1)
        bound = max(abs(x) for e in rs.elements for x in e) + 1
        checks["no higher multiples"] = not any(
            rs.is_root(_scale(i, sigma)) for i in range(k + 1, k + bound + 1))
        first = rs.pair_bracket(top, neg(sigma))
        checks["[h,-s]"] = first == {_sub(top, _scale(i, sigma)) for i in range(1, k + 1)}
        checks["[[h,-s],-(k-1)s]"] = rs.bracket(first, [neg(s_k1)]) == {top_k}
        second = rs.pair_bracket(top_k, _sub(sigma, top))
        want = {neg(s_k1)} | ({neg(top)} if k == 2 else set())
        checks["[h-ks,-h+s]"] = second == want
        if second != want:
            mismatch["[h-ks,-h+s]"] = {"expected": sorted(map(list, want)),
                                       "actual": sorted(map(list, second))}
        checks["[[h-ks,-h+s],-h+(k-1)s]"] = rs.bracket(second, [_sub(s_k1, top)]) == {neg(top)}
        chain = [neg(sigma), neg(s_k1), _sub(sigma, top), _sub(s_k1, top)]
    return {
        "s": s,
        "sigma": sigma,
        "k": k,
        "case": case,
        "chain": chain,
        "checks": checks,
        "mismatch": mismatch,
        "special_violations": check_special_chain(rs, top, neg(top), chain),
        "witnesses": fiber_witnesses(rs, top_abs, chain),
    }


def _in_plane(x, a, b) -> bool:
    """Is x an integer combination of the independent vectors a and b?"""
    n = len(a)
    for k in range(n):
        for m in range(k + 1, n):
            det = a[k] * b[m] - a[m] * b[k]
            if det:
                i_num = x[k] * b[m] - x[m] * b[k]
                j_num = a[k] * x[m] - a[m] * x[k]
                if i_num % det or j_num % det:
                    return False
                i, j = i_num // det, j_num // det
                return all(x[t] == i * a[t] + j * b[t] for t in range(n))
    return False


class ChainFailure(Exception):
    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


def fiber_witnesses(rs: RelativeRootSystem, start, chain):
    """Roots a_i over chain[i] with every partial sum start + a_1 + ... a root.

    The final sum must be the negative of ``start``.  Depth-first over fibers
    in canonical order; returns None if no choice works.
    """
    base = rs.base
    goal = neg(start)
    dead = set()

    def walk(i, cur):
        if i == len(chain):
            return [] if cur == goal else None
        if (i, cur) in dead:
            return None
        for a in rs.fiber(chain[i]):
            nxt = _add(cur, a)
            if base.is_root(nxt):
                rest = walk(i + 1, nxt)
                if rest is not None:
                    return [a] + rest
        dead.add((i, cur))
        return None

    return walk(0, tuple(start))


def rebase_chain(rs: RelativeRootSystem, top_abs, seq, a0):
    """Find a'_i over the same relative roots as seq with a0 - a'_1 - ... - a'_n = b."""
    base = rs.base
    spec = rs.spec
    top_abs, a0 = tuple(top_abs), tuple(a0)
    seq = [tuple(a) for a in seq]
    cur = top_abs
    for a in seq:
        if sum(a) <= 0 or not base.is_root(a) or not any(spec.project(a)):
            raise SpecError(f"sequence element {a} must be a positive root with nonzero image")
        cur = _sub(cur, a)
        if not base.is_root(cur):
            raise SpecError("partial difference is not a root")
    b = cur
    pb = spec.project(b)
    if not any(pb) or b not in fiber_minimal(base, rs.fiber(pb)):
        raise SpecError("endpoint is not a minimal root of a nonzero fiber")
    if spec.project(a0) != spec.project(top_abs):
        raise SpecError("a0 must lie over the same relative root as the top root")
    targets = [spec.project(a) for a in seq]
    dead = set()

    def walk(i, c):
        if i == len(seq):
            return [] if c == b else None
        if (i, c) in dead:
            return None
        for a in rs.fiber(targets[i]):
            if sum(a) <= 0:
                continue
            nxt = _sub(c, a)
            if base.is_root(nxt):
                rest = walk(i + 1, nxt)
                if rest is not None:
                    return [a] + rest
        dead.add((i, c))
        return None

    return walk(0, a0)


def descending_tree(rs: RelativeRootSystem, top_abs) -> dict:
    """BFS tree from top_abs subtracting positive roots with nonzero image."""
    base = rs.base
    spec = rs.spec
    steps = [a for a in base.positive if any(spec.project(a))]
    parent = {tuple(top_abs): None}
    queue = deque([tuple(top_abs)])
    while queue:
        x = queue.popleft()
        for a in steps:
            y = _sub(x, a)
            if y not in parent and base.is_root(y):
                parent[y] = (x, a)
                queue.append(y)
    return parent
