import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relkit.relroots import (
    ProjectionSpec,
    RelativeRootSystem,
    SpecError,
    campaign_specs,
    chain_to_max,
    check_special_chain,
    construct_chain_max,
    find_special_chain,
    rebase_chain,
    verify_section3,
)
from relkit.relroots.chains import check_chain_to_max, fiber_witnesses
from relkit.relroots.system import neg, proportionality
from relkit.relroots.verify import check_fiber_extremes
from relkit.rootcore import Permutation, RootSystem


def relative(series, rank, J, gamma=None):
    base = RootSystem.build(series, rank)
    perms = None if gamma is None else [Permutation(tuple(g)) for g in gamma]
    return RelativeRootSystem(ProjectionSpec.make(base, J, perms))


A2_SWAP = [(0, 1), (1, 0)]
SPECS = list(campaign_specs(max_rank=4))


# projection

def test_projection_kills_complement_of_J():
    rs = relative("A", 3, [0, 2])
    assert rs.spec.project((0, 1, 0)) == (0, 0)
    assert rs.spec.project((1, 1, 0)) == rs.spec.project((1, 0, 0)) == (1, 0)


def test_projection_identifies_gamma_orbits():
    rs = relative("A", 2, [0, 1], A2_SWAP)
    assert rs.spec.project((1, 1)) == (2,)
    assert rs.spec.project((1, 0)) == rs.spec.project((0, 1)) == (1,)


def test_gamma_must_be_a_closed_group_of_automorphisms():
    base = RootSystem.build("A", 2)
    with pytest.raises(SpecError):
        ProjectionSpec.make(base, [0, 1], [Permutation((1, 0))])
    with pytest.raises(SpecError):
        ProjectionSpec.make(RootSystem.build("B", 2), [0, 1], [Permutation((0, 1)), Permutation((1, 0))])


def test_J_must_be_gamma_invariant():
    base = RootSystem.build("A", 3)
    with pytest.raises(SpecError):
        ProjectionSpec.make(base, [0], [Permutation((0, 1, 2)), Permutation((2, 1, 0))])


# relative systems

def test_full_J_trivial_gamma_is_the_root_system_itself():
    rs = relative("B", 3, [0, 1, 2])
    assert set(rs.elements) == set(rs.base.roots)
    assert all(m == 1 for m in rs.multiples.values())
    assert all(len(f) == 1 for f in rs.fibers.values())


def test_a2_folded_by_swap_is_bc1():
    rs = relative("A", 2, [0, 1], A2_SWAP)
    assert rs.elements == [(-2,), (-1,), (1,), (2,)]
    assert rs.multiples[(1,)] == 2
    assert rs.rank == 1


def test_a3_with_outer_simple_roots_has_rank_two():
    rs = relative("A", 3, [0, 2])
    assert set(rs.elements) == {(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)}
    assert rs.rank == 2


def test_bracket_examples():
    a3 = relative("A", 3, [0, 2])
    assert a3.bracket([(1, 0)], [(0, 1)]) == {(1, 1)}
    a2 = relative("A", 2, [0, 1])
    assert a2.bracket([(1, 0)], [(1, 0)]) == frozenset()
    bc1 = relative("A", 2, [0, 1], A2_SWAP)
    assert bc1.bracket([(1,)], [(1,)]) == {(2,)}


def test_fiber_extremes():
    a2 = relative("A", 2, [0, 1])
    assert a2.fiber_extremes((1, 0)) == ((1, 0), (1, 0))
    a3 = relative("A", 3, [0, 2])
    assert a3.fiber((1, 0)) == [(1, 0, 0), (1, 1, 0)]
    assert a3.fiber_extremes((1, 0)) == ((1, 1, 0), (1, 0, 0))
    c3 = relative("C", 3, [2])
    assert c3.fiber_extremes((1,)) == ((2, 2, 1), (0, 0, 1))


def test_fiber_extremes_need_trivial_gamma():
    with pytest.raises(SpecError):
        relative("A", 2, [0, 1], A2_SWAP).fiber_extremes((1,))


def test_root_intervals():
    a2 = relative("A", 2, [0, 1])
    assert a2.root_interval((1, 0), (0, 1)) == (0, 1)
    assert a2.root_interval((1, 1), (0, 1)) == (1, 0)
    g2 = relative("G", 2, [0, 1])
    assert g2.root_interval((0, 1), (1, 0)) == (0, 3)
    with pytest.raises(SpecError):
        a2.root_interval((1, 0), (-1, 0))


# chains

def test_special_chain_trivial_and_simple_cases():
    a2 = relative("A", 2, [0, 1])
    assert find_special_chain(a2, (1, 0), (1, 0)) == []
    assert find_special_chain(a2, (1, 0), (1, 1)) == [(0, 1)]


def test_special_chain_across_the_highest_root_mirrors_the_constructed_chain():
    a2 = relative("A", 2, [0, 1])
    top = a2.highest
    found = find_special_chain(a2, neg(top), top)
    assert found is not None and not check_special_chain(a2, neg(top), top, found)
    built = construct_chain_max(a2)
    assert built["case"] == "a" and built["sigma"] == (1, 0)
    assert built["chain"] == [(-1, 0), (-1, -1), (0, -1)]
    mirrored = [neg(b) for b in built["chain"]]
    assert not check_special_chain(a2, neg(top), top, mirrored)
    # both have the shape (sigma, top, top - sigma) for a simple sigma
    for chain in (found, mirrored):
        assert len(chain) == 3 and chain[1] == top and chain[0] in a2.simple
        assert chain[2] == tuple(t - s for t, s in zip(top, chain[0]))


def test_constructed_chain_c2_is_case_b():
    c2 = relative("C", 2, [0, 1])
    built = construct_chain_max(c2)
    assert built["case"] == "b" and built["k"] == 2
    assert all(built["checks"].values())
    assert built["special_violations"] == []
    w = built["witnesses"]
    top = c2.base.highest_root
    assert sum(map(sum, w)) == -2 * sum(top)
    partial = top
    for a in w:
        partial = tuple(x + y for x, y in zip(partial, a))
        assert c2.base.is_root(partial)


def test_construction_needs_rank_two():
    with pytest.raises(SpecError):
        construct_chain_max(relative("A", 2, [0, 1], A2_SWAP))


def test_chain_to_max_examples():
    a2 = relative("A", 2, [0, 1])
    assert chain_to_max(a2, a2.highest) == []
    assert chain_to_max(a2, (1, 0)) == [(0, 1)]
    a3 = relative("A", 3, [0, 2])
    chain = chain_to_max(a3, (-1, -1))
    assert len(chain) >= 2 and proportionality((-1, -1), chain[0]) is None
    assert check_chain_to_max(a3, (-1, -1), chain) == []


def test_rebase_identity_when_a0_is_the_top():
    c3 = relative("C", 3, [0, 1])
    top = c3.base.highest_root
    seq = [neg(w) for w in construct_chain_max(c3)["witnesses"]]
    got = rebase_chain(c3, top, seq, top)
    assert [c3.spec.project(a) for a in got] == [c3.spec.project(a) for a in seq]


def test_rebase_singleton_fiber_returns_input():
    a3 = relative("A", 3, [0, 2])
    top = a3.base.highest_root
    assert a3.fiber(a3.spec.project(top)) == [top]
    seq = [(0, 1, 1)]
    assert rebase_chain(a3, top, seq, top) == seq


def test_rebase_nontrivial_instance():
    c3 = relative("C", 3, [1, 2])
    top = c3.base.highest_root
    seq = [(1, 1, 0), (2, 2, 1), (1, 1, 1)]
    a0 = (0, 2, 1)
    got = rebase_chain(c3, top, seq, a0)
    assert got is not None and got != seq
    assert [c3.spec.project(a) for a in got] == [c3.spec.project(a) for a in seq]
    cur = a0
    for a in got:
        assert sum(a) > 0
        cur = tuple(x - y for x, y in zip(cur, a))
        assert c3.base.is_root(cur)


def test_rebase_rejects_bad_hypotheses():
    a3 = relative("A", 3, [0, 2])
    with pytest.raises(SpecError):
        rebase_chain(a3, a3.base.highest_root, [(0, 1, 0)], a3.base.highest_root)


# verification reports

def test_verify_section3_all_pass_on_a2():
    rows = verify_section3(relative("A", 2, [0, 1]))
    assert rows and all(r["status"] == "pass" for r in rows)


def test_corrupted_fiber_is_reported_with_witness():
    rs = relative("A", 3, [0, 2])
    rs.fibers[(1, 0)] = [(1, 0, 0), (0, 1, 1)]
    row = check_fiber_extremes(rs)
    assert row["status"] == "fail"
    assert row["witness"]["alpha"] == [1, 0]


def test_twisted_fiber_uniqueness_is_measured_not_failed():
    rs = relative("A", 2, [0, 1], A2_SWAP)
    assert check_fiber_extremes(rs)["status"] == "measured"


def test_fiber_witnesses_absent_for_bad_chain():
    a2 = relative("A", 2, [0, 1])
    assert fiber_witnesses(a2, a2.base.highest_root, [(1, 0)]) is None


# properties

spec_strategy = st.sampled_from(SPECS)


@settings(max_examples=40, deadline=None)
@given(spec_strategy, st.data())
def test_projection_is_linear_and_gamma_invariant(spec, data):
    base = spec.base
    a = data.draw(st.sampled_from(base.roots))
    b = data.draw(st.sampled_from(base.roots))
    s = base.root_sum(a, b)
    if s is not None:
        assert spec.project(s) == tuple(x + y for x, y in zip(spec.project(a), spec.project(b)))
    for g in spec.gamma:
        assert spec.project(g.act(a)) == spec.project(a)


@settings(max_examples=40, deadline=None)
@given(spec_strategy)
def test_fibers_partition_and_multiples_have_no_gaps(spec):
    rs = RelativeRootSystem(spec)
    covered = sorted(r for f in rs.fibers.values() for r in f) + sorted(rs.zero_fiber)
    assert sorted(covered) == sorted(spec.base.roots)
    for a in rs.elements:
        assert rs.is_root(neg(a))
        m = rs.multiples[a]
        assert all(rs.is_root(tuple(k * x for x in a)) for k in range(1, m + 1))


@settings(max_examples=40, deadline=None)
@given(spec_strategy)
def test_maximal_root_combinations_with_simple_roots(spec):
    rs = RelativeRootSystem(spec)
    if rs.rank < 2 or not rs.is_irreducible:
        return
    top = rs.highest
    bound = max(abs(x) for e in rs.elements for x in e) + 1
    for g in rs.simple:
        if proportionality(top, g) is not None:
            continue
        for i in range(-3, 4):
            for j in range(-bound, bound + 1):
                if i == 0 or not rs.is_root(tuple(i * t + j * y for t, y in zip(top, g))):
                    continue
                assert i in (-1, 1)
                assert j == 0 or (i > 0) != (j > 0)


@settings(max_examples=40, deadline=None)
@given(spec_strategy, st.data())
def test_emitted_special_chains_pass_the_independent_checker(spec, data):
    rs = RelativeRootSystem(spec)
    if not rs.is_irreducible:
        return
    delta = data.draw(st.sampled_from(rs.elements))
    gamma = data.draw(st.sampled_from(rs.elements))
    chain = find_special_chain(rs, delta, gamma)
    if chain is not None:
        assert check_special_chain(rs, delta, gamma, chain) == []
