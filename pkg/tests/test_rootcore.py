import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relkit.rootcore import (
    RootSystem,
    RootSystemError,
    all_systems,
    cartan_matrix,
    reflection_closure,
    root_neg,
)

# number of roots from the classification, independent of the construction
ROOT_COUNTS = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "E": lambda n: {6: 72, 7: 126, 8: 240}[n],
    "F": lambda n: 48,
    "G": lambda n: 12,
}
SYSTEMS = list(all_systems(8))
SMALL = [(s, r) for s, r in SYSTEMS if r <= 4]


def weyl_orbit_roots(cartan):
    """All roots as the orbit of the simple roots under simple reflections."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    todo = list(simple)
    while todo:
        x = todo.pop()
        for j in range(n):
            c = sum(x[k] * cartan[k][j] for k in range(n))
            y = list(x)
            y[j] -= c
            y = tuple(y)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


@pytest.mark.parametrize("series,rank", SYSTEMS)
def test_root_count_matches_classification(series, rank):
    R = RootSystem.build(series, rank)
    assert len(R.roots) == ROOT_COUNTS[series](rank)
    assert len(R.positive) == len(R.roots) // 2


@pytest.mark.parametrize("series,rank", SYSTEMS)
def test_roots_equal_weyl_orbit_of_simple_roots(series, rank):
    R = RootSystem.build(series, rank)
    assert set(R.roots) == weyl_orbit_roots(R.cartan)
    assert set(R.roots) == reflection_closure(R.cartan)


def test_a2_has_six_roots_three_positive():
    R = RootSystem.build("A", 2)
    assert len(R.roots) == 6
    assert len(R.positive) == 3


def test_g2_root_count_and_highest_height():
    R = RootSystem.build("G", 2)
    assert len(R.roots) == 12
    assert max(R.height(r) for r in R.roots) == 5


def test_a1_roots_are_plus_minus_simple():
    assert set(RootSystem.build("A", 1).roots) == {(1,), (-1,)}


def test_heights_in_a2():
    R = RootSystem.build("A", 2)
    assert R.height((1, 0)) == 1
    assert R.height((1, 1)) == 2


def test_highest_root_of_e8_has_height_29():
    R = RootSystem.build("E", 8)
    assert R.highest_root == (2, 3, 4, 6, 5, 4, 3, 2)
    assert R.height(R.highest_root) == 29


def test_root_sum_membership():
    R = RootSystem.build("A", 2)
    assert R.root_sum((1, 0), (0, 1)) == (1, 1)
    assert R.root_sum((1, 0), (1, 0)) is None
    assert R.root_sum((1, 0), (-1, 0)) is None


@pytest.mark.parametrize("series,rank,order", [("A", 2, 2), ("D", 4, 6), ("B", 2, 1), ("E", 6, 2),
                                               ("A", 1, 1), ("G", 2, 1), ("F", 4, 1)])
def test_automorphism_group_orders(series, rank, order):
    assert len(RootSystem.build(series, rank).automorphisms) == order


@pytest.mark.parametrize("series,rank", SMALL)
def test_automorphisms_match_exhaustive_permutation_scan(series, rank):
    R = RootSystem.build(series, rank)
    C = R.cartan
    expected = {p for p in itertools.permutations(range(rank))
                if all(C[p[i]][p[j]] == C[i][j] for i in range(rank) for j in range(rank))}
    assert {g.image for g in R.automorphisms} == expected


def test_d4_subgroup_lattice_is_that_of_s3():
    subs = RootSystem.build("D", 4).automorphism_subgroups()
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 3, 6]


def test_automorphism_group_closed_under_composition_and_inverse():
    autos = RootSystem.build("D", 4).automorphisms
    images = {g.image for g in autos}
    for a in autos:
        assert a.inverse().image in images
        for b in autos:
            assert a.compose(b).image in images


def _edge_set(diagram):
    return {(i, j) for i, j, _ in diagram["edges"]}


def test_extended_diagram_a2_is_a_triangle():
    assert _edge_set(RootSystem.build("A", 2).extended_diagram()) == {(0, 1), (0, 2), (1, 2)}


def test_extended_diagram_a1_has_one_quadruple_bond():
    d = RootSystem.build("A", 1).extended_diagram()
    assert d["edges"] == [(0, 1, 4)]


def test_extended_diagram_g2_is_a_path():
    d = RootSystem.build("G", 2).extended_diagram()
    degrees = [sum(k in (i, j) for i, j, _ in d["edges"]) for k in range(3)]
    assert len(d["edges"]) == 2 and sorted(degrees) == [1, 1, 2]


def test_unsupported_descriptor_is_rejected():
    with pytest.raises(RootSystemError):
        RootSystem.build("D", 3)
    with pytest.raises(RootSystemError):
        cartan_matrix("E", 9)


def test_json_serialization_fields():
    data = RootSystem.build("B", 2).to_json()
    assert set(data) == {"series", "rank", "cartan", "roots"}
    assert len(data["roots"]) == 8


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SYSTEMS), st.data())
def test_negation_height_and_uniqueness(system, data):
    R = RootSystem.build(*system)
    a = data.draw(st.sampled_from(R.roots))
    assert R.height(root_neg(a)) == -R.height(a)
    assert R.roots.count(a) == 1
    assert all(x >= 0 for x in a) or all(x <= 0 for x in a)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SYSTEMS), st.data())
def test_root_strings_are_short_and_reflections_close(system, data):
    R = RootSystem.build(*system)
    a = data.draw(st.sampled_from(R.roots))
    b = data.draw(st.sampled_from(R.roots))
    if a in (b, root_neg(b)):
        return
    p, q = R.string_bounds(b, a)
    assert p + q + 1 <= 4
    assert p - q == R.pairing(a, b)
    reflected = tuple(x - R.pairing(a, b) * y for x, y in zip(a, b))
    assert R.is_root(reflected)
