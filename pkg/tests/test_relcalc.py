import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relkit.poly import Poly
from relkit.relcalc import FactorizationError, RelCalc, symbols
from relkit.relcalc.checks import (
    check_ABe,
    check_chain_comm,
    check_F_surjective,
    chain_samples,
    rep_independence,
    roster_specs,
    verify_chev,
    verify_round_trip,
    verify_sum,
)
from relkit.relcalc.ringrep import RingRealization
from relkit.relroots import ProjectionSpec, SpecError
from relkit.rings import parse_ring, zmod
from relkit.rootcore import Permutation, RootSystem


def calc_for(series, rank, J):
    return RelCalc(ProjectionSpec.make(RootSystem.build(series, rank), J))


@pytest.fixture(scope="module")
def a2():
    return calc_for("A", 2, [0, 1])


@pytest.fixture(scope="module")
def a3():
    return calc_for("A", 3, [0, 2])


@pytest.fixture(scope="module")
def c2_short():
    return calc_for("C", 2, [0])


def test_element_at_zero_is_identity(a3):
    assert a3.element((1, 0), [0, 0]).is_identity()


def test_full_J_elements_are_single_root_elements(a2):
    t = Poly.var("t")
    assert a2.element((1, 1), [t]) == a2.rep.root_element((1, 1), t)


def test_twisted_projection_is_rejected():
    spec = ProjectionSpec.make(RootSystem.build("A", 2), [0, 1],
                               [Permutation((0, 1)), Permutation((1, 0))])
    with pytest.raises(SpecError):
        RelCalc(spec)


def test_fiber_factors_commute_so_order_does_not_matter(a3):
    v = symbols("v", 2)
    fib = a3.fiber((1, 0))
    fwd = a3.rep.root_element(fib[0], v[0]) @ a3.rep.root_element(fib[1], v[1])
    bwd = a3.rep.root_element(fib[1], v[1]) @ a3.rep.root_element(fib[0], v[0])
    assert fwd == bwd == a3.element((1, 0), v)


def test_inverse_element(a3):
    v = symbols("v", 2)
    assert (a3.element((1, 0), v) @ a3.element_inverse((1, 0), v)).is_identity()


def test_round_trip_on_positive_roots(a3):
    assert verify_round_trip(a3) == {"canonical": True, "layer-reversed": True}


def test_identity_factorizes_to_zeros(a3):
    got = a3.unipotent_factorize(a3.element((1, 0), [0, 0]), [(1, 0), (1, 1)])
    assert all(not c for coords in got.values() for c in coords)


def test_negative_root_is_not_a_positive_product(a2):
    with pytest.raises(FactorizationError):
        a2.unipotent_factorize(a2.element((-1, 0), [1]), [(1, 0), (0, 1), (1, 1)])


def test_sum_map_trivial_without_multiples(a3):
    assert a3.q((1, 0)) == {}
    assert verify_sum(a3, (1, 0))["identity"]


def test_sum_map_c2_short_projection_matches_commutator_move(c2_short):
    # moving x_b(v1) past x_a(w0) leaves x_{a+b}(N(b, a) v1 w0) with a + b central
    v, w = symbols("v", 2), symbols("w", 2)
    q = c2_short.q((1,))
    assert set(q) == {2}
    n = c2_short.rep.constants.N((1, 1), (1, 0))
    assert q[2] == [n * v[1] * w[0]]
    assert abs(n) == 2


def test_sum_map_homogeneous_and_vanishing(c2_short):
    row = verify_sum(c2_short, (1,))
    assert row["identity"] and row["homogeneous"] and row["q_at_zero"]
    assert row["degrees"] == [2]


def test_commutator_identity_and_bidegree(a3):
    row = verify_chev(a3, (1, 0), (0, 1))
    assert row["identity"] and row["bidegree"] and row["biadditive"]


def test_commutator_of_independent_simple_roots_in_a2(a2):
    u, v = symbols("u", 1), symbols("v", 1)
    n = a2.N((1, 0), (0, 1))
    assert n == {(1, 1): [a2.rep.constants.N((1, 0), (0, 1)) * u[0] * v[0]]}


def test_opposite_multiples_have_no_commutator(c2_short):
    with pytest.raises(SpecError):
        c2_short.commutator_targets((1,), (-1,))


def test_n_chain_requires_root_partial_sums(a2):
    with pytest.raises(SpecError):
        a2.n_chain([(1, 0), (1, 0)], [[1], [1]])
    out = a2.n_chain([(1, 0), (0, 1)], [[Poly.var("s")], [Poly.var("t")]])
    assert out == [a2.rep.constants.N((1, 0), (0, 1)) * Poly.var("s") * Poly.var("t")]


def test_check_ABe_over_z4_counts_all_nonzero_vectors(a3):
    row = check_ABe(a3, (1, 0), (0, 1), zmod(4))
    assert row["checked"] == 15 and row["failures"] == 0


def test_check_ABe_rejects_dependent_pair(a3):
    with pytest.raises(ValueError):
        check_ABe(a3, (1, 0), (1, 0), zmod(2))


def test_chain_commutator_single_step_exhaustive(a2):
    real = RingRealization(a2, zmod(3))
    samples = chain_samples(real, [(1, 0), (0, 1)], True, 0, None)
    row = check_chain_comm(real, (1, 0), (1, 1), [(0, 1)], samples)
    assert row["samples"] == 9 and row["failures"] == 0 and row["tail_roots"] == 0


def test_F_surjective_small_case(a3):
    row = check_F_surjective(a3, 2)
    assert a3.fiber((1, 1)) == [(1, 1, 1)]
    assert row["surjective"] and row["span"] == row["target"] == 1


def test_F_surjective_needs_invertible_constants():
    with pytest.raises(ValueError):
        check_F_surjective(calc_for("C", 3, [0, 1]), 2)


def test_adjoint_and_classical_calculus_agree(c2_short):
    assert rep_independence(c2_short) == []


def test_roster_is_split():
    assert all(spec.gamma_is_trivial for spec in roster_specs())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_sum_identity_holds_over_prime_fields(p, data):
    calc = calc_for("C", 2, [0])
    ring = parse_ring(f"F{p}")
    real = RingRealization(calc, ring)
    alpha = (1,)
    v = np.array([data.draw(st.lists(st.integers(0, p - 1), min_size=2, max_size=2))])
    w = np.array([data.draw(st.lists(st.integers(0, p - 1), min_size=2, max_size=2))])
    lhs = real.mul(real.X(alpha, v), real.X(alpha, w))
    rhs = real.X(alpha, ring.add(v, w))
    assign = {f"v{k}": v[:, k] for k in range(2)} | {f"w{k}": w[:, k] for k in range(2)}
    for i, comp in calc.q(alpha).items():
        vals = np.stack([real.evaluate(c, assign) for c in comp], axis=1)
        rhs = real.mul(rhs, real.X((i,), vals))
    assert np.array_equal(lhs, rhs)
