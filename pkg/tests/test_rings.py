import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relkit.rings import RingError, galois_field, matmul, parse_ring, zmod

NAMES = ["F2", "F3", "F5", "F4", "Z/4", "Z/6", "F2[t]/(t^2)"]


def test_sizes_and_locality():
    assert parse_ring("F4").size == 4 and parse_ring("F4").is_local
    assert parse_ring("Z/4").is_local
    assert not parse_ring("Z/6").is_local
    assert parse_ring("F2[t]/(t^2)").size == 4


def test_ideals_of_z4_and_truncated_polynomials():
    assert [len(I) for I in zmod(4).ideals] == [1, 2, 4]
    R = parse_ring("F2[t]/(t^2)")
    assert [R.ideal_label(I) for I in R.ideals] == ["0", "(t)", "R"]
    assert len(zmod(6).ideals) == 4


def test_field_has_only_trivial_ideals():
    assert [len(I) for I in galois_field(4).ideals] == [1, 4]


def test_f4_is_a_field_and_not_z4():
    F = galois_field(4)
    assert len(F.units) == 3
    assert F.additive_order == 2


def test_quotient_of_z4_by_two_is_f2():
    Q, residue = zmod(4).quotient(zmod(4).ideals[1])
    assert Q.size == 2 and list(residue) == [0, 1, 0, 1]


def test_quotient_by_unit_ideal_is_rejected():
    R = zmod(4)
    with pytest.raises(RingError):
        R.quotient(R.ideals[-1])


@pytest.mark.parametrize("text", ["F6", "Q", "Z/0", "F2[t]/(", ""])
def test_parse_errors(text):
    with pytest.raises(RingError):
        parse_ring(text)


def test_non_unit_has_no_inverse():
    with pytest.raises(RingError):
        zmod(4).inverse(2)


def test_matmul_reduces_in_the_ring():
    R = zmod(4)
    A = np.array([[2, 3], [1, 1]])
    assert matmul(R, A, A).tolist() == [[3, 1], [3, 0]]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(NAMES), st.data())
def test_ring_axioms(name, data):
    R = parse_ring(name)
    a, b, c = (data.draw(st.integers(0, R.size - 1)) for _ in range(3))
    assert R.add(a, b) == R.add(b, a)
    assert R.mul(a, b) == R.mul(b, a)
    assert R.mul(a, R.mul(b, c)) == R.mul(R.mul(a, b), c)
    assert R.add(a, R.add(b, c)) == R.add(R.add(a, b), c)
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == R.zero
    assert R.mul(R.one, a) == a
    assert R.parse(R.format(a)) == a
