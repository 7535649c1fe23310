import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relkit.grouplab import GateError, make_case
from relkit.rings import identity
from relkit.steinberg import (
    BACKENDS,
    CosetOverflow,
    enumerate_steinberg,
    parse_text,
    presentation,
    todd_coxeter,
    verify_K2_centrality,
    verify_mono,
    verify_st_ker,
)
from relkit.steinberg.presentation import canonical_relator, free_reduce, inverse_word


def sl_order(n, q):
    out = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= q ** i - 1
    return out


@pytest.fixture(scope="module")
def a2_f2():
    return make_case("A", 2, (1, 2), "F2")


@pytest.fixture(scope="module")
def a2_f2_pres(a2_f2):
    return presentation(a2_f2)


# words

def test_word_helpers():
    assert inverse_word([0, 3]) == [2, 1]
    assert free_reduce([0, 2, 3, 1]) == []
    assert free_reduce([1, 2, 0]) == [2]
    assert canonical_relator([2, 0]) == canonical_relator([0, 2]) == canonical_relator([1, 3])


# presentations

def test_generator_counts(a2_f2_pres):
    assert a2_f2_pres.ngens == 6
    assert presentation(make_case("A", 2, (1, 2), "F3")).ngens == 12


def test_relators_hold_in_the_matrix_group(a2_f2_pres):
    assert a2_f2_pres.relator_violations() == []


def test_sum_relators_over_f2_are_involutions(a2_f2_pres):
    sums = [w for w, tag in zip(a2_f2_pres.relators, a2_f2_pres.tags) if tag == "sum"]
    assert len(sums) == 6
    assert all(len(w) == 2 and w[0] == w[1] for w in sums)


def test_zero_coordinates_give_the_empty_word(a2_f2_pres):
    assert a2_f2_pres.letter((1, 0), (0,)) == []


def test_exchange_format_round_trip(a2_f2_pres):
    gens, rels, tags = parse_text(a2_f2_pres.to_text())
    assert [g[0] for g in gens] == list(range(1, 7))
    assert [(alpha, tuple(int(x) for x in v)) for _, alpha, v in gens] == a2_f2_pres.generators
    assert rels == a2_f2_pres.relators and tags == a2_f2_pres.tags


def test_exchange_format_rejects_unknown_lines():
    with pytest.raises(ValueError):
        parse_text("generator 1\n")


# coset enumeration

@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_small_groups(backend):
    assert todd_coxeter(1, [[0]], backend=backend).size == 1
    assert todd_coxeter(1, [[0, 0, 0]], backend=backend).size == 3
    # S3 as a Coxeter group, and the subgroup <a> of index 3
    s3 = [[0, 0], [2, 2], [0, 2] * 3]
    assert todd_coxeter(2, s3, backend=backend).size == 6
    assert todd_coxeter(2, s3, subgroup=[[0]], backend=backend).size == 3


def test_backends_give_identical_tables(a2_f2_pres):
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    pres = presentation(make_case("A", 2, (1, 2), "F3"))
    tables = [enumerate_steinberg(pres, backend=b) for b in sorted(BACKENDS)]
    assert np.array_equal(tables[0].table, tables[1].table)
    assert tables[0].stats == tables[1].stats


def test_overflow_raises():
    with pytest.raises(CosetOverflow):
        todd_coxeter(1, [[0] * 50], max_cosets=10)


def test_unknown_backend_is_rejected():
    env = dict(os.environ, RELKIT_BACKEND="fortran")
    proc = subprocess.run([sys.executable, "-c", "import relkit.steinberg"], env=env,
                          capture_output=True, text=True)
    assert proc.returncode != 0 and "ValueError" in proc.stderr


def test_python_backend_is_selectable(monkeypatch):
    import relkit.steinberg.cosets as cosets
    monkeypatch.setenv("RELKIT_BACKEND", "python")
    assert cosets.default_backend() == "python"
    monkeypatch.delenv("RELKIT_BACKEND")
    assert importlib.reload(cosets).BACKEND in BACKENDS


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 12), st.sampled_from(sorted(BACKENDS)))
def test_cyclic_group_orders(n, backend):
    assert todd_coxeter(1, [[0] * n], backend=backend).size == n


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 7))
def test_dihedral_orders_agree_across_backends(n):
    rels = [[0, 0], [2, 2], [0, 2] * n]
    sizes = {todd_coxeter(2, rels, backend=b).size for b in BACKENDS}
    assert sizes == {2 * n}


# Steinberg groups

def test_steinberg_sl3_f2(a2_f2):
    row = verify_K2_centrality(a2_f2)
    assert row["St"] == sl_order(3, 2) and row["kernel_order"] == 1
    assert row["divides"] and row["central"] and row["status"] == "ok"


def test_coset_representatives_evaluate_to_their_matrices(a2_f2, a2_f2_pres):
    T = enumerate_steinberg(a2_f2_pres)
    from relkit.steinberg.verify import coset_matrices
    mats = coset_matrices(a2_f2_pres, T)
    for c in (0, 5, 100):
        assert np.array_equal(mats[c], a2_f2_pres.evaluate(T.rep_word(c)))
    assert np.array_equal(mats[0], identity(a2_f2.ring, 3))


def test_centrality_gate_rejects_non_local_rings():
    with pytest.raises(GateError):
        verify_K2_centrality(make_case("A", 2, (1, 2), "Z/6"))


def test_mono_on_positive_roots_and_single_root(a2_f2):
    pos = [(1, 0), (0, 1), (1, 1)]
    assert verify_mono(a2_f2, pos)["St_image"] == 8
    row = verify_mono(a2_f2, [(1, 1)])
    assert row["St_image"] == row["U"] == 2


def test_mono_rejects_opposite_and_unclosed_sets(a2_f2):
    with pytest.raises(GateError):
        verify_mono(a2_f2, [(1, 0), (-1, 0)])
    with pytest.raises(GateError):
        verify_mono(a2_f2, [(1, 0), (0, 1)])


def test_st_ker_unit_and_zero_ideals(a2_f2):
    ring = a2_f2.ring
    whole = verify_st_ker(a2_f2, ring.ideals[-1])
    assert whole["St_quotient"] == 1 and whole["normal_closure"] == 168 and whole["status"] == "ok"
    zero = verify_st_ker(a2_f2, ring.ideals[0])
    assert zero["level_generators"] == 0 and zero["normal_closure"] == 1 and zero["status"] == "ok"


def test_st_ker_z4_level_two():
    case = make_case("A", 2, (1, 2), "Z/4")
    row = verify_st_ker(case, case.ring.ideals[1])
    # K2(Z/4) has order 2 and SL3(Z/4) has order 168 * 2^8
    assert row["St"] == 2 * sl_order(3, 2) * 2 ** 8
    assert row["St_quotient"] == row["quotient_order"] == 168
    assert row["normal_closure"] == 512 and row["status"] == "ok"
    assert not row["level_subgroup_normal"]
