import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipph.errors import BadInterval, FiltrationOrderViolation, MissingFace, NotAComplex
from lipph.persistence import (
    INF,
    Barcode,
    Cell,
    betti,
    build_filtered_complex,
    complex_from_json,
    complex_to_json,
    compute_barcode,
    rank_invariant,
)

from oracles import brute_betti, random_complex, seeded


def morse():
    return build_filtered_complex([Cell(0, 0, (), 1), Cell(1, 0, (), 2), Cell(2, 1, ((0, 1), (1, 1)), 3)])


def circle(p=2):
    m = p - 1
    cells = [Cell(i, 0, (), 0) for i in range(3)]
    cells += [Cell(3, 1, ((0, m), (1, 1)), 1), Cell(4, 1, ((1, m), (2, 1)), 1), Cell(5, 1, ((0, m), (2, 1)), 1)]
    return build_filtered_complex(cells, p)


def test_single_vertex():
    cx = build_filtered_complex([Cell(0, 0, (), 0)])
    assert len(cx) == 1
    assert compute_barcode(cx, 0).bars == ((0, INF),)


def test_edge_after_endpoints_is_valid():
    cx = build_filtered_complex([Cell(0, 0, (), 0), Cell(1, 0, (), 0), Cell(2, 1, ((0, 1), (1, 1)), 1)])
    assert len(cx) == 3


def test_face_after_coface_rejected():
    with pytest.raises(FiltrationOrderViolation):
        build_filtered_complex([Cell(0, 0, (), 0), Cell(1, 0, (), 1), Cell(2, 1, ((0, 1), (1, 1)), 0)])


def test_missing_face_rejected():
    with pytest.raises(MissingFace):
        build_filtered_complex([Cell(0, 0, (), 0), Cell(1, 1, ((0, 1), (7, 1)), 1)])


def test_nonzero_boundary_of_boundary_rejected():
    # a triangle whose boundary misses one edge's orientation over Z/3
    cells = [Cell(i, 0, (), 0) for i in range(3)]
    cells += [Cell(3, 1, ((0, 2), (1, 1)), 0), Cell(4, 1, ((1, 2), (2, 1)), 0), Cell(5, 1, ((0, 2), (2, 1)), 0)]
    cells += [Cell(6, 2, ((3, 1), (4, 1), (5, 1)), 0)]
    with pytest.raises(NotAComplex):
        build_filtered_complex(cells, 3)


def test_morse_example():
    cx = morse()
    assert compute_barcode(cx, 0).bars == ((1, INF), (2, 3))
    assert rank_invariant(cx, 0, 2, 3) == 1


def test_filtered_circle():
    cx = circle()
    assert compute_barcode(cx, 0).bars == ((0, 1), (0, 1), (0, INF))
    assert compute_barcode(cx, 1).bars == ((1, INF),)
    assert rank_invariant(cx, 1, 0, 1) == 0


def test_circle_over_three():
    assert compute_barcode(circle(3), 1).bars == ((1, INF),)


def test_bad_interval():
    with pytest.raises(BadInterval):
        rank_invariant(morse(), 0, 3, 2)


def test_betti_is_rank_at_equal_times():
    cx = morse()
    assert betti(cx, 0, 2) == 2
    assert betti(cx, 0, 3) == 1


def test_json_round_trip():
    cx = build_filtered_complex([Cell(0, 0, (), Fraction(1, 3)), Cell(1, 0, (), 0), Cell(2, 1, ((0, 1), (1, 1)), Fraction(2, 3))])
    again = complex_from_json(json.loads(json.dumps(complex_to_json(cx))))
    assert compute_barcode(again, 0) == compute_barcode(cx, 0)
    bc = compute_barcode(cx, 0)
    assert Barcode.from_json(json.loads(json.dumps(bc.to_json()))) == bc


def test_barcode_rejects_empty_bars():
    with pytest.raises(ValueError):
        Barcode(0, ((1, 1),))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_invariant_matches_bars(seed):
    cx, _, _ = random_complex(seeded(seed))
    vals = sorted(set(cx.filtration_values()))
    for k in (0, 1):
        bc = compute_barcode(cx, k)
        for i, t in enumerate(vals):
            for s in vals[i:]:
                assert rank_invariant(cx, k, t, s) == bc.alive(t, s)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_betti_matches_direct_ranks(seed):
    cx, simplices, filt = random_complex(seeded(seed))
    for t in sorted(set(filt.values())):
        for k in (0, 1):
            assert compute_barcode(cx, k).alive(t) == brute_betti(simplices, filt, k, t)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_euler_characteristic(seed):
    cx, _, _ = random_complex(seeded(seed))
    bcs = [compute_barcode(cx, k) for k in range(3)]
    for t in set(cx.filtration_values()):
        assert sum((-1) ** k * bc.alive(t) for k, bc in enumerate(bcs)) == cx.euler_characteristic(t)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_field_independence_on_simplicial_complexes(seed):
    c2, _, _ = random_complex(seeded(seed), field_char=2)
    c3, _, _ = random_complex(seeded(seed), field_char=3)
    for k in (0, 1):
        assert compute_barcode(c2, k) == compute_barcode(c3, k)


def test_deterministic():
    cx, _, _ = random_complex(seeded(7))
    assert compute_barcode(cx, 0) == compute_barcode(cx, 0)
