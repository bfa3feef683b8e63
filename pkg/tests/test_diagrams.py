from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipph.diagrams import (
    bottleneck_distance,
    check_matching,
    interleaving_distance,
    max_finite_length,
    smooth,
)
from lipph.errors import NegativeEpsilon
from lipph.persistence import INF, Barcode, compute_barcode

from oracles import complex_from, exhaustive_bottleneck, perturb, random_complex, random_diagram, seeded

H = Fraction(1, 2)


def test_self_distance_zero():
    D = [(0, 2), (1, 3), (0, INF)]
    assert bottleneck_distance(D, D) == 0


def test_single_bar_against_empty():
    assert bottleneck_distance([(0, 2)], []) == 1


def test_shifted_bar():
    assert bottleneck_distance([(0, 2)], [(H, Fraction(5, 2))]) == H


def test_nested_bars():
    assert interleaving_distance([(0, 4)], [(1, 3)]) == 1


def test_infinite_bars_compare_births():
    assert bottleneck_distance([(0, INF)], [(5, INF)]) == 5


def test_infinite_count_mismatch():
    assert bottleneck_distance([(0, INF)], []) == INF


def test_matching_witness():
    D1, D2 = [(0, 4), (1, 2)], [(1, 3)]
    d, m = bottleneck_distance(D1, D2, return_matching=True)
    assert d == 1
    assert check_matching(D1, D2, m)


def test_smooth_examples():
    D = Barcode(0, ((0, 2), (1, Fraction(3, 2))))
    assert smooth(D, 0) == D
    assert smooth(D, H).bars == ((H, Fraction(3, 2)),)
    assert smooth(Barcode(0, ((3, INF),)), 1).bars == ((4, INF),)
    with pytest.raises(NegativeEpsilon):
        smooth(D, -1)


def test_max_finite_length():
    assert max_finite_length([(0, INF), (1, 4)]) == 3
    assert max_finite_length([]) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_bottleneck_equals_exhaustive(seed):
    rng = seeded(seed)
    D1, D2 = random_diagram(rng), random_diagram(rng)
    d, m = bottleneck_distance(D1, D2, return_matching=True)
    assert d == exhaustive_bottleneck(D1, D2)
    if d != INF:
        assert check_matching(D1, D2, m)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_metric_axioms(seed):
    rng = seeded(seed)
    A, B, C = (random_diagram(rng, infinite=False) for _ in range(3))
    ab = bottleneck_distance(A, B)
    assert ab == bottleneck_distance(B, A)
    assert bottleneck_distance(A, C) <= ab + bottleneck_distance(B, C)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6), st.integers(0, 6))
def test_smoothing_semigroup(seed, a, b):
    D = Barcode(0, tuple(random_diagram(seeded(seed))))
    a, b = Fraction(a, 2), Fraction(b, 2)
    assert smooth(smooth(D, a), b) == smooth(D, a + b)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 8))
def test_smoothing_is_eps_close(seed, e):
    D = Barcode(0, tuple(random_diagram(seeded(seed))))
    eps = Fraction(e, 2)
    assert interleaving_distance(D, smooth(D, eps)) <= eps


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_stability(seed, e):
    rng = seeded(seed)
    cx, simplices, filt = random_complex(rng)
    eps = Fraction(e, 4)
    other = complex_from(simplices, perturb(simplices, filt, eps, rng))
    for k in (0, 1):
        assert bottleneck_distance(compute_barcode(cx, k), compute_barcode(other, k)) <= eps
