import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipph.dga.certificates import (
    Piecewise,
    forced_c2_certificate,
    forced_two_variable_certificate,
    random_admissible,
    search_c2,
    search_two_variable,
)
from lipph.dga.poly import UPoly
from lipph.errors import EndpointViolation

from oracles import seeded


def grid_max(f, n=400):
    return max(f(Fraction(i, n)) for i in range(n + 1))


@pytest.mark.parametrize("L", [1, 2, 3])
def test_linear_beta(L):
    L6 = L**6
    cert = forced_c2_certificate(L, Piecewise.poly([-L6, 2 * L6]))
    assert cert.literal_sup.exact and cert.literal_sup.lo == L**12
    assert cert.forced_sup.exact and cert.forced_sup.lo == Fraction(L**12, 2)
    assert (cert.zero.lo, cert.zero.hi) == (Fraction(1, 2), Fraction(1, 2))
    assert cert.engine_ok and cert.ok


def test_cubic_beta():
    L = 2
    u = UPoly([-1, 2])  # 2t - 1
    beta = Piecewise([0, 1], [u * u * u * UPoly([L**6])])
    cert = forced_c2_certificate(L, beta)
    assert cert.ok and cert.literal_sup.lo >= L**12
    assert cert.zero.lo <= Fraction(1, 2) <= cert.zero.hi


def test_endpoint_violations():
    with pytest.raises(EndpointViolation):
        forced_c2_certificate(2, Piecewise.poly([0, 64]))
    broken = Piecewise([0, Fraction(1, 2), 1], [UPoly([-64]), UPoly([64])])
    with pytest.raises(EndpointViolation):
        forced_c2_certificate(2, broken)
    with pytest.raises(EndpointViolation):
        forced_two_variable_certificate(1, Piecewise.poly([0, 1]), Piecewise.poly([1, 0]))


def test_symmetric_two_variable():
    t = Piecewise.poly([0, 1])
    cert = forced_two_variable_certificate(3, t, t, engine=True)
    assert cert.value.exact and cert.value.lo == Fraction(1, 2)
    assert cert.engine_ok and cert.ok


def test_trailing_square():
    t, t2 = Piecewise.poly([0, 1]), Piecewise.poly([0, 0, 1])
    cert = forced_two_variable_certificate(2, t, t2, engine=True)
    assert cert.ok and cert.engine_ok
    f = lambda s: abs(s * (1 - s * s)) + abs(s * s * (1 - s))
    assert grid_max(f) <= cert.value.hi
    assert cert.value.lo <= grid_max(f) + Fraction(1, 100)


def test_exhaustive_breakpoint_grid():
    levels = [Fraction(i, 3) for i in range(-1, 5)]
    knots = [0, Fraction(1, 3), Fraction(2, 3), 1]
    paths = [Piecewise.linear(list(zip(knots, (0, a, b, 1)))) for a, b in itertools.product(levels, repeat=2)]
    low = min(forced_two_variable_certificate(1, p, q).value.lo for p in paths for q in paths)
    assert low >= Fraction(1, 6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_c2_certificate_is_sound(seed, L):
    beta = random_admissible(seeded(seed), -(L**6), L**6)
    cert = forced_c2_certificate(L, beta)
    f = lambda t: abs(L**12 - beta(t) ** 2 / 2)
    assert grid_max(f) <= cert.literal_sup.hi
    assert cert.ok and cert.engine_ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_two_variable_certificate_is_sound(seed):
    rng = seeded(seed)
    b1, b2 = random_admissible(rng, 0, 1), random_admissible(rng, 0, 1)
    cert = forced_two_variable_certificate(2, b1, b2)
    f = lambda t: abs(b1(t) * (1 - b2(t))) + abs(b2(t) * (1 - b1(t)))
    assert grid_max(f) <= cert.value.hi
    assert cert.ok
    # sharper: where beta1 + beta2 = 1 the sum is beta1^2 + beta2^2 >= 1/2
    assert cert.value.lo >= Fraction(1, 2) - Fraction(1, 10**20)
    assert cert.max_coefficient.lo >= Fraction(1, 4) - Fraction(1, 10**20)


def test_engine_matches_closed_form_on_random_pairs():
    certs = search_two_variable(2, 15, seed=3, engine=True)
    assert all(c.engine_ok for c in certs)
    certs = search_c2(2, 15, seed=3, engine=True)
    assert all(c.engine_ok for c in certs)


def test_piecewise_json():
    p = random_admissible(seeded(1), -1, 1)
    q = Piecewise.from_json(p.to_json())
    assert q.breaks == p.breaks and q.pieces == p.pieces
    r = Piecewise.from_json([[0, -1], ["1/2", 3], [1, 1]])
    assert r(Fraction(1, 4)) == 1
