"""Exact lower-bound certificates for the forced c_2 components of homotopies.

A path beta is a continuous piecewise polynomial on [0, 1].  Every homotopy
between the endpoint maps of the two worked examples is determined, up to the
components that cannot matter, by such paths; the certificates compute the
c_2 coefficient that the differential then forces and bound its size exactly.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import EndpointViolation
from .algebra import Elt
from .examples import eta_L_example, eta_L_two_example
from .maps import DgaHomotopy, check_homotopy, extend_homotopy
from .poly import Enclosure, Poly, UPoly, max_enclosure, real_roots, sup_abs_on, sup_on


class Piecewise:
    """Piecewise polynomial in t on [0, 1]; ``pieces[i]`` is used on [breaks[i], breaks[i+1]]."""

    def __init__(self, breaks, pieces):
        self.breaks = [Fraction(b) for b in breaks]
        self.pieces = [p if isinstance(p, UPoly) else UPoly(p) for p in pieces]
        if len(self.breaks) != len(self.pieces) + 1 or self.breaks[0] != 0 or self.breaks[-1] != 1:
            raise ValueError("breaks must run from 0 to 1, one more than the number of pieces")
        if any(a >= b for a, b in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breaks must increase")

    @classmethod
    def poly(cls, coeffs):
        return cls([0, 1], [UPoly(coeffs)])

    @classmethod
    def linear(cls, points):
        """Interpolate [(t0=0, v0), ..., (tn=1, vn)] linearly."""
        pts = [(Fraction(t), Fraction(v)) for t, v in points]
        pieces = []
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            slope = (v1 - v0) / (t1 - t0)
            pieces.append(UPoly([v0 - slope * t0, slope]))
        return cls([t for t, _ in pts], pieces)

    def __call__(self, t):
        t = Fraction(t)
        for i, p in enumerate(self.pieces):
            if self.breaks[i] <= t <= self.breaks[i + 1]:
                return p(t)
        raise ValueError(f"t={t} outside [0, 1]")

    def spans(self):
        return [(p, self.breaks[i], self.breaks[i + 1]) for i, p in enumerate(self.pieces)]

    def jumps(self):
        return [(b, self.pieces[i](b) - self.pieces[i - 1](b)) for i, b in enumerate(self.breaks) if 0 < i < len(self.pieces)]

    @property
    def continuous(self):
        return all(j == 0 for _, j in self.jumps())

    def to_json(self):
        return {"breaks": [str(b) for b in self.breaks], "pieces": [[str(c) for c in p.c] for p in self.pieces]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, list):  # bare list of (t, value) points
            return cls.linear(obj)
        if "points" in obj:
            return cls.linear(obj["points"])
        return cls(obj["breaks"], [[Fraction(c) for c in p] for p in obj["pieces"]])

    def __repr__(self):
        return f"Piecewise({self.breaks}, {self.pieces})"


def _poly_t(p):
    """UPoly in t -> Poly in (L, t)."""
    return Poly({(0, k): c for k, c in enumerate(p.c)})


def _check_path(beta, start, end, label):
    if not beta.continuous:
        b, j = next((b, j) for b, j in beta.jumps() if j)
        raise EndpointViolation(f"{label} jumps by {j} at t={b}")
    if beta(0) != start or beta(1) != end:
        raise EndpointViolation(f"{label} must run from {start} to {end}, got {beta(0)} -> {beta(1)}")


def random_admissible(rng, start, end, max_breaks=4, denom=12, spread=2):
    """Random piecewise-linear path from ``start`` to ``end`` with rational breakpoints."""
    start, end = Fraction(start), Fraction(end)
    n = rng.randint(0, max_breaks)
    ts = sorted(set(Fraction(rng.randint(1, denom - 1), denom) for _ in range(n)))
    span = max(abs(end - start), Fraction(1))
    pts = [(Fraction(0), start)]
    for t in ts:
        v = start + (end - start) * t + span * Fraction(rng.randint(-spread * denom, spread * denom), denom)
        pts.append((t, v))
    pts.append((Fraction(1), end))
    return Piecewise.linear(pts)


# -- first example: H*(CP^2 x S^3) ----------------------------------------------


@dataclass
class C2Certificate:
    L: Fraction
    forced: list  # per piece: UPoly coefficient of y x^2 in eta(c_2)
    forced_sup: Enclosure  # sup_t |coefficient of y x^2| for the forced c_2
    literal_sup: Enclosure  # sup_t |L^12 - beta^2/2|
    zero: object  # a Root of beta in [0, 1]
    lower_bound: Fraction  # L^12, the value of |L^12 - beta^2/2| at the zero
    forced_lower_bound: Fraction  # L^12 / 2, the forced coefficient at the zero
    engine_ok: bool = None

    @property
    def ok(self):
        return self.literal_sup.lo >= self.lower_bound and self.forced_sup.lo >= self.forced_lower_bound

    def to_json(self):
        return {
            "L": str(self.L),
            "forced_c2": [[str(c) for c in p.c] for p in self.forced],
            "forced_sup": self.forced_sup.to_json(),
            "literal_sup": self.literal_sup.to_json(),
            "zero": [str(self.zero.lo), str(self.zero.hi)],
            "lower_bound": str(self.lower_bound),
            "forced_lower_bound": str(self.forced_lower_bound),
            "engine_ok": self.engine_ok,
            "ok": self.ok,
        }


def c2_homotopy(L, beta, M=None):
    """Homotopy on a1, a2, b, c1 with eta(b) = beta(t) y x, extended over c_2 by integration."""
    L = Fraction(L)
    ex = eta_L_example(L, M=M)
    A = ex.A
    yx, x = A.index["x*y"], A.index["x"]
    pieces = []
    for p in beta.pieces:
        pieces.append(
            {
                "a1": A.basis_elt("y"),
                "a2": Elt(A, {}, {x: _poly_t(-p.deriv())}, 3),
                "b": Elt(A, {yx: _poly_t(p)}, {}, 5),
                "c1": A.zero(7),
            }
        )
    Phi = DgaHomotopy(ex.M, A, pieces, beta.breaks, name="eta_beta")
    return ex, extend_homotopy(Phi, "c2", ex.phi, ex.psi)


def forced_c2_certificate(L, beta, engine=True):
    """Certify that every homotopy phi_L ~ psi_L through eta(b) = beta y x has a large c_2 part.

    beta must be continuous with beta(0) = -L^6 and beta(1) = L^6.  The forced
    c_2 coefficient is (beta^2 - L^12)/2 times y x^2; beta has a zero in
    (0, 1), located by root isolation, where this equals -L^12/2.  The
    quantity |L^12 - beta^2/2| is also bounded (it is L^12 at that zero).
    """
    L = Fraction(L)
    L6, L12 = L**6, L**12
    _check_path(beta, -L6, L6, "beta")
    forced = [(p * p - UPoly([L12])) * UPoly([Fraction(1, 2)]) for p in beta.pieces]
    zero = None
    for p, lo, hi in beta.spans():
        rs = real_roots(p, lo, hi)
        if rs:
            zero = rs[0]
            break
    if zero is None:
        raise EndpointViolation("beta has no zero in [0, 1]")  # impossible for a continuous sign change
    forced_sup = max_enclosure(sup_abs_on(q, lo, hi) for q, (_, lo, hi) in zip(forced, beta.spans()))
    literal = [UPoly([L12]) - p * p * UPoly([Fraction(1, 2)]) for p in beta.pieces]
    literal_sup = max_enclosure(sup_abs_on(q, lo, hi) for q, (_, lo, hi) in zip(literal, beta.spans()))
    cert = C2Certificate(L, forced, forced_sup, literal_sup, zero, L12, L12 / 2)
    if engine:
        ex, eta = c2_homotopy(L, beta)
        c2 = ex.A.index["x^2*y"]
        got = [eta.pieces[k]["c2"].P.get(c2, Poly()) for k in range(len(beta.pieces))]
        same = all(g == _poly_t(q) for g, q in zip(got, forced))
        cert.engine_ok = same and bool(check_homotopy(ex.M, ex.A, eta, ex.phi, ex.psi))
    return cert


# -- second example: H*(S^2 x S^2 x (S^3 v S^3)) -------------------------------------


@dataclass
class TwoVariableCertificate:
    L: Fraction
    value: Enclosure  # max_t |beta1(1-beta2)| + |beta2(1-beta1)|
    max_coefficient: Enclosure  # max_t max(|beta1(1-beta2)|, |beta2(1-beta1)|)
    bound: Fraction = Fraction(1, 6)
    engine_ok: bool = None

    @property
    def ok(self):
        return self.value.lo >= self.bound

    @property
    def lower_bound(self):
        """Certified lower bound for the c_2 coefficient size, in units of L^12."""
        return self.value.lo

    def to_json(self):
        return {
            "L": str(self.L),
            "value": self.value.to_json(),
            "max_coefficient": self.max_coefficient.to_json(),
            "bound": str(self.bound),
            "scaled_bound": str(self.bound * self.L**12),
            "engine_ok": self.engine_ok,
            "ok": self.ok,
        }


def _common_refinement(b1, b2):
    breaks = sorted(set(b1.breaks) | set(b2.breaks))
    out = []
    for lo, hi in zip(breaks, breaks[1:]):
        mid = (lo + hi) / 2
        p1 = next(p for p, a, b in b1.spans() if a <= mid <= b)
        p2 = next(p for p, a, b in b2.spans() if a <= mid <= b)
        out.append((p1, p2, lo, hi))
    return out


def two_variable_homotopy(L, beta1, beta2, M=None):
    """Homotopy with eta(a2) = L^6 dt (beta1' x1 - beta2' x2), extended over c_2."""
    L = Fraction(L)
    ex = eta_L_two_example(L, M=M)
    A = ex.A
    idx = A.index
    L6 = L**6
    segs = _common_refinement(beta1, beta2)
    pieces = []
    one = UPoly([1])
    for p1, p2, _, _ in segs:
        P = {
            idx["x1*y1"]: _poly_t((one - p1) * UPoly([L6])),
            idx["x1*y2"]: _poly_t(p1 * UPoly([L6])),
            idx["x2*y1"]: _poly_t(p2 * UPoly([L6])),
            idx["x2*y2"]: _poly_t((one - p2) * UPoly([L6])),
        }
        pieces.append(
            {
                "a1": A.parse("y1-y2"),
                "a2": Elt(A, {}, {idx["x1"]: _poly_t(p1.deriv() * UPoly([L6])), idx["x2"]: _poly_t(-p2.deriv() * UPoly([L6]))}, 3),
                "b": Elt(A, P, {}, 5),
                "c1": A.zero(7),
            }
        )
    breaks = [s[2] for s in segs] + [Fraction(1)]
    Phi = DgaHomotopy(ex.M, A, pieces, breaks, name="eta_beta1_beta2")
    return ex, segs, extend_homotopy(Phi, "c2", ex.phi, ex.psi)


def forced_two_variable_certificate(L, beta1, beta2, engine=False):
    """Certify max_t |beta1(1-beta2)| + |beta2(1-beta1)| >= 1/6 for paths from 0 to 1.

    The forced c_2 component is L^12 [beta2(1-beta1) y1 - beta1(1-beta2) y2] x1 x2,
    so the bound gives a c_2 coefficient of size at least L^12/6 (in the sum
    of the two coefficients).  The sum is in fact at least 1/2: beta1 + beta2
    runs from 0 to 2, and where it equals 1 the sum is beta1^2 + beta2^2.
    """
    L = Fraction(L)
    _check_path(beta1, 0, 1, "beta1")
    _check_path(beta2, 0, 1, "beta2")
    one = UPoly([1])
    sums, maxes = [], []
    segs = _common_refinement(beta1, beta2)
    for p1, p2, lo, hi in segs:
        f = p1 * (one - p2)
        g = p2 * (one - p1)
        for s1 in (1, -1):
            for s2 in (1, -1):
                sums.append(sup_on(f * UPoly([s1]) + g * UPoly([s2]), lo, hi))
        maxes += [sup_abs_on(f, lo, hi), sup_abs_on(g, lo, hi)]
    cert = TwoVariableCertificate(L, max_enclosure(sums), max_enclosure(maxes))
    if engine:
        ex, segs, eta = two_variable_homotopy(L, beta1, beta2)
        A = ex.A
        L12 = UPoly([L**12])
        ok = bool(check_homotopy(ex.M, A, eta, ex.phi, ex.psi))
        for k, (p1, p2, _, _) in enumerate(segs):
            c2 = eta.pieces[k]["c2"].P
            want1 = _poly_t(p2 * (one - p1) * L12)
            want2 = _poly_t(-(p1 * (one - p2)) * L12)
            ok = ok and c2.get(A.index["x1*x2*y1"], Poly()) == want1
            ok = ok and c2.get(A.index["x1*x2*y2"], Poly()) == want2
        cert.engine_ok = ok
    return cert


def search_c2(L, trials, seed=0, engine=False):
    """Run forced_c2_certificate on random admissible paths; returns the certificates."""
    rng = random.Random(seed)
    L6 = Fraction(L) ** 6
    return [forced_c2_certificate(L, random_admissible(rng, -L6, L6), engine=engine) for _ in range(trials)]


def search_two_variable(L, trials, seed=0, engine=False):
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        b1 = random_admissible(rng, 0, 1)
        b2 = random_admissible(rng, 0, 1)
        out.append(forced_two_variable_certificate(L, b1, b2, engine=engine))
    return out


__all__ = [
    "Piecewise",
    "C2Certificate",
    "TwoVariableCertificate",
    "forced_c2_certificate",
    "forced_two_variable_certificate",
    "c2_homotopy",
    "two_variable_homotopy",
    "random_admissible",
    "search_c2",
    "search_two_variable",
]
