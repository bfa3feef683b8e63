"""Exact polynomial arithmetic over the rationals.

``Poly`` is a sparse polynomial in the two variables L (the scale parameter)
and t (the homotopy parameter).  ``UPoly`` is a dense univariate polynomial
with Sturm-sequence root isolation, used to compute suprema on intervals
exactly (or to within a certified rational enclosure when the maximizer is
irrational).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt


def _q(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    """Sparse polynomial in L and t: ``{(deg_L, deg_t): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            c = _q(c)
            if c:
                self.terms[k] = c

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, Poly) else cls.const(x)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, (Poly, int, Fraction)) and (self - Poly.coerce(other)).terms == {}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        other = Poly.coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = _q(other)
            return Poly({k: c * other for k, c in self.terms.items()})
        out = {}
        for (a, b), c in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a + a2, b + b2)
                out[k] = out.get(k, 0) + c * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def d_t(self):
        return Poly({(a, b - 1): c * b for (a, b), c in self.terms.items() if b})

    def antiderivative_t(self):
        """The primitive vanishing at t = 0."""
        return Poly({(a, b + 1): c / (b + 1) for (a, b), c in self.terms.items()})

    def subs(self, L=None, t=None):
        out = {}
        for (a, b), c in self.terms.items():
            if L is not None:
                c, a = c * _q(L) ** a, 0
            if t is not None:
                c, b = c * _q(t) ** b, 0
            out[(a, b)] = out.get((a, b), 0) + c
        return Poly(out)

    def integrate_t(self, lo=0, hi=1):
        F = self.antiderivative_t()
        return F.subs(t=hi) - F.subs(t=lo)

    def value(self, L=None, t=None):
        p = self.subs(L=L, t=t)
        if any(k != (0, 0) for k in p.terms):
            raise ValueError(f"{self} is not constant after substitution")
        return p.terms.get((0, 0), Fraction(0))

    @property
    def has_L(self):
        return any(a for a, _ in self.terms)

    @property
    def has_t(self):
        return any(b for _, b in self.terms)

    def to_upoly(self):
        """Univariate polynomial in t; the polynomial must be free of L."""
        if self.has_L:
            raise ValueError("substitute a value for L first")
        deg = max((b for _, b in self.terms), default=0)
        coeffs = [Fraction(0)] * (deg + 1)
        for (_, b), c in self.terms.items():
            coeffs[b] = c
        return UPoly(coeffs)

    def to_json(self):
        return [[a, b, str(c)] for (a, b), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (int, str)):
            return cls.const(Fraction(obj))
        return cls({(int(a), int(b)): Fraction(c) for a, b, c in obj})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(s for s in (_pw("L", a), _pw("t", b)) if s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _pw(v, n):
    return "" if n == 0 else v if n == 1 else f"{v}^{n}"


L = Poly({(1, 0): 1})
T = Poly({(0, 1): 1})


class UPoly:
    """Dense univariate polynomial over Q, coefficients low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [_q(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @property
    def deg(self):
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.c == other.c

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        a = self.c + [0] * (n - len(self.c))
        b = other.c + [0] * (n - len(other.c))
        return UPoly([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return UPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return UPoly([x * other for x in self.c])
        if not self.c or not other.c:
            return UPoly([])
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return UPoly(out)

    def deriv(self):
        return UPoly([i * a for i, a in enumerate(self.c)][1:])

    def divmod(self, other):
        if not other.c:
            raise ZeroDivisionError
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(other.c) + 1, 0)
        lead = other.c[-1]
        for k in range(len(q) - 1, -1, -1):
            coef = r[k + len(other.c) - 1] / lead
            q[k] = coef
            if coef:
                for j, b in enumerate(other.c):
                    r[k + j] -= coef * b
        return UPoly(q), UPoly(r[: len(other.c) - 1])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        return UPoly([a / self.c[-1] for a in self.c]) if self.c else self

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def squarefree(self):
        if self.deg <= 0:
            return self
        return self.divmod(self.gcd(self.deriv()))[0].monic()

    def sturm(self):
        seq = [self, self.deriv()]
        while seq[-1].deg > 0:
            r = -(seq[-2] % seq[-1])
            if not r:
                break
            seq.append(r)
        return seq

    def taylor_bound(self, m, r):
        """Upper bound for |p(x) - p(m)| over |x - m| <= r."""
        total, d = Fraction(0), self.deriv()
        k = 1
        while d:
            total += abs(d(m)) * r**k / factorial(k)
            d = d.deriv()
            k += 1
        return total

    def __repr__(self):
        return f"UPoly({[str(a) for a in self.c]})"


def _sign_changes(seq, x):
    signs = [s for s in (p(x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _frac_sqrt(q):
    """Exact square root of a nonnegative Fraction, or None if irrational."""
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Root:
    """A real root known exactly (lo == hi) or isolated in the open interval (lo, hi)."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self):
        return self.lo == self.hi


def real_roots(p, a, b):
    """Distinct real roots of p in the closed interval [a, b], in increasing order."""
    a, b = _q(a), _q(b)
    if not p or p.deg == 0:
        return []
    sq = p.squarefree()
    if sq.deg == 1:
        x = -sq.c[0] / sq.c[1]
        return [Root(x, x)] if a <= x <= b else []
    if sq.deg == 2:
        c0, c1, c2 = sq.c
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        s = _frac_sqrt(disc)
        if s is not None:
            xs = sorted({(-c1 - s) / (2 * c2), (-c1 + s) / (2 * c2)})
            return [Root(x, x) for x in xs if a <= x <= b]
    seq = sq.sturm()
    out = []
    if sq(a) == 0:
        out.append(Root(a, a))

    def split(lo, hi, n):
        # n roots in (lo, hi]
        if n == 0:
            return
        if sq(hi) == 0:
            if n == 1:
                out.append(Root(hi, hi))
                return
        if n == 1 and sq(hi) != 0:
            out.append(Root(lo, hi))
            return
        mid = (lo + hi) / 2
        left = _sign_changes(seq, lo) - _sign_changes(seq, mid)
        split(lo, mid, left)
        split(mid, hi, n - left)

    split(a, b, _sign_changes(seq, a) - _sign_changes(seq, b))
    return sorted(out, key=lambda r: r.lo)


def refine(p, root, width):
    """Shrink an isolating interval of a root of p below ``width``."""
    if root.exact:
        return root
    sq = p.squarefree()
    lo, hi = root.lo, root.hi
    # hi is never a root of a non-exact isolating interval; lo may be
    shi = sq(hi) > 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = sq(mid)
        if sm == 0:
            return Root(mid, mid)
        if (sm > 0) == shi:
            hi = mid
        else:
            lo = mid
    return Root(lo, hi)


@dataclass(frozen=True)
class Enclosure:
    """Certified bounds lo <= value <= hi, and where the value is attained."""

    lo: Fraction
    hi: Fraction
    at: object = None  # Fraction, or a Root interval

    @property
    def exact(self):
        return self.lo == self.hi

    def __float__(self):
        return float((self.lo + self.hi) / 2)

    def to_json(self):
        at = self.at
        if isinstance(at, Root):
            at = [str(at.lo), str(at.hi)]
        elif at is not None:
            at = str(at)
        return {"lo": str(self.lo), "hi": str(self.hi), "at": at, "float": float(self)}


DEFAULT_TOL = Fraction(1, 10**24)


def sup_on(p, a, b, tol=DEFAULT_TOL):
    """Maximum of p over [a, b], exactly or within ``tol``."""
    a, b = _q(a), _q(b)
    best = Enclosure(p(a), p(a), a)
    if p(b) > best.lo:
        best = Enclosure(p(b), p(b), b)
    dp = p.deriv()
    for r in real_roots(dp, a, b) if dp.deg >= 1 else []:
        if r.exact:
            v = p(r.lo)
            best = _join(best, Enclosure(v, v, r.lo))
            continue
        r = refine(dp, r, tol)
        m = (r.lo + r.hi) / 2
        lo_val = max(p(r.lo), p(r.hi), p(m))
        hi_val = p(m) + p.taylor_bound(m, (r.hi - r.lo) / 2)
        while hi_val - lo_val > tol:
            r = refine(dp, r, (r.hi - r.lo) / 4)
            if r.exact:
                lo_val = hi_val = p(r.lo)
                break
            m = (r.lo + r.hi) / 2
            lo_val = max(p(r.lo), p(r.hi), p(m))
            hi_val = p(m) + p.taylor_bound(m, (r.hi - r.lo) / 2)
        best = _join(best, Enclosure(lo_val, hi_val, r if not r.exact else r.lo))
    return best


def _join(e1, e2):
    """Enclosure of max(v1, v2) given enclosures of v1 and v2."""
    lo = max(e1.lo, e2.lo)
    hi = max(e1.hi, e2.hi)
    at = e1.at if e1.lo >= e2.lo else e2.at
    return Enclosure(lo, hi, at)


def sup_abs_on(p, a, b, tol=DEFAULT_TOL):
    """sup of |p| over [a, b]."""
    return _join(sup_on(p, a, b, tol), sup_on(-p, a, b, tol))


def max_enclosure(encs):
    out = None
    for e in encs:
        out = e if out is None else _join(out, e)
    return out
