"""Graded-commutative algebras: minimal DGAs and finite target algebras.

Monomials in a free graded-commutative algebra are exponent tuples aligned
with the generator list; a monomial stands for the ordered product
g_1^e_1 g_2^e_2 ... and odd generators have exponent at most 1.

Elements of a target algebra A tensored with polynomial forms on the
interval are stored as ``P + dt*Q`` with dt written on the left, so that
fiber integration is simply ``int_0^1 dt*Q = int_0^1 Q``.  Coefficients are
:class:`~lipph.dga.poly.Poly` values in L and t.
"""

import itertools
import re
from fractions import Fraction

from ..errors import BasisUnknown, DegreeMismatch
from .poly import Poly


def mono_mul(e1, e2, degs):
    """Product of two monomials: (sign, exponents), or (0, None) if it vanishes."""
    sign = 1
    for i, (a, b) in enumerate(zip(e1, e2)):
        if degs[i] % 2 and a and b:
            return 0, None
    # move each odd factor of e2 left past the odd factors of e1 with larger index
    odd1 = [i for i, a in enumerate(e1) if a and degs[i] % 2]
    for j, b in enumerate(e2):
        if b and degs[j] % 2:
            sign *= (-1) ** sum(1 for i in odd1 if i > j)
    return sign, tuple(a + b for a, b in zip(e1, e2))


def mono_degree(e, degs):
    return sum(a * d for a, d in zip(e, degs))


def _add_into(out, k, c):
    v = out.get(k, 0) + c
    if v:
        out[k] = v
    else:
        out.pop(k, None)


# -- a tiny expression parser --------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokens(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {text[pos:]!r}")
        num, ident, caret, star, plus, minus, lp, rp = m.groups()
        out.append(num or ident or caret or star or plus or minus or lp or rp)
        pos = m.end()
    return out


def parse_expression(text, atom, one):
    """Parse sums/products/powers of atoms; ``atom(name)`` gives the value of an identifier."""
    toks = _tokens(text)
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def take():
        tok = toks[pos[0]]
        pos[0] += 1
        return tok

    def expr():
        sign = 1
        while peek() in ("+", "-"):
            sign = -sign if take() == "-" else sign
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take()
            acc = acc + term() if op == "+" else acc - term()
        return acc

    def term():
        acc = power()
        while peek() == "*" or (peek() is not None and peek() not in ("+", "-", ")")):
            if peek() == "*":
                take()
            acc = acc * power()
        return acc

    def power():
        base = factor()
        if peek() == "^":
            take()
            n = int(take())
            out = one()
            for _ in range(n):
                out = out * base
            return out
        return base

    def factor():
        tok = take()
        if tok == "(":
            v = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return v
        if tok == "-":
            return factor() * -1
        if tok[0].isdigit():
            return one() * Fraction(tok)
        return atom(tok)

    v = expr()
    if pos[0] != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return v


# -- minimal DGAs ---------------------------------------------------------------


class FreeElt:
    """Element of a free graded-commutative algebra: ``{monomial: Fraction}``."""

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return FreeElt(self.alg, out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if not isinstance(other, FreeElt):
            return FreeElt(self.alg, {k: c * Fraction(other) for k, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                s, e = mono_mul(e1, e2, self.alg.degs)
                if s:
                    _add_into(out, e, s * c1 * c2)
        return FreeElt(self.alg, out)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, FreeElt) and not (self - other)

    __hash__ = None

    def __repr__(self):
        return self.alg.format(self)


class MinimalDga:
    """Free graded-commutative algebra on named generators with a differential.

    ``generators`` is a list of ``(name, degree)`` or ``(name, degree, weight)``;
    ``differential`` maps generator names to expressions such as ``"a1*a2"``
    or ``"b*a1"`` (missing names have zero differential).
    """

    def __init__(self, generators, differential=None, name=None):
        self.name = name
        self.names, self.degs, self.weights = [], [], []
        for g in generators:
            self.names.append(g[0])
            self.degs.append(int(g[1]))
            self.weights.append(g[2] if len(g) > 2 else None)
            if int(g[1]) < 1:
                raise DegreeMismatch(f"generator {g[0]} must have positive degree")
        self.index = {n: i for i, n in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("repeated generator name")
        self.n = len(self.names)
        self.dgen = {}
        self._dsrc = dict(differential or {})
        for name_, expr in self._dsrc.items():
            if name_ not in self.index:
                raise BasisUnknown(f"differential given for unknown generator {name_}")
            self.dgen[name_] = self.parse(expr) if isinstance(expr, str) else expr
        self._validate()

    def gen(self, name):
        if name not in self.index:
            raise BasisUnknown(f"unknown generator {name}")
        e = [0] * self.n
        e[self.index[name]] = 1
        return FreeElt(self, {tuple(e): 1})

    def one(self):
        return FreeElt(self, {tuple([0] * self.n): 1})

    def parse(self, text):
        return parse_expression(text, self.gen, self.one)

    def degree(self, mono):
        return mono_degree(mono, self.degs)

    def d_gen(self, name):
        return self.dgen.get(name, FreeElt(self, {}))

    def d(self, x):
        """Differential, extended by the graded Leibniz rule."""
        out = FreeElt(self, {})
        for e, c in x.terms.items():
            # e = A * g_i^{e_i} * B, processed one generator position at a time
            for i, k in enumerate(e):
                if not k:
                    continue
                pre = tuple(e[j] if j < i else 0 for j in range(self.n))
                post = tuple(e[j] if j > i else 0 for j in range(self.n))
                rest = [0] * self.n
                rest[i] = k - 1
                sign = (-1) ** self.degree(pre)
                mid = FreeElt(self, {tuple(rest): k}) * self.d_gen(self.names[i])
                term = FreeElt(self, {pre: c * sign}) * mid * FreeElt(self, {post: 1})
                out = out + term
        return out

    def _validate(self):
        for name_, dx in self.dgen.items():
            deg = self.degs[self.index[name_]]
            for e in dx.terms:
                if self.degree(e) != deg + 1:
                    raise DegreeMismatch(f"d({name_}) has a term of degree {self.degree(e)}, expected {deg + 1}")
                for i, k in enumerate(e):
                    if k and self.degs[i] >= deg:
                        raise DegreeMismatch(f"d({name_}) uses {self.names[i]}, not of lower degree")
            if self.d(dx):
                raise ValueError(f"d(d({name_})) = {self.d(dx)} is not zero")

    def format(self, x):
        if not x.terms:
            return "0"
        parts = []
        for e, c in sorted(x.terms.items()):
            mono = "*".join(
                self.names[i] if k == 1 else f"{self.names[i]}^{k}" for i, k in enumerate(e) if k
            ) or "1"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)

    def to_json(self):
        return {
            "name": self.name,
            "generators": [[n, d, w] for n, d, w in zip(self.names, self.degs, self.weights)],
            "differential": {k: self.format(v) for k, v in self.dgen.items()},
        }

    @classmethod
    def from_json(cls, obj):
        gens = [tuple(g) if len(g) > 2 and g[2] is not None else tuple(g[:2]) for g in obj["generators"]]
        return cls(gens, obj.get("differential", {}), name=obj.get("name"))


# -- finite target algebras -------------------------------------------------------


class TargetAlgebra:
    """Finite-dimensional graded-commutative algebra with a fixed basis.

    Basis element 0 is the unit ``1``.  ``mult[(i, j)]`` is ``{k: coeff}``;
    ``diff[i]`` likewise (empty for cohomology algebras).  ``norm`` holds a
    positive weight per basis element, used by the dilatation.
    """

    def __init__(self, basis, mult, diff=None, norm=None, name=None, gens=None, check=True):
        self.name = name
        self.basis = [b[0] for b in basis]
        self.deg = [int(b[1]) for b in basis]
        if self.basis[0] != "1" or self.deg[0] != 0:
            raise ValueError("basis element 0 must be the unit '1' in degree 0")
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.mult = {k: {i: Fraction(c) for i, c in v.items() if c} for k, v in mult.items()}
        self.diff = {i: {k: Fraction(c) for k, c in v.items() if c} for i, v in (diff or {}).items()}
        self.norm = [Fraction(w) for w in (norm or [1] * len(self.basis))]
        self.gens = gens or {}  # names usable in expressions -> basis index
        if check:
            self._validate()

    @property
    def dim(self):
        return len(self.basis)

    def _prod(self, x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mult.get((i, j), {}).items():
                    _add_into(out, k, a * b * c)
        return out

    def _d(self, x):
        out = {}
        for i, a in x.items():
            for k, c in self.diff.get(i, {}).items():
                _add_into(out, k, a * c)
        return out

    def _validate(self):
        n = self.dim
        for (i, j), v in self.mult.items():
            for k in v:
                if self.deg[k] != self.deg[i] + self.deg[j]:
                    raise DegreeMismatch(f"{self.basis[i]}*{self.basis[j]} has a term in the wrong degree")
        for i in range(n):
            if self._prod({0: 1}, {i: 1}) != {i: 1} or self._prod({i: 1}, {0: 1}) != {i: 1}:
                raise ValueError(f"'1' is not a unit for {self.basis[i]}")
            for k in self.diff.get(i, {}):
                if self.deg[k] != self.deg[i] + 1:
                    raise DegreeMismatch(f"d({self.basis[i]}) has the wrong degree")
        for i, j in itertools.product(range(n), repeat=2):
            s = (-1) ** (self.deg[i] * self.deg[j])
            xy = self._prod({i: 1}, {j: 1})
            yx = self._prod({j: 1}, {i: 1})
            if xy != {k: s * c for k, c in yx.items()}:
                raise ValueError(f"not graded-commutative on {self.basis[i]}, {self.basis[j]}")
        for i, j, k in itertools.product(range(n), repeat=3):
            if self._prod(self._prod({i: 1}, {j: 1}), {k: 1}) != self._prod({i: 1}, self._prod({j: 1}, {k: 1})):
                raise ValueError(f"not associative on {self.basis[i]}, {self.basis[j]}, {self.basis[k]}")
        if self.diff:
            for i in range(n):
                if self._d(self._d({i: 1})):
                    raise ValueError(f"d(d({self.basis[i]})) != 0")
                for j in range(n):
                    lhs = self._d(self._prod({i: 1}, {j: 1}))
                    rhs = self._prod(self._d({i: 1}), {j: 1})
                    for k, c in self._prod({i: 1}, self._d({j: 1})).items():
                        _add_into(rhs, k, (-1) ** self.deg[i] * c)
                    if lhs != rhs:
                        raise ValueError(f"Leibniz rule fails on {self.basis[i]}, {self.basis[j]}")

    # elements ---------------------------------------------------------------

    def zero(self, deg=0):
        return Elt(self, {}, {}, deg)

    def one(self):
        return Elt(self, {0: Poly.const(1)}, {}, 0)

    def basis_elt(self, name):
        if name not in self.index:
            raise BasisUnknown(f"{name!r} is not a basis element of {self.name or 'the target'}")
        i = self.index[name]
        return Elt(self, {i: Poly.const(1)}, {}, self.deg[i])

    def _atom(self, name):
        if name == "L":
            return Elt(self, {0: Poly({(1, 0): 1})}, {}, 0)
        if name == "t":
            return Elt(self, {0: Poly({(0, 1): 1})}, {}, 0)
        if name == "dt":
            return Elt(self, {}, {0: Poly.const(1)}, 1)
        if name in self.gens:
            i = self.gens[name]
            return Elt(self, {i: Poly.const(1)}, {}, self.deg[i])
        return self.basis_elt(name)

    def parse(self, text):
        """Parse e.g. ``"-L^6*y*x"`` or ``"-2*L^6*x*dt"`` into an element."""
        if isinstance(text, Elt):
            return text
        if isinstance(text, (int, Fraction)):
            return self.one() * Fraction(text)
        return parse_expression(str(text), self._atom, self.one)

    @classmethod
    def quotient(cls, generators, relations=(), norm=None, name=None, max_degree=None):
        """Free graded-commutative algebra on ``generators`` modulo monomial relations.

        ``relations`` are monomials written as strings, e.g. ``"x^3"`` or
        ``"y1*y2"``.  The quotient must be finite-dimensional unless
        ``max_degree`` truncates it.
        """
        names = [g[0] for g in generators]
        degs = [int(g[1]) for g in generators]
        rels = []
        for r in relations:
            e = [0] * len(names)
            for f in str(r).replace(" ", "").split("*"):
                base, _, p = f.partition("^")
                e[names.index(base)] += int(p or 1)
            rels.append(tuple(e))

        def killed(e):
            return any(all(a >= b for a, b in zip(e, r)) for r in rels)

        bound = []
        for i, d in enumerate(degs):
            if d % 2:
                bound.append(1)
                continue
            k = next((r[i] for r in rels if sum(1 for x in r if x) == 1 and r[i]), None)
            if k is None and max_degree is None:
                raise ValueError(f"even generator {names[i]} needs a power relation or max_degree")
            bound.append(k - 1 if k is not None else max_degree // d)
        monos = []
        for e in itertools.product(*(range(b + 1) for b in bound)):
            if killed(e) or (max_degree is not None and mono_degree(e, degs) > max_degree):
                continue
            monos.append(e)
        monos.sort(key=lambda e: (mono_degree(e, degs), [-a for a in e]))
        return cls._from_monomials(names, degs, monos, norm, name, None)

    @classmethod
    def _from_monomials(cls, names, degs, monos, norm, name, dgen):
        index = {e: i for i, e in enumerate(monos)}

        def label(e):
            s = "*".join(names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            return s or "1"

        basis = [(label(e), mono_degree(e, degs)) for e in monos]
        mult = {}
        for e1, e2 in itertools.product(monos, repeat=2):
            s, e = mono_mul(e1, e2, degs)
            if s and e in index:
                mult[(index[e1], index[e2])] = {index[e]: s}
        diff = {}
        if dgen is not None:
            for e in monos:
                dx = dgen(e)
                v = {index[m]: c for m, c in dx.items() if m in index}
                if v:
                    diff[index[e]] = v
        gens = {}
        for i, n in enumerate(names):
            e = tuple(1 if j == i else 0 for j in range(len(names)))
            if e in index:
                gens[n] = index[e]
        if isinstance(norm, dict):
            norm = [norm.get(b[0], 1) for b in basis]
        alg = cls(basis, mult, diff, norm, name=name, gens=gens)
        alg.monomials = monos
        alg.generator_names = names
        return alg

    @classmethod
    def from_minimal(cls, M, max_degree):
        """The free DGA underlying M, truncated above ``max_degree``."""
        bound = [1 if d % 2 else max_degree // d for d in M.degs]
        monos = [
            e for e in itertools.product(*(range(b + 1) for b in bound)) if mono_degree(e, M.degs) <= max_degree
        ]
        monos.sort(key=lambda e: (mono_degree(e, M.degs), [-a for a in e]))

        def dgen(e):
            return M.d(FreeElt(M, {e: 1})).terms

        return cls._from_monomials(M.names, M.degs, monos, None, f"{M.name or 'M'}<={max_degree}", dgen)

    def to_json(self):
        return {
            "name": self.name,
            "basis": [[b, d] for b, d in zip(self.basis, self.deg)],
            "mult": [[i, j, {str(k): str(c) for k, c in v.items()}] for (i, j), v in sorted(self.mult.items())],
            "diff": {str(i): {str(k): str(c) for k, c in v.items()} for i, v in self.diff.items()},
            "norm": [str(w) for w in self.norm],
        }

    @classmethod
    def from_json(cls, obj):
        mult = {(int(i), int(j)): {int(k): Fraction(c) for k, c in v.items()} for i, j, v in obj["mult"]}
        diff = {int(i): {int(k): Fraction(c) for k, c in v.items()} for i, v in obj.get("diff", {}).items()}
        norm = [Fraction(w) for w in obj["norm"]] if obj.get("norm") else None
        return cls([tuple(b) for b in obj["basis"]], mult, diff, norm, name=obj.get("name"))

    def __repr__(self):
        return f"TargetAlgebra({self.name or ''}: {self.basis})"


class Elt:
    """Homogeneous element ``P + dt*Q`` of A (x) Q[L, t] (x) Lambda(dt).

    ``P`` and ``Q`` map basis indices to Poly coefficients; ``deg`` is the
    total degree, so P lives in degree ``deg`` and Q in degree ``deg - 1``.
    """

    __slots__ = ("A", "P", "Q", "deg")

    def __init__(self, A, P, Q, deg):
        self.A = A
        self.P = {i: c for i, c in P.items() if c}
        self.Q = {i: c for i, c in Q.items() if c}
        self.deg = deg
        for i in self.P:
            if A.deg[i] != deg:
                raise DegreeMismatch(f"{A.basis[i]} has degree {A.deg[i]}, expected {deg}")
        for i in self.Q:
            if A.deg[i] != deg - 1:
                raise DegreeMismatch(f"dt*{A.basis[i]} has degree {A.deg[i] + 1}, expected {deg}")

    def __bool__(self):
        return bool(self.P or self.Q)

    def _merge(self, other, sign):
        if not other:
            return self
        if not self:
            return other * sign
        if other.deg != self.deg:
            raise DegreeMismatch(f"adding elements of degrees {self.deg} and {other.deg}")
        P, Q = dict(self.P), dict(self.Q)
        for i, c in other.P.items():
            P[i] = P.get(i, Poly()) + c * sign
        for i, c in other.Q.items():
            Q[i] = Q.get(i, Poly()) + c * sign
        return Elt(self.A, P, Q, self.deg)

    def __add__(self, other):
        return self._merge(other, 1)

    def __sub__(self, other):
        return self._merge(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, other):
        if not isinstance(other, Elt):
            return Elt(self.A, {i: c * other for i, c in self.P.items()}, {i: c * other for i, c in self.Q.items()}, self.deg)
        A = self.A

        def prod(x, y):
            out = {}
            for i, a in x.items():
                for j, b in y.items():
                    for k, c in A.mult.get((i, j), {}).items():
                        out[k] = out.get(k, Poly()) + a * b * c
            return out

        # (P1 + dt Q1)(P2 + dt Q2) = P1 P2 + dt((-1)^|P1| P1 Q2 + Q1 P2)
        P = prod(self.P, other.P)
        Q = prod(self.Q, other.P)
        s = (-1) ** self.deg
        for k, c in prod(self.P, other.Q).items():
            Q[k] = Q.get(k, Poly()) + c * s
        return Elt(A, P, Q, self.deg + other.deg)

    __rmul__ = __mul__

    def d(self):
        """d(P + dt Q) = d_A P + dt (dP/dt - d_A Q)."""
        A = self.A

        def dA(x):
            out = {}
            for i, a in x.items():
                for k, c in A.diff.get(i, {}).items():
                    out[k] = out.get(k, Poly()) + a * c
            return out

        P = dA(self.P)
        Q = {i: c.d_t() for i, c in self.P.items()}
        for k, c in dA(self.Q).items():
            Q[k] = Q.get(k, Poly()) - c
        return Elt(A, P, Q, self.deg + 1)

    def at(self, t):
        """Restriction to the time t (dt vanishes)."""
        return Elt(self.A, {i: c.subs(t=t) for i, c in self.P.items()}, {}, self.deg)

    def integral(self, lo=0, hi=1):
        """Fiber integral over [lo, hi]; lands in A of degree deg - 1."""
        return Elt(self.A, {i: c.integrate_t(lo, hi) for i, c in self.Q.items()}, {}, self.deg - 1)

    def dt_part(self):
        return Elt(self.A, {}, self.Q, self.deg)

    def subs(self, L=None, t=None):
        return Elt(
            self.A,
            {i: c.subs(L=L, t=t) for i, c in self.P.items()},
            {i: c.subs(L=L, t=t) for i, c in self.Q.items()},
            self.deg,
        )

    def coeff(self, name, dt=False):
        i = self.A.index[name]
        return (self.Q if dt else self.P).get(i, Poly())

    @property
    def has_t(self):
        return any(c.has_t for c in self.P.values()) or bool(self.Q)

    def __eq__(self, other):
        return isinstance(other, Elt) and not (self - other)

    def to_json(self):
        return {
            "deg": self.deg,
            "P": {self.A.basis[i]: c.to_json() for i, c in sorted(self.P.items())},
            "Q": {self.A.basis[i]: c.to_json() for i, c in sorted(self.Q.items())},
        }

    @classmethod
    def from_json(cls, A, obj):
        P = {A.index[b]: Poly.from_json(c) for b, c in obj.get("P", {}).items()}
        Q = {A.index[b]: Poly.from_json(c) for b, c in obj.get("Q", {}).items()}
        return cls(A, P, Q, int(obj["deg"]))

    def __repr__(self):
        if not self:
            return "0"
        parts = [f"({c})*{self.A.basis[i]}" for i, c in sorted(self.P.items())]
        parts += [f"({c})*dt*{self.A.basis[i]}" for i, c in sorted(self.Q.items())]
        return " + ".join(parts)
