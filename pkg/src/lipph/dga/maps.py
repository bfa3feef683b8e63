"""DGA homomorphisms and homotopies into a target algebra, and what to measure on them."""

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import (
    BasisUnknown,
    DegreeMismatch,
    EndpointMismatch,
    IncompleteHomotopy,
)
from .algebra import Elt
from .poly import Enclosure, max_enclosure, sup_abs_on


def _image(A, x, deg):
    x = A.parse(x) if not isinstance(x, Elt) else x
    if not x:
        return A.zero(deg)
    if x.deg != deg:
        raise DegreeMismatch(f"image has degree {x.deg}, expected {deg}")
    return x


def _apply(M, A, images, x):
    """Extend generator images multiplicatively to an element of the free algebra."""
    out = None
    for e, c in x.terms.items():
        term = A.one() * c
        for i, k in enumerate(e):
            for _ in range(k):
                term = term * images[M.names[i]]
        out = term if out is None else out + term
    return out if out is not None else A.zero()


class DgaHom:
    """Generator images of a homomorphism M -> A (coefficients may involve L)."""

    def __init__(self, M, A, images, name=None):
        self.M, self.A, self.name = M, A, name
        unknown = set(images) - set(M.names)
        if unknown:
            raise BasisUnknown(f"images given for unknown generators {sorted(unknown)}")
        self.images = {}
        for g, deg in zip(M.names, M.degs):
            self.images[g] = _image(A, images.get(g, 0), deg)

    def __call__(self, x):
        if isinstance(x, str):
            x = self.M.parse(x)
        return _apply(self.M, self.A, self.images, x)

    def subs(self, L):
        return DgaHom(self.M, self.A, {g: v.subs(L=L) for g, v in self.images.items()}, self.name)

    def to_json(self):
        return {"name": self.name, "images": {g: v.to_json() for g, v in self.images.items()}}

    @classmethod
    def from_json(cls, M, A, obj):
        return cls(M, A, {g: Elt.from_json(A, v) for g, v in obj["images"].items()}, obj.get("name"))


class DgaHomotopy:
    """Homotopy M -> A (x) Lambda(t, dt), piecewise polynomial in t.

    ``pieces`` is a list of image dicts; piece i is used on
    ``[breaks[i], breaks[i+1]]``.  A single dict means one piece on [0, 1].
    Generators missing from the images are treated as not yet defined, which
    is what :func:`obstruction_cochain` works with.
    """

    def __init__(self, M, A, pieces, breaks=None, name=None):
        self.M, self.A, self.name = M, A, name
        if isinstance(pieces, dict):
            pieces = [pieces]
        self.breaks = [Fraction(b) for b in (breaks or [0, 1])]
        if len(self.breaks) != len(pieces) + 1 or self.breaks[0] != 0 or self.breaks[-1] != 1:
            raise ValueError("breaks must run from 0 to 1, one more than the number of pieces")
        if any(a >= b for a, b in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breaks must increase")
        deg = dict(zip(M.names, M.degs))
        self.pieces = []
        for imgs in pieces:
            unknown = set(imgs) - set(M.names)
            if unknown:
                raise BasisUnknown(f"images given for unknown generators {sorted(unknown)}")
            self.pieces.append({g: _image(A, v, deg[g]) for g, v in imgs.items()})
        defined = [set(p) for p in self.pieces]
        if any(d != defined[0] for d in defined):
            raise ValueError("every piece must define the same generators")
        self.defined = [g for g in M.names if g in defined[0]]

    @classmethod
    def constant(cls, phi):
        return cls(phi.M, phi.A, dict(phi.images), name=f"const({phi.name})")

    def apply(self, x, piece=0):
        if isinstance(x, str):
            x = self.M.parse(x)
        missing = {self.M.names[i] for e in x.terms for i, k in enumerate(e) if k} - set(self.defined)
        if missing:
            raise IncompleteHomotopy(f"homotopy not defined on {sorted(missing)}")
        return _apply(self.M, self.A, self.pieces[piece], x)

    def at(self, t):
        t = Fraction(t)
        k = next(i for i in range(len(self.pieces)) if self.breaks[i] <= t <= self.breaks[i + 1])
        return {g: v.at(t) for g, v in self.pieces[k].items()}

    def subs(self, L):
        pieces = [{g: v.subs(L=L) for g, v in p.items()} for p in self.pieces]
        return DgaHomotopy(self.M, self.A, pieces, self.breaks, self.name)

    def with_image(self, g, pieces_images):
        pieces = [dict(p) for p in self.pieces]
        for p, v in zip(pieces, pieces_images):
            p[g] = v
        return DgaHomotopy(self.M, self.A, pieces, self.breaks, self.name)

    def to_json(self):
        return {
            "name": self.name,
            "breaks": [str(b) for b in self.breaks],
            "pieces": [{g: v.to_json() for g, v in p.items()} for p in self.pieces],
        }

    @classmethod
    def from_json(cls, M, A, obj):
        pieces = [{g: Elt.from_json(A, v) for g, v in p.items()} for p in obj["pieces"]]
        return cls(M, A, pieces, obj.get("breaks"), obj.get("name"))


@dataclass
class Certificate:
    ok: bool
    kind: str = "ok"  # "ok", "differential", "endpoint", "continuity"
    generator: str = None
    residual: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def raise_for_failure(self):
        if self.ok:
            return
        if self.kind in ("endpoint", "continuity"):
            raise EndpointMismatch(f"{self.detail} at {self.generator}: {self.residual}")
        raise ValueError(f"{self.detail} at {self.generator}: {self.residual}")

    def to_json(self):
        return {
            "ok": self.ok,
            "kind": self.kind,
            "generator": self.generator,
            "residual": None if self.residual is None else repr(self.residual),
            "detail": self.detail,
        }


def _check_target(M, A, f):
    if f.M is not M or f.A is not A:
        raise ValueError("map was built on a different source or target")


def check_homomorphism(M, A, phi):
    """Does phi commute with the differentials?  Residual phi(dv) - d(phi(v)) on failure."""
    _check_target(M, A, phi)
    for g in M.names:
        img = phi.images[g]
        if img.has_t:
            raise DegreeMismatch(f"image of {g} depends on t; use a DgaHomotopy")
        res = phi(M.d_gen(g)) - img.d()
        if res:
            return Certificate(False, "differential", g, res, "phi(dv) != d(phi(v))")
    return Certificate(True)


def check_homotopy(M, A, eta, phi, psi):
    """Is eta a homotopy from phi (t = 0) to psi (t = 1)?

    Checks, in order: phi and psi are homomorphisms, every generator is
    defined, the t = 0 and t = 1 restrictions, continuity across breaks, and
    eta(dv) = d(eta(v)) on every piece.
    """
    for f in (phi, psi):
        c = check_homomorphism(M, A, f)
        if not c:
            c.detail = f"endpoint map {f.name or ''} is not a homomorphism: " + c.detail
            return c
    missing = [g for g in M.names if g not in eta.defined]
    if missing:
        raise IncompleteHomotopy(f"homotopy not defined on {missing}")
    start, end = eta.at(0), eta.at(1)
    for g in M.names:
        for got, want, label in ((start[g], phi.images[g], "t=0"), (end[g], psi.images[g], "t=1")):
            if got != want:
                return Certificate(False, "endpoint", g, got - want, f"restriction at {label} differs")
    for k in range(1, len(eta.pieces)):
        b = eta.breaks[k]
        for g in M.names:
            jump = eta.pieces[k][g].at(b) - eta.pieces[k - 1][g].at(b)
            if jump:
                return Certificate(False, "continuity", g, jump, f"jump at t={b}")
    for k in range(len(eta.pieces)):
        for g in M.names:
            res = eta.apply(M.d_gen(g), k) - eta.pieces[k][g].d()
            if res:
                return Certificate(False, "differential", g, res, f"eta(dv) != d(eta(v)) on piece {k}")
    return Certificate(True)


# -- norms ----------------------------------------------------------------------


def _elt_norm(A, x, lo, hi, L=None):
    """Max over basis elements of weight * sup_{t in [lo, hi]} |coefficient|."""
    if L is not None:
        x = x.subs(L=L)
    encs = []
    for part in (x.P, x.Q):
        for i, c in part.items():
            if c.has_L:
                raise ValueError("coefficients involve L; pass a value for L")
            e = sup_abs_on(c.to_upoly(), lo, hi)
            w = A.norm[i]
            encs.append(Enclosure(e.lo * w, e.hi * w, e.at))
    return max_enclosure(encs) or Enclosure(Fraction(0), Fraction(0))


def _norms_by(f, key, L=None, degrees=None):
    M, A = f.M, f.A
    out = {}
    if isinstance(f, DgaHom):
        spans = [(f.images, 0, 1)]
    else:
        spans = [(p, f.breaks[i], f.breaks[i + 1]) for i, p in enumerate(f.pieces)]
    for g, deg, w in zip(M.names, M.degs, M.weights):
        if degrees is not None and deg not in degrees:
            continue
        k = key(deg, w)
        for imgs, lo, hi in spans:
            if g not in imgs:
                continue
            e = _elt_norm(A, imgs[g], lo, hi, L)
            out[k] = e if k not in out else max_enclosure([out[k], e])
    return out


@dataclass
class DilatationReport:
    norms: dict  # grading -> Enclosure of the operator norm
    value: float
    argmax: int = None
    exponent_by: str = "degree"

    def at_least(self, k, c):
        """Certified: the grading-k norm is >= c, hence Dil >= c**(1/k)."""
        return k in self.norms and self.norms[k].lo >= c

    def to_json(self):
        return {
            "value": self.value,
            "argmax": self.argmax,
            "exponent_by": self.exponent_by,
            "norms": {str(k): e.to_json() for k, e in sorted(self.norms.items())},
        }


def _report(norms, by):
    value, arg = 0.0, None
    for k, e in norms.items():
        v = float(e.hi) ** (1 / k) if e.hi > 0 else 0.0
        if v > value:
            value, arg = v, k
    return DilatationReport(norms, value, arg, by)


def dilatation(f, L=None, domain_dim=None):
    """Formal dilatation max_k ||f restricted to V_k||^(1/k).

    The operator norm is the largest weighted coefficient of a degree-k
    generator's image (sup over t for homotopies, located exactly through
    critical points).  ``domain_dim`` restricts to degrees 2..domain_dim.
    """
    degrees = None
    if domain_dim is not None:
        degrees = set(range(2, domain_dim + 1))
    return _report(_norms_by(f, lambda d, w: d, L, degrees), "degree")


def u_dilatation(f, L=None):
    """Weighted analogue: max_i ||f restricted to U_i||^(1/i) over weights i."""
    if any(w is None for w in f.M.weights):
        raise ValueError("every generator needs a weight")
    return _report(_norms_by(f, lambda d, w: w, L), "weight")


def grading_automorphism(M, s, max_degree=None):
    """rho_s: each generator of weight i goes to s^i times itself, as a map into M truncated."""
    from .algebra import TargetAlgebra

    if any(w is None for w in M.weights):
        raise ValueError("every generator needs a weight")
    T = TargetAlgebra.from_minimal(M, max_degree or max(M.degs))
    s = Fraction(s)
    images = {g: T.parse(g) * s**w for g, w in zip(M.names, M.weights)}
    return DgaHom(M, T, images, name=f"rho_{s}")


def rescale_by_weights(phi, s):
    """phi composed with rho_s: the image of a weight-i generator is scaled by s^i."""
    s = Fraction(s)
    images = {g: phi.images[g] * s**w for g, w in zip(phi.M.names, phi.M.weights)}
    return DgaHom(phi.M, phi.A, images, name=f"{phi.name}.rho_{s}")


# -- obstruction theory ------------------------------------------------------------


def obstruction_cochain(Phi, v, phi, psi):
    """sigma(v) = psi(v) - phi(v) - int_0^1 Phi(dv).

    Phi needs to be defined on every generator occurring in dv.  The result
    is closed; on a cohomology target (zero differential) Phi extends over v
    exactly when it vanishes.
    """
    M, A = Phi.M, Phi.A
    dv = M.d_gen(v)
    total = A.zero(M.degs[M.index[v]])
    for k in range(len(Phi.pieces)):
        img = Phi.apply(dv, k)
        total = total + img.integral(Phi.breaks[k], Phi.breaks[k + 1])
    sigma = psi.images[v] - phi.images[v] - total
    assert not sigma.d(), "obstruction cochain is not closed"
    return sigma


def extend_homotopy(Phi, v, phi, psi):
    """Extend Phi over v with eta(v) = phi(v) + int_0^t Phi(dv) (zero-differential targets).

    Raises ValueError when the obstruction cochain is nonzero.
    """
    M, A = Phi.M, Phi.A
    if A.diff:
        raise ValueError("extension formula needs a target with zero differential")
    sigma = obstruction_cochain(Phi, v, phi, psi)
    if sigma:
        raise ValueError(f"obstruction at {v} is nonzero: {sigma}")
    dv = M.d_gen(v)
    vdeg = M.degs[M.index[v]]
    start = phi.images[v]
    new = []
    for k in range(len(Phi.pieces)):
        img = Phi.apply(dv, k)
        if img.P:
            raise ValueError(f"Phi(d{v}) has a nonzero dt-free part on piece {k}")
        b = Phi.breaks[k]
        prim = {i: c.antiderivative_t() - c.antiderivative_t().subs(t=b) for i, c in img.Q.items()}
        piece = start + Elt(A, prim, {}, vdeg)
        new.append(piece)
        start = piece.at(Phi.breaks[k + 1])
    return Phi.with_image(v, new)


# -- exponent bookkeeping ---------------------------------------------------------


@dataclass
class AlphaReport:
    naive: Fraction
    refined: Fraction
    chain: dict = field(default_factory=dict)  # generator -> exponent e(v)
    degrees: list = field(default_factory=list)


def alpha_exponent(M, domain_dim):
    """Exponent bookkeeping for the formalizing homotopy.

    ``naive`` is the product of (n+1)/n over the degrees n <= domain_dim in
    which some generator has nonzero differential.  ``refined`` tracks, per
    generator, the exponent e(v) with e(v) = deg v when dv = 0 and otherwise
    the largest sum of e over the factors of a monomial of dv; it is
    max e(v)/deg(v) over generators of degree <= domain_dim.
    """
    degs = sorted({d for g, d in zip(M.names, M.degs) if d <= domain_dim and M.d_gen(g)})
    naive = Fraction(1)
    for n in degs:
        naive *= Fraction(n + 1, n)
    chain = {}
    for i in sorted(range(M.n), key=lambda i: M.degs[i]):
        g = M.names[i]
        dv = M.d_gen(g)
        if not dv:
            chain[g] = M.degs[i]
            continue
        chain[g] = max(sum(k * chain[M.names[j]] for j, k in enumerate(e) if k) for e in dv.terms)
    refined = max(
        [Fraction(chain[g], d) for g, d in zip(M.names, M.degs) if d <= domain_dim] + [Fraction(1)]
    )
    return AlphaReport(naive, refined, chain, degs)


__all__ = [
    "DgaHom",
    "DgaHomotopy",
    "Certificate",
    "check_homomorphism",
    "check_homotopy",
    "dilatation",
    "u_dilatation",
    "grading_automorphism",
    "rescale_by_weights",
    "obstruction_cochain",
    "extend_homotopy",
    "alpha_exponent",
    "AlphaReport",
    "DilatationReport",
]
