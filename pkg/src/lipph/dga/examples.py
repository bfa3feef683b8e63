"""Built-in models: the S^3 v S^3 minimal DGA and the two worked homotopy examples.

Example ``eta_L`` maps into H*(CP^2 x S^3) = Lambda(x, y)/(x^3) and example
``eta_L_two`` into H*(S^2 x S^2 x (S^3 v S^3)) = Lambda(x1, x2, y1, y2)/(y1y2,
x1^2, x2^2).  With d(c_i) = b a_i the c_2 component of the first homotopy is
-2 L^12 y x^2 t(1-t); the opposite sign does not commute with d (see
``ETA_L_C2_PRINTED``).
"""

from dataclasses import dataclass
from fractions import Fraction

from .algebra import MinimalDga, TargetAlgebra
from .maps import DgaHom, DgaHomotopy

# (name, degree, weight); weights follow the Whitehead grading a:3, b:6, c:9
S3VS3_GENERATORS = [("a1", 3, 3), ("a2", 3, 3), ("b", 5, 6), ("c1", 7, 9), ("c2", 7, 9)]
S3VS3_DIFFERENTIAL = {"b": "a1*a2", "c1": "b*a1", "c2": "b*a2"}

ETA_L_C2 = "-2*L^12*y*x^2*t*(1-t)"
ETA_L_C2_PRINTED = "2*L^12*y*x^2*t*(1-t)"


def s3vs3_model():
    """Minimal model of S^3 v S^3 truncated at degree 7."""
    return MinimalDga(S3VS3_GENERATORS, S3VS3_DIFFERENTIAL, name="S3vS3")


def cp2_s3_cohomology():
    return TargetAlgebra.quotient([("x", 2), ("y", 3)], ["x^3"], name="H*(CP2xS3)")


def s2s2_s3s3_cohomology():
    return TargetAlgebra.quotient(
        [("x1", 2), ("x2", 2), ("y1", 3), ("y2", 3)], ["y1*y2", "x1^2", "x2^2"], name="H*(S2xS2x(S3vS3))"
    )


def s3xs3_cohomology():
    return TargetAlgebra.quotient([("u", 3), ("v", 3)], [], name="H*(S3xS3)")


TARGETS = {
    "cp2xs3": cp2_s3_cohomology,
    "s2xs2xs3vs3": s2s2_s3s3_cohomology,
    "s3xs3": s3xs3_cohomology,
}


@dataclass
class Scenario:
    name: str
    M: MinimalDga
    A: TargetAlgebra
    phi: DgaHom
    psi: DgaHom
    eta: DgaHomotopy


def _maybe_subs(obj, L):
    return obj if L is None else obj.subs(Fraction(L))


def eta_L_example(L=None, c2=ETA_L_C2, M=None):
    """phi_L, psi_L and the homotopy eta_L into H*(CP^2 x S^3); L=None keeps L symbolic."""
    M = M or s3vs3_model()
    A = cp2_s3_cohomology()
    phi = DgaHom(M, A, {"a1": "y", "b": "-L^6*y*x"}, name="phi_L")
    psi = DgaHom(M, A, {"a1": "y", "b": "L^6*y*x"}, name="psi_L")
    eta = DgaHomotopy(
        M,
        A,
        {"a1": "y", "a2": "-2*L^6*x*dt", "b": "L^6*y*x*(2*t-1)", "c1": "0", "c2": c2},
        name="eta_L",
    )
    return Scenario("eta_L", M, A, _maybe_subs(phi, L), _maybe_subs(psi, L), _maybe_subs(eta, L))


def eta_L_two_example(L=None, M=None):
    """The second example, into H*(S^2 x S^2 x (S^3 v S^3))."""
    M = M or s3vs3_model()
    A = s2s2_s3s3_cohomology()
    phi = DgaHom(M, A, {"a1": "y1-y2", "b": "L^6*(x1*y1+x2*y2)"}, name="phi_L")
    psi = DgaHom(M, A, {"a1": "y1-y2", "b": "L^6*(x1*y2+x2*y1)"}, name="psi_L")
    eta = DgaHomotopy(
        M,
        A,
        {
            "a1": "y1-y2",
            "a2": "L^6*(x1-x2)*dt",
            "b": "L^6*((x1*y1+x2*y2)*(1-t)+(x1*y2+x2*y1)*t)",
            "c1": "0",
            "c2": "L^12*x1*x2*(y1-y2)*t*(1-t)",
        },
        name="eta_L_two",
    )
    return Scenario("eta_L_two", M, A, _maybe_subs(phi, L), _maybe_subs(psi, L), _maybe_subs(eta, L))


EXAMPLES = {
    "eta_L": eta_L_example,
    "eta_L_two": eta_L_two_example,
}


def scenario_to_json(s):
    return {
        "name": s.name,
        "model": s.M.to_json(),
        "target": s.A.to_json(),
        "phi": s.phi.to_json(),
        "psi": s.psi.to_json(),
        "eta": s.eta.to_json(),
    }


def scenario_from_json(obj):
    M = MinimalDga.from_json(obj["model"])
    A = TargetAlgebra.from_json(obj["target"])
    return Scenario(
        obj.get("name", "scenario"),
        M,
        A,
        DgaHom.from_json(M, A, obj["phi"]),
        DgaHom.from_json(M, A, obj["psi"]),
        DgaHomotopy.from_json(M, A, obj["eta"]),
    )
