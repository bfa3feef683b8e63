"""Command-line interface: ``lipph <group> <verb> [options]``.

Exit codes: 0 when every embedded expectation passes, 1 when one fails,
2 on bad input.
"""

import argparse
import csv
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .diagrams import bottleneck_distance, max_finite_length, smooth
from .errors import LipphError, UnknownPreset
from .mapspace import (
    MapComplexSpec,
    build_map_complex,
    count_components,
    estimate_contraction_constant,
    loop_spec,
)
from .persistence import INF, Barcode, build_filtered_complex, compute_barcode
from .targets import BUBBLE_RIM, TARGETS, MetricComplex, loop_length, make_target


class Expectation(Exception):
    """An embedded expectation failed (exit code 1)."""


# -- parsing helpers -------------------------------------------------------------


def _number(text):
    text = str(text).strip()
    try:
        return int(text)
    except ValueError:
        return Fraction(text)


def parse_target(text):
    """``name:p1,p2,...`` from the built-in registry, or a path to target JSON."""
    if os.path.exists(text):
        return MetricComplex.from_json(json.loads(Path(text).read_text()))
    name, _, params = text.partition(":")
    if name not in TARGETS:
        raise ValueError(f"unknown target {name!r}; choose from {sorted(TARGETS)} or give a JSON file")
    args = [_number(p) for p in params.split(",") if p.strip()]
    try:
        return make_target(name, *args)
    except TypeError as e:  # wrong parameter count
        raise ValueError(f"bad parameters for target {name!r}: {e}") from None


def _load_barcode(path):
    return Barcode.from_json(json.loads(Path(path).read_text()))


def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if x == INF:
        return None
    return x


# -- output ----------------------------------------------------------------------

PLOT_SCRIPT = '''"""Plot the persistence diagrams written next to this script (needs matplotlib)."""
import csv
import sys
from fractions import Fraction

import matplotlib.pyplot as plt

files = {files!r}
fig, axes = plt.subplots(1, len(files), figsize=(4 * len(files), 4), squeeze=False)
for ax, (deg, name) in zip(axes[0], sorted(files.items())):
    pts = []
    with open(name) as fh:
        for row in csv.DictReader(fh):
            b = float(Fraction(row["birth"]))
            d = float(Fraction(row["death"])) if row["death"] != "inf" else None
            pts.append((b, d))
    top = max([p for b, d in pts for p in (b, d) if p is not None] + [1.0]) * 1.1
    ax.plot([0, top], [0, top], color="grey", lw=0.5)
    ax.scatter([b for b, d in pts if d is not None], [d for b, d in pts if d is not None], s=12)
    ax.scatter([b for b, d in pts if d is None], [top for b, d in pts if d is None], marker="^", s=16)
    ax.set_title(f"{title} PH{{deg}}")
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "{title}.png")
'''


def write_outputs(out_dir, name, report, barcodes=()):
    """Report JSON, one CSV of (birth, death) per degree, and a plotting script."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for bc in barcodes:
        path = out / f"{name}_ph{bc.degree}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["birth", "death"])
            for b, d in bc.bars:
                w.writerow([str(b), "inf" if d == INF else str(d)])
        files[bc.degree] = path.name
    if files:
        (out / f"plot_{name}.py").write_text(PLOT_SCRIPT.format(files=files, title=name))
    (out / f"{name}.json").write_text(json.dumps(report, indent=2, default=str) + "\n")
    return out / f"{name}.json"


def _summary(bc, mesh=None):
    out = {
        "degree": bc.degree,
        "finite": len(bc.finite),
        "infinite": len(bc.infinite),
        "max_finite_length": _jsonable(max_finite_length(bc)),
    }
    if mesh is not None:
        out["max_finite_length_over_mesh"] = _jsonable(Fraction(max_finite_length(bc)) / mesh)
    return out


def _ph_report(spec, degrees, workers):
    t0 = time.time()
    cx = build_map_complex(spec, workers=workers)
    bcs = [compute_barcode(cx, k) for k in degrees]
    report = {
        "target": spec.target.name,
        "functional": spec.functional,
        "cap": _jsonable(spec.cap),
        "cells": len(cx.cells),
        "seconds": round(time.time() - t0, 3),
        "summary": [_summary(bc, spec.target.mesh) for bc in bcs],
        "barcodes": [bc.to_json() for bc in bcs],
    }
    return report, bcs


# -- presets ---------------------------------------------------------------------


@dataclass
class ExperimentPreset:
    name: str
    description: str
    run: object  # callable(args) -> (report, barcodes, passed)
    seed: int = 0
    params: dict = field(default_factory=dict)


def _preset_cat0_torus(args):
    Y = make_target("flat-torus", 3, 3, 3, 3)
    spec = loop_spec(Y, 6, "length")
    report, bcs = _ph_report(spec, (0, 1), args.workers)
    bound = 2 * Y.mesh
    worst = max(max_finite_length(bc) for bc in bcs)
    report["expected"] = f"every finite PH0/PH1 bar has length <= 2*mesh = {bound}"
    return report, bcs, worst <= bound


def _preset_bubble(args):
    Y = make_target("bubble-sphere", Fraction(1, 2))
    spec = loop_spec(Y, 6, "length")
    report, bcs = _ph_report(spec, (0,), args.workers)
    rim = loop_length(Y, list(BUBBLE_RIM))
    long = [(b, d) for b, d in bcs[0].finite if d - b > 2 * Y.mesh and abs(b - rim) <= Y.mesh]
    report["rim_length"] = _jsonable(rim)
    report["long_bars"] = [[_jsonable(b), _jsonable(d)] for b, d in long]
    report["expected"] = "some finite PH0 bar longer than 2*mesh, born within one mesh of the rim length"
    return report, bcs, bool(long)


def _preset_octahedron(args):
    Y = make_target("octahedron")
    spec = loop_spec(Y, 6, "length")
    report, bcs = _ph_report(spec, (0,), args.workers)
    S = estimate_contraction_constant(Y, 6 * Y.mesh, steps=6, workers=args.workers)
    bound = 5 * Y.diameter + S + 2 * Y.mesh
    report["S_est"] = _jsonable(S)
    report["bound"] = _jsonable(bound)
    report["expected"] = "every finite PH0 bar has length <= 5*diameter + S_est + 2*mesh"
    return report, bcs, max_finite_length(bcs[0]) <= bound


def _preset_figure_eight(args):
    Y = make_target("figure-eight", 1, 1, 3)
    spec = loop_spec(Y, 9, "length")
    expected = {1: 5, 2: 17, 3: 53}  # reduced words in F2 of length <= L
    counts = {L: count_components(spec, L, workers=args.workers) for L in expected}
    report = {"target": Y.name, "steps": 9, "counts": counts, "expected_counts": expected}
    return report, (), counts == expected


def _preset_eta_L(args):
    from .dga.examples import ETA_L_C2_PRINTED, eta_L_example, eta_L_two_example
    from .dga.maps import check_homotopy, dilatation

    L = Fraction(args.L if args.L is not None else 2)
    report, ok = {"L": _jsonable(L)}, True
    for label, s in (
        ("eta_L", eta_L_example(L)),
        ("eta_L_printed_sign", eta_L_example(L, c2=ETA_L_C2_PRINTED)),
        ("eta_L_two", eta_L_two_example(L)),
    ):
        cert = check_homotopy(s.M, s.A, s.eta, s.phi, s.psi)
        entry = {"homotopy": cert.to_json()}
        if cert:
            dil = dilatation(s.eta)
            entry["dilatation"] = dil.to_json()
        report[label] = entry
        if label != "eta_L_printed_sign":
            ok = ok and bool(cert)
    if ok:
        # the degree-7 norm is the c2 coefficient bound L^12/2
        ok = Fraction(report["eta_L"]["dilatation"]["norms"]["7"]["lo"]) >= L**12 / 2
    return report, (), ok


def _preset_certify(args):
    from .dga.certificates import search_c2, search_two_variable

    L = Fraction(args.L if args.L is not None else 2)
    c2 = search_c2(L, 200, seed=args.seed)
    two = search_two_variable(L, 200, seed=args.seed)
    report = {
        "L": _jsonable(L),
        "seed": args.seed,
        "c2_min_literal_sup": str(min(c.literal_sup.lo for c in c2)),
        "c2_bound": str(L**12),
        "two_variable_min": str(min(c.value.lo for c in two)),
        "two_variable_bound": "1/6",
    }
    return report, (), all(c.ok for c in c2) and all(c.ok for c in two)


def _preset_empty(args):
    cx = build_filtered_complex([])
    bcs = [compute_barcode(cx, k) for k in (0, 1)]
    report = {"cells": 0, "barcodes": [bc.to_json() for bc in bcs]}
    return report, bcs, all(len(bc) == 0 for bc in bcs)


PRESETS = {
    p.name: p
    for p in (
        ExperimentPreset("cat0-flat-torus", "based loops (6 steps) in the 3x3 flat torus: short finite bars only", _preset_cat0_torus),
        ExperimentPreset("bubble", "based loops (6 steps) in the bubble sphere: a long finite PH0 bar", _preset_bubble),
        ExperimentPreset("octahedron", "based loops (6 steps) in the octahedron: bar lengths under 5d + S + 2 mesh", _preset_octahedron),
        ExperimentPreset("figure-eight-growth", "component counts of figure-eight loops against reduced-word counts", _preset_figure_eight),
        ExperimentPreset("eta-L-verify", "check both worked homotopies and report their dilatation", _preset_eta_L),
        ExperimentPreset("certify", "random admissible paths through both lower-bound certificates", _preset_certify),
        ExperimentPreset("empty", "empty complex: empty barcodes", _preset_empty),
    )
}


def run_preset(name, args):
    if name not in PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    p = PRESETS[name]
    random.seed(p.seed)
    report, bcs, passed = p.run(args)
    report = {"preset": name, "description": p.description, **report, "status": "PASS" if passed else "FAIL"}
    path = write_outputs(args.out_dir, name, report, bcs)
    return report, path, passed


# -- verbs -----------------------------------------------------------------------


def cmd_target_make(args):
    Y = parse_target(args.target)
    obj = Y.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(obj, indent=2) + "\n")
    v, e, t = Y.counts()
    _emit(args, obj, f"{Y.name}: V={v} E={e} T={t} mesh={Y.mesh} diameter={Y.diameter}")


def _finish_ph(args, name, spec):
    report, bcs = _ph_report(spec, args.degrees, args.workers)
    path = write_outputs(args.out_dir, name, report, bcs)
    lines = [f"wrote {path}"]
    for s in report["summary"]:
        lines.append(
            f"PH{s['degree']}: {s['finite']} finite, {s['infinite']} infinite, max finite length {s['max_finite_length']}"
        )
    _emit(args, report, "\n".join(lines))


def cmd_ph_map_space(args):
    X, Y = parse_target(args.domain), parse_target(args.target)
    bp = None
    if args.basepoint:
        dv, tv = args.basepoint.split(":")
        bp = (int(dv), int(tv))
    cap = _number(args.cap) if args.functional != "logpluslip" else float(args.cap)
    spec = MapComplexSpec(X, Y, args.functional, cap, basepoint=bp, coherence=args.coherence, max_dim=args.max_dim)
    _finish_ph(args, args.name or "map_space", spec)


def cmd_ph_loops(args):
    Y = parse_target(args.target)
    cap = _number(args.cap) if args.cap else None
    spec = loop_spec(Y, args.steps, "length", cap, basepoint=None if args.free else args.basepoint, coherence=args.coherence)
    _finish_ph(args, args.name or "loops", spec)


def cmd_ph_components(args):
    Y = parse_target(args.target)
    spec = loop_spec(Y, args.steps, "length", basepoint=None if args.free else args.basepoint)
    counts = {str(L): count_components(spec, _number(L), workers=args.workers) for L in args.L}
    _emit(args, {"target": Y.name, "steps": args.steps, "counts": counts}, "\n".join(f"L={k}: {v}" for k, v in counts.items()))


def cmd_barcode_diff(args):
    a, b = _load_barcode(args.a), _load_barcode(args.b)
    delta, m = bottleneck_distance(a, b, return_matching=True)
    _emit(args, {"bottleneck": _jsonable(delta), "matching": m.to_json()}, f"bottleneck distance {delta}")


def cmd_barcode_smooth(args):
    bc = smooth(_load_barcode(args.barcode), _number(args.eps))
    obj = bc.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(obj) + "\n")
    print(json.dumps(obj))


def cmd_dga_verify(args):
    from .dga.examples import ETA_L_C2_PRINTED, EXAMPLES, scenario_from_json
    from .dga.maps import check_homotopy, dilatation

    if args.scenario:
        s = scenario_from_json(json.loads(Path(args.scenario).read_text()))
    else:
        if args.model != "s3vs3":
            raise ValueError("only the built-in model 's3vs3' is available; use --scenario for others")
        if args.example not in EXAMPLES:
            raise ValueError(f"unknown example {args.example!r}; choose from {sorted(EXAMPLES)}")
        kw = {"c2": ETA_L_C2_PRINTED} if args.printed_sign and args.example == "eta_L" else {}
        s = EXAMPLES[args.example](None if args.L is None else Fraction(args.L), **kw)
    cert = check_homotopy(s.M, s.A, s.eta, s.phi, s.psi)
    report = {"example": s.name, "L": args.L, "homotopy": cert.to_json()}
    text = [f"{s.name}: homotopy {'OK' if cert else 'REJECTED'}"]
    if not cert:
        text.append(f"  {cert.kind} at {cert.generator}: {cert.residual} ({cert.detail})")
    elif args.L is not None:
        dil = dilatation(s.eta)
        report["dilatation"] = dil.to_json()
        text.append(f"  Dil = {dil.value:.6g} (argmax degree {dil.argmax})")
        for k, e in sorted(dil.norms.items()):
            text.append(f"  degree {k}: norm {e.lo}" + ("" if e.exact else f" .. {e.hi}"))
    _emit(args, report, "\n".join(text))
    if not cert:
        raise Expectation("homotopy rejected")


def cmd_dga_certify(args):
    from .dga.certificates import (
        Piecewise,
        TwoVariableCertificate,
        forced_c2_certificate,
        forced_two_variable_certificate,
        search_c2,
        search_two_variable,
    )

    L = Fraction(args.L)
    if args.beta:
        beta = Piecewise.from_json(json.loads(Path(args.beta).read_text()))
        if args.beta2:
            beta2 = Piecewise.from_json(json.loads(Path(args.beta2).read_text()))
            certs = [forced_two_variable_certificate(L, beta, beta2, engine=True)]
        else:
            certs = [forced_c2_certificate(L, beta)]
    elif args.two_variable:
        certs = search_two_variable(L, args.trials, seed=args.seed)
    else:
        certs = search_c2(L, args.trials, seed=args.seed)
    ok = all(c.ok for c in certs)
    report = {"L": str(L), "count": len(certs), "ok": ok, "certificates": [c.to_json() for c in certs[:10]]}
    if isinstance(certs[0], TwoVariableCertificate):
        low = min(c.value.lo for c in certs)
        line = f"min over {len(certs)}: {low} (>= 1/6: {ok}); c2 coefficient >= {L**12 / 6}"
    else:
        low = min(c.literal_sup.lo for c in certs)
        line = f"min sup |L^12 - beta^2/2| over {len(certs)}: {low} (>= L^12 = {L**12}: {ok})"
    _emit(args, report, line)
    if not ok:
        raise Expectation("certificate below the bound")


def cmd_preset_run(args):
    report, path, passed = run_preset(args.preset, args)
    _emit(args, report, f"{args.preset}: {report['status']} (report in {path})")
    if not passed:
        raise Expectation(f"preset {args.preset} failed")


def cmd_preset_list(args):
    for p in PRESETS.values():
        print(f"{p.name:22s} {p.description}")


def _emit(args, obj, text):
    if getattr(args, "json", False):
        print(json.dumps(obj, indent=2, default=str))
    else:
        print(text)


# -- parser ------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="worker processes (default: all cores)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out-dir", default="lipph-out")

    ap = argparse.ArgumentParser(prog="lipph", description=__doc__.splitlines()[0])
    groups = ap.add_subparsers(dest="group", required=True)

    tg = groups.add_parser("target").add_subparsers(dest="verb", required=True)
    p = tg.add_parser("make", parents=[common], help="build a target and write its JSON")
    p.add_argument("target", help="name:params (e.g. flat-torus:3,3,3,3) or a JSON file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_target_make)

    ph = groups.add_parser("ph").add_subparsers(dest="verb", required=True)
    p = ph.add_parser("map-space", parents=[common], help="barcodes of a filtered mapping space")
    p.add_argument("--domain", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--functional", default="lip", choices=["lip", "length", "logpluslip"])
    p.add_argument("--cap", required=True)
    p.add_argument("--basepoint", help="domain_vertex:target_vertex")
    p.add_argument("--coherence", default="edge", choices=["edge", "vertex"])
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--degrees", type=int, nargs="+", default=[0, 1])
    p.add_argument("--name")
    p.set_defaults(func=cmd_ph_map_space)

    p = ph.add_parser("loops", parents=[common], help="barcodes of the discrete loop space")
    p.add_argument("--target", required=True)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--cap")
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--free", action="store_true", help="unpinned loops")
    p.add_argument("--coherence", default="edge", choices=["edge", "vertex"])
    p.add_argument("--degrees", type=int, nargs="+", default=[0, 1])
    p.add_argument("--name")
    p.set_defaults(func=cmd_ph_loops)

    p = ph.add_parser("components", parents=[common], help="components of the loop space at given lengths")
    p.add_argument("--target", required=True)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--L", nargs="+", required=True)
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--free", action="store_true")
    p.set_defaults(func=cmd_ph_components)

    bc = groups.add_parser("barcode").add_subparsers(dest="verb", required=True)
    p = bc.add_parser("diff", parents=[common], help="bottleneck distance between two barcode files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_barcode_diff)
    p = bc.add_parser("smooth", parents=[common], help="shrink every bar by eps at each end")
    p.add_argument("barcode")
    p.add_argument("--eps", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_barcode_smooth)

    dg = groups.add_parser("dga").add_subparsers(dest="verb", required=True)
    p = dg.add_parser("verify", parents=[common], help="check a homotopy between two DGA maps")
    p.add_argument("--model", default="s3vs3")
    p.add_argument("--example", default="eta_L")
    p.add_argument("--L", help="value of L (symbolic when omitted)")
    p.add_argument("--printed-sign", action="store_true", help="use +2L^12 for the c2 component of eta_L")
    p.add_argument("--scenario", help="JSON file with model, target, phi, psi and eta")
    p.set_defaults(func=cmd_dga_verify)
    p = dg.add_parser("certify-lower-bound", parents=[common], help="forced c2 lower-bound certificates")
    p.add_argument("--L", required=True)
    p.add_argument("--beta", help="path JSON: {breaks, pieces} or a list of [t, value] points")
    p.add_argument("--beta2", help="second path; selects the two-variable certificate")
    p.add_argument("--two-variable", action="store_true", help="random search for the two-variable certificate")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_dga_certify)

    pr = groups.add_parser("preset").add_subparsers(dest="verb", required=True)
    p = pr.add_parser("run", parents=[common], help="run a named experiment")
    p.add_argument("preset")
    p.add_argument("--L", help="L for the DGA presets")
    p.set_defaults(func=cmd_preset_run)
    p = pr.add_parser("list", help="list presets")
    p.set_defaults(func=cmd_preset_list)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except Expectation as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    except (LipphError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
