"""Command-line front end: analyze, scan, rauzy, dual, tile, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from . import rauzy, render, verify
from .cutproject import CutProjectScheme
from .dual import dualize, generate_dual_pointset
from .errors import (
    AperiodicaError,
    MissingRuleError,
    SubstitutionFileError,
    UnknownLetterError,
)
from .fixtures import Fixture, all_fixtures, get_fixture
from .geometry2d import audit_patch, polygonal_prototiles, substitute_patch
from .intpoly import IntPolynomial
from .numberfield import NumberField, PisotClass, classify_pisot
from .substitution import SymbolicSubstitution, is_primitive, matrix_of, pf_data

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_INDETERMINATE = 3


def parse_substitution_file(text: str):
    """Parse the substitution input grammar.

    ::

        alphabet: S M L
        S -> M L
        M -> S M L
        L -> L M L
        minpoly: 1 0 -3 1        # optional, constant term first
        length S = -1 1 0        # optional, coordinates over the power basis
        endpoint: right          # optional

    Returns (substitution, lengths-or-None, endpoint).
    """
    alphabet = None
    rules = {}
    minpoly_coeffs = None
    length_lines = []
    endpoint = "right"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            alphabet = tuple(line.split(":", 1)[1].split())
            if not alphabet:
                raise SubstitutionFileError("empty alphabet", line=lineno)
        elif line.startswith("minpoly:"):
            try:
                minpoly_coeffs = tuple(int(x) for x in line.split(":", 1)[1].split())
            except ValueError:
                raise SubstitutionFileError("minpoly needs integer coefficients", line=lineno)
        elif line.startswith("endpoint:"):
            endpoint = line.split(":", 1)[1].strip()
            if endpoint not in ("right", "left"):
                raise SubstitutionFileError("endpoint must be right or left", line=lineno)
        elif line.startswith("length "):
            length_lines.append((lineno, line))
        elif "->" in line:
            lhs, rhs = line.split("->", 1)
            letter = lhs.strip()
            word = tuple(rhs.split())
            if not word and rhs.strip():
                word = tuple(rhs.strip())
            if alphabet is None:
                raise SubstitutionFileError("alphabet line must come first", line=lineno)
            if letter not in alphabet:
                raise UnknownLetterError(f"rule for unknown letter {letter!r}", line=lineno)
            if len(word) == 1 and word[0] not in alphabet and all(ch in alphabet for ch in word[0]):
                word = tuple(word[0])
            for x in word:
                if x not in alphabet:
                    raise UnknownLetterError(f"unknown letter {x!r} in rule image", line=lineno)
            if not word:
                raise SubstitutionFileError(f"empty image for {letter!r}", line=lineno)
            rules[letter] = word
        else:
            raise SubstitutionFileError(f"unparsable line: {raw.strip()!r}", line=lineno)
    if alphabet is None or not rules:
        raise MissingRuleError("no substitution rules found")
    missing = [a for a in alphabet if a not in rules]
    if missing:
        raise MissingRuleError(f"letters without rules: {missing}")
    subst = SymbolicSubstitution(alphabet, tuple(rules[a] for a in alphabet))
    lengths = None
    if length_lines:
        if minpoly_coeffs is None:
            raise SubstitutionFileError("length lines require a minpoly line")
        field = NumberField(IntPolynomial(minpoly_coeffs))
        lengths = {}
        for lineno, line in length_lines:
            body = line[len("length "):]
            if "=" not in body:
                raise SubstitutionFileError("length line needs '='", line=lineno)
            letter, coords = body.split("=", 1)
            letter = letter.strip()
            if letter not in alphabet:
                raise UnknownLetterError(f"length for unknown letter {letter!r}", line=lineno)
            try:
                vec = tuple(int(x) for x in coords.split())
            except ValueError:
                raise SubstitutionFileError("length coordinates must be integers", line=lineno)
            lengths[letter] = field.element(vec)
        missing = [a for a in alphabet if a not in lengths]
        if missing:
            raise SubstitutionFileError(f"letters without lengths: {missing}")
    return subst, lengths, endpoint


def _load_input(args) -> Fixture:
    if args.fixture:
        return get_fixture(args.fixture)
    if args.input:
        with open(args.input) as fh:
            subst, lengths, endpoint = parse_substitution_file(fh.read())
        if lengths is None:
            data = pf_data(matrix_of(subst))
            elements = data.length_elements()
            if any(e is None for e in elements):
                elements, _ = data.scaled_length_elements()
            lengths = dict(zip(subst.alphabet, elements))
        name = os.path.splitext(os.path.basename(args.input))[0]
        return Fixture(name=name, description=f"from {args.input}",
                       substitution=subst, lengths=lengths, endpoint=endpoint)
    raise SystemExit(EXIT_USAGE)


def _outdir(args) -> Optional[str]:
    if getattr(args, "out", None):
        os.makedirs(args.out, exist_ok=True)
        return args.out
    return None


def _emit_json(payload: dict, args, filename: str):
    text = json.dumps(payload, sort_keys=True, indent=2)
    out = _outdir(args)
    if out:
        with open(os.path.join(out, filename), "w") as fh:
            fh.write(text + "\n")
    print(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_analyze(args) -> int:
    fx = _load_input(args)
    if fx.kind == "matrix-data":
        matrix = fx.matrix
        data = pf_data(matrix)
        from .substitution import density

        payload = {
            "name": fx.name,
            "matrix": matrix.tolist(),
            "primitive": bool(is_primitive(matrix)),
            "pf_value": data.pf_value,
            "frequencies": data.frequencies.tolist(),
            "volumes": list(fx.volumes),
            "density": density(np.array(fx.volumes), data.frequencies),
            "minpoly": list(data.minimal_polynomial.coefficients),
            "pisot_class": classify_pisot(data.minimal_polynomial).value,
        }
        _emit_json(payload, args, f"{fx.name}.analysis.json")
        return EXIT_OK
    subst = fx.substitution
    matrix = matrix_of(subst)
    data = pf_data(matrix)
    field = fx.field
    payload = {
        "name": fx.name,
        "alphabet": list(map(str, subst.alphabet)),
        "rules": {str(a): "".join(map(str, w)) for a, w in subst.rules_dict().items()},
        "matrix": matrix.tolist(),
        "primitive": bool(is_primitive(matrix)),
        "pf_value": data.pf_value,
        "frequencies": data.frequencies.tolist(),
        "lengths": {str(a): fx.lengths[a].embed() for a in subst.alphabet},
        "lengths_exact": {str(a): list(fx.lengths[a].coords) for a in subst.alphabet},
        "minpoly": list(field.minpoly.coefficients),
        "pisot_class": field.pisot_class().value,
    }
    _emit_json(payload, args, f"{fx.name}.analysis.json")
    return EXIT_OK


def cmd_scan(args) -> int:
    rows = verify.scan_mn_family(args.max)
    out = _outdir(args)
    if args.format == "csv":
        path = os.path.join(out or ".", "scan.csv")
        render.write_scan_csv(path, rows)
        print(f"wrote {path}")
    else:
        payload = {"schema": verify.SCHEMA, "rows": [r.to_dict() for r in rows]}
        _emit_json(payload, args, "scan.json")
    pv = [r.n for r in rows if r.pisot_class == "PV"]
    print(f"PV members up to {args.max}: {pv}", file=sys.stderr)
    return EXIT_OK


def _fixture_ifs(fx: Fixture):
    scheme = CutProjectScheme(fx.field)
    eqs = rauzy.derive_set_equations(fx.substitution, fx.lengths, endpoint=fx.endpoint)
    return rauzy.star_equations(eqs, scheme), scheme


def cmd_rauzy(args) -> int:
    fx = _load_input(args)
    ifs, scheme = _fixture_ifs(fx)
    cloud = rauzy.attractor_cloud(
        ifs, args.points, seed=args.seed, backend=args.backend,
        oversample=args.oversample,
    )
    out = _outdir(args) or "."
    base = os.path.join(out, f"{fx.name}.rauzy")
    render.write_cloud_csv(base + ".csv", cloud.type_names, cloud.types, cloud.points)
    written = [base + ".csv"]
    if cloud.points.shape[1] == 2:
        render.svg_scatter(cloud.points, cloud.types, cloud.type_names,
                           base + ".svg", size=args.svg_size)
        written.append(base + ".svg")
    else:
        print(f"internal space is {cloud.points.shape[1]}-dimensional; "
              "skipping SVG (point cloud exported)", file=sys.stderr)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_dual(args) -> int:
    fx = _load_input(args)
    ifs, scheme = _fixture_ifs(fx)
    dual = dualize(ifs)
    out = _outdir(args) or "."
    rules_payload = {
        "name": fx.name,
        "types": list(map(str, dual.types)),
        "rules": {
            str(t): [
                {"child": str(ch.child), "offset": list(ch.offset.coords)}
                for ch in dual.rules[t]
            ]
            for t in dual.types
        },
        "control_points": {str(t): list(c.coords) for t, c in dual.control_points.items()},
        "matrix": dual.matrix().tolist(),
    }
    with open(os.path.join(out, f"{fx.name}.dual-rules.json"), "w") as fh:
        fh.write(json.dumps(rules_payload, sort_keys=True, indent=2) + "\n")
    pointset = generate_dual_pointset(dual, args.generations)
    types, coords, xy = pointset.arrays()
    render.write_dual_points_csv(os.path.join(out, f"{fx.name}.dual-points.csv"),
                                 dual.types, types, coords, xy)
    written = [f"{fx.name}.dual-rules.json", f"{fx.name}.dual-points.csv"]
    if xy.shape[1] == 2:
        render.svg_scatter(xy, types, dual.types,
                           os.path.join(out, f"{fx.name}.dual-points.svg"),
                           size=args.svg_size)
        written.append(f"{fx.name}.dual-points.svg")
    for path in written:
        print(f"wrote {os.path.join(out, path)}")
    return EXIT_OK


def cmd_tile(args) -> int:
    fx = _load_input(args)
    ifs, scheme = _fixture_ifs(fx)
    dual = dualize(ifs)
    tiles = polygonal_prototiles(scheme)
    patch = substitute_patch(tiles, dual, args.generations)
    lam = fx.field.generator().embed()
    reference = lam ** args.generations * tiles["L"].area
    report = audit_patch(patch, reference_area=reference)
    out = _outdir(args) or "."
    render.svg_patch(patch.placements, tiles,
                     os.path.join(out, f"{fx.name}.patch.svg"), size=args.svg_size)
    render.write_placements_csv(os.path.join(out, f"{fx.name}.placements.csv"),
                                patch.placements)
    _emit_json(report.to_dict(), args, f"{fx.name}.audit.json")
    ok = (report.overlap_area <= 1e-9 * report.union_area
          and report.rim_components == 1)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    fx = _load_input(args)
    try:
        report = verify.verify_fixture(fx, mode=args.mode, tolerance=args.tolerance)
    except AperiodicaError as exc:
        print(f"verification refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit_json(report.to_dict(), args, f"{fx.name}.verify.json")
    if report.passed:
        return EXIT_OK
    if report.pisot_class == PisotClass.INDETERMINATE.value:
        return EXIT_INDETERMINATE
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aperiodica",
        description="Pisot substitution tilings, Rauzy fractals, dual tilings "
                    "and model-set density verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_points=False):
        p.add_argument("--fixture", help="builtin fixture name")
        p.add_argument("--input", help="substitution file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--precision", type=float, default=None,
                       help="root isolation precision override (relative)")
        if with_points:
            p.add_argument("--points", type=int, default=100_000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--backend", choices=["chaos", "direct"], default="chaos")
            p.add_argument("--oversample", type=int, default=1)
        p.add_argument("--svg-size", type=int, default=600)
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_analyze = sub.add_parser("analyze", help="matrix, eigendata and Pisot class")
    add_common(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_scan = sub.add_parser("scan", help="classify the staircase family")
    add_common(p_scan)
    p_scan.add_argument("--max", type=int, default=30)
    p_scan.set_defaults(func=cmd_scan)

    p_rauzy = sub.add_parser("rauzy", help="window-set point cloud (CSV + SVG)")
    add_common(p_rauzy, with_points=True)
    p_rauzy.set_defaults(func=cmd_rauzy)

    p_dual = sub.add_parser("dual", help="dual substitution rules and point set")
    add_common(p_dual)
    p_dual.add_argument("--generations", type=int, default=8)
    p_dual.set_defaults(func=cmd_dual)

    p_tile = sub.add_parser("tile", help="polygonal dual patch and audit")
    add_common(p_tile)
    p_tile.add_argument("--generations", type=int, default=4)
    p_tile.set_defaults(func=cmd_tile)

    p_verify = sub.add_parser("verify", help="model-set density identity report")
    add_common(p_verify)
    p_verify.add_argument("--mode", choices=["primal", "dual"], default=None)
    p_verify.add_argument("--tolerance", type=float, default=1e-6)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "fixture", None) and getattr(args, "input", None):
        print("give either --fixture or --input, not both", file=sys.stderr)
        return EXIT_USAGE
    if args.command != "scan" and not getattr(args, "fixture", None) \
            and not getattr(args, "input", None):
        print("an input is required: --fixture NAME or --input FILE", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SubstitutionFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AperiodicaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
