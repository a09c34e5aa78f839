"""Command-line interface.

Exit codes for ``certify``: 0 Certified, 10 Obstructed, 20 Inconclusive,
1 input error. Other subcommands return 0 on success and 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import __version__
from .curves import AlgebraicCurve, cofactor, parse_curve
from .foliation import (
    HomOneForm, ProjectiveConditionError, VectorField, is_line_at_infinity_invariant,
    projectivize, strip_line_factor,
)
from .singularities import CensusError
from .numkernel import ToleranceProfile
from .polycore import InhomogeneousError, ParseError, UnknownVariable, parse_poly

SCHEMA = "invcurves.certificate/1"

EXIT = {"Certified": 0, "Obstructed": 10, "Inconclusive": 20}
EXIT_INPUT = 1


class InputError(ValueError):
    pass


# -- input parsing ----------------------------------------------------------------------


def _split_spans(text: str, sep: str = ","):
    """Top-level pieces of text with their character start offsets."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return [(p, s) for p, s in parts if p.strip()]


def _split_top(text: str, sep: str = ",") -> list[str]:
    return [p.strip() for p, _ in _split_spans(text, sep)]


def parse_field(text: str, exact: bool = False) -> VectorField:
    """Read "P=<poly>, Q=<poly>[, n=<int>]"."""
    items, where = {}, {}
    for part, start in _split_spans(text):
        if "=" not in part:
            raise InputError(f"expected key=value, got {part.strip()!r}")
        k, v = part.split("=", 1)
        items[k.strip()] = v
        where[k.strip()] = start + len(k) + 1
    unknown = set(items) - {"P", "Q", "n"}
    if unknown or "P" not in items or "Q" not in items:
        raise InputError("field syntax is 'P=<poly>, Q=<poly>[, n=<int>]'")
    n = None
    if "n" in items:
        try:
            n = int(items["n"].strip())
        except ValueError:
            raise InputError(f"n must be an integer, got {items['n']!r}") from None
    P = _parse_part(text, items["P"], where["P"], exact)
    Q = _parse_part(text, items["Q"], where["Q"], exact)
    try:
        return VectorField.of(P, Q, n)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _parse_part(full, text, start, exact):
    try:
        return parse_poly(text, "affine", exact=exact)
    except ParseError as exc:
        # rebase the offset onto the whole field string
        base = len(full[:start].encode("utf-8"))
        msg = str(exc).rsplit(" at byte ", 1)[0]
        raise ParseError(msg, base + exc.offset, full) from None


def _parse_number(text: str):
    p = parse_poly(text, "affine", exact=True)
    if not p.is_constant():
        raise InputError(f"{text!r} is not a number")
    return p.coeff((0, 0)) if not p.is_zero() else 0


def parse_gallery_ref(text: str):
    """'gallery:name(key=value, ...)' -> (name, params)."""
    m = re.fullmatch(r"\s*gallery:([A-Za-z_]+)\s*(?:\((.*)\))?\s*", text)
    if not m:
        raise InputError(f"bad gallery reference {text!r}")
    params = {}
    for part in _split_top(m.group(2) or ""):
        k, _, v = part.partition("=")
        if not _:
            raise InputError(f"expected key=value in {text!r}")
        params[k.strip()] = v.strip()
    return m.group(1), params


def _gallery_form(name: str, params: dict):
    from .gallery import KolmogorovParams, jouanolou, kolmogorov, kolmogorov_fixture, logarithmic

    if name == "kolmogorov":
        kw = {}
        if "n" in params:
            kw["n"] = int(params["n"])
        for key in ("a0", "b"):
            if key in params:
                kw[key] = complex(_to_complex(_parse_number(params[key])))
        p = KolmogorovParams(**kw)
        return kolmogorov(p), kolmogorov_fixture(p).to_json()
    if name == "jouanolou":
        return jouanolou(int(params.get("n", 2))), None
    if name == "logarithmic":
        lines = [parse_poly(t, "homogeneous") for t in _split_top(params.get("lines", "X;Y;Z"), ";")]
        weights = [_parse_number(t) for t in _split_top(params.get("weights", "1;1;-2"), ";")]
        return logarithmic(lines, weights), None
    raise InputError(f"unknown gallery family {name!r}")


def _to_complex(c):
    from .polycore import to_complex
    return to_complex(c)


def load_form(source: str | None, exact: bool):
    """Returns (omega, field or None, resolved input text)."""
    if source is None or source == "-":
        text = sys.stdin.read()
    elif source.startswith("@"):
        with open(source[1:], encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    text = text.strip()
    if not text:
        raise InputError("empty input")
    if text.startswith("{"):
        try:
            data = json.loads(text)
            form = data.get("form", data)
            return HomOneForm.from_json(form), None, text
        except (ValueError, KeyError, ProjectiveConditionError) as exc:
            raise InputError(f"bad form document: {exc}") from None
    if text.startswith("gallery:"):
        name, params = parse_gallery_ref(text)
        try:
            omega, _ = _gallery_form(name, params)
        except (ValueError, ParseError) as exc:
            raise InputError(str(exc)) from None
        return omega, None, text
    v = parse_field(text, exact)
    omega = projectivize(v)
    return omega, v, text


# -- commands ---------------------------------------------------------------------------


def _tol(args) -> ToleranceProfile:
    try:
        return ToleranceProfile(eps_root=args.tol_root, eps_eq=args.tol_eq,
                                eps_cluster=args.tol_cluster,
                                eps_obstruction=args.tol_obstruction, q_max=args.q_max)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(args, doc: dict):
    text = json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    return str(o)


def _run_config(args, tol) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    cfg["tolerance"] = tol.to_dict()
    cfg["tool_version"] = __version__
    return cfg


def cmd_certify(args) -> int:
    from .obstruction import (
        INCONCLUSIVE, index_table, nodal_obstruction_check, theorem_d_check,
    )
    from .singularities import NonIsolatedSingularities, census

    tol = _tol(args)
    omega, v, source = load_form(args.field, args.exact)
    omega, k = strip_line_factor(omega, 2, tol)
    notes = []
    if k:
        notes.append(f"divided the projectivized form by Z^{k} (radial top-degree part)")
    mode = args.mode or ("nodal" if args.curve else "theorem-d")
    if args.curve:
        try:
            curve = parse_curve(args.curve, exact=args.exact)
        except (ParseError, InhomogeneousError, ValueError) as exc:
            raise InputError(f"curve: {exc}") from None
    else:
        curve = AlgebraicCurve.from_factors([])
    if args.with_infinity:
        if not is_line_at_infinity_invariant(omega, tol):
            notes.append("line at infinity is not invariant; --with-infinity ignored")
        else:
            curve = curve.with_infinity()
    if mode == "theorem-d" and not curve.is_trivial():
        notes.append("theorem-d mode ignores the curve")
        curve = AlgebraicCurve.from_factors([])
    cfg = _run_config(args, tol)
    cfg["input"] = source
    doc = {"schema": SCHEMA, "run_config": cfg, "form": omega.to_json(),
           "curve": str(curve), "notes": notes}
    try:
        c = census(omega, curve, tol)
    except (NonIsolatedSingularities, CensusError) as exc:
        doc["certificate"] = {"mode": mode.replace("-", "_"), "verdict": INCONCLUSIVE,
                              "reason": str(exc), "delta_min": None, "witness": None,
                              "tolerance": tol.to_dict(), "tool_version": __version__}
        _emit(args, doc)
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT[INCONCLUSIVE]
    table = index_table(c)
    if c.total_multiplicity != c.expected:
        notes.append(f"found {c.total_multiplicity} singularities, expected {c.expected}")
    if mode == "theorem-d" or curve.is_trivial():
        cert = theorem_d_check(table, tol, args.budget, args.threads, seed=args.seed)
    else:
        cert = nodal_obstruction_check(table, c, curve, tol, args.budget, args.threads, seed=args.seed)
    verdict = cert.verdict
    if c.total_multiplicity != c.expected and verdict == "Certified":
        verdict = cert.verdict = INCONCLUSIVE
        cert.reason = "singularity count differs from n^2+n+1"
    doc["census"] = c.to_json()
    doc["index_table"] = table.to_json()
    doc["certificate"] = cert.to_json(table)
    _emit(args, doc)
    if cert.reason:
        print(f"{verdict.lower()}: {cert.reason}", file=sys.stderr)
    return EXIT[verdict]


def cmd_singularities(args) -> int:
    from .singularities import NonIsolatedSingularities, census

    tol = _tol(args)
    omega, _, _ = load_form(args.field, args.exact)
    omega, _k = strip_line_factor(omega, 2, tol)
    curve = parse_curve(args.curve, exact=args.exact) if args.curve else AlgebraicCurve.from_factors([])
    try:
        c = census(omega, curve, tol)
    except (NonIsolatedSingularities, CensusError) as exc:
        raise InputError(str(exc)) from None
    _emit(args, {"schema": SCHEMA, "form": omega.to_json(), "census": c.to_json()})
    return 0


def cmd_cofactor(args) -> int:
    tol = _tol(args)
    v = parse_field(args.field, args.exact)
    try:
        G = parse_poly(args.curve, "affine", exact=args.exact)
    except ParseError as exc:
        raise InputError(f"curve: {exc}") from None
    if G.degree <= 0:
        raise InputError("cofactor needs a non-constant curve")
    K = cofactor(v, G, tol)
    _emit(args, {"field": str(v), "curve": str(G), "invariant": K is not None,
                 "cofactor": None if K is None else str(K.K)})
    return 0


def cmd_find_curves(args) -> int:
    from .darboux import CurveSearchSpec, find_invariant_curves, find_invariant_lines

    tol = _tol(args)
    v = parse_field(args.field, args.exact)
    lines = find_invariant_lines(v, tol)
    doc = {"field": str(v), "lines": lines.to_json()}
    if args.max_degree >= 2:
        spec = CurveSearchSpec(max_degree=args.max_degree, tol=tol, seed=args.seed)
        doc["curves"] = find_invariant_curves(v, spec).to_json()
    _emit(args, doc)
    return 0


def cmd_sample(args) -> int:
    from .darboux import SampleSpec, sample_experiment

    tol = _tol(args)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    try:
        spec = SampleSpec(n=args.n, count=args.count, seed=args.seed,
                          distribution=args.distribution)
        report = sample_experiment(spec, checks, curve_degree=args.curve_degree, tol=tol,
                                   budget=args.budget)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = report.dumps() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gallery(args) -> int:
    params = {}
    for key in ("n", "a0", "b", "lines", "weights"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = str(val)
    try:
        omega, fixture = _gallery_form(args.name, params)
    except (ValueError, ParseError) as exc:
        raise InputError(str(exc)) from None
    doc = {"schema": SCHEMA, "name": args.name, "params": params, "form": omega.to_json()}
    if fixture is not None:
        doc["fixture"] = fixture
    _emit(args, doc)
    return 0


# -- argument parser ----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--tol-root", type=float, default=1e-10)
    p.add_argument("--tol-eq", type=float, default=1e-8)
    p.add_argument("--tol-cluster", type=float, default=1e-7)
    p.add_argument("--tol-obstruction", type=float, default=1e-6)
    p.add_argument("--q-max", type=int, default=50)
    p.add_argument("--budget", type=int, default=200_000_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="keep rational coefficients exact")
    p.add_argument("--out", help="write the JSON document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invcurves", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"invcurves {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify that no further invariant curve exists")
    p.add_argument("field", nargs="?", default="-",
                   help="'P=..., Q=...[, n=..]', 'gallery:name(k=v,...)', @file, or - for stdin")
    p.add_argument("--curve", help="invariant nodal curve F, e.g. 'x*y*z'")
    p.add_argument("--mode", choices=("theorem-d", "nodal"))
    p.add_argument("--with-infinity", action="store_true",
                   help="add the line at infinity to F when it is invariant")
    _common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("singularities", help="singular points with eigen data and classes")
    p.add_argument("field", nargs="?", default="-")
    p.add_argument("--curve")
    _common(p)
    p.set_defaults(func=cmd_singularities)

    p = sub.add_parser("cofactor", help="cofactor of an affine curve G for a field")
    p.add_argument("field")
    p.add_argument("curve")
    _common(p)
    p.set_defaults(func=cmd_cofactor)

    p = sub.add_parser("find-curves", help="search invariant lines and curves")
    p.add_argument("field")
    p.add_argument("--max-degree", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_find_curves)

    p = sub.add_parser("sample", help="seeded random-field experiment")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--distribution", choices=("uniform", "lattice"), default="uniform")
    p.add_argument("--checks", default="lines,curves,certificate")
    p.add_argument("--curve-degree", type=int, default=2)
    _common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gallery", help="emit a gallery foliation with its fixture")
    p.add_argument("name", choices=("kolmogorov", "jouanolou", "logarithmic"))
    p.add_argument("--n", type=int)
    p.add_argument("--a0")
    p.add_argument("--b")
    p.add_argument("--lines", help="';'-separated linear forms (logarithmic)")
    p.add_argument("--weights", help="';'-separated weights summing to zero (logarithmic)")
    _common(p)
    p.set_defaults(func=cmd_gallery)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, UnknownVariable, InhomogeneousError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
