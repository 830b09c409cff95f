"""Command-line front end.

Every invocation writes one document to standard output (JSON by default,
``--format plain`` for text) and a short summary to standard error.

Exit codes: 0 success / member / satisfied, 1 a well-formed negative
answer, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import exact_lp, polytope_geometry as geo, spin_core as core
from .errors import SpinCorrError

REPORT_FORMAT = "spincorr.report/1"
_RATIONAL = re.compile(r"^-?\d+/\d+$")

MATRIX_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "MatrixDocument",
    "type": "object",
    "required": ["n", "upper"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "upper": {"type": "array", "items": {"type": "string", "pattern": r"^\s*-?[0-9]+(/[0-9]+)?\s*$"}},
        "label": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ReportDocument",
    "type": "object",
    "required": ["format", "command", "exit_code", "timing_seconds"],
    "properties": {
        "format": {"const": REPORT_FORMAT},
        "command": {"type": "array", "items": {"type": "string"}},
        "exit_code": {"enum": [0, 1, 2]},
        "timing_seconds": {"type": "number", "minimum": 0},
        "result": {"type": "object"},
        "error": {"type": "string"},
    },
    "oneOf": [{"required": ["result"]}, {"required": ["error"]}],
}


class UsageError(SpinCorrError):
    pass


def fmt(x: Fraction) -> str:
    """Lowest-terms ``p/q`` with positive denominator (``Fraction`` guarantees both)."""
    return f"{x.numerator}/{x.denominator}"


def _encode(obj):
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def _decode(obj):
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return Fraction(obj)
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(_encode(report), indent=2)


def loads_report(text: str) -> dict:
    """Inverse of :func:`dumps_report`; ``p/q`` strings become Fractions."""
    return _decode(json.loads(text))


def parse_matrix_document(doc: dict) -> core.CorrelationMatrix:
    if not isinstance(doc, dict):
        raise UsageError("matrix document must be a JSON object")
    n = doc.get("n")
    upper = doc.get("upper")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError(f"'n' must be a positive integer, got {n!r}")
    if not isinstance(upper, list) or not all(isinstance(v, str) for v in upper):
        raise UsageError("'upper' must be a list of rational strings")
    try:
        values = tuple(Fraction(v.strip()) for v in upper)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational in 'upper': {exc}") from None
    try:
        return core.CorrelationMatrix(n, values)
    except SpinCorrError as exc:
        raise UsageError(str(exc)) from None


def matrix_document(sigma: core.UnitDiagonalMatrix, label: Optional[str] = None) -> dict:
    doc: dict[str, Any] = {"n": sigma.n, "upper": list(sigma.upper)}
    if label is not None:
        doc["label"] = label
    return doc


def load_matrix_file(path: str) -> core.CorrelationMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    return parse_matrix_document(doc)


def _bell_entry(q: core.BellInequality, n: int, sigma=None) -> dict:
    offset, normal = q.coefficients(n)
    entry = {"triple": list(q.triple), "signs": list(q.signs), "text": str(q)}
    if sigma is not None:
        entry["value"] = core.evaluate_bell(q, sigma)
    else:
        entry["offset"] = Fraction(offset)
        entry["normal"] = [Fraction(a) for a in normal]
    return entry


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


# Each handler returns (exit_code, result, summary).

def cmd_vertices(args):
    vertices = core.extreme_points(args.n)
    classes = core.sign_classes(args.n)
    result = {
        "n": args.n,
        "count": len(vertices),
        "vertices": [{"sign_class": list(w.entries), "upper": list(v.upper)}
                     for w, v in zip(classes, vertices)],
    }
    return 0, result, f"{len(vertices)} extreme points for n={args.n}"


def cmd_bells(args):
    system = core.bell_system(args.n)
    result = {"n": args.n, "count": len(system),
              "inequalities": [_bell_entry(q, args.n) for q in system]}
    return 0, result, f"{len(system)} Bell inequalities for n={args.n}"


def cmd_check(args):
    sigma = load_matrix_file(args.file)
    violated = core.check_bell(sigma)
    result = {
        "matrix": matrix_document(sigma),
        "evaluated": len(core.bell_system(sigma.n)),
        "satisfied": not violated,
        "violated": [_bell_entry(q, sigma.n, sigma) for q in violated],
    }
    summary = ("all Bell inequalities hold" if not violated
               else f"{len(violated)} Bell inequalities violated")
    return (0 if not violated else 1), result, summary


def _certificate_fields(cert: exact_lp.Infeasible, sigma) -> dict:
    system = exact_lp.membership_system(sigma)
    return {"certificate": list(cert.certificate),
            "certificate_value": exact_lp.certificate_value(cert, system)}


def cmd_member(args):
    sigma = load_matrix_file(args.file)
    res = exact_lp.membership(sigma)
    result: dict[str, Any] = {"matrix": matrix_document(sigma), "member": res.feasible}
    if res.feasible:
        result["sign_classes"] = [list(w.entries) for w in core.sign_classes(sigma.n)]
        result["weights"] = list(res.point)
        return 0, result, "matrix is in the correlation polytope"
    result.update(_certificate_fields(res, sigma))
    return 1, result, "matrix is NOT in the correlation polytope (Farkas certificate attached)"


def cmd_realize(args):
    sigma = load_matrix_file(args.file)
    res = exact_lp.realizability(sigma)
    result: dict[str, Any] = {"matrix": matrix_document(sigma)}
    if isinstance(res, exact_lp.Infeasible):
        result["realizable"] = False
        result.update(_certificate_fields(res, sigma))
        return 1, result, "no spin distribution has these correlations"
    result["realizable"] = True
    result["distribution"] = [{"atom": list(a.entries), "weight": w}
                              for a, w in res.weights.items()]
    return 0, result, f"realized by a spin distribution on {len(res.weights)} atoms"


def cmd_barycentric(args):
    sigma = load_matrix_file(args.file)
    if sigma.n != 3:
        raise UsageError(f"barycentric coordinates need n=3, got n={sigma.n}")
    x = core.moment_vector(sigma)
    y = core.bell_transform(x)
    lam = core.barycentric3(sigma)
    result = {
        "matrix": matrix_document(sigma),
        "moment_vector": list(x.x),
        "bell_values": list(y.y),
        "barycentric": list(lam.weights),
        "member": lam.nonnegative,
    }
    summary = "lambda = (" + ", ".join(str(v) for v in lam.weights) + ")"
    return (0 if lam.nonnegative else 1), result, summary


def cmd_facets(args):
    v = geo.VRepresentation.of_correlation_polytope(args.n)
    h = geo.facet_enumerate(v)
    bells = {geo.HalfSpace.from_bell(q, args.n) for q in core.bell_system(args.n)}
    result = {
        "n": args.n,
        "dim": v.dim,
        "hull_dim": geo.affine_hull_dim(v).dim,
        "halfspaces": [{"offset": hs.offset, "normal": list(hs.normal)} for hs in h.halfspaces],
        "equalities": [{"offset": e.offset, "normal": list(e.normal)} for e in h.affine_equalities],
        "facet_count": len(h.halfspaces),
        "bell_count": len(bells),
        "bell_facets": sum(hs in bells for hs in h.halfspaces),
        "all_facets_are_bell": all(hs in bells for hs in h.halfspaces),
    }
    return 0, result, f"{len(h.halfspaces)} facets for n={args.n}"


def cmd_simplex_check(args):
    if args.n < 2:
        raise UsageError("simplex-check needs n >= 2")
    v = geo.VRepresentation.of_correlation_polytope(args.n)
    hull = geo.affine_hull_dim(v)
    simplex = geo.is_simplex(v)
    result = {
        "n": args.n,
        "vertex_count": len(v.points),
        "hull_dim": hull.dim,
        "is_simplex": simplex,
        "count_identity": geo.simplex_count_identity(args.n),
    }
    return (0 if simplex else 1), result, f"C_{args.n} is {'' if simplex else 'not '}a simplex"


def cmd_gap(args):
    if args.n <= 4:
        raise UsageError(
            f"gap needs n >= 5: for n={args.n} the Bell inequalities are necessary "
            "and sufficient, so no gap exists"
        )
    w = geo.gap_search(args.n, seed=args.seed)
    system = exact_lp.membership_system(w.sigma)
    values = [core.evaluate_bell(q, w.sigma) for q in core.bell_system(args.n)]
    result = {
        "n": args.n,
        "seed": args.seed,
        "strategy": w.strategy,
        "matrix": matrix_document(w.sigma),
        "bell_evaluated": len(values),
        "bell_min_value": min(values),
        "certificate": list(w.certificate.certificate),
        "certificate_value": exact_lp.certificate_value(w.certificate, system),
        "verified": geo.verify_gap_witness(w),
    }
    return 0, result, f"Bell-satisfying non-member found: all s_ij = {w.sigma.upper[0]}"


def cmd_sample(args):
    sigma = load_matrix_file(args.file)
    dist = exact_lp.realizability(sigma)
    if isinstance(dist, exact_lp.Infeasible):
        result = {"matrix": matrix_document(sigma), "realizable": False}
        result.update(_certificate_fields(dist, sigma))
        return 1, result, "matrix is not realizable; nothing to sample"
    est = core.sample_correlations(dist, args.count, args.seed)
    result = {
        "matrix": matrix_document(sigma),
        "realizable": True,
        "count": est.count,
        "seed": est.seed,
        "generator": est.generator,
        "sigma_hat": list(est.sigma_hat),
        "stderr": list(est.stderr),
        "max_abs_error": max((abs(a - float(b)) for a, b in zip(est.sigma_hat, sigma.upper)),
                             default=0.0),
    }
    return 0, result, f"sampled {est.count} draws (seed {est.seed})"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("structured", "plain"), default="structured")
    common.add_argument("--seed", type=_seed, default=0)

    parser = argparse.ArgumentParser(prog="spincorr",
                                     description="Exact tools for spin correlation polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, arg, help_text, **kw):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if arg == "n":
            p.add_argument("n", type=_positive_int)
        else:
            p.add_argument("file")
        for flag, spec in kw.items():
            p.add_argument(flag, **spec)
        p.set_defaults(handler=handler)

    add("vertices", cmd_vertices, "n", "list extreme points of C_n")
    add("bells", cmd_bells, "n", "list the Bell inequalities for n spins")
    add("check", cmd_check, "file", "evaluate all Bell inequalities")
    add("member", cmd_member, "file", "exact LP membership in C_n")
    add("realize", cmd_realize, "file", "construct a realizing spin distribution")
    add("barycentric", cmd_barycentric, "file", "barycentric coordinates (n=3)")
    add("facets", cmd_facets, "n", "enumerate facets of C_n")
    add("simplex-check", cmd_simplex_check, "n", "is C_n a simplex?")
    add("gap", cmd_gap, "n", "find a Bell-satisfying matrix outside C_n (n >= 5)")
    add("sample", cmd_sample, "file", "Monte-Carlo check of a realization",
        **{"--count": {"type": _positive_int, "required": True}})
    return parser


def _plain(value, indent: str = "") -> list[str]:
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(e, (dict, list)) for e in
                                                        (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{indent}{k}:")
                lines.extend(_plain(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_flat(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict):
                lines.append(f"{indent}- " + ", ".join(f"{k}={_flat(e)}" for k, e in v.items()))
            else:
                lines.append(f"{indent}- {_flat(v)}")
    else:
        lines.append(indent + _flat(value))
    return lines


def _flat(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}={_flat(e)}" for k, e in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_flat(e) for e in v) + "]"
    return str(v)


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Execute one command and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    start = time.perf_counter()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:  # --help
            return 0
        report = {"format": REPORT_FORMAT, "command": argv, "exit_code": 2,
                  "error": "usage error (see standard error)",
                  "timing_seconds": time.perf_counter() - start}
        stdout.write(dumps_report(report) + "\n")
        return 2

    report: dict[str, Any] = {"format": REPORT_FORMAT, "command": argv}
    try:
        code, result, summary = args.handler(args)
        report["exit_code"] = code
        report["result"] = result
    except SpinCorrError as exc:
        code, summary = 2, f"error: {exc}"
        report["exit_code"] = code
        report["error"] = str(exc)
    report["timing_seconds"] = time.perf_counter() - start

    if args.format == "plain":
        body = report.get("result", {"error": report.get("error")})
        stdout.write("\n".join(_plain(body)) + "\n")
    else:
        stdout.write(dumps_report(report) + "\n")
    stderr.write(f"spincorr {args.command}: {summary}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
