"""Command-line interface: JSON in, JSON report out.

Exit codes: 0 on success, 2 when the input does not match the schema of the
subcommand, 3 when an inner operation rejects the input on mathematical grounds.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Any

from . import linalg
from .components import DEFAULT_STEPS, DEFAULT_TOL, canonical_representative, connect_in_fiber
from .errors import DomainError, NilcommError
from .invariant import (
    SkewLabel,
    component_label,
    is_realizable,
    label_from_json,
    map_from_json,
    map_to_json,
    phi,
    skew_to_json,
)
from .lie_core import FieldTag, Lattice, lattice_from_json, tuple_from_json
from .scalars import GaussianRational, encode_scalar
from .strata import is_rational_point, kernel_projection, splitting_inventory, stratum_index, stratum_point

EXIT_OK, EXIT_SCHEMA, EXIT_DOMAIN = 0, 2, 3


class SchemaError(NilcommError):
    name = "schema-error"


def _load_input(source: str | None) -> Any:
    if source is None:
        return None
    text = source.strip()
    if text == "-":
        text = sys.stdin.read()
    elif not text.startswith(("{", "[")):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from None


def _need(doc, what: str) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError(f"{what} input must be a JSON object")
    return doc


def _lattice(args, doc: dict | None) -> Lattice:
    if args.lattice is not None:
        return Lattice(args.lattice)
    return lattice_from_json((doc or {}).get("lattice"))


def _field_meta(field: FieldTag) -> dict:
    if field is FieldTag.COMPLEX:
        return {"lattice_coordinates": "gaussian-integers"}
    return {}


def cmd_classify(args, doc) -> tuple[dict, dict, str]:
    doc = _need(doc, "classify")
    t = tuple_from_json(doc, field=args.field, lattice=_lattice(args, doc))
    label = component_label(t)
    n = args.n if args.n is not None else t.n
    rank = label.rank()
    result = {"label": skew_to_json(label), "rank": rank, "n": n, "realizable": is_realizable(label, n)}
    return result, _field_meta(t.field), "exact"


def cmd_represent(args, doc) -> tuple[dict, dict, str]:
    doc = _need(doc, "represent")
    if args.field is not None:
        doc = {**doc, "field": args.field}
    label = label_from_json(doc)
    n = args.n if args.n is not None else doc.get("n")
    if not isinstance(n, int):
        raise SchemaError("represent needs n (flag --n or key 'n')")
    m = canonical_representative(label, n, args.convention or "omega")
    ok = linalg.equal(phi(m).entries, label.entries)
    return map_to_json(m), {"phi_matches_label": ok, **_field_meta(label.field)}, "exact"


def cmd_connect(args, doc) -> tuple[dict, dict, str]:
    doc = _need(doc, "connect")
    if "m0" not in doc or "m1" not in doc:
        raise SchemaError("connect needs 'm0' and 'm1'")
    m0 = map_from_json(doc["m0"], args.field, args.convention)
    m1 = map_from_json(doc["m1"], args.field, args.convention)
    steps = args.steps if args.steps is not None else doc.get("steps", DEFAULT_STEPS)
    tol = args.tol if args.tol is not None else doc.get("tol", DEFAULT_TOL)
    path = connect_in_fiber(m0, m1, steps, tol)
    diag = {"max_residual": max(path.residuals), "endpoint_regime": "exact", **path.diagnostics}
    return path.to_json(), diag, "float"


def cmd_stratify(args, doc) -> tuple[dict, dict, str]:
    f = map_from_json(_need(doc, "stratify"), args.field, args.convention)
    pt = stratum_point(f)
    result = {
        "d": pt.d,
        "kernel_basis": [[encode_scalar(v) for v in vec] for vec in pt.kernel_basis],
    }
    try:
        result["projection"] = [[encode_scalar(v) for v in r] for r in kernel_projection(f)]
    except DomainError as exc:
        result["projection"] = None
        return result, {"projection_error": exc.name}, "exact"
    return result, {}, "exact"


def cmd_rational(args, doc) -> tuple[dict, dict, str]:
    doc = _need(doc, "rational")
    body = doc.get("f", doc)
    f = map_from_json(body, args.field, args.convention)
    lat = _lattice(args, doc)
    return {"rational": is_rational_point(f, lat)}, {"kernel_dim": f.k - stratum_index(f)}, "exact"


def _enumerate_entries(bound: int, field: FieldTag):
    ints = range(-bound, bound + 1)
    if field is FieldTag.REAL:
        return [Fraction(v) for v in ints]
    return [GaussianRational(a, b) for a in ints for b in ints]


def cmd_enumerate(args, doc) -> tuple[dict, dict, str]:
    doc = doc if isinstance(doc, dict) else {}
    k = args.k if args.k is not None else doc.get("k")
    n = args.n if args.n is not None else doc.get("n")
    bound = args.bound if args.bound is not None else doc.get("bound", 1)
    field = FieldTag.parse(args.field or doc.get("field", "R"))
    if not isinstance(k, int) or not isinstance(n, int) or not isinstance(bound, int):
        raise SchemaError("enumerate needs integer k, n and bound")
    if k < 1 or n < 1 or bound < 0:
        raise SchemaError("k and n must be positive and bound non-negative")
    values = _enumerate_entries(bound, field)
    counts: Counter = Counter()
    realizable: Counter = Counter()
    for upper in product(values, repeat=k * (k - 1) // 2):
        label = SkewLabel.from_upper(k, upper, field)
        rank = label.rank()
        counts[rank] += 1
        realizable[rank] += is_realizable(label, n)
    table = [
        {"rank": r, "count": counts[r], "realizable_count": realizable[r], "realizable": realizable[r] == counts[r]}
        for r in sorted(counts)
    ]
    result = {"k": k, "n": n, "bound": bound, "field": field.value, "total": sum(counts.values()), "table": table}
    return result, _field_meta(field), "exact"


def cmd_inventory(args, doc) -> tuple[dict, dict, str]:
    doc = doc if isinstance(doc, dict) else {}
    k = args.k if args.k is not None else doc.get("k")
    n = args.n if args.n is not None else doc.get("n")
    d = args.d if args.d is not None else doc.get("d")
    field = FieldTag.parse(args.field or doc.get("field", "R"))
    if not all(isinstance(v, int) for v in (k, n, d)):
        raise SchemaError("inventory needs integer k, n and d")
    items = splitting_inventory(k, n, d, field)
    return {"k": k, "n": n, "d": d, "field": field.value, "summands": [s.to_json() for s in items]}, {}, "exact"


COMMANDS = {
    "classify": (cmd_classify, "component label of an almost commuting tuple and its realizability"),
    "represent": (cmd_represent, "canonical 2n x k matrix with a given label"),
    "connect": (cmd_connect, "sampled path between two maps with the same label"),
    "stratify": (cmd_stratify, "rank, kernel basis and kernel projection of a map"),
    "rational": (cmd_rational, "does the projected lattice have full rank in the kernel"),
    "enumerate": (cmd_enumerate, "tabulate all integer labels with bounded entries by rank"),
    "inventory": (cmd_inventory, "dimensions of the summands of the stable splitting"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilcomm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input", nargs="?", help="JSON file, inline JSON, or '-' for stdin")
        p.add_argument("--field", choices=["R", "C"], default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--d", type=int, default=None, help="stratum rank (inventory)")
        p.add_argument("--lattice", choices=["trivial", "unit"], default=None)
        p.add_argument("--steps", type=int, default=None, help=f"path samples minus one (default {DEFAULT_STEPS})")
        p.add_argument("--tol", type=float, default=None, help=f"residual tolerance (default {DEFAULT_TOL})")
        p.add_argument("--bound", type=int, default=None, help="entry bound for enumerate (default 1)")
        p.add_argument("--convention", choices=["omega", "j"], default=None)
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings in diagnostics")
    return parser


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def dispatch(args) -> tuple[int, dict]:
    handler = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        doc = _load_input(args.input)
        result, diagnostics, regime = handler(args, doc)
    except DomainError as exc:
        return EXIT_DOMAIN, {"subcommand": args.command, "error": {"name": exc.name, "message": str(exc)}}
    except (SchemaError, NilcommError, ValueError, KeyError, TypeError, IndexError, OSError) as exc:
        return EXIT_SCHEMA, {
            "subcommand": args.command,
            "error": {"name": "schema-error", "type": type(exc).__name__, "message": str(exc)},
        }
    if args.timings:
        diagnostics = {**diagnostics, "seconds": time.perf_counter() - start}
    return EXIT_OK, {"subcommand": args.command, "regime": regime, "result": result, "diagnostics": diagnostics}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code, report = dispatch(args)
    _emit(report, args.out)
    if code:
        print(f"nilcomm {args.command}: {report['error']['name']}: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
