"""Batch front end: JSON or flags in, one JSON run report out.

Every invocation prints a single JSON document on stdout (unless ``--dot``
or ``--tree`` asks for a graph or tree rendering) with four fields: the
command name, a digest of the inputs, the outcome, and a command-specific
payload.  Exit codes: 0 when the command succeeded and any checked
property held, 1 when a checked property failed (the payload then carries
a witness sufficient to reproduce the failure through the library), 2 when
the input or usage was invalid (the payload carries a machine-readable
diagnostic).  Stdout is byte-identical across runs for the same command,
arguments, and seed; wall-clock timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from .braids import braid_from_json, braid_equal, braid_sum, is_trivial
from .errors import (
    DiagramBroken,
    InvariantBroken,
    NotBlockDecomposable,
    WorkbenchError,
)
from .homology import homology
from .operads import (
    BRAIDED,
    MIXED2,
    N_OPERAD,
    SYMMETRIC,
    check_operad_axioms,
    desymmetrise,
    endomorphism_symmetric_operad,
    operad_from_json,
    operad_to_json,
    orders_operad,
    terminal_operad,
)
from .ordinal_maps import OrdinalMap, compose, factorize
from .ordinals import enumerate_ordinals, ordinal_from_json
from .quasicat import build_j, build_q, nerve, order_complex
from .strata import (
    StratumLabel,
    classify_stratum,
    configuration_from_json,
    degeneration_check,
    label_key,
    sample_stratum,
    stratum_from_json,
    verify_partition,
)
from .zigzags import (
    artin_diagram_check,
    braid_of_zigzag,
    split_zigzag,
    zigzag_from_json,
)

DEFAULT_SEED = 0


class CommandFailed(Exception):
    """A checked property failed; the payload holds the witness."""

    def __init__(self, payload: dict):
        super().__init__("checked property failed")
        self.payload = payload


class UsageError(Exception):
    """Bad input or usage; the payload holds the diagnostic."""

    def __init__(self, payload: dict):
        super().__init__("usage error")
        self.payload = payload


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse failures into the JSON report instead of bare text
    def error(self, message):
        raise _ArgError(message)


class _Text:
    """Sentinel for handlers that write text (DOT or trees) instead of JSON."""

    def __init__(self, text: str):
        self.text = text


# -- small renderers ----------------------------------------------------


def _bracket_tree(t) -> str:
    """Nested-bracket drawing of an ordinal: blocks split at each level."""
    if t.arity == 0:
        return "()"
    if t.domain.is_infinite:
        return " ".join(str(p) for p in range(t.arity))

    def render(lo: int, hi: int, level: int) -> str:
        if level >= t.domain.n:
            return " ".join(str(p) for p in range(lo, hi))
        blocks, start = [], lo
        for p in range(lo, hi - 1):
            if t.levels[p] == level:
                blocks.append((start, p + 1))
                start = p + 1
        blocks.append((start, hi))
        return " ".join(f"({render(a, b, level + 1)})" for a, b in blocks)

    return render(0, t.arity, 0)


def _dot_quasi_category(c) -> str:
    lines = ["digraph Q {"]
    for idx, obj in enumerate(c.objects):
        lines.append(f'  v{idx} [label="{list(obj.levels)}"];')
    for (i, j), maps in sorted(c.hom.items()):
        for m in maps:
            if m.is_identity:
                continue
            label = ",".join(str(v) for v in m.table)
            lines.append(f'  v{i} -> v{j} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_poset(p) -> str:
    lines = ["digraph J {"]
    for idx, (t, labels) in enumerate(p.elements):
        lines.append(f'  v{idx} [label="{list(t.levels)}|{list(labels)}"];')
    for i, j in p.covering_pairs():
        lines.append(f"  v{i} -> v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- command handlers ----------------------------------------------------


def _cmd_enumerate(args, doc):
    ordinals = list(enumerate_ordinals(args.n, args.k))
    stop = None if args.limit is None else args.offset + args.limit
    window = ordinals[args.offset : stop]
    if args.tree:
        lines = [
            f"{args.offset + pos}: levels={list(t.levels)}  {_bracket_tree(t)}"
            for pos, t in enumerate(window)
        ]
        return _Text("\n".join(lines) + ("\n" if lines else ""))
    return {
        "n": args.n,
        "k": args.k,
        "count": len(ordinals),
        "offset": args.offset,
        "ordinals": [t.to_json() for t in window],
    }


def _parse_map_fields(doc) -> tuple:
    if not isinstance(doc, dict) or not {"source", "target", "f"} <= set(doc):
        raise UsageError(
            {
                "error": "BAD_INPUT",
                "message": "expected an object with 'source', 'target' and 'f'",
            }
        )
    return (
        ordinal_from_json(doc["source"]),
        ordinal_from_json(doc["target"]),
        tuple(doc["f"]),
    )


def _cmd_check_map(args, doc):
    source, target, table = _parse_map_fields(doc)
    try:
        m = OrdinalMap(source, target, table)
    except WorkbenchError as e:
        raise CommandFailed({"error": e.code, "witness": e.to_json()})
    return {
        "map": m.to_json(),
        "quasibijection": m.is_quasibijection,
        "order_preserving": m.is_order_preserving,
    }


def _cmd_factorize(args, doc):
    source, target, table = _parse_map_fields(doc)
    m = OrdinalMap(source, target, table)
    fact = factorize(m)
    recomposed = compose(fact.nu, fact.pi)
    if recomposed.table != m.table:
        raise CommandFailed(
            {"error": "COMPOSE_MISMATCH", "witness": fact.to_json()}
        )
    return {**fact.to_json(), "recomposes": True}


def _cmd_build_q(args, doc):
    c = build_q(args.n, args.k)
    if args.dot:
        return _Text(_dot_quasi_category(c))
    return {**c.to_json(), "morphisms": c.morphism_count()}


def _cmd_build_j(args, doc):
    p = build_j(args.n, args.k)
    if args.dot:
        return _Text(_dot_poset(p))
    return {**p.to_json(), "covering_pairs": [list(c) for c in p.covering_pairs()]}


def _complex_for(args):
    if args.category == "Q":
        return nerve(build_q(args.n, args.k))
    return order_complex(build_j(args.n, args.k))


def _cmd_nerve(args, doc):
    cx = _complex_for(args)
    return {
        "category": args.category,
        "n": args.n,
        "k": args.k,
        "cells": [cx.size(d) for d in range(cx.dimension + 1)],
        "euler": cx.euler_characteristic(),
    }


def _cmd_homology(args, doc):
    return homology(_complex_for(args)).to_json()


def _cmd_braid(args, doc):
    b = braid_from_json(doc)
    return {
        "strands": b.strands,
        "word": list(b.word),
        "reduced": list(b.free_reduce().word),
        "permutation": list(b.permutation().image),
        "writhe": sum(1 if letter > 0 else -1 for letter in b.word),
        "trivial": is_trivial(b),
    }


def _cmd_zigzag(args, doc):
    z = zigzag_from_json(doc)
    return {
        "strands": z.strands,
        "legs": len(z.legs),
        "start": z.start.to_json(),
        "end": z.end.to_json(),
        "braid": braid_of_zigzag(z).to_json(),
    }


def _cmd_split(args, doc):
    blocks = None
    if isinstance(doc, dict) and "zigzag" in doc:
        blocks = doc.get("blocks")
        doc = doc["zigzag"]
    z = zigzag_from_json(doc)
    try:
        res = split_zigzag(z, blocks)
    except NotBlockDecomposable as e:
        raise CommandFailed({"error": e.code, "witness": e.to_json()})
    whole = braid_of_zigzag(z)
    joined = braid_sum(res.braids) if res.braids else whole
    agrees = braid_equal(whole, joined)
    if not agrees:
        raise CommandFailed(
            {"error": "SPLIT_CLASS_MISMATCH", "witness": res.to_json()}
        )
    return {**res.to_json(), "braid_class_agrees": True}


def _cmd_artin_check(args, doc):
    pairs = []
    for i in range(1, args.k):
        for j in range(1, args.k):
            if i == j:
                continue
            try:
                cert = artin_diagram_check(args.k, i, j)
            except DiagramBroken as e:
                raise CommandFailed(
                    {"error": e.code, "i": i, "j": j, "witness": e.to_json()}
                )
            pairs.append(
                {
                    "i": i,
                    "j": j,
                    "relation": cert.relation,
                    "stages": [len(cert.lhs_stages), len(cert.rhs_stages)],
                    "braid": cert.braid.to_json(),
                }
            )
    return {"k": args.k, "count": len(pairs), "pairs": pairs}


_FLAVOR_NAMES = {"symmetric": SYMMETRIC, "braided": BRAIDED, "mixed2": MIXED2}


def _flavor_from(args, doc=None):
    name = None if doc is None else doc.get("flavor")
    if not isinstance(name, str):
        name = args.flavor
    if name is None:
        raise UsageError(
            {"error": "BAD_INPUT", "message": "a flavor is required here"}
        )
    if name in _FLAVOR_NAMES:
        return _FLAVOR_NAMES[name]
    if name == "n":
        n = getattr(args, "n", None)
        n = (doc or {}).get("n", n)
        if n is None:
            raise UsageError(
                {"error": "BAD_INPUT", "message": "flavor 'n' needs --n"}
            )
        return N_OPERAD(n)
    raise UsageError({"error": "BAD_INPUT", "message": f"unknown flavor {name!r}"})


def _load_operad(doc, args):
    if not isinstance(doc, dict):
        raise UsageError(
            {"error": "BAD_INPUT", "message": "expected an operad object"}
        )
    if "builtin" not in doc:
        return operad_from_json(doc)
    name = doc["builtin"]
    bound = doc.get("bound", getattr(args, "bound", None))
    if name == "terminal":
        return terminal_operad(_flavor_from(args, doc), 3 if bound is None else bound)
    if name == "endomorphism":
        values = tuple(doc.get("set", [0, 1]))
        return endomorphism_symmetric_operad(values, 2 if bound is None else bound)
    if name == "orders":
        return orders_operad(3 if bound is None else bound)
    raise UsageError({"error": "BAD_INPUT", "message": f"unknown builtin {name!r}"})


def _cmd_operad_check(args, doc):
    op = _load_operad(doc, args)
    bound = op.bound if args.bound is None else args.bound
    try:
        report = check_operad_axioms(op, bound)
    except InvariantBroken as e:
        raise CommandFailed({"error": e.code, "witness": e.to_json()})
    payload = {"flavor": str(op.flavor), "bound": bound, **report.to_json()}
    if not report.passed:
        raise CommandFailed(payload)
    return payload


def _cmd_desymmetrise(args, doc):
    op = _load_operad(doc, args)
    de = desymmetrise(op, args.n, args.bound)
    return operad_to_json(de)


def _cmd_classify(args, doc):
    config = configuration_from_json(doc)
    label = classify_stratum(config)
    return {"label": label.to_json(), "key": label_key(label)}


def _cmd_sample(args, doc):
    label = stratum_from_json(doc)
    config = sample_stratum(label)
    back = classify_stratum(config)
    if back != label:
        raise CommandFailed(
            {
                "error": "ROUNDTRIP_MISMATCH",
                "witness": {
                    "label": label.to_json(),
                    "configuration": config.to_json(),
                    "classified": back.to_json(),
                },
            }
        )
    return {
        "label": label.to_json(),
        "configuration": config.to_json(),
        "roundtrip": True,
    }


def _cmd_verify_partition(args, doc):
    report = verify_partition(args.n, args.k, args.trials, args.seed)
    payload = report.to_json()
    if report.observed > report.universe:
        raise CommandFailed({**payload, "error": "PARTITION_OVERFLOW"})
    return payload


def _cmd_degeneration(args, doc):
    p = build_j(args.n, args.k)
    covers = p.covering_pairs()
    failures = []
    for i, j in covers:
        upper = StratumLabel(p.elements[i][0], p.elements[i][1])
        lower = StratumLabel(p.elements[j][0], p.elements[j][1])
        if not degeneration_check(upper, lower):
            failures.append({"upper": upper.to_json(), "lower": lower.to_json()})
    payload = {
        "n": args.n,
        "k": args.k,
        "covering_pairs": len(covers),
        "failures": failures,
    }
    if failures:
        raise CommandFailed(payload)
    return payload


# -- plumbing -------------------------------------------------------------


def _add_nk(sub, n_default=None, k_default=None):
    sub.add_argument("--n", type=int, default=n_default, required=n_default is None)
    sub.add_argument("--k", type=int, default=k_default, required=k_default is None)


def _build_parser() -> _Parser:
    parser = _Parser(prog="operadkit", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, payload=False):
        sub = subs.add_parser(name)
        sub.set_defaults(handler=handler)
        if payload:
            sub.add_argument(
                "source",
                nargs="?",
                default="-",
                help="path of a JSON document, or - for stdin",
            )
        return sub

    sub = command("enumerate", _cmd_enumerate)
    _add_nk(sub)
    sub.add_argument("--offset", type=int, default=0)
    sub.add_argument("--limit", type=int, default=None)
    sub.add_argument("--tree", action="store_true")

    command("check-map", _cmd_check_map, payload=True)
    command("factorize", _cmd_factorize, payload=True)

    for name, handler in (("build-q", _cmd_build_q), ("build-j", _cmd_build_j)):
        sub = command(name, handler)
        _add_nk(sub)
        sub.add_argument("--dot", action="store_true")

    for name, handler in (("nerve", _cmd_nerve), ("homology", _cmd_homology)):
        sub = command(name, handler)
        _add_nk(sub)
        sub.add_argument("--category", choices=("Q", "J"), required=True)

    command("braid", _cmd_braid, payload=True)
    command("zigzag", _cmd_zigzag, payload=True)
    command("split", _cmd_split, payload=True)

    sub = command("artin-check", _cmd_artin_check)
    sub.add_argument("--k", type=int, required=True)

    sub = command("operad-check", _cmd_operad_check, payload=True)
    sub.add_argument("--bound", type=int, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument(
        "--flavor", choices=("symmetric", "braided", "n", "mixed2"), default=None
    )

    sub = command("desymmetrise", _cmd_desymmetrise, payload=True)
    sub.add_argument("--n", type=int, default=2)
    sub.add_argument("--bound", type=int, default=None)

    command("classify", _cmd_classify, payload=True)
    command("sample", _cmd_sample, payload=True)

    sub = command("verify-partition", _cmd_verify_partition)
    _add_nk(sub)
    sub.add_argument("--trials", type=int, default=1000)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sub = command("degeneration", _cmd_degeneration)
    _add_nk(sub)

    return parser


def _read_doc(args):
    path = getattr(args, "source", None)
    if path is None:
        return None
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as e:
        raise UsageError({"error": "NO_SUCH_FILE", "path": path, "message": str(e)})
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError({"error": "BAD_JSON", "message": str(e)})


def _digest(argv, doc) -> str:
    blob = json.dumps(
        {"argv": list(argv), "input": doc},
        sort_keys=True,
        separators=(",", ":"),
        default=str,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    command = argv[0] if argv else ""
    doc = None
    outcome, exit_code, payload = "PASS", 0, {}
    text = None
    try:
        try:
            args = _build_parser().parse_args(argv)
        except _ArgError as e:
            raise UsageError({"error": "USAGE", "message": str(e)})
        doc = _read_doc(args)
        result = args.handler(args, doc)
        if isinstance(result, _Text):
            text = result.text
        else:
            payload = result
    except CommandFailed as e:
        outcome, exit_code, payload = "FAIL", 1, e.payload
    except UsageError as e:
        outcome, exit_code, payload = "ERROR", 2, e.payload
    except WorkbenchError as e:
        outcome, exit_code = "ERROR", 2
        payload = {"error": e.code, "diagnostic": e.to_json()}

    if text is not None:
        sys.stdout.write(text)
    else:
        report = {
            "command": command,
            "inputs": _digest(argv, doc),
            "outcome": outcome,
            "payload": payload,
        }
        sys.stdout.write(
            json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
        )
    wall_ms = (time.perf_counter() - started) * 1000.0
    print(f"wall_ms={wall_ms:.1f}", file=sys.stderr)
    return exit_code
