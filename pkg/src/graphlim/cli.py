"""Command line front end.

Every subcommand dispatches to a pure library call and writes one
content-hashed JSON artifact (or DOT text). Identical invocations produce
byte-identical output.

Exit codes: 0 success, 1 precondition violation or failed audit,
2 witness search exhausted the prefix (a partial artifact is still
written), 3 unreadable input or unwritable output.
"""

import argparse
import json
import sys

from . import serialize as ser
from .builder import build_comma_prefix, build_prefix, replay_ledger
from .category import CommaObject, constant_base
from .config import default_depth, default_size_cap
from .core import discrete_graph
from .errors import DepthExhausted, GraphlimError
from .kr import LiftInstance, extend_isomorphism, lift, verify_tower
from .limits import embedding_report, find_edge_in_clopen, separate

_SCHEMAS = """\
JSON schemas (all arrays sorted, all text canonical):
  graph     {"n": int, "edges": [[a, b], ...]}            a < b
  map       {"dom": graph, "cod": graph, "assign": [int, ...]}
  base      {"levels": [graph, ...], "bonds": [map, ...]}
  comma     {"level": int, "psi": map}
  clopen    {"level": int, "members": [int, ...]}
  build     {"sequence": base, "ledger": [...], "size_cap": int,
             "depth": int, "a_slack": int, "a_cap": int,
             "base": base|null, "psis": [map, ...]|null}
  lift      {"level": int, "map": map, "cases": [int, ...]}
  tower     {"left": build, "right": build, "boundary": map,
             "rungs": [{"index", "src_side", "src_level",
                        "dst_level", "map"}, ...], "first_unmet": str|null}
  artifact  {"artifact": kind, "config": {...}, "payload": ...,
             "hash": sha256 of the canonical text of the rest}

Arguments documented as DOC accept inline JSON or @path to a JSON file;
files may hold either the bare document or a wrapping artifact.
Environment: GRAPHLIM_DEPTH and GRAPHLIM_SIZE_CAP set the default caps,
GRAPHLIM_NO_NUMBA=1 selects the pure-python kernels."""


class _InputError(Exception):
    """File unreadable or not JSON; maps to exit 3."""


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _InputError(f"cannot read {path}: {e}")


def _parse_doc(text: str, origin: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise _InputError(f"{origin} is not JSON: {e}")
    if isinstance(doc, dict) and "artifact" in doc:
        _, payload, _ = ser.unwrap(doc)
        return payload
    return doc


def _doc_arg(value: str, origin: str):
    """Inline JSON, or @path to a JSON file; artifacts are unwrapped."""
    if value.startswith("@"):
        path = value[1:]
        return _parse_doc(_read_text(path), path)
    return _parse_doc(value, origin)


def _emit(text: str, out: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise _InputError(f"cannot write {out}: {e}")


def _emit_artifact(kind: str, payload, config: dict, out: str) -> None:
    _emit(ser.canonical(ser.wrap(kind, payload, config)) + "\n", out)


def _load_report(value: str, origin: str):
    return ser.decode_build_report(_doc_arg(value, origin))


# ------------------------------------------------------------- commands

def _cmd_enumerate(args):
    from .core import enumerate_graphs
    graphs = enumerate_graphs(args.n)
    config = {"command": "enumerate", "n": args.n}
    payload = {"count": len(graphs),
               "graphs": [ser.encode_graph(g) for g in graphs]}
    _emit_artifact("enumerate", payload, config, args.out)
    return 0


def _cmd_build(args):
    size_cap = args.size_cap if args.size_cap is not None else default_size_cap()
    depth = args.depth if args.depth is not None else default_depth()
    seed = None
    config = {"command": "build", "size_cap": size_cap, "depth": depth,
              "seed": None}
    if args.seed is not None:
        seed_doc = _doc_arg(args.seed, "--seed")
        seed = ser.decode_graph(seed_doc)
        config["seed"] = ser.encode_graph(seed)
    rep = build_prefix(size_cap=size_cap, depth=depth, seed=seed)
    _emit_artifact("build", ser.encode_build_report(rep), config, args.out)
    return 0


def _cmd_build_comma(args):
    size_cap = args.size_cap if args.size_cap is not None else default_size_cap()
    depth = args.depth if args.depth is not None else default_depth()
    if args.base is not None:
        g = ser.decode_graph(_doc_arg(args.base, "--base"))
    else:
        g = discrete_graph(2)
    config = {"command": "build-comma", "size_cap": size_cap, "depth": depth,
              "base": ser.encode_graph(g)}
    rep = build_comma_prefix(constant_base(g, depth), size_cap=size_cap,
                             depth=depth)
    _emit_artifact("build-comma", ser.encode_build_report(rep), config,
                   args.out)
    return 0


def _cmd_verify(args):
    doc = _doc_arg(args.input, "--in")
    config = {"command": "verify"}
    if "rungs" in doc:
        audit = verify_tower(ser.decode_tower(doc))
        payload = ser.encode_tower_audit(audit)
        _emit_artifact("verify", payload, config, args.out)
        return 0 if audit.passed else 1
    rep = ser.decode_build_report(doc)
    ok = replay_ledger(rep)
    payload = {"replay_ok": ok, "pending": len(rep.pending),
               "levels": [g.n for g in rep.sequence.levels]}
    if rep.comma_mode:
        payload["embedding"] = ser.encode_embedding_report(
            embedding_report(rep))
    _emit_artifact("verify", payload, config, args.out)
    return 0 if ok else 1


def _cmd_separate(args):
    rep = _load_report(args.input, "--in")
    a = ser.decode_clopen(_doc_arg(args.a, "--a"))
    b = ser.decode_clopen(_doc_arg(args.b, "--b"))
    config = {"command": "separate", "a": ser.encode_clopen(a),
              "b": ser.encode_clopen(b), "depth": args.depth}
    w_a, w_b = separate(rep.sequence, a, b, args.depth)
    payload = {"w_a": ser.encode_clopen(w_a), "w_b": ser.encode_clopen(w_b),
               "graph": ser.encode_graph(rep.sequence.levels[w_a.level])}
    _emit_artifact("separate", payload, config, args.out)
    return 0


def _cmd_find_edge(args):
    rep = _load_report(args.input, "--in")
    w = ser.decode_clopen(_doc_arg(args.clopen, "--clopen"))
    config = {"command": "find-edge", "clopen": ser.encode_clopen(w),
              "depth": args.depth}
    witness = find_edge_in_clopen(rep.sequence, w, args.depth)
    _emit_artifact("find-edge", ser.encode_edge_witness(witness), config,
                   args.out)
    return 0


def _cmd_lift(args):
    rep = _load_report(args.input, "--in")
    f = ser.decode_map(_doc_arg(args.f, "--f"))
    g = ser.decode_map(_doc_arg(args.g, "--g"))
    b_psi = ser.decode_map(_doc_arg(args.b, "--b"))
    config = {"command": "lift", "f": ser.encode_map(f),
              "g_level": args.g_level, "g": ser.encode_map(g),
              "b": ser.encode_map(b_psi), "depth": args.depth}
    inst = LiftInstance(f, args.g_level, g,
                        CommaObject(rep.base, 0, b_psi), rep)
    res = lift(inst, args.depth)
    _emit_artifact("lift", ser.encode_lift_result(res), config, args.out)
    return 0


def _cmd_extend(args):
    left = _load_report(args.left, "--left")
    right = _load_report(args.right, "--right")
    h = ser.decode_map(_doc_arg(args.iso, "--iso"))
    config = {"command": "extend", "iso": ser.encode_map(h),
              "depth": args.depth}
    tower = extend_isomorphism(left, right, h, args.depth)
    _emit_artifact("extend", ser.encode_tower(tower), config, args.out)
    return 0


def _cmd_export(args):
    doc = _doc_arg(args.input, "--in")
    if args.format == "json":
        config = {"command": "export", "format": "json"}
        _emit_artifact("export", doc, config, args.out)
        return 0
    # DOT: a bare graph, or a separation payload carrying its level graph
    if isinstance(doc, dict) and {"w_a", "w_b", "graph"} <= set(doc):
        g = ser.decode_graph(doc["graph"])
        text = ser.separation_dot(g, doc["w_a"]["members"],
                                  doc["w_b"]["members"])
    elif isinstance(doc, dict) and {"n", "edges"} <= set(doc):
        text = ser.graph_dot(ser.decode_graph(doc))
    else:
        raise GraphlimError("no DOT form for this document")
    _emit(text, args.out)
    return 0


# --------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="graphlim",
        description="Finite graph sequences with quotient bonds: build, "
                    "probe, lift, extend, export.",
        epilog=_SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("enumerate", help="all graphs on n vertices up to isomorphism")
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=_cmd_enumerate)

    sp = sub.add_parser("build", help="build a verified prefix")
    sp.add_argument("--size-cap", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--seed", default=None, help="DOC: seed graph")
    common(sp)
    sp.set_defaults(fn=_cmd_build)

    sp = sub.add_parser("build-comma", help="build a prefix over an embedded base")
    sp.add_argument("--base", default=None,
                    help="DOC: base graph (default: two isolated vertices)")
    sp.add_argument("--size-cap", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_build_comma)

    sp = sub.add_parser("verify", help="replay a build ledger or audit a tower")
    sp.add_argument("--in", dest="input", required=True, help="DOC: build or tower")
    common(sp)
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("separate", help="split two clopen sets by a partition")
    sp.add_argument("--in", dest="input", required=True, help="DOC: build")
    sp.add_argument("--a", required=True, help="DOC: clopen")
    sp.add_argument("--b", required=True, help="DOC: clopen")
    sp.add_argument("--depth", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_separate)

    sp = sub.add_parser("find-edge", help="an adjacent pair inside a clopen set")
    sp.add_argument("--in", dest="input", required=True, help="DOC: build")
    sp.add_argument("--clopen", required=True, help="DOC: clopen")
    sp.add_argument("--depth", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_find_edge)

    sp = sub.add_parser("lift", help="lift a quotient through a level map")
    sp.add_argument("--in", dest="input", required=True, help="DOC: comma build")
    sp.add_argument("--f", required=True, help="DOC: map to lift through")
    sp.add_argument("--g-level", type=int, required=True)
    sp.add_argument("--g", required=True, help="DOC: level map onto f's codomain")
    sp.add_argument("--b", required=True, help="DOC: prescription on base classes")
    sp.add_argument("--depth", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_lift)

    sp = sub.add_parser("extend", help="back-and-forth tower over a base isomorphism")
    sp.add_argument("--left", required=True, help="DOC: comma build")
    sp.add_argument("--right", required=True, help="DOC: comma build")
    sp.add_argument("--iso", required=True, help="DOC: base isomorphism")
    sp.add_argument("--depth", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_extend)

    sp = sub.add_parser("export", help="re-emit a document as canonical JSON or DOT")
    sp.add_argument("--in", dest="input", required=True, help="DOC")
    sp.add_argument("--format", choices=("json", "dot"), default="json")
    common(sp)
    sp.set_defaults(fn=_cmd_export)

    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DepthExhausted as e:
        payload = {"depth_exhausted": True, "depth": e.depth,
                   "message": str(e)}
        try:
            _emit_artifact(args.command, payload,
                           {"command": args.command}, args.out)
        except _InputError as io_err:
            print(f"error: {io_err}", file=sys.stderr)
            return 3
        print(f"error: search exhausted the prefix at depth {e.depth}",
              file=sys.stderr)
        return 2
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except GraphlimError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
