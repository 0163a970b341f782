"""Canonical JSON codecs, content-hashed artifact wrappers, DOT export.

Every value the library computes has a document form here, and every
document decodes back to an equal value. Canonical text (sorted keys, no
whitespace) makes artifact bytes a function of the value alone, so a
sha256 of the canonical text is a usable provenance stamp.
"""

import hashlib
import json

from .builder import BuildReport, Requirement
from .category import CommaObject, ProfiniteBase
from .core import FiniteGraph, new_graph
from .errors import PreconditionError
from .kr import LiftResult, Rung, SquareTower, TowerAudit
from .limits import Clopen, EdgeWitness, EmbeddingReport
from .maps import GraphMap


def canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def content_hash(doc) -> str:
    return hashlib.sha256(canonical(doc).encode("ascii")).hexdigest()


# ---------------------------------------------------------------- values

def encode_graph(g: FiniteGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def decode_graph(doc: dict) -> FiniteGraph:
    return new_graph(doc["n"], [tuple(e) for e in doc["edges"]])


def encode_map(f: GraphMap) -> dict:
    return {"dom": encode_graph(f.dom), "cod": encode_graph(f.cod),
            "assign": list(f.assign)}


def decode_map(doc: dict) -> GraphMap:
    return GraphMap(decode_graph(doc["dom"]), decode_graph(doc["cod"]),
                    tuple(doc["assign"]))


def encode_base(b: ProfiniteBase) -> dict:
    return {"levels": [encode_graph(g) for g in b.levels],
            "bonds": [encode_map(f) for f in b.bonds]}


def decode_base(doc: dict) -> ProfiniteBase:
    return ProfiniteBase(tuple(decode_graph(d) for d in doc["levels"]),
                         tuple(decode_map(d) for d in doc["bonds"]))


def encode_comma(c: CommaObject) -> dict:
    # the base travels separately; a comma document is position plus coloring
    return {"level": c.level, "psi": encode_map(c.psi)}


def decode_comma(doc: dict, base: ProfiniteBase) -> CommaObject:
    return CommaObject(base, doc["level"], decode_map(doc["psi"]))


def encode_clopen(c: Clopen) -> dict:
    return {"level": c.level, "members": sorted(c.members)}


def decode_clopen(doc: dict) -> Clopen:
    return Clopen(doc["level"], frozenset(doc["members"]))


def encode_edge_witness(w: EdgeWitness) -> dict:
    return {"level": w.level, "pair": list(w.pair)}


def decode_edge_witness(doc: dict) -> EdgeWitness:
    return EdgeWitness(doc["level"], tuple(doc["pair"]))


# ---------------------------------------------------------------- builds

def _opt(enc, v):
    return None if v is None else enc(v)


def encode_requirement(r: Requirement) -> dict:
    return {
        "kind": r.kind,
        "order": r.order,
        "target": _opt(encode_graph, r.target),
        "target_psi": _opt(encode_map, r.target_psi),
        "level": r.level,
        "arrow": _opt(encode_map, r.arrow),
        "arrow_psi": _opt(encode_map, r.arrow_psi),
        "status": r.status,
        "witness_level": r.witness_level,
        "witness": _opt(encode_map, r.witness),
        "first_attempt": r.first_attempt,
    }


def decode_requirement(doc: dict) -> Requirement:
    return Requirement(
        kind=doc["kind"],
        order=doc["order"],
        target=_opt(decode_graph, doc["target"]),
        target_psi=_opt(decode_map, doc["target_psi"]),
        level=doc["level"],
        arrow=_opt(decode_map, doc["arrow"]),
        arrow_psi=_opt(decode_map, doc["arrow_psi"]),
        status=doc["status"],
        witness_level=doc["witness_level"],
        witness=_opt(decode_map, doc["witness"]),
        first_attempt=doc["first_attempt"],
    )


def encode_build_report(rep: BuildReport) -> dict:
    return {
        "sequence": encode_base(rep.sequence),
        "ledger": [encode_requirement(r) for r in rep.ledger],
        "size_cap": rep.size_cap,
        "depth": rep.depth,
        "a_slack": rep.a_slack,
        "a_cap": rep.a_cap,
        "base": _opt(encode_base, rep.base),
        "psis": None if rep.psis is None else [encode_map(p) for p in rep.psis],
    }


def decode_build_report(doc: dict) -> BuildReport:
    return BuildReport(
        sequence=decode_base(doc["sequence"]),
        ledger=tuple(decode_requirement(d) for d in doc["ledger"]),
        size_cap=doc["size_cap"],
        depth=doc["depth"],
        a_slack=doc["a_slack"],
        a_cap=doc["a_cap"],
        base=_opt(decode_base, doc["base"]),
        psis=(None if doc["psis"] is None
              else tuple(decode_map(d) for d in doc["psis"])),
    )


def encode_embedding_report(rep: EmbeddingReport) -> dict:
    return {
        "injectivity_onset": rep.injectivity_onset,
        "nowhere_density": [list(row) for row in rep.nowhere_density],
        "separation_onsets": [list(row) for row in rep.separation_onsets],
        "isolated_image": list(rep.isolated_image),
        "retractions": [_opt(encode_map, r) for r in rep.retractions],
        "branching": [list(row) for row in rep.branching],
    }


def decode_embedding_report(doc: dict) -> EmbeddingReport:
    return EmbeddingReport(
        injectivity_onset=doc["injectivity_onset"],
        nowhere_density=tuple(tuple(row) for row in doc["nowhere_density"]),
        separation_onsets=tuple(tuple(row) for row in doc["separation_onsets"]),
        isolated_image=tuple(doc["isolated_image"]),
        retractions=tuple(_opt(decode_map, d) for d in doc["retractions"]),
        branching=tuple(tuple(row) for row in doc["branching"]),
    )


# ---------------------------------------------------------------- towers

def encode_lift_result(res: LiftResult) -> dict:
    return {"level": res.level, "map": encode_map(res.map),
            "cases": list(res.cases)}


def decode_lift_result(doc: dict) -> LiftResult:
    return LiftResult(doc["level"], decode_map(doc["map"]),
                      tuple(doc["cases"]))


def encode_rung(r: Rung) -> dict:
    return {"index": r.index, "src_side": r.src_side,
            "src_level": r.src_level, "dst_level": r.dst_level,
            "map": encode_map(r.map)}


def decode_rung(doc: dict) -> Rung:
    return Rung(doc["index"], doc["src_side"], doc["src_level"],
                doc["dst_level"], decode_map(doc["map"]))


def encode_tower(t: SquareTower) -> dict:
    return {
        "left": encode_build_report(t.left),
        "right": encode_build_report(t.right),
        "boundary": encode_map(t.boundary),
        "rungs": [encode_rung(r) for r in t.rungs],
        "first_unmet": t.first_unmet,
    }


def decode_tower(doc: dict) -> SquareTower:
    return SquareTower(
        left=decode_build_report(doc["left"]),
        right=decode_build_report(doc["right"]),
        boundary=decode_map(doc["boundary"]),
        rungs=tuple(decode_rung(d) for d in doc["rungs"]),
        first_unmet=doc["first_unmet"],
    )


def encode_tower_audit(a: TowerAudit) -> dict:
    return {"passed": a.passed, "failures": list(a.failures),
            "warnings": list(a.warnings)}


def decode_tower_audit(doc: dict) -> TowerAudit:
    return TowerAudit(doc["passed"], tuple(doc["failures"]),
                      tuple(doc["warnings"]))


# -------------------------------------------------------------- artifacts

def wrap(kind: str, payload, config: dict) -> dict:
    """Stamp a payload document with its generating config and hash.

    The hash covers kind, config, and payload in canonical form, so two
    artifacts with equal hashes carry equal content.
    """
    body = {"artifact": kind, "config": config, "payload": payload}
    return {"artifact": kind, "config": config, "payload": payload,
            "hash": content_hash(body)}


def unwrap(doc: dict):
    """(kind, payload, config) from a wrapper, verifying the hash."""
    try:
        body = {"artifact": doc["artifact"], "config": doc["config"],
                "payload": doc["payload"]}
        stamp = doc["hash"]
    except (KeyError, TypeError):
        raise PreconditionError("not an artifact document")
    if content_hash(body) != stamp:
        raise PreconditionError("artifact hash mismatch")
    return doc["artifact"], doc["payload"], doc["config"]


# ------------------------------------------------------------------- DOT

def graph_dot(g: FiniteGraph, name: str = "g") -> str:
    """Undirected DOT text. Stored edges never include loops, none appear."""
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        lines.append(f"  {v};")
    for a, b in g.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def separation_dot(g: FiniteGraph, w_a, w_b, name: str = "g") -> str:
    """DOT of a witness level with the two separated parts colored."""
    w_a, w_b = set(w_a), set(w_b)
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for v in range(g.n):
        if v in w_a:
            lines.append(f'  {v} [fillcolor="lightblue"];')
        elif v in w_b:
            lines.append(f'  {v} [fillcolor="lightsalmon"];')
        else:
            lines.append(f'  {v} [fillcolor="white"];')
    for a, b in g.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
