"""Lifting quotients along the limit and finite back-and-forth towers.

lift answers the extension problem: given f: Y -> X, a level map g onto
X, and a prescribed behavior b on an embedded base, produce h into Y at
some deeper level with f∘h = g∘u and h agreeing with b on the base. The
single-merge case carries the whole construction; general quotients are
peeled into single merges first.

extend_isomorphism turns two such prefixes and a base isomorphism into an
alternating tower of quotients between their levels; the tower is the
finite witness for an automorphism of the limit extending the base map.
"""

from dataclasses import dataclass

import numpy as np

from .builder import BuildReport
from .category import CommaObject
from .config import TOWER_NODE_BUDGET
from .errors import DepthExhausted, PreconditionError
from .limits import Clopen, embedding_report, find_edge_in_clopen, refine, separate
from .maps import (GraphMap, classify, compose, elementary_decompose,
                   inverse_of_isomorphism, is_quotient, search_quotients)


def _single_merge_point(f: GraphMap):
    """The doubled codomain vertex of a single-merge quotient, or None."""
    if f.dom.n != f.cod.n + 1:
        return None
    doubled = None
    for x in range(f.cod.n):
        k = len(f.fiber(x))
        if k == 2:
            if doubled is not None:
                return None
            doubled = x
        elif k != 1:
            return None
    return doubled


@dataclass(frozen=True)
class LiftInstance:
    """One extension problem over a comma-built prefix.

    f: Y -> X is the quotient to lift through; g lives on level g_level
    of eta's sequence and lands on X; b prescribes the lift on the
    embedded base (presented at base level 0, like the prefix itself).
    """

    f: GraphMap
    g_level: int
    g: GraphMap
    b: CommaObject
    eta: BuildReport

    def __post_init__(self):
        if not self.eta.comma_mode:
            raise PreconditionError("lifting needs a comma-mode prefix")
        if not is_quotient(self.f) or not is_quotient(self.g):
            raise PreconditionError("f and g must be quotient maps")
        if self.g.dom != self.eta.sequence.levels[self.g_level]:
            raise PreconditionError("g is not defined on the stated level")
        if self.g.cod != self.f.cod:
            raise PreconditionError("g must land on f's codomain")
        if self.b.base != self.eta.base:
            raise PreconditionError("b lives over a different base")
        if self.b.level != 0:
            raise PreconditionError("prescriptions are presented at base level 0")
        if self.b.psi.cod != self.f.dom:
            raise PreconditionError("b must land in f's domain")
        lhs = compose(self.g, self.eta.psis[self.g_level])
        rhs = compose(self.f, self.b.psi)
        if lhs.assign != rhs.assign:
            raise PreconditionError("g disagrees with f∘b on the embedded base")


@dataclass(frozen=True)
class LiftResult:
    level: int
    map: GraphMap
    cases: tuple  # proof-case id per elementary stage, in application order

    def __iter__(self):
        yield self.level
        yield self.map


def _psi_pins(cand, psi, values) -> bool:
    """Pin cand rows at embedded carriers; False when a pin is infeasible."""
    for k in range(len(values)):
        w = psi.assign[k]
        if not cand[w, values[k]]:
            return False
        cand[w, :] = False
        cand[w, values[k]] = True
    return True


def _lift_single(f, n, g, b_psi, report, depth):
    seq = report.sequence
    psis = report.psis
    hi = seq.depth if depth is None else min(depth, seq.depth)
    x0 = _single_merge_point(f)
    y0, y1 = sorted(f.fiber(x0))
    fstar = [-1] * f.cod.n
    for y in range(f.dom.n):
        if f.assign[y] != x0:
            fstar[f.assign[y]] = y
    case = 2 if (y0, y1) in f.dom.edge_set else 1
    k0n = report.base.levels[0].n
    v0 = [k for k in range(k0n) if b_psi.assign[k] == y0]
    v1 = [k for k in range(k0n) if b_psi.assign[k] == y1]

    # present the two carrier families at a level where they are provably
    # apart; the comma build separates embedded classes eventually
    ell = None
    for m in range(n, hi):
        pa = {psis[m].assign[k] for k in v0}
        pb = {psis[m].assign[k] for k in v1}
        if pa & pb:
            continue
        adj = seq.levels[m].adjacency
        if any(adj[a, b] for a in pa for b in pb):
            continue
        ell = m
        break
    if ell is None:
        raise DepthExhausted("prefix too shallow", depth=hi)
    f0 = Clopen(ell, frozenset(psis[ell].assign[k] for k in v0))
    f1 = Clopen(ell, frozenset(psis[ell].assign[k] for k in v1))
    w_a, w_b = separate(seq, f0, f1, depth)
    ms = max(w_a.level, n)
    w_clopen = Clopen(n, frozenset(g.fiber(x0)))

    if case == 2:
        # a sub-cylinder of the merged fiber that escapes the embedding,
        # then a genuine edge inside it to witness (y0, y1)
        w2 = None
        for m2 in range(ms, hi):
            members = sorted(refine(seq, w_clopen, m2).members)
            image = set(psis[m2].assign)
            v = next((w for w in members if w not in image), None)
            if v is not None:
                w2 = Clopen(m2, frozenset({v}))
                break
        if w2 is None:
            raise DepthExhausted("prefix too shallow", depth=hi)
        witness = find_edge_in_clopen(seq, w2, depth)
        ms = max(ms, witness.level)
        a_cyl = Clopen(witness.level, frozenset({witness.pair[0]}))

    for mm in range(ms, hi):
        level = seq.levels[mm]
        u = seq.bond_composite(n, mm)
        wm = refine(seq, w_clopen, mm).members
        wa_m = refine(seq, w_a, mm).members
        assign = []
        if case == 1:
            for w in range(level.n):
                if w in wm:
                    assign.append(y0 if w in wa_m else y1)
                else:
                    assign.append(fstar[g.assign[u.assign[w]]])
        else:
            w2m = refine(seq, w2, mm).members
            uam = refine(seq, a_cyl, mm).members
            for w in range(level.n):
                if w in w2m:
                    assign.append(y0 if w in uam else y1)
                elif w in wm:
                    assign.append(y0 if w in wa_m else y1)
                else:
                    assign.append(fstar[g.assign[u.assign[w]]])
        h = GraphMap(level, f.dom, tuple(assign))
        pins_ok = all(h.assign[psis[mm].assign[k]] == b_psi.assign[k]
                      for k in range(k0n))
        if pins_ok and is_quotient(h):
            return mm, h, case
        # the formula can miss strictness against the outside region;
        # fall back to a pinned search for the same equations
        cand = f.assign_array[None, :] == compose(g, u).assign_array[:, None]
        cand = np.ascontiguousarray(cand)
        if not _psi_pins(cand, psis[mm], b_psi.assign):
            continue
        found = search_quotients(level, f.dom, cand, limit=1)
        if found:
            return mm, found[0], case
    raise DepthExhausted("prefix too shallow", depth=hi)


def lift(inst: LiftInstance, depth=None) -> LiftResult:
    """Quotient h at a deep enough level with f∘h = g∘u and h∘η = b.

    Isomorphic f inverts directly; a single merge runs the two-case
    construction (the case id is recorded); anything else is peeled into
    single merges, lifting codomain-side first and threading the base
    prescription through the partial composites.
    """
    f, n, g = inst.f, inst.g_level, inst.g
    report = inst.eta
    cls = classify(f)
    if cls.isomorphism:
        h = compose(inverse_of_isomorphism(f), g)
        _check_lift(inst, n, h)
        return LiftResult(n, h, ())
    if _single_merge_point(f) is not None:
        m, h, case = _lift_single(f, n, g, inst.b.psi, report, depth)
        _check_lift(inst, m, h)
        return LiftResult(m, h, (case,))

    steps = elementary_decompose(f)
    # b landed in Y = dom of the first step; push it forward so stage i
    # has its own prescription into that stage's domain
    b_psis = [inst.b.psi]
    for s in steps[:-1]:
        b_psis.append(compose(s, b_psis[-1]))
    cases = []
    cur_level, cur_map = n, g
    for i in range(len(steps) - 1, -1, -1):
        m, h, case = _lift_single(steps[i], cur_level, cur_map, b_psis[i],
                                  report, depth)
        cases.append(case)
        cur_level, cur_map = m, h
    _check_lift(inst, cur_level, cur_map)
    return LiftResult(cur_level, cur_map, tuple(cases))


def _check_lift(inst: LiftInstance, m: int, h: GraphMap) -> None:
    seq = inst.eta.sequence
    u = seq.bond_composite(inst.g_level, m)
    assert compose(inst.f, h).assign == compose(inst.g, u).assign
    assert compose(h, inst.eta.psis[m]).assign == inst.b.psi.assign
    assert is_quotient(h)


@dataclass(frozen=True)
class Rung:
    index: int        # 1-based position in the tower
    src_side: str     # "right": map from the right prefix into the left
    src_level: int
    dst_level: int
    map: GraphMap


@dataclass(frozen=True)
class SquareTower:
    """Alternating quotients between two prefixes extending a base map.

    Odd rungs map a right-prefix level onto the last left-prefix level,
    even rungs the reverse; consecutive rungs compose to bond composites
    and every rung restricts to the boundary isomorphism on the embedded
    base classes. first_unmet records why construction stopped, if it
    stopped before exhausting the depth.
    """

    left: BuildReport
    right: BuildReport
    boundary: GraphMap
    rungs: tuple
    first_unmet: object = None

    @property
    def height(self) -> int:
        return len(self.rungs)


def _identity_bonds(base) -> bool:
    return all(b.assign == tuple(range(b.dom.n)) for b in base.bonds)


def extend_isomorphism(etaK: BuildReport, etaL: BuildReport, h: GraphMap,
                       depth=None) -> SquareTower:
    """Best-effort back-and-forth tower between two comma prefixes.

    h is an isomorphism between the two base level-0 graphs; constant
    bases only, where a single map is the whole compatible family. Both
    prefixes must embed their bases as isolated, nowhere dense images.
    Rungs are found greedily: each scans source levels upward from the
    last same-side level, taking the least level and least map that
    satisfies the pins and the composition equation. Runs out of depth
    or budget -> tower returned as built, with first_unmet set.
    """
    for rep in (etaK, etaL):
        if not rep.comma_mode:
            raise PreconditionError("both prefixes must be comma-mode builds")
        if not _identity_bonds(rep.base):
            raise PreconditionError("only constant bases are supported")
    if not classify(h).isomorphism:
        raise PreconditionError("the boundary map must be an isomorphism")
    if h.dom != etaK.base.levels[0] or h.cod != etaL.base.levels[0]:
        raise PreconditionError("boundary endpoints must be the two base graphs")
    for rep in (etaK, etaL):
        audit = embedding_report(rep)
        if not all(audit.isolated_image):
            raise PreconditionError("embedded image must consist of isolated vertices")
        if not audit.nowhere_density_complete:
            raise PreconditionError("embedded image must be witnessed nowhere dense")

    hinv = inverse_of_isomorphism(h)
    seqs = {"left": etaK.sequence, "right": etaL.sequence}
    psis = {"left": etaK.psis, "right": etaL.psis}
    hi = {side: (seqs[side].depth if depth is None else min(depth, seqs[side].depth))
          for side in ("left", "right")}
    k0n = h.dom.n

    rungs = []
    first_unmet = None
    last_src = {"left": 0, "right": -1}
    tgt_side, tgt_level = "left", 0
    prev_map = None
    prev_tgt_level = None
    r = 1
    while True:
        src_side = "right" if tgt_side == "left" else "left"
        tgt_graph = seqs[tgt_side].levels[tgt_level]
        # boundary behavior on embedded classes, by direction
        bmap = hinv if src_side == "right" else h
        found = None
        for j in range(last_src[src_side] + 1, hi[src_side]):
            level = seqs[src_side].levels[j]
            if level.n < tgt_graph.n:
                continue
            if prev_map is None:
                cand = np.ones((level.n, tgt_graph.n), dtype=np.bool_)
            else:
                u = seqs[src_side].bond_composite(prev_tgt_level, j)
                cand = prev_map.assign_array[None, :] == u.assign_array[:, None]
                cand = np.ascontiguousarray(cand)
            pin_values = tuple(psis[tgt_side][tgt_level].assign[bmap.assign[k]]
                               for k in range(k0n))
            if not _psi_pins(cand, psis[src_side][j], pin_values):
                continue
            if not cand.any(axis=0).all():
                continue  # some target vertex unreachable, no point searching
            t = search_quotients(level, tgt_graph, cand, limit=1,
                                 max_nodes=TOWER_NODE_BUDGET)
            if t:
                found = (j, t[0])
                break
        if found is None:
            first_unmet = (f"rung {r}: no quotient from the {src_side} prefix "
                           f"onto level {tgt_level} within depth and budget")
            break
        j, t = found
        rungs.append(Rung(r, src_side, j, tgt_level, t))
        prev_map = t
        prev_tgt_level = tgt_level
        last_src[src_side] = j
        tgt_side, tgt_level = src_side, j
        r += 1
    return SquareTower(left=etaK, right=etaL, boundary=h,
                       rungs=tuple(rungs), first_unmet=first_unmet)


@dataclass(frozen=True)
class TowerAudit:
    passed: bool
    failures: tuple
    warnings: tuple


def verify_tower(t: SquareTower) -> TowerAudit:
    """Re-check every rung of a tower from scratch.

    Audits quotient classification, the alternating composition equations
    against bond composites, and boundary extension on embedded classes.
    Never raises; all failures are collected in order.
    """
    failures = []
    warnings = []
    if not t.rungs:
        warnings.append("empty tower: vacuous pass")
    seqs = {"left": t.left.sequence, "right": t.right.sequence}
    psis = {"left": t.left.psis, "right": t.right.psis}
    hinv = inverse_of_isomorphism(t.boundary)
    k0n = t.boundary.dom.n
    prev = None  # last structurally intact rung, None after a broken one
    for rung in t.rungs:
        if rung.src_side not in seqs:
            failures.append(f"rung {rung.index}: unknown side {rung.src_side!r}")
            prev = None
            continue
        tgt_side = "left" if rung.src_side == "right" else "right"
        if not (0 <= rung.src_level < seqs[rung.src_side].depth
                and 0 <= rung.dst_level < seqs[tgt_side].depth):
            failures.append(f"rung {rung.index}: level out of range")
            prev = None
            continue
        if (rung.map.dom != seqs[rung.src_side].levels[rung.src_level]
                or rung.map.cod != seqs[tgt_side].levels[rung.dst_level]):
            failures.append(f"rung {rung.index}: endpoints do not match the "
                            f"recorded levels")
            prev = None
            continue
        if not is_quotient(rung.map):
            failures.append(f"rung {rung.index}: not a quotient map")
        bmap = hinv if rung.src_side == "right" else t.boundary
        src_psi = psis[rung.src_side][rung.src_level]
        dst_psi = psis[tgt_side][rung.dst_level]
        for k in range(k0n):
            if rung.map.assign[src_psi.assign[k]] != dst_psi.assign[bmap.assign[k]]:
                failures.append(f"rung {rung.index}: boundary broken at class {k}")
                break
        if prev is not None:
            if rung.src_side == prev.src_side:
                failures.append(f"rung {rung.index}: sides do not alternate")
            elif rung.dst_level != prev.src_level:
                failures.append(f"rung {rung.index}: does not target the source "
                                f"level of rung {prev.index}")
            elif prev.dst_level > rung.src_level:
                failures.append(f"rung {rung.index}: descends below rung "
                                f"{prev.index} on the {rung.src_side} side")
            else:
                u = seqs[rung.src_side].bond_composite(prev.dst_level,
                                                       rung.src_level)
                if compose(prev.map, rung.map).assign != u.assign:
                    failures.append(f"rung {rung.index}: composition with rung "
                                    f"{prev.index} is not the bond composite")
        prev = rung
    return TowerAudit(passed=not failures, failures=tuple(failures),
                      warnings=tuple(warnings))
