"""Finite-level semantics of the inverse limit.

Points of the limit are threads through the levels; we only ever touch
them through cylinders: a set of vertices at a level denotes its bond
preimage everywhere deeper. The edge relation of the limit holds iff it
holds at every level, so finite runs can refute an edge but only ever
bound an affirmation ("not refuted up to depth").

The two lemma gadgets (separate, find_edge_in_clopen) reduce to a tiny
quotient target plus one factoring search, which star_solve performs by
scanning levels for a least witness.
"""

from dataclasses import dataclass

import numpy as np

from .category import ProfiniteBase
from .core import FiniteGraph, new_graph
from .builder import BuildReport
from .errors import DepthExhausted, PreconditionError
from .maps import GraphMap, compose, is_quotient, search_quotients


@dataclass(frozen=True)
class Clopen:
    """A vertex set at a level, denoting its bond preimage in the limit."""

    level: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))


@dataclass(frozen=True)
class EdgeWitness:
    """An adjacent pair at a level; certifies adjacency at all levels below."""

    level: int
    pair: tuple


def _check_clopen(seq: ProfiniteBase, c: Clopen) -> None:
    if not (0 <= c.level < seq.depth):
        raise PreconditionError(f"clopen level {c.level} out of range")
    n = seq.levels[c.level].n
    if any(not (0 <= v < n) for v in c.members):
        raise PreconditionError("clopen members out of vertex range")


def _clip(seq: ProfiniteBase, depth) -> int:
    return seq.depth if depth is None else min(depth, seq.depth)


def refine(seq: ProfiniteBase, c: Clopen, m: int) -> Clopen:
    """The same subset of the limit presented at level m >= c.level."""
    _check_clopen(seq, c)
    if not (c.level <= m < seq.depth):
        raise PreconditionError(f"refinement level {m} out of range")
    if m == c.level:
        return c
    u = seq.bond_composite(c.level, m)
    members = frozenset(w for w in range(seq.levels[m].n) if u.assign[w] in c.members)
    return Clopen(m, members)


def edge_possible(seq: ProfiniteBase, x: Clopen, y: Clopen, depth=None) -> bool:
    """One-sided adjacency test between two vertex cylinders.

    True means no level up to depth refutes an edge between them; the
    limit edge itself is never affirmed by a finite run.
    """
    _check_clopen(seq, x)
    _check_clopen(seq, y)
    if len(x.members) != 1 or len(y.members) != 1:
        raise PreconditionError("edge_possible takes single-vertex cylinders")
    hi = _clip(seq, depth)
    for m in range(max(x.level, y.level), hi):
        a = sorted(refine(seq, x, m).members)
        b = sorted(refine(seq, y, m).members)
        if not seq.levels[m].adjacency[np.ix_(a, b)].any():
            return False
    return True


def star_solve(seq: ProfiniteBase, h_level, f: GraphMap, depth=None):
    """Least (m, g) with f∘g equal to h pushed down from level n.

    h_level is (n, h) where h maps levels[n] onto f's codomain; both h
    and f must be quotients. Raises DepthExhausted when no level up to
    depth factors h - the limit guarantees a witness, the prefix may be
    too shallow to show it.
    """
    n, h = h_level
    if h.dom != seq.levels[n]:
        raise PreconditionError("h must be defined on the stated level")
    if h.cod != f.cod:
        raise PreconditionError("h and f need a common codomain")
    if not is_quotient(h) or not is_quotient(f):
        raise PreconditionError("star_solve factors quotients through quotients")
    hi = _clip(seq, depth)
    for m in range(n, hi):
        hu = compose(h, seq.bond_composite(n, m))
        cand = np.ascontiguousarray(f.assign_array[None, :] == hu.assign_array[:, None])
        found = search_quotients(seq.levels[m], f.dom, cand, limit=1)
        if found:
            g = found[0]
            assert compose(f, g).assign == hu.assign
            return m, g
    raise DepthExhausted("prefix too shallow", depth=hi)


def find_edge_in_clopen(seq: ProfiniteBase, w: Clopen, depth=None) -> EdgeWitness:
    """An adjacent pair inside the clopen, witnessed at some level.

    Encodes the clopen as a two-vertex quotient target S (edge present
    iff the clopen has a boundary edge), then asks for a factoring onto
    T which doubles the clopen class into an adjacent pair. Strictness
    of the factoring map is what forces the witness edge to exist.
    """
    _check_clopen(seq, w)
    g0 = seq.levels[w.level]
    members = w.members
    if not members:
        raise PreconditionError("cannot find an edge in the empty clopen")
    if len(members) == g0.n:
        raise PreconditionError("clopen complement must be nonempty")
    boundary = any((a in members) != (b in members) for a, b in g0.edges)
    s = new_graph(2, [(0, 1)] if boundary else [])
    h = GraphMap(g0, s, tuple(0 if v in members else 1 for v in range(g0.n)))
    t = new_graph(4, ([(0, 1)] if boundary else []) + [(2, 3)])
    f = GraphMap(t, s, (0, 1, 0, 0))
    m, g = star_solve(seq, (w.level, h), f, depth)
    for a, b in seq.levels[m].edges:
        if {g.assign[a], g.assign[b]} == {2, 3}:
            refined = refine(seq, w, m).members
            assert a in refined and b in refined
            return EdgeWitness(m, (a, b))
    raise AssertionError("strict factoring produced no witness edge")


def separate(seq: ProfiniteBase, a: Clopen, b: Clopen, depth=None):
    """Split the whole space into clopen halves around two non-adjacent sets.

    Returns (w_a, w_b) at a common witness level: a partition with a's
    refinement inside w_a, b's inside w_b, and zero cross edges. The
    precondition is decidable at the presentation level: refined member
    sets disjoint with no edge between them; instances separated only in
    the limit are out of scope and rejected.
    """
    _check_clopen(seq, a)
    _check_clopen(seq, b)
    lvl = max(a.level, b.level)
    av = refine(seq, a, lvl).members
    bv = refine(seq, b, lvl).members
    g0 = seq.levels[lvl]
    overlap = av & bv
    if overlap:
        v = min(overlap)
        raise PreconditionError(f"sets share the vertex {v} at level {lvl}")
    for x, y in g0.edges:
        if (x in av and y in bv) or (y in av and x in bv):
            raise PreconditionError(f"adjacent pair ({x},{y}) at level {lvl}")
    full = frozenset(range(g0.n))
    if not av:
        return Clopen(lvl, frozenset()), Clopen(lvl, full)
    if not bv:
        return Clopen(lvl, full), Clopen(lvl, frozenset())
    rest = full - av - bv
    if not rest:
        return Clopen(lvl, av), Clopen(lvl, bv)

    flag_a = any((x in av and y in rest) or (y in av and x in rest) for x, y in g0.edges)
    flag_b = any((x in bv and y in rest) or (y in bv and x in rest) for x, y in g0.edges)
    s = new_graph(3, ([(0, 2)] if flag_a else []) + ([(1, 2)] if flag_b else []))
    h_assign = tuple(0 if v in av else 1 if v in bv else 2 for v in range(g0.n))
    h = GraphMap(g0, s, h_assign)
    # the undecided class splits into an a-leaning and a b-leaning half
    t = new_graph(4, ([(0, 2)] if flag_a else []) + ([(1, 3)] if flag_b else []))
    f = GraphMap(t, s, (0, 1, 2, 2))
    m, g = star_solve(seq, (lvl, h), f, depth)

    w_a = frozenset(w for w in range(seq.levels[m].n) if g.assign[w] in (0, 2))
    w_b = frozenset(w for w in range(seq.levels[m].n) if g.assign[w] in (1, 3))
    assert w_a | w_b == frozenset(range(seq.levels[m].n)) and not (w_a & w_b)
    for x, y in seq.levels[m].edges:
        assert (x in w_a) == (y in w_a), "cross edge survived separation"
    assert refine(seq, Clopen(lvl, av), m).members <= w_a
    assert refine(seq, Clopen(lvl, bv), m).members <= w_b
    return Clopen(m, w_a), Clopen(m, w_b)


@dataclass(frozen=True)
class EmbeddingReport:
    """Audit of a comma prefix as an embedding of its base.

    nowhere_density rows are (level, vertex, witness_level, witness) with
    witness a preimage vertex escaping the embedded image, or Nones when
    unwitnessed within the prefix. branching rows are (level, vertex,
    first level with >= 2 preimages, or None). separation_onsets rows are
    (class, class, first level where their images are non-adjacent, or
    None). retractions holds one map per level (or None), each verified
    to invert the embedding on base classes.
    """

    injectivity_onset: object
    nowhere_density: tuple
    separation_onsets: tuple
    isolated_image: tuple
    retractions: tuple
    branching: tuple

    @property
    def nowhere_density_complete(self) -> bool:
        return all(row[2] is not None for row in self.nowhere_density)

    @property
    def branching_complete(self) -> bool:
        return all(row[2] is not None for row in self.branching)

    @property
    def separated(self) -> bool:
        return all(row[2] is not None for row in self.separation_onsets)

    @property
    def retractions_complete(self) -> bool:
        return all(r is not None for r in self.retractions)


def embedding_report(report: BuildReport, depth=None) -> EmbeddingReport:
    """Audit the embedded base inside a comma-built prefix.

    depth bounds the per-vertex audits (nowhere-density and branching
    cover levels strictly below it, default 4); injectivity, separation,
    image isolation and retractions always cover the whole prefix.
    Nothing raises: missing witnesses are reported as such.
    """
    if not report.comma_mode:
        raise PreconditionError("embedding_report takes a comma-mode build")
    seq = report.sequence
    psis = report.psis
    k0 = report.base.levels[0]
    audit_hi = min(4, seq.depth) if depth is None else min(depth, seq.depth)

    injectivity_onset = None
    for n in range(seq.depth):
        if len(set(psis[n].assign)) == k0.n:
            injectivity_onset = n
            break

    nowhere = []
    branching = []
    for n in range(audit_hi):
        for v in range(seq.levels[n].n):
            hit = None
            branch = None
            for m in range(n, seq.depth):
                u = seq.bond_composite(n, m)
                fiber = [w for w in range(seq.levels[m].n) if u.assign[w] == v]
                if branch is None and len(fiber) >= 2:
                    branch = m
                if hit is None:
                    image = set(psis[m].assign)
                    escape = next((w for w in fiber if w not in image), None)
                    if escape is not None:
                        hit = (m, escape)
                if hit is not None and branch is not None:
                    break
            nowhere.append((n, v) + (hit if hit is not None else (None, None)))
            branching.append((n, v, branch))

    onsets = []
    for k1 in range(k0.n):
        for k2 in range(k1 + 1, k0.n):
            onset = None
            for n in range(seq.depth):
                a, b = psis[n].assign[k1], psis[n].assign[k2]
                if a != b and not seq.levels[n].adjacency[a, b]:
                    onset = n
                    break
            onsets.append((k1, k2, onset))

    isolated = []
    for n in range(seq.depth):
        touched = {v for e in seq.levels[n].edges for v in e}
        isolated.append(all(v not in touched for v in psis[n].assign))

    retractions = []
    for n in range(seq.depth):
        cand = np.ones((seq.levels[n].n, k0.n), dtype=np.bool_)
        for k in range(k0.n):
            row = np.zeros(k0.n, dtype=np.bool_)
            row[k] = True
            cand[psis[n].assign[k]] &= row
        found = search_quotients(seq.levels[n], k0, cand, limit=1)
        if found:
            r = found[0]
            assert compose(r, psis[n]).assign == tuple(range(k0.n))
            retractions.append(r)
        else:
            retractions.append(None)

    return EmbeddingReport(
        injectivity_onset=injectivity_onset,
        nowhere_density=tuple(nowhere),
        separation_onsets=tuple(onsets),
        isolated_image=tuple(isolated),
        retractions=tuple(retractions),
        branching=tuple(branching),
    )
