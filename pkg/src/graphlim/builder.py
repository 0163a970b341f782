"""Sequence prefixes built by fair requirement scheduling.

Two requirement kinds drive the construction. Cofinality ("U"): every
enumerable target graph must receive a quotient from some level.
Absorption ("A"): every quotient f onto a level must factor a bond
composite through its domain. Requirements are processed FIFO; a scan
against existing levels comes first, and only an unmet head requirement
appends a level.

Cofinality repairs search for a minimal amalgam that quotients onto both
the current top level and the target, falling back to a disjoint union
that always works. Absorption repairs append one split_cover level, which
simultaneously absorbs every single-split requirement of every existing
level, so the ledger drains after a single append. The enumeration slack
is 1 by default; the pullback-per-requirement repair is kept for larger
slack and as a safety net.
"""

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from itertools import product as iter_product

import numpy as np

from .config import (A_CAP, A_SLACK, AMALGAM_CAP, SIZE_GUARD, default_depth,
                     default_size_cap)
from .core import FiniteGraph, edge_graph, enumerate_graphs, new_graph
from .category import CommaObject, ProfiniteBase, pullback
from .errors import CapExceeded, GraphlimError, PreconditionError
from .maps import (GraphMap, compose, enumerate_quotients, identity_map,
                   is_quotient, search_quotients)


def split_cover(g: FiniteGraph):
    """The absorption level over g: singletons, sprout pairs, doubled edge copies.

    Layout: ids [0, n) are isolated singleton copies of each vertex;
    ids n+2u, n+2u+1 are a sprout pair over vertex u carrying one edge;
    ids 3n+4e .. 3n+4e+3 are two independent copies of the e-th stored
    edge (a, b), halves mapping to a, b, a, b. Two copies per edge matter:
    a single-merge domain may keep both lifted endpoints of an edge, and
    strictness then needs two independent witnesses over it.

    Returns (cover_graph, cover_map); the cover map is a quotient.
    """
    n, m = g.n, len(g.edges)
    total = 3 * n + 4 * m
    assign = [0] * total
    edges = []
    for v in range(n):
        assign[v] = v
        a = n + 2 * v
        assign[a] = v
        assign[a + 1] = v
        edges.append((a, a + 1))
    for e, (a, b) in enumerate(g.edges):
        base = 3 * n + 4 * e
        assign[base] = a
        assign[base + 1] = b
        assign[base + 2] = a
        assign[base + 3] = b
        edges.append((base, base + 1))
        edges.append((base + 2, base + 3))
    w = new_graph(total, edges)
    cover = GraphMap(w, g, tuple(assign))
    assert is_quotient(cover)
    return w, cover


def disjoint_union(x: FiniteGraph, y: FiniteGraph):
    """x followed by a shifted copy of y, with the two inclusions' images."""
    edges = list(x.edges) + [(a + x.n, b + x.n) for a, b in y.edges]
    return new_graph(x.n + y.n, edges)


@dataclass
class Requirement:
    """One scheduled obligation plus its audit trail."""

    kind: str                       # "U" or "A"
    order: int                      # enqueue position, FIFO audit
    target: FiniteGraph = None      # U: the graph that must be reached
    target_psi: GraphMap = None     # U, comma mode: base coloring of target
    level: int = None               # A: the level the arrow lands on
    arrow: GraphMap = None          # A: f with codomain levels[level]
    arrow_psi: GraphMap = None      # A, comma mode: base coloring of f's domain
    status: str = "pending"
    witness_level: int = None
    witness: GraphMap = None
    first_attempt: int = None       # step counter when first examined

    def describe(self) -> str:
        if self.kind == "U":
            return f"U(target n={self.target.n}, edges={list(self.target.edges)})"
        return f"A(level {self.level}, dom n={self.arrow.dom.n})"


@dataclass
class BuildReport:
    """A built prefix plus the complete requirement ledger."""

    sequence: ProfiniteBase
    ledger: tuple
    size_cap: int
    depth: int
    a_slack: int
    a_cap: int
    base: ProfiniteBase = None
    psis: tuple = None              # comma mode: psi per level, at base level 0

    @property
    def pending(self):
        return tuple(r for r in self.ledger if r.status == "pending")

    @property
    def comma_mode(self) -> bool:
        return self.base is not None

    def comma_object(self, m: int) -> CommaObject:
        if not self.comma_mode:
            raise PreconditionError("not a comma-mode report")
        return CommaObject(self.base, 0, self.psis[m])


def _automorphisms(g: FiniteGraph):
    out = []
    es = g.edge_set
    for p in permutations(range(g.n)):
        ok = True
        for a, b in g.edges:
            x, y = p[a], p[b]
            if (min(x, y), max(x, y)) not in es:
                ok = False
                break
        if ok:
            out.append(p)
    return out


def _comma_targets(base: ProfiniteBase, size_cap: int):
    """(X, psi) pairs up to isomorphism over the base's level-0 graph.

    psi representatives are lex-least in their orbit under Aut(X); the
    base side stays fixed, only the target may be relabeled.
    """
    k0 = base.levels[0]
    out = []
    for m in range(1, size_cap + 1):
        for x in enumerate_graphs(m):
            auts = _automorphisms(x)
            seen = set()
            for psi in iter_product(range(x.n), repeat=k0.n):
                if psi in seen:
                    continue
                seen.update(tuple(a[v] for v in psi) for a in auts)
                out.append((x, GraphMap(k0, x, psi)))
    return out


def _pin_cand(cand: np.ndarray, vertex: int, value: int) -> None:
    keep = cand[vertex, value]
    cand[vertex, :] = False
    cand[vertex, value] = keep


class _BuildState:
    def __init__(self, size_cap, depth, seed, base=None):
        if depth < 1:
            raise PreconditionError(f"depth must be at least 1, got {depth}")
        if size_cap < 1:
            raise PreconditionError(f"size cap must be at least 1, got {size_cap}")
        if seed.n > SIZE_GUARD:
            raise CapExceeded(f"seed exceeds the size guard ({SIZE_GUARD})")
        self.size_cap = size_cap
        self.depth = depth
        self.base = base
        self.levels = [seed]
        self.bonds = []
        self.psis = [identity_map(seed)] if base is not None else None
        self.queue = deque()
        self.ledger = []
        self.order = 0
        self.steps = 0
        self._composites = {}
        if base is None:
            for m in range(1, size_cap + 1):
                for x in enumerate_graphs(m):
                    self._enqueue_u(x, None)
        else:
            for x, psi in _comma_targets(base, size_cap):
                self._enqueue_u(x, psi)
        self._enqueue_a(0)

    # -- bookkeeping ---------------------------------------------------

    def _enqueue_u(self, x, psi):
        req = Requirement(kind="U", order=self.order, target=x, target_psi=psi)
        self.order += 1
        self.ledger.append(req)
        self.queue.append(req)

    def _enqueue_a(self, n):
        u = self.levels[n]
        hi = min(u.n + A_SLACK, A_CAP)
        for m in range(u.n, hi + 1):
            for y in enumerate_graphs(m):
                for f in enumerate_quotients(y, u):
                    if self.base is None:
                        req = Requirement(kind="A", order=self.order, level=n, arrow=f)
                        self.order += 1
                        self.ledger.append(req)
                        self.queue.append(req)
                    else:
                        psi_n = self.psis[n]
                        fibers = [tuple(v for v in range(y.n) if f.assign[v] == psi_n.assign[k])
                                  for k in range(psi_n.dom.n)]
                        for combo in iter_product(*fibers):
                            psi_y = GraphMap(psi_n.dom, y, combo)
                            req = Requirement(kind="A", order=self.order, level=n,
                                              arrow=f, arrow_psi=psi_y)
                            self.order += 1
                            self.ledger.append(req)
                            self.queue.append(req)

    def composite(self, n, k):
        """Bond composite levels[k] -> levels[n]; cache survives appends."""
        if n == k:
            return identity_map(self.levels[n])
        key = (n, k)
        if key not in self._composites:
            self._composites[key] = compose(self.composite(n, k - 1), self.bonds[k - 1])
        return self._composites[key]

    def _append_level(self, w, bond, psi=None):
        if w.n > SIZE_GUARD:
            raise CapExceeded(f"constructed level would have {w.n} vertices (guard {SIZE_GUARD})")
        assert is_quotient(bond) and bond.cod == self.levels[-1]
        self.levels.append(w)
        self.bonds.append(bond)
        if self.base is not None:
            assert psi is not None
            assert compose(bond, psi).assign == self.psis[-1].assign
            self.psis.append(psi)
        self._enqueue_a(len(self.levels) - 1)

    # -- scanning ------------------------------------------------------

    def _scan_u(self, req):
        x = req.target
        for n in range(len(self.levels)):
            cand = np.ones((self.levels[n].n, x.n), dtype=np.bool_)
            if req.target_psi is not None:
                psi_n = self.psis[n]
                for k in range(psi_n.dom.n):
                    _pin_cand(cand, psi_n.assign[k], req.target_psi.assign[k])
            found = search_quotients(self.levels[n], x, cand, limit=1)
            if found:
                return n, found[0]
        return None

    def _scan_a(self, req):
        f = req.arrow
        for k in range(req.level, len(self.levels)):
            u = self.composite(req.level, k)
            cand = f.assign_array[None, :] == u.assign_array[:, None]
            cand = np.ascontiguousarray(cand)
            if req.arrow_psi is not None:
                psi_k = self.psis[k]
                for j in range(psi_k.dom.n):
                    _pin_cand(cand, psi_k.assign[j], req.arrow_psi.assign[j])
            found = search_quotients(self.levels[k], f.dom, cand, limit=1)
            if found:
                return k, found[0]
        return None

    # -- repairs -------------------------------------------------------

    def _repair_u(self, req):
        cur = self.levels[-1]
        x = req.target
        if self.base is None:
            found = self._amalgam_search(cur, x, None, None)
            if found is None:
                w = disjoint_union(cur, x)
                bond = GraphMap(w, cur, tuple(range(cur.n)) + (0,) * x.n)
                self._append_level(w, bond)
            else:
                w, bond, _ = found
                self._append_level(w, bond)
        else:
            psi_cur = self.psis[-1]
            found = self._amalgam_search(cur, x, psi_cur, req.target_psi)
            if found is None:
                w, bond, psi_w = self._padded_product(cur, x, psi_cur, req.target_psi)
                self._append_level(w, bond, psi_w)
            else:
                w, bond, psi_w = found
                self._append_level(w, bond, psi_w)

    def _amalgam_search(self, cur, x, psi_cur, psi_x):
        """Least (size, class, psi, bond) graph quotienting onto cur and x.

        In comma mode the new level's base coloring must sit on isolated
        vertices and commute with both sides.
        """
        lo = max(cur.n, x.n)
        for size in range(lo, AMALGAM_CAP + 1):
            for w in enumerate_graphs(size):
                if psi_cur is None:
                    bond = search_quotients(w, cur, limit=1)
                    if not bond:
                        continue
                    wit = search_quotients(w, x, limit=1)
                    if not wit:
                        continue
                    return w, bond[0], None
                iso = self._isolated_mask(w)
                k0 = psi_cur.dom
                for psi in iter_product(range(w.n), repeat=k0.n):
                    if not all(iso[v] for v in psi):
                        continue
                    psi_w = GraphMap(k0, w, psi)
                    cand = np.ones((w.n, cur.n), dtype=np.bool_)
                    for k in range(k0.n):
                        _pin_cand(cand, psi[k], psi_cur.assign[k])
                    bond = search_quotients(w, cur, cand, limit=1)
                    if not bond:
                        continue
                    cand = np.ones((w.n, x.n), dtype=np.bool_)
                    for k in range(k0.n):
                        _pin_cand(cand, psi[k], psi_x.assign[k])
                    wit = search_quotients(w, x, cand, limit=1)
                    if not wit:
                        continue
                    return w, bond[0], psi_w
        return None

    @staticmethod
    def _isolated_mask(g):
        mask = [True] * g.n
        for a, b in g.edges:
            mask[a] = False
            mask[b] = False
        return mask

    def _padded_product(self, cur, x, psi_cur, psi_x):
        """Product of cur and x plus fresh isolated carriers for the base.

        Always a valid comma repair: the product part keeps both
        projections quotients, the carriers keep the base coloring on
        isolated vertices.
        """
        k0 = psi_cur.dom
        pn = cur.n * x.n
        edges = []
        for u1 in range(cur.n):
            for v1 in range(x.n):
                a = u1 * x.n + v1
                for u2 in range(cur.n):
                    for v2 in range(x.n):
                        b = u2 * x.n + v2
                        if b <= a:
                            continue
                        if cur.adjacency[u1, u2] and x.adjacency[v1, v2]:
                            edges.append((a, b))
        w = new_graph(pn + k0.n, edges)
        bond_assign = [u for u in range(cur.n) for _ in range(x.n)]
        bond_assign += [psi_cur.assign[k] for k in range(k0.n)]
        bond = GraphMap(w, cur, tuple(bond_assign))
        psi_w = GraphMap(k0, w, tuple(pn + k for k in range(k0.n)))
        assert is_quotient(bond)
        return w, bond, psi_w

    def _repair_a(self, req):
        w, cover = split_cover(self.levels[-1])
        if self.base is None:
            self._append_level(w, cover)
        else:
            psi_cur = self.psis[-1]
            # singleton copies share ids with the covered level's vertices
            self._append_level(w, cover, GraphMap(psi_cur.dom, w, psi_cur.assign))

    def _pullback_repair(self, req):
        """Per-requirement amalgamation, the safety net for larger slack."""
        if self.base is not None:
            raise GraphlimError("pullback repair is only wired for plain mode")
        u = self.composite(req.level, len(self.levels) - 1)
        w, to_y, to_cur = pullback(req.arrow, u)
        self._append_level(w, to_cur)

    # -- main loop -----------------------------------------------------

    def run(self):
        while self.queue:
            req = self.queue[0]
            if req.first_attempt is None:
                req.first_attempt = self.steps
            self.steps += 1
            res = self._scan_u(req) if req.kind == "U" else self._scan_a(req)
            if res is not None:
                req.status = "satisfied"
                req.witness_level, req.witness = res
                self.queue.popleft()
                continue
            if len(self.levels) >= self.depth:
                break
            if req.kind == "U":
                self._repair_u(req)
            else:
                self._repair_a(req)
                if self._scan_a(req) is None and len(self.levels) < self.depth:
                    self._pullback_repair(req)
                if self._scan_a(req) is None:
                    raise GraphlimError(
                        f"absorption repair failed for {req.describe()}; "
                        "this contradicts the split-cover absorption property")
        while len(self.levels) < self.depth:
            self._repair_a_pad()
        return self._report()

    def _repair_a_pad(self):
        w, cover = split_cover(self.levels[-1])
        if self.base is None:
            self._append_level(w, cover)
        else:
            psi_cur = self.psis[-1]
            self._append_level(w, cover, GraphMap(psi_cur.dom, w, psi_cur.assign))

    def _report(self):
        seq = ProfiniteBase(tuple(self.levels), tuple(self.bonds))
        return BuildReport(
            sequence=seq,
            ledger=tuple(self.ledger),
            size_cap=self.size_cap,
            depth=self.depth,
            a_slack=A_SLACK,
            a_cap=A_CAP,
            base=self.base,
            psis=tuple(self.psis) if self.psis is not None else None,
        )


def build_prefix(size_cap: int = None, depth: int = None,
                 seed: FiniteGraph = None) -> BuildReport:
    """Build a plain prefix of the stated depth.

    The default seed is the single edge, so the limit carries a
    nontrivial edge from level 0 on.
    """
    size_cap = default_size_cap() if size_cap is None else size_cap
    depth = default_depth() if depth is None else depth
    seed = edge_graph() if seed is None else seed
    return _BuildState(size_cap, depth, seed).run()


def build_comma_prefix(base: ProfiniteBase, size_cap: int = None,
                       depth: int = None) -> BuildReport:
    """Build a prefix together with base colorings of every level.

    Level 0 is the base's own level-0 graph colored by the identity.
    Every repair keeps the coloring on isolated vertices, which is what
    later makes the embedded image isolated and nowhere dense.
    """
    size_cap = default_size_cap() if size_cap is None else size_cap
    depth = default_depth() if depth is None else depth
    return _BuildState(size_cap, depth, base.levels[0], base=base).run()


def verify_U(seq: ProfiniteBase, x: FiniteGraph):
    """Least (level, quotient onto x), or None."""
    for n in range(seq.depth):
        found = search_quotients(seq.levels[n], x, limit=1)
        if found:
            return n, found[0]
    return None


def verify_A(seq: ProfiniteBase, n: int, f: GraphMap):
    """Least (k, g) with f∘g equal to the bond composite, or None."""
    if f.cod != seq.levels[n]:
        raise PreconditionError("arrow codomain is not the stated level")
    if not is_quotient(f):
        raise PreconditionError("absorption is asked of quotient arrows only")
    for k in range(n, seq.depth):
        u = seq.bond_composite(n, k)
        cand = np.ascontiguousarray(f.assign_array[None, :] == u.assign_array[:, None])
        found = search_quotients(seq.levels[k], f.dom, cand, limit=1)
        if found:
            g = found[0]
            assert compose(f, g).assign == u.assign
            return k, g
    return None


def replay_ledger(report: BuildReport) -> bool:
    """Re-verify every satisfied requirement's witness by composition."""
    seq = report.sequence
    for req in report.ledger:
        if req.status != "satisfied":
            continue
        k, g = req.witness_level, req.witness
        if not is_quotient(g):
            return False
        if req.kind == "U":
            if g.dom != seq.levels[k] or g.cod != req.target:
                return False
            if req.target_psi is not None:
                if compose(g, report.psis[k]).assign != req.target_psi.assign:
                    return False
        else:
            u = seq.bond_composite(req.level, k)
            if compose(req.arrow, g).assign != u.assign:
                return False
            if req.arrow_psi is not None:
                if compose(g, report.psis[k]).assign != req.arrow_psi.assign:
                    return False
    return True
