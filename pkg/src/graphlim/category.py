"""Products, pullback amalgamation, inverse sequences, comma objects.

The pullback is the engine of absorption: the equalizer subset of the
product with the conjunction edge rule. Its projections are re-verified
as quotient maps on every single construction; that check is the
executable form of the subtle step in the amalgamation argument.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import FiniteGraph, new_graph
from .errors import GraphlimError, PreconditionError
from .maps import GraphMap, classify, compose, identity_map, is_quotient


def terminal() -> FiniteGraph:
    """The one-vertex graph; every graph has exactly one quotient onto it."""
    return FiniteGraph(1)


def product(x: FiniteGraph, y: FiniteGraph):
    """Vertex set x.n * y.n in row-major order, conjunction edge rule.

    Returns (p, proj_x, proj_y); both projections classify as quotients.
    """
    n = x.n * y.n
    edges = []
    ax, ay = x.adjacency, y.adjacency
    for a1 in range(x.n):
        for b1 in range(y.n):
            u = a1 * y.n + b1
            for a2 in range(x.n):
                for b2 in range(y.n):
                    v = a2 * y.n + b2
                    if v <= u:
                        continue
                    if ax[a1, a2] and ay[b1, b2]:
                        edges.append((u, v))
    p = new_graph(n, edges)
    proj_x = GraphMap(p, x, tuple(u // y.n for u in range(n)))
    proj_y = GraphMap(p, y, tuple(u % y.n for u in range(n)))
    assert is_quotient(proj_x) and is_quotient(proj_y)
    return p, proj_x, proj_y


def pullback(q1: GraphMap, q2: GraphMap):
    """Equalizer {(x, y) : q1(x) = q2(y)} with the product edge rule.

    Vertices are numbered lexicographically in (x, y). Returns
    (w, to_dom_of_q1, to_dom_of_q2) with the square commuting exactly.
    """
    if q1.cod != q2.cod:
        raise PreconditionError("pullback needs a common codomain")
    if not is_quotient(q1) or not is_quotient(q2):
        raise PreconditionError("pullback inputs must be quotient maps")
    x, y = q1.dom, q2.dom
    verts = [(a, b) for a in range(x.n) for b in range(y.n)
             if q1.assign[a] == q2.assign[b]]
    if not verts:
        raise GraphlimError("empty pullback: inputs cannot both be surjective")
    index = {v: i for i, v in enumerate(verts)}
    ax, ay = x.adjacency, y.adjacency
    edges = []
    for i, (a1, b1) in enumerate(verts):
        for j in range(i + 1, len(verts)):
            a2, b2 = verts[j]
            if ax[a1, a2] and ay[b1, b2]:
                edges.append((i, j))
    w = new_graph(len(verts), edges)
    f1 = GraphMap(w, x, tuple(a for a, _ in verts))
    g1 = GraphMap(w, y, tuple(b for _, b in verts))
    assert is_quotient(f1) and is_quotient(g1), "pullback projection failed to be a quotient"
    assert compose(q1, f1).assign == compose(q2, g1).assign
    return w, f1, g1


@dataclass(frozen=True)
class ProfiniteBase:
    """Finite prefix of an inverse sequence with quotient bonding maps.

    bonds[k] maps levels[k+1] onto levels[k].
    """

    levels: tuple
    bonds: tuple

    def __post_init__(self):
        if len(self.levels) < 1:
            raise PreconditionError("a sequence needs at least one level")
        if len(self.bonds) != len(self.levels) - 1:
            raise PreconditionError("bond count must be level count minus one")
        for k, bond in enumerate(self.bonds):
            if bond.dom != self.levels[k + 1] or bond.cod != self.levels[k]:
                raise PreconditionError(f"bond {k} does not connect level {k + 1} to level {k}")
            if not is_quotient(bond):
                raise PreconditionError(f"bond {k} is not a quotient map")

    @property
    def depth(self) -> int:
        return len(self.levels)

    @cached_property
    def _composites(self):
        return {}

    def bond_composite(self, n: int, k: int) -> GraphMap:
        """The composite map levels[k] -> levels[n], k >= n."""
        if not (0 <= n <= k < self.depth):
            raise PreconditionError(f"bad level pair ({n},{k}) for depth {self.depth}")
        key = (n, k)
        cache = self._composites
        if key not in cache:
            if n == k:
                cache[key] = identity_map(self.levels[n])
            else:
                cache[key] = compose(self.bond_composite(n, k - 1), self.bonds[k - 1])
        return cache[key]

    def prefix(self, depth: int) -> "ProfiniteBase":
        if not (1 <= depth <= self.depth):
            raise PreconditionError(f"bad prefix depth {depth}")
        return ProfiniteBase(self.levels[:depth], self.bonds[:depth - 1])


def constant_base(g: FiniteGraph, depth: int) -> ProfiniteBase:
    """A base whose every level is g with identity bonds."""
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    return ProfiniteBase((g,) * depth, (identity_map(g),) * (depth - 1))


def discrete_base(points: int, depth: int) -> ProfiniteBase:
    """The profinite space of `points` isolated points, constant at depth."""
    return constant_base(FiniteGraph(points), depth)


@dataclass(frozen=True)
class CommaObject:
    """A continuous map out of the base, presented at a finite base level.

    psi maps base.levels[level] to some finite graph; the denoted map is
    psi composed with the base projection, so precomposing psi with a bond
    composite presents the same object one level deeper.
    """

    base: ProfiniteBase
    level: int
    psi: GraphMap

    def __post_init__(self):
        if not (0 <= self.level < self.base.depth):
            raise PreconditionError(f"comma level {self.level} out of range")
        if self.psi.dom != self.base.levels[self.level]:
            raise PreconditionError("psi domain must be the base level graph")

    @property
    def cod(self) -> FiniteGraph:
        return self.psi.cod

    def at_level(self, ell: int) -> GraphMap:
        """psi transported to base level ell >= level."""
        return compose(self.psi, self.base.bond_composite(self.level, ell))


def comma_arrow_check(src: CommaObject, dst: CommaObject, q: GraphMap) -> bool:
    """True iff q is a quotient commuting with both presentations."""
    if src.base != dst.base:
        raise PreconditionError("comma objects live over different bases")
    if q.dom != src.cod or q.cod != dst.cod:
        raise PreconditionError("arrow endpoints do not match the comma objects")
    if not is_quotient(q):
        return False
    ell = max(src.level, dst.level)
    return compose(q, src.at_level(ell)).assign == dst.at_level(ell).assign


def comma_amalgamate(f: CommaObject, g: CommaObject, q1: GraphMap, q2: GraphMap):
    """Complete a comma cospan to a commuting square via the pullback.

    q1 must be a comma arrow out of f and q2 one out of g, into a common
    target presentation. Returns (mediator, leg_f, leg_g) where mediator
    is the comma object into the pullback and the legs are comma arrows
    mediator -> f and mediator -> g.
    """
    if f.base != g.base:
        raise PreconditionError("comma objects live over different bases")
    if q1.cod != q2.cod:
        raise PreconditionError("comma cospan needs a common target graph")
    ell = max(f.level, g.level)
    psi_f = f.at_level(ell)
    psi_g = g.at_level(ell)
    if compose(q1, psi_f).assign != compose(q2, psi_g).assign:
        raise PreconditionError("cospan legs disagree on the base: no common comma target")
    if not is_quotient(q1) or not is_quotient(q2):
        raise PreconditionError("comma cospan legs must be quotient maps")
    w, leg_f, leg_g = pullback(q1, q2)
    pair_index = {}
    for i in range(w.n):
        pair_index[(leg_f.assign[i], leg_g.assign[i])] = i
    k_assign = tuple(pair_index[(psi_f.assign[v], psi_g.assign[v])]
                     for v in range(psi_f.dom.n))
    mediator = CommaObject(f.base, ell, GraphMap(f.base.levels[ell], w, k_assign))
    assert comma_arrow_check(mediator, f, leg_f)
    assert comma_arrow_check(mediator, g, leg_g)
    return mediator, leg_f, leg_g


def factor_through_level(seq: ProfiniteBase, m: GraphMap, k: int, n: int) -> GraphMap:
    """Factor a level-k map through level n when it is constant on fibers.

    m must be defined on levels[k] and constant on the fibers of the bond
    composite levels[k] -> levels[n]; returns f' with f'∘u = m exactly.
    """
    if m.dom != seq.levels[k]:
        raise PreconditionError("map domain is not the stated level")
    u = seq.bond_composite(n, k)
    values = {}
    for v in range(m.dom.n):
        key = u.assign[v]
        if key in values and values[key] != m.assign[v]:
            raise PreconditionError(f"map is not constant on the fiber of {key}")
        values[key] = m.assign[v]
    factored = GraphMap(seq.levels[n], m.cod, tuple(values[c] for c in range(seq.levels[n].n)))
    assert compose(factored, u).assign == m.assign
    return factored
