"""Maps between finite graphs and their classification.

The one search that matters lives here: search_quotients runs the
backtracking kernel over an optional candidate matrix and returns
assignments in lexicographic order. Everything downstream (absorption
checks, gadget solving, lifting, tower rungs) is this search with a
different candidate matrix.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import ENUM_CAP
from .core import FiniteGraph, new_graph
from .errors import CapExceeded, PreconditionError
from . import kernels


@dataclass(frozen=True)
class Classification:
    homomorphism: bool
    strict: bool
    surjective: bool
    injective: bool
    edge_reflecting: bool

    @property
    def embedding(self) -> bool:
        return self.homomorphism and self.injective and self.edge_reflecting

    @property
    def quotient(self) -> bool:
        return self.homomorphism and self.strict and self.surjective

    @property
    def isomorphism(self) -> bool:
        return self.quotient and self.injective


@dataclass(frozen=True)
class GraphMap:
    """Total vertex assignment dom -> cod."""

    dom: FiniteGraph
    cod: FiniteGraph
    assign: tuple

    def __post_init__(self):
        if len(self.assign) != self.dom.n:
            raise PreconditionError(
                f"assignment has {len(self.assign)} entries for {self.dom.n} vertices")
        for v in self.assign:
            if not (0 <= v < self.cod.n):
                raise PreconditionError(f"value {v} out of range for codomain n={self.cod.n}")

    def __call__(self, v: int) -> int:
        return self.assign[v]

    @cached_property
    def assign_array(self) -> np.ndarray:
        arr = np.array(self.assign, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def fiber(self, c: int) -> tuple:
        return tuple(v for v in range(self.dom.n) if self.assign[v] == c)

    @property
    def image(self) -> frozenset:
        return frozenset(self.assign)

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.assign == tuple(range(self.dom.n))

    def __repr__(self):
        return f"GraphMap({self.dom.n}->{self.cod.n}, {list(self.assign)})"


def identity_map(g: FiniteGraph) -> GraphMap:
    return GraphMap(g, g, tuple(range(g.n)))


def constant_map(g: FiniteGraph, cod: FiniteGraph, value: int = 0) -> GraphMap:
    return GraphMap(g, cod, (value,) * g.n)


def classify(m: GraphMap) -> Classification:
    flags = int(kernels.classify_assignment(
        m.dom.adjacency, m.cod.adjacency,
        m.dom.edge_array, m.cod.edge_array,
        m.assign_array, m.cod.n))
    return Classification(
        homomorphism=bool(flags & kernels.FLAG_HOMOMORPHISM),
        strict=bool(flags & kernels.FLAG_STRICT),
        surjective=bool(flags & kernels.FLAG_SURJECTIVE),
        injective=bool(flags & kernels.FLAG_INJECTIVE),
        edge_reflecting=bool(flags & kernels.FLAG_REFLECTING),
    )


def is_quotient(m: GraphMap) -> bool:
    return classify(m).quotient


def compose(outer: GraphMap, inner: GraphMap) -> GraphMap:
    """outer after inner; composing two quotients must yield a quotient."""
    if inner.cod != outer.dom:
        raise PreconditionError("composition mismatch: inner codomain differs from outer domain")
    composite = GraphMap(inner.dom, outer.cod,
                         tuple(outer.assign[v] for v in inner.assign))
    if is_quotient(outer) and is_quotient(inner):
        assert is_quotient(composite), "quotient composition failed to classify as quotient"
    return composite


def inverse_of_isomorphism(m: GraphMap) -> GraphMap:
    c = classify(m)
    if not c.isomorphism:
        raise PreconditionError("inverse requested for a non-isomorphism")
    inv = [0] * m.cod.n
    for v, w in enumerate(m.assign):
        inv[w] = v
    return GraphMap(m.cod, m.dom, tuple(inv))


def _prune_candidates(dom: FiniteGraph, cod: FiniteGraph, cand):
    """Arc consistency over the stored edges, iterated to a fixpoint.

    A value survives at a vertex only while every incident edge still has
    a compatible value on the far end. Dropped values appear in no
    homomorphism at all, so the solution set, and with it the
    lexicographic order of results, is exactly what it was.
    """
    edges = dom.edge_array
    if edges.shape[0] == 0:
        return cand
    cand = cand.copy()
    reach = cod.adjacency.astype(np.uint8)
    ea, eb = edges[:, 0], edges[:, 1]
    while True:
        before = int(cand.sum())
        if before == 0:
            return cand
        support = (cand.astype(np.uint8) @ reach) > 0
        keep = np.ones_like(cand)
        np.logical_and.at(keep, ea, support[eb])
        np.logical_and.at(keep, eb, support[ea])
        cand &= keep
        if int(cand.sum()) == before:
            return cand


def search_quotients(dom: FiniteGraph, cod: FiniteGraph, cand=None, limit=1,
                     surjective=True, strict=True, max_nodes=0):
    """Quotient maps dom -> cod in lexicographic assignment order.

    cand is an optional boolean (dom.n, cod.n) matrix restricting the
    value of each vertex; pins are one-True rows. Returns a list of
    GraphMap, at most `limit` entries. max_nodes > 0 bounds the search
    effort deterministically; a truncated search may under-report, so
    budgeted callers must treat "no result" as unknown rather than absent.
    """
    if strict and not surjective:
        raise PreconditionError("strictness checking here presumes surjectivity")
    if limit < 1:
        # the kernel writes into a (limit, n) array and does not bounds-check
        raise PreconditionError(f"result limit must be positive, got {limit}")
    if cand is None:
        cand = np.ones((dom.n, cod.n), dtype=np.bool_)
    else:
        cand = np.ascontiguousarray(cand, dtype=np.bool_)
        if cand.shape != (dom.n, cod.n):
            raise PreconditionError(f"candidate matrix shape {cand.shape} mismatches sizes")
        if max_nodes == 0:
            # budgeted callers keep the raw matrix: their node counts are
            # part of the observable contract, pruning would shift them
            cand = _prune_candidates(dom, cod, cand)
    if surjective and dom.n < cod.n:
        return []
    if not cand.any(axis=1).all():
        return []
    indptr, indices = dom.back_csr
    out = np.zeros((limit, dom.n), dtype=np.int64)
    found = int(kernels.assignment_search(
        indptr, indices, dom.edge_array, cod.n, cod.adjacency,
        cod.edge_array, cand, limit, surjective, strict, max_nodes, out))
    if found < 0:
        found = -found - 1
    return [GraphMap(dom, cod, tuple(int(x) for x in out[i])) for i in range(found)]


def enumerate_quotients(x: FiniteGraph, y: FiniteGraph, cap: int = ENUM_CAP):
    """All quotient maps x -> y, lexicographic; domain size capped."""
    if x.n > cap:
        raise CapExceeded(f"quotient enumeration capped at {cap} domain vertices, got {x.n}")
    if x.n < y.n:
        return []
    bound = y.n ** x.n
    return search_quotients(x, y, limit=bound)


def merge_vertices(g: FiniteGraph, a: int, b: int):
    """Quotient identifying a and b; the image edge set is the strict one.

    The merged class keeps the smaller of the two ids; every vertex above
    the larger id shifts down by one. Returns (image, map).
    """
    if a == b:
        raise PreconditionError("merging a vertex with itself is a no-op, refusing")
    if not (0 <= a < g.n and 0 <= b < g.n):
        raise PreconditionError(f"vertices ({a},{b}) out of range for n={g.n}")
    lo, hi = min(a, b), max(a, b)
    assign = []
    for v in range(g.n):
        if v == hi:
            assign.append(lo)
        elif v > hi:
            assign.append(v - 1)
        else:
            assign.append(v)
    edges = set()
    for x, y in g.edges:
        p, q = assign[x], assign[y]
        if p != q:
            edges.add((min(p, q), max(p, q)))
    image = new_graph(g.n - 1, edges)
    m = GraphMap(g, image, tuple(assign))
    assert is_quotient(m)
    return image, m


def elementary_decompose(q: GraphMap):
    """Factor a quotient into single-merge steps, lexicographically.

    At each step the least pair (a, b) with equal q-values is merged.
    Non-injective quotients decompose into dom.n - cod.n merges with the
    residual relabeling folded into the last step, so the composite of the
    returned chain equals q exactly. The identity gives []; a nontrivial
    isomorphism is returned as the single-element chain [q].
    """
    c = classify(q)
    if not c.quotient:
        raise PreconditionError("elementary decomposition is defined for quotient maps")
    if q.is_identity():
        return []
    if c.injective:
        return [q]
    steps = []
    current = identity_map(q.dom)

    def residual(v):
        return q.assign[current_preimage[v]]

    while True:
        # current: dom -> staged graph; values of q factor through it
        staged = current.cod
        current_preimage = [0] * staged.n
        for v in range(current.dom.n):
            current_preimage[current.assign[v]] = v
        pair = None
        for a in range(staged.n):
            for b in range(a + 1, staged.n):
                if residual(a) == residual(b):
                    pair = (a, b)
                    break
            if pair:
                break
        if pair is None:
            break
        a, b = pair
        if staged.n - 1 == q.cod.n:
            # last merge: land directly on q's codomain with q's labels
            assign = []
            for v in range(staged.n):
                assign.append(q.assign[current_preimage[v]])
            last = GraphMap(staged, q.cod, tuple(assign))
            assert is_quotient(last)
            steps.append(last)
            current = compose(last, current)
            break
        _, step = merge_vertices(staged, a, b)
        steps.append(step)
        current = compose(step, current)
    assert current.assign == q.assign and current.cod == q.cod
    return steps
