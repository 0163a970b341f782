"""Finite graphs as reflexive symmetric relations.

A graph stores only its loop-free edges; the semantic relation is the
reflexive symmetric closure, and every adjacency matrix handed to the
kernels carries a True diagonal. Isomorphism runs through brute-force
canonical codes, which is plenty at desk scale and gives a total order
on isomorphism classes for free.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations

import numpy as np

from .config import CANON_CAP
from .errors import CapExceeded, PreconditionError
from . import kernels


@dataclass(frozen=True)
class FiniteGraph:
    """Vertices 0..n-1 plus a sorted tuple of stored edges (a, b), a < b."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"graph needs at least one vertex, got n={self.n}")
        for a, b in self.edges:
            if not (0 <= a < b < self.n):
                raise PreconditionError(f"edge ({a},{b}) out of range for n={self.n}")
        if tuple(sorted(set(self.edges))) != self.edges:
            raise PreconditionError("edges must be sorted and deduplicated; use new_graph")

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Semantic adjacency: boolean, symmetric, True diagonal."""
        adj = np.eye(self.n, dtype=np.bool_)
        for a, b in self.edges:
            adj[a, b] = True
            adj[b, a] = True
        adj.setflags(write=False)
        return adj

    @cached_property
    def edge_array(self) -> np.ndarray:
        arr = np.array(self.edges, dtype=np.int64).reshape(len(self.edges), 2)
        arr.setflags(write=False)
        return arr

    @cached_property
    def back_csr(self):
        """CSR of each vertex's smaller-index neighbors, for the kernels."""
        back = [[] for _ in range(self.n)]
        for a, b in self.edges:
            back[b].append(a)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v in range(self.n):
            back[v].sort()
            indptr[v + 1] = indptr[v] + len(back[v])
        indices = np.zeros(indptr[-1], dtype=np.int64)
        pos = 0
        for v in range(self.n):
            for w in back[v]:
                indices[pos] = w
                pos += 1
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return indptr, indices

    def has_edge(self, a: int, b: int) -> bool:
        """Semantic relation: loops are always present."""
        if a == b:
            return True
        if a > b:
            a, b = b, a
        return (a, b) in self.edge_set

    def neighbors(self, v: int) -> frozenset:
        """Semantic neighbors, v itself included."""
        out = {v}
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return frozenset(out)

    def __repr__(self):
        return f"FiniteGraph(n={self.n}, edges={list(self.edges)})"


def new_graph(n: int, pairs) -> FiniteGraph:
    """Build a graph from any iterable of vertex pairs.

    Loops are stripped, duplicates and orientations collapsed.
    """
    if n < 1:
        raise PreconditionError(f"graph needs at least one vertex, got n={n}")
    cleaned = set()
    for a, b in pairs:
        a = int(a)
        b = int(b)
        if not (0 <= a < n and 0 <= b < n):
            raise PreconditionError(f"pair ({a},{b}) out of range for n={n}")
        if a == b:
            continue
        cleaned.add((min(a, b), max(a, b)))
    return FiniteGraph(n, tuple(sorted(cleaned)))


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Upper-triangle bits of the lexicographically minimal relabeling."""

    n: int
    bits: str

    def __post_init__(self):
        assert len(self.bits) == self.n * (self.n - 1) // 2


@lru_cache(maxsize=None)
def _perm_array(n: int) -> np.ndarray:
    arr = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr


def _code_to_bits(code: int, n: int) -> str:
    nb = n * (n - 1) // 2
    return format(code, f"0{nb}b") if nb else ""


def _bits_to_edges(bits: str, n: int):
    edges = []
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            if bits[pos] == "1":
                edges.append((i, j))
            pos += 1
    return edges


def canonical_form(g: FiniteGraph, cap: int = CANON_CAP) -> CanonicalCode:
    """Minimal code over all n! relabelings; capped brute force."""
    if g.n > cap:
        raise CapExceeded(f"canonicalization capped at {cap} vertices, got {g.n}")
    code = int(kernels.min_code(g.adjacency, _perm_array(g.n)))
    return CanonicalCode(g.n, _code_to_bits(code, g.n))


def are_isomorphic(g: FiniteGraph, h: FiniteGraph, cap: int = CANON_CAP) -> bool:
    if g.n != h.n:
        return False
    if len(g.edges) != len(h.edges):
        return False
    return canonical_form(g, cap) == canonical_form(h, cap)


def enumerate_graphs(n: int, cap: int = CANON_CAP):
    """One representative per isomorphism class, ascending canonical code.

    Each representative is its own canonical form, so positions in this
    list give a stable total order on classes.
    """
    if n > cap:
        raise CapExceeded(f"enumeration capped at {cap} vertices, got {n}")
    nb = n * (n - 1) // 2
    perms = _perm_array(n)
    out = []
    if n <= 6:
        codes = np.zeros(1 << nb, dtype=np.int64)
        kernels.all_codes(n, perms, codes)
        for mask in range(1 << nb):
            if codes[mask] == mask:
                bits = _code_to_bits(mask, n)
                out.append(FiniteGraph(n, tuple(_bits_to_edges(bits, n))))
    else:
        # streaming variant; correct but slow, kept for cap completeness
        triu = np.triu_indices(n, 1)
        for mask in range(1 << nb):
            bits = _code_to_bits(mask, n)
            adj = np.eye(n, dtype=np.bool_)
            adj[triu] = [c == "1" for c in bits]
            adj |= adj.T
            if int(kernels.min_code(adj, perms)) == mask:
                out.append(FiniteGraph(n, tuple(_bits_to_edges(bits, n))))
    return out


def induced_subgraph(g: FiniteGraph, s):
    """Relation restricted to s, renumbered densely.

    Returns (subgraph, keep) where keep[i] is the original id of the new
    vertex i.
    """
    keep = tuple(sorted(set(int(v) for v in s)))
    if not keep:
        raise PreconditionError("induced subgraph needs a nonempty vertex set")
    for v in keep:
        if not (0 <= v < g.n):
            raise PreconditionError(f"vertex {v} out of range for n={g.n}")
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[a], index[b]) for a, b in g.edges if a in index and b in index]
    return new_graph(len(keep), edges), keep


def isolated_vertices(g: FiniteGraph) -> frozenset:
    """Vertices adjacent to themselves only."""
    touched = set()
    for a, b in g.edges:
        touched.add(a)
        touched.add(b)
    return frozenset(range(g.n)) - touched


# Small named graphs used all over the tests and as builder defaults.

def terminal_graph() -> FiniteGraph:
    return FiniteGraph(1)


def edge_graph() -> FiniteGraph:
    """Two vertices joined by an edge; the default sequence seed."""
    return FiniteGraph(2, ((0, 1),))


def discrete_graph(n: int) -> FiniteGraph:
    return FiniteGraph(n)
