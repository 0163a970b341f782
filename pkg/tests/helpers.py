"""Independent oracles the test suite checks the library against.

Everything here is deliberately naive: plain sets, dicts, and odometer
loops, sharing no code with the package. Slow is fine; agreeing with a
second implementation is the point.
"""

from itertools import combinations, permutations, product


def labeled_graphs(n):
    """Every edge subset on n vertices, as a frozenset of (a, b) pairs."""
    slots = list(combinations(range(n), 2))
    out = []
    for mask in range(1 << len(slots)):
        out.append(frozenset(slots[i] for i in range(len(slots))
                             if mask >> i & 1))
    return out


def _apply_perm(edges, p):
    return frozenset((min(p[a], p[b]), max(p[a], p[b])) for a, b in edges)


def iso_class_count(n):
    """Isomorphism classes on n vertices by bucket-then-brute-force."""
    buckets = {}
    for edges in labeled_graphs(n):
        deg = [0] * n
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        buckets.setdefault(tuple(sorted(deg)), []).append(edges)
    count = 0
    for group in buckets.values():
        reps = []
        for edges in group:
            if not any(_apply_perm(edges, p) == seen
                       for seen in reps
                       for p in permutations(range(n))):
                reps.append(edges)
        count += len(reps)
    return count


def brute_isomorphic(n1, e1, n2, e2):
    if n1 != n2:
        return False
    e1, e2 = frozenset(e1), frozenset(e2)
    return any(_apply_perm(e1, p) == e2 for p in permutations(range(n1)))


def _adjacent(n, edges, a, b):
    # reflexive convention: every vertex is adjacent to itself
    return a == b or (min(a, b), max(a, b)) in edges


def oracle_flags(dom_n, dom_edges, cod_n, cod_edges, assign):
    """The five classification flags, computed set-wise."""
    dom_edges = frozenset(dom_edges)
    cod_edges = frozenset(cod_edges)
    homo = all(_adjacent(cod_n, cod_edges, assign[a], assign[b])
               for a, b in dom_edges)
    image = set(assign)
    strict = True
    for c, d in cod_edges:
        if c not in image or d not in image:
            continue
        if not any({assign[a], assign[b]} == {c, d} for a, b in dom_edges):
            strict = False
            break
    surjective = image == set(range(cod_n))
    injective = len(image) == dom_n
    reflecting = True
    for a in range(dom_n):
        for b in range(a + 1, dom_n):
            if (_adjacent(cod_n, cod_edges, assign[a], assign[b])
                    and not _adjacent(dom_n, dom_edges, a, b)):
                reflecting = False
    return {"homomorphism": homo, "strict": strict, "surjective": surjective,
            "injective": injective, "edge_reflecting": reflecting}


def oracle_quotients(dom_n, dom_edges, cod_n, cod_edges):
    """All quotient assignments dom -> cod, by exhaustive odometer."""
    out = []
    for assign in product(range(cod_n), repeat=dom_n):
        flags = oracle_flags(dom_n, dom_edges, cod_n, cod_edges, assign)
        if flags["homomorphism"] and flags["strict"] and flags["surjective"]:
            out.append(assign)
    return out
