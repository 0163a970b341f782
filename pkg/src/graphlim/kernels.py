"""Array-level search kernels with an optional jit layer.

Everything here works on plain numpy arrays so the same source compiles
under numba and runs unchanged in pure python. The jitted variants are
selected at import time; setting GRAPHLIM_NO_NUMBA=1 forces the python
path (useful for debugging and as the reference in the kernel-agreement
tests, which call the *_impl functions directly on both sides).

Adjacency matrices are semantic: boolean, symmetric, True on the
diagonal. Edge arrays hold the stored (loop-free) pairs, one row per
edge, a < b. Candidate matrices are boolean (dom vertex, cod vertex).
"""

import os

import numpy as np

USE_NUMBA = os.environ.get("GRAPHLIM_NO_NUMBA", "").lower() not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def _witness_mask_impl(e, dom_edges, cod_edges, assign, cand):
    """Bitmask of cod edges the dom edge e can still map onto.

    An endpoint contributes its assigned value when it has one, otherwise
    its whole candidate row; bit k survives while the pair (p, q) of cod
    edge k is reachable in either orientation.
    """
    a = dom_edges[e, 0]
    b = dom_edges[e, 1]
    m = 0
    for k in range(cod_edges.shape[0]):
        p = cod_edges[k, 0]
        q = cod_edges[k, 1]
        if assign[a] >= 0:
            ap = assign[a] == p
            aq = assign[a] == q
        else:
            ap = cand[a, p]
            aq = cand[a, q]
        if assign[b] >= 0:
            bp = assign[b] == p
            bq = assign[b] == q
        else:
            bp = cand[b, p]
            bq = cand[b, q]
        if (ap and bq) or (aq and bp):
            m |= 1 << k
    return m


def _assignment_search_impl(indptr, indices, dom_edges, nc, cod_adj, cod_edges,
                            cand, limit, need_surj, need_strict, max_nodes, out):
    """Enumerate assignments dom -> cod in lexicographic order.

    Always enforces the homomorphism condition (stored dom edges land on
    semantically adjacent cod pairs) against already-assigned neighbors;
    indptr/indices is the CSR of each vertex's smaller-index neighbors.
    need_surj adds surjectivity with support pruning; need_strict adds the
    leaf check that every stored cod edge has an adjacent preimage pair
    (callers must pair it with need_surj, otherwise "edges between range
    vertices" would be the weaker condition).

    Unbudgeted strict searches also keep a per-cod-edge count of dom edges
    that can still witness it and abandon a branch when a count reaches
    zero. The pruned branches contain no strict assignment, so results and
    their order are unaffected; budgeted searches skip this because their
    node counts are part of the observable contract.

    Writes up to `limit` assignments into `out` and returns the count.
    max_nodes > 0 bounds the number of search steps; on exhaustion the
    return value is -(found + 1), so callers can tell a proved-complete
    enumeration from a truncated one.
    """
    nd = indptr.shape[0] - 1
    ne = dom_edges.shape[0]
    nce = cod_edges.shape[0]
    assign = np.full(nd, -1, np.int64)
    used = np.zeros(nc, np.int64)
    # supp[c] = how many vertices from the current frontier onward may take c
    supp = np.zeros(nc, np.int64)
    for u in range(nd):
        for c in range(nc):
            if cand[u, c]:
                supp[c] += 1
    # the live masks index cod edges by bit, so a wide codomain opts out
    track = need_strict and max_nodes == 0 and 0 < nce <= 63
    inc_ptr = np.zeros(nd + 1, np.int64)
    inc_idx = np.zeros(2 * ne, np.int64)
    live = np.zeros(ne, np.int64)
    pot = np.zeros(nce, np.int64)
    if track:
        for e in range(ne):
            inc_ptr[dom_edges[e, 0] + 1] += 1
            inc_ptr[dom_edges[e, 1] + 1] += 1
        for u in range(nd):
            inc_ptr[u + 1] += inc_ptr[u]
        fill = inc_ptr[:nd].copy()
        for e in range(ne):
            for t in range(2):
                u = dom_edges[e, t]
                inc_idx[fill[u]] = e
                fill[u] += 1
        for e in range(ne):
            m = _witness_mask(e, dom_edges, cod_edges, assign, cand)
            live[e] = m
            for k in range(nce):
                pot[k] += (m >> k) & 1
        for k in range(nce):
            if pot[k] == 0:
                return 0
    witness = np.zeros((nc, nc), np.int64)
    stamp = 0
    found = 0
    nodes = 0
    v = 0
    while True:
        nodes += 1
        if max_nodes > 0 and nodes > max_nodes:
            return -(found + 1)
        start = assign[v] + 1
        if assign[v] >= 0:
            used[assign[v]] -= 1
            assign[v] = -1
            if track:
                for ii in range(inc_ptr[v], inc_ptr[v + 1]):
                    e = inc_idx[ii]
                    m = _witness_mask(e, dom_edges, cod_edges, assign, cand)
                    old = live[e]
                    if m != old:
                        live[e] = m
                        for k in range(nce):
                            pot[k] += ((m >> k) & 1) - ((old >> k) & 1)
        chosen = -1
        for c in range(start, nc):
            if not cand[v, c]:
                continue
            ok = True
            for ii in range(indptr[v], indptr[v + 1]):
                if not cod_adj[c, assign[indices[ii]]]:
                    ok = False
                    break
            if not ok:
                continue
            if need_surj:
                dead = False
                missing = 0
                for cc in range(nc):
                    if used[cc] == 0 and cc != c:
                        missing += 1
                        rest = supp[cc]
                        if cand[v, cc]:
                            rest -= 1
                        if rest == 0:
                            dead = True
                            break
                if not dead and missing > nd - v - 1:
                    dead = True
                if dead:
                    continue
            chosen = c
            break
        if chosen < 0:
            v -= 1
            if v < 0:
                return found
            for c in range(nc):
                if cand[v, c]:
                    supp[c] += 1
            continue
        assign[v] = chosen
        used[chosen] += 1
        if track:
            starved = False
            for ii in range(inc_ptr[v], inc_ptr[v + 1]):
                e = inc_idx[ii]
                m = _witness_mask(e, dom_edges, cod_edges, assign, cand)
                old = live[e]
                if m != old:
                    live[e] = m
                    for k in range(nce):
                        pot[k] += ((m >> k) & 1) - ((old >> k) & 1)
            for k in range(nce):
                if pot[k] == 0:
                    starved = True
                    break
            if starved:
                # the loop reenters at v, unassigns it and moves past chosen
                continue
        if v == nd - 1:
            ok = True
            if need_strict:
                stamp += 1
                for e in range(ne):
                    p = assign[dom_edges[e, 0]]
                    q = assign[dom_edges[e, 1]]
                    if p != q:
                        witness[p, q] = stamp
                        witness[q, p] = stamp
                for e in range(nce):
                    if witness[cod_edges[e, 0], cod_edges[e, 1]] != stamp:
                        ok = False
                        break
            if ok:
                for i in range(nd):
                    out[found, i] = assign[i]
                found += 1
                if found >= limit:
                    return found
        else:
            for c in range(nc):
                if cand[v, c]:
                    supp[c] -= 1
            v += 1


def _classify_impl(dom_adj, cod_adj, dom_edges, cod_edges, assign, nc):
    """Classification bitmask for one assignment.

    bit 0: homomorphism, bit 1: strict, bit 2: surjective,
    bit 3: injective, bit 4: edge-reflecting.
    """
    nd = assign.shape[0]
    flags = 0
    homo = True
    for e in range(dom_edges.shape[0]):
        if not cod_adj[assign[dom_edges[e, 0]], assign[dom_edges[e, 1]]]:
            homo = False
            break
    if homo:
        flags |= 1
    in_range = np.zeros(nc, np.int64)
    for v in range(nd):
        in_range[assign[v]] += 1
    strict = True
    if cod_edges.shape[0] > 0:
        witness = np.zeros((nc, nc), np.int64)
        for e in range(dom_edges.shape[0]):
            p = assign[dom_edges[e, 0]]
            q = assign[dom_edges[e, 1]]
            if p != q:
                witness[p, q] = 1
                witness[q, p] = 1
        for e in range(cod_edges.shape[0]):
            p = cod_edges[e, 0]
            q = cod_edges[e, 1]
            if in_range[p] > 0 and in_range[q] > 0 and witness[p, q] == 0:
                strict = False
                break
    if strict:
        flags |= 2
    surj = True
    for c in range(nc):
        if in_range[c] == 0:
            surj = False
            break
    if surj:
        flags |= 4
    inj = True
    for c in range(nc):
        if in_range[c] > 1:
            inj = False
            break
    if inj:
        flags |= 8
    reflect = True
    for a in range(nd):
        for b in range(a + 1, nd):
            if cod_adj[assign[a], assign[b]] and not dom_adj[a, b]:
                reflect = False
                break
        if not reflect:
            break
    if reflect:
        flags |= 16
    return flags


def _min_code_impl(adj, perms):
    """Minimal upper-triangle bit code over the given relabelings.

    Bit order is (0,1),(0,2),...,(1,2),... with the first pair most
    significant, so integer order equals lexicographic bit-string order.
    """
    n = adj.shape[0]
    best = np.int64(-1)
    for pi in range(perms.shape[0]):
        code = np.int64(0)
        for i in range(n):
            for j in range(i + 1, n):
                code = code << 1
                if adj[perms[pi, i], perms[pi, j]]:
                    code = code | 1
        if best < 0 or code < best:
            best = code
    return best


def _all_codes_impl(n, perms, out):
    """Canonical code of every labeled graph mask on n vertices.

    Mask bit layout matches _min_code_impl; out has 2^(n(n-1)/2) slots.
    """
    nb = n * (n - 1) // 2
    adj = np.zeros((n, n), np.bool_)
    for mask in range(out.shape[0]):
        for i in range(n):
            adj[i, i] = True
        pos = 0
        for i in range(n):
            for j in range(i + 1, n):
                bit = (mask >> (nb - 1 - pos)) & 1
                adj[i, j] = bit == 1
                adj[j, i] = bit == 1
                pos += 1
        out[mask] = _min_code_impl(adj, perms)


if USE_NUMBA:
    _witness_mask = njit(cache=True, inline="always")(_witness_mask_impl)
    assignment_search = njit(cache=True)(_assignment_search_impl)
    classify_assignment = njit(cache=True)(_classify_impl)
    min_code = njit(cache=True)(_min_code_impl)
    _min_code_jit = min_code

    def _all_codes_jitsrc(n, perms, out):  # pragma: no cover - jit wrapper
        nb = n * (n - 1) // 2
        adj = np.zeros((n, n), np.bool_)
        for mask in range(out.shape[0]):
            for i in range(n):
                adj[i, i] = True
            pos = 0
            for i in range(n):
                for j in range(i + 1, n):
                    bit = (mask >> (nb - 1 - pos)) & 1
                    adj[i, j] = bit == 1
                    adj[j, i] = bit == 1
                    pos += 1
            out[mask] = _min_code_jit(adj, perms)

    all_codes = njit(cache=True)(_all_codes_jitsrc)
else:
    _witness_mask = _witness_mask_impl
    assignment_search = _assignment_search_impl
    classify_assignment = _classify_impl
    min_code = _min_code_impl
    all_codes = _all_codes_impl

FLAG_HOMOMORPHISM = 1
FLAG_STRICT = 2
FLAG_SURJECTIVE = 4
FLAG_INJECTIVE = 8
FLAG_REFLECTING = 16
