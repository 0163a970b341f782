"""Compare the jitted kernels against their plain-Python interpretations.

The dispatched functions in graphlim.kernels are numba-compiled unless
GRAPHLIM_NO_NUMBA is set; the _impl functions are the same code run by
the interpreter. Workloads are deterministic, so both sides do exactly
the same work.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from graphlim import edge_graph, enumerate_graphs, new_graph, split_cover
from graphlim import kernels


def _classify_workload(rng, count):
    jobs = []
    for _ in range(count):
        nd, nc = rng.randint(2, 6), rng.randint(1, 4)
        pairs = [(i, j) for i in range(nd) for j in range(i + 1, nd)]
        dom = new_graph(nd, [p for p in pairs if rng.random() < 0.5])
        cpairs = [(i, j) for i in range(nc) for j in range(i + 1, nc)]
        cod = new_graph(nc, [p for p in cpairs if rng.random() < 0.4])
        assign = np.array([rng.randrange(nc) for _ in range(nd)], np.int64)
        jobs.append((dom.adjacency, cod.adjacency, dom.edge_array,
                     cod.edge_array, assign, nc))
    return jobs


def _run_classify(fn, jobs):
    acc = 0
    for args in jobs:
        acc ^= int(fn(*args))
    return acc


def _search_args(dom, cod, limit):
    cand = np.ones((dom.n, cod.n), np.bool_)
    out = np.zeros((limit, dom.n), np.int64)
    indptr, indices = dom.back_csr
    return (indptr, indices, dom.edge_array, cod.n, cod.adjacency,
            cod.edge_array, cand, limit, True, True, 0, out)


def _time(fn, *args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="timed repetitions, best is kept (default 3)")
    args = ap.parse_args()

    if not kernels.USE_NUMBA:
        print("GRAPHLIM_NO_NUMBA is set: the dispatched kernels already "
              "run in plain Python, nothing to compare.")
        return

    rows = []

    jobs = _classify_workload(random.Random(1318), 20000)
    _run_classify(kernels.classify_assignment, jobs[:50])  # compile
    jt, ja = _time(_run_classify, kernels.classify_assignment, jobs,
                   repeat=args.repeat)
    pt, pa = _time(_run_classify, kernels._classify_impl, jobs,
                   repeat=args.repeat)
    assert ja == pa
    rows.append(("classify x20000", jt, pt))

    cover = split_cover(split_cover(edge_graph())[0])[0]  # 46 vertices, 18 edges
    for cod in enumerate_graphs(3):
        label = f"search 46v -> 3v/{len(cod.edges)}e"
        sargs = _search_args(cover, cod, limit=20000)
        kernels.assignment_search(*_search_args(cover, cod, 1))  # compile
        jt, jfound = _time(kernels.assignment_search, *sargs,
                           repeat=args.repeat)
        sargs_p = _search_args(cover, cod, limit=20000)
        pt, pfound = _time(kernels._assignment_search_impl, *sargs_p,
                           repeat=max(1, args.repeat // 3))
        assert int(jfound) == int(pfound)
        rows.append((label, jt, pt))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numba':>10}  {'python':>10}  speedup")
    for label, jt, pt in rows:
        print(f"{label:<{width}}  {jt:>9.4f}s  {pt:>9.4f}s  {pt / jt:>6.1f}x")


if __name__ == "__main__":
    main()
