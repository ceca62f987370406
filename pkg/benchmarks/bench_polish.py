"""Compare the compiled polish kernel against the pure-numpy fallback.

Builds the batched least-squares problem for two graphs (the 5-vertex
two-triangle fixture on 3 lines and a random 10-vertex instance on 4), then
times polish_batch on identical inputs in both kernels across batch sizes.

Usage: python benchmarks/bench_polish.py [--restarts 100 1000 5000]
"""

import argparse
import random
import time

import numpy as np

from linerig import partitioned_graph
from linerig.randgen import random_decided_instance, random_general_lines
from linerig.rigidity import random_generic_framework
import linerig._polish_py as polish_py

try:
    import linerig._polish as polish_c
except ImportError:
    polish_c = None


def build_problem(fw, restarts, seed=0):
    """Per-edge scalars, targets, and a box of start vectors for one framework."""
    g = fw.graph
    floats = []
    for line in fw.lines:
        b = np.array([float(x) for x in line.base])
        d = np.array([float(x) for x in line.direction])
        n = np.linalg.norm(d)
        floats.append((b, d / n, n))
    tref = np.array([float(fw.t[v]) * floats[g.part[v]][2] for v in range(g.n)])

    m = len(g.edges)
    eu = np.array([e[0] for e in g.edges], dtype=np.int64)
    ev = np.array([e[1] for e in g.edges], dtype=np.int64)
    ww, wa, wb, ab = (np.empty(m) for _ in range(4))
    for k, (u, v) in enumerate(g.edges):
        wvec = floats[g.part[u]][0] - floats[g.part[v]][0]
        ww[k] = wvec @ wvec
        wa[k] = wvec @ floats[g.part[u]][1]
        wb[k] = wvec @ floats[g.part[v]][1]
        ab[k] = floats[g.part[u]][1] @ floats[g.part[v]][1]
    tu, tv = tref[eu], tref[ev]
    target = ww + tu * tu + tv * tv + 2 * tu * wa - 2 * tv * wb - 2 * tu * tv * ab
    tol = 1e-9 * max(1.0, float(np.max(np.abs(target))))

    center, spread = tref.mean(), max(1.0, np.max(np.abs(tref - tref.mean())))
    t0 = np.random.default_rng(seed).uniform(center - 3 * spread, center + 3 * spread, (restarts, g.n))
    return t0, eu, ev, ww, wa, wb, ab, target, tol


def run(kernel, args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = args[0].copy()
        start = time.perf_counter()
        _, ok, _ = kernel.polish_batch(t0, *args[1:], 200)
        best = min(best, time.perf_counter() - start)
    return best, int(np.sum(ok))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, nargs="+", default=[100, 1000, 5000])
    opts = ap.parse_args()

    bowtie = partitioned_graph(5, (0, 0, 1, 2, 2), [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    lines3 = random_general_lines(3, 2, random.Random(0))
    big, big_lines, _ = random_decided_instance(10, 4, 2, seed=5, want_yes=True)
    cases = [
        ("two triangles, n=5 m=6", random_generic_framework(bowtie, lines3, seed=0, mode="float")),
        ("random YES, n=10 m=%d" % len(big.edges), random_generic_framework(big, big_lines, seed=0, mode="float")),
    ]

    if polish_c is None:
        print("compiled kernel not built; timing the numpy fallback only")
    header = f"{'case':<26} {'batch':>6} {'numpy':>10} {'compiled':>10} {'speedup':>8} {'conv':>6}"
    print(header)
    print("-" * len(header))
    for name, fw in cases:
        for restarts in opts.restarts:
            args = build_problem(fw, restarts)
            t_py, ok_py = run(polish_py, args)
            if polish_c is None:
                print(f"{name:<26} {restarts:>6} {t_py * 1e3:>8.1f}ms {'-':>10} {'-':>8} {ok_py:>6}")
                continue
            t_c, ok_c = run(polish_c, args)
            if ok_py != ok_c:
                raise SystemExit(f"kernel disagreement on {name}: {ok_py} vs {ok_c} converged")
            print(
                f"{name:<26} {restarts:>6} {t_py * 1e3:>8.1f}ms {t_c * 1e3:>8.1f}ms "
                f"{t_py / t_c:>7.1f}x {ok_c:>6}"
            )


if __name__ == "__main__":
    main()
