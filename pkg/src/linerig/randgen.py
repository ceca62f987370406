"""Seeded rejection samplers for lines, graphs, and whole instances.

Everything here is deterministic in (arguments, seed). Lines are sampled
with small integer data so that all downstream geometry stays exact.
"""

from __future__ import annotations

import random
from typing import Optional, Tuple

from .characterize import GlobalCertificate, is_generically_globally_rigid
from .linegeom import LineSet, is_general_position, line_from_point_direction
from .pgraph import PartitionedGraph, is_crossing, partitioned_graph

BASE_RANGE = 9
DIR_RANGE = 5


class SamplingBudgetExceeded(RuntimeError):
    """Rejection sampling ran out of attempts."""


def random_line(d: int, rng: random.Random):
    base = tuple(rng.randint(-BASE_RANGE, BASE_RANGE) for _ in range(d))
    while True:
        direction = tuple(rng.randint(-DIR_RANGE, DIR_RANGE) for _ in range(d))
        if any(direction):
            return line_from_point_direction(base, direction)


def random_general_lines(k: int, d: int, rng: random.Random, budget: int = 1000) -> LineSet:
    """k integer lines in general position, by whole-set rejection."""
    for _ in range(budget):
        ls = LineSet([random_line(d, rng) for _ in range(k)])
        if is_general_position(ls) is True:
            return ls
    raise SamplingBudgetExceeded(
        f"no general-position set of {k} lines in dimension {d} after {budget} draws"
    )


def random_parallel_lines(k: int, d: int, rng: random.Random, budget: int = 1000) -> LineSet:
    """k distinct mutually parallel integer lines."""
    for _ in range(budget):
        direction = tuple(rng.randint(-DIR_RANGE, DIR_RANGE) for _ in range(d))
        if not any(direction):
            continue
        lines = [
            line_from_point_direction(
                tuple(rng.randint(-BASE_RANGE, BASE_RANGE) for _ in range(d)), direction
            )
            for _ in range(k)
        ]
        if len(set(lines)) == k:
            return LineSet(lines)
    raise SamplingBudgetExceeded(f"no {k} distinct parallel lines after {budget} draws")


def random_graph(
    n: int,
    k: int,
    rng: random.Random,
    p: float = 0.5,
    require_crossing: bool = True,
    budget: int = 1000,
) -> PartitionedGraph:
    """G(n, p) with parts drawn uniformly from range(k).

    With ``require_crossing`` the draw repeats until the vertex set meets
    at least two parts (impossible for k < 2 or n < 1, so switch it off
    there).
    """
    for _ in range(budget):
        part = tuple(rng.randrange(k) for _ in range(n))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = partitioned_graph(n, part, edges)
        if not require_crossing or is_crossing(g):
            return g
    raise SamplingBudgetExceeded(f"no crossing graph on {n} vertices after {budget} draws")


def random_instance(
    n: int, k: int, d: int, seed: int, p: float = 0.5
) -> Tuple[PartitionedGraph, LineSet]:
    """A random crossing graph (when possible) plus general-position lines."""
    rng = random.Random(seed)
    require = k >= 2 and n >= 2
    g = random_graph(n, k, rng, p=p, require_crossing=require)
    ls = random_general_lines(k, d, rng)
    return g, ls


def random_decided_instance(
    n: int,
    k: int,
    d: int,
    seed: int,
    want_yes: bool,
    p: float = 0.5,
    budget: int = 5000,
) -> Tuple[PartitionedGraph, LineSet, GlobalCertificate]:
    """Resample instances until the global verdict matches ``want_yes``.

    Instances whose verdict is undefined (non-crossing graphs) never match.
    Returns the certificate alongside so callers need not redecide.
    """
    for attempt in range(budget):
        g, ls = random_instance(n, k, d, seed * 1_000_003 + attempt, p=p)
        if not is_crossing(g):
            continue
        cert = is_generically_globally_rigid(g, ls)
        if cert.decision == want_yes:
            return g, ls, cert
    want = "YES" if want_yes else "NO"
    raise SamplingBudgetExceeded(f"no {want} instance with n={n}, k={k} in {budget} draws")
