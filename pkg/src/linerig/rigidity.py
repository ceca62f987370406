"""Frameworks on lines, their rigidity matrices, and exact rank tools.

A framework assigns every vertex a scalar parameter t_v, placing it at
base + t_v * direction on its line. Squared edge lengths are the
measurement. Two rigidity matrices are provided:

* the full matrix R with a row per edge (the usual bar-joint row) plus, for
  every vertex, the d-1 standard-form rows of its line, over d*n columns;
* the reduced matrix R' with one column per vertex and one row per edge.
  Its kernel equals the kernel of R under the per-vertex parameterisation.

On the exact path R' is built with direction-scaled entries
dir_u . (p(v) - p(u)), which are rational; that rescales rows and columns by
positive factors, so ranks, kernels and determinant signs are unaffected.
The float path uses the actual direction cosines.

Rank and determinant computations on the exact path clear denominators row
by row and run integer fraction-free (Bareiss) elimination; the float path
thresholds singular values at 1e-8 of the largest.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._numeric import dot, norm_sq, rref, to_number, vadd, vmul, vsub
from .linegeom import PARALLEL, LineSet
from .pgraph import PartitionedGraph, adjacency, components, lines_of


class MissingLine(ValueError):
    """A part index used by the graph has no line."""


class DegenerateEdge(ValueError):
    """An edge of the framework has coincident endpoints."""


class NotUnicyclic(ValueError):
    """The operation needs a connected graph with exactly one cycle."""


@dataclass(frozen=True)
class Framework:
    """A placement of a partitioned graph on its lines, one scalar per vertex."""

    graph: PartitionedGraph
    lines: LineSet
    t: tuple
    exact: bool


def framework(g: PartitionedGraph, lines: LineSet, t: Sequence) -> Framework:
    """Validated constructor."""
    if g.n and max(g.part) >= len(lines.lines):
        raise MissingLine(f"part {max(g.part)} has no line (got {len(lines.lines)})")
    t = tuple(to_number(x) for x in t)
    if len(t) != g.n:
        raise ValueError(f"need {g.n} parameters, got {len(t)}")
    exact = lines.exact and all(isinstance(x, Fraction) for x in t)
    if not exact:
        t = tuple(float(x) for x in t)
    return Framework(graph=g, lines=lines, t=t, exact=exact)


def position(fw: Framework, v: int) -> tuple:
    l = fw.lines[fw.graph.part[v]]
    return vadd(l.base, vmul(fw.t[v], l.direction))


def positions(fw: Framework) -> list:
    return [position(fw, v) for v in range(fw.graph.n)]


def random_generic_framework(
    g: PartitionedGraph, lines: LineSet, seed: int, mode: str = "exact"
) -> Framework:
    """Deterministic random placement emulating generic parameters.

    The exact mode draws integer parameters from [-10^6, 10^6]; the float
    mode draws uniformly from [-10, 10]. Placements with a degenerate edge
    are redrawn from the same stream.
    """
    if g.n and max(g.part) >= len(lines.lines):
        raise MissingLine(f"part {max(g.part)} has no line (got {len(lines.lines)})")
    rng = random.Random(seed)
    for _ in range(64):
        if mode == "exact":
            t = tuple(Fraction(rng.randint(-(10**6), 10**6)) for _ in range(g.n))
        elif mode == "float":
            t = tuple(rng.uniform(-10.0, 10.0) for _ in range(g.n))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        fw = framework(g, lines, t)
        pos = positions(fw)
        ok = True
        for u, v in g.edges:
            gap = norm_sq(vsub(pos[u], pos[v]))
            if (gap == 0) if fw.exact else (gap <= 1e-24):
                ok = False
                break
        if ok:
            return fw
    raise DegenerateEdge("could not draw a placement without degenerate edges")


def measurement(fw: Framework) -> tuple:
    """Squared edge lengths in canonical (sorted) edge order."""
    pos = positions(fw)
    return tuple(norm_sq(vsub(pos[u], pos[v])) for u, v in fw.graph.edges)


# ---------------------------------------------------------------------------
# matrices


def rigidity_matrix_full(fw: Framework) -> list:
    """Rows: one per edge, then d-1 line rows per vertex; d*n columns."""
    g, lines = fw.graph, fw.lines
    d, n = lines.dim, g.n
    pos = positions(fw)
    zero = Fraction(0) if fw.exact else 0.0
    rows = []
    for u, v in g.edges:
        row = [zero] * (d * n)
        duv = vsub(pos[u], pos[v])
        for i in range(d):
            row[d * u + i] = duv[i]
            row[d * v + i] = -duv[i]
        rows.append(row)
    for v in range(n):
        a = lines[g.part[v]].standard_a
        for arow in a:
            row = [zero] * (d * n)
            for i in range(d):
                row[d * v + i] = arow[i]
            rows.append(row)
    return rows


def rigidity_matrix_reduced(fw: Framework) -> list:
    """One row per edge over n columns.

    Exact frameworks get the direction-scaled rational entries; float
    frameworks get the genuine cosines of the angles between each edge and
    the two line directions at its endpoints.
    """
    g, lines = fw.graph, fw.lines
    pos = positions(fw)
    zero = Fraction(0) if fw.exact else 0.0
    rows = []
    for u, v in g.edges:
        duv = vsub(pos[v], pos[u])
        gap = norm_sq(duv)
        if (gap == 0) if fw.exact else (gap <= 1e-24):
            raise DegenerateEdge(f"edge ({u}, {v}) has coincident endpoints")
        row = [zero] * g.n
        du = lines[g.part[u]].direction
        dv = lines[g.part[v]].direction
        if fw.exact:
            row[u] = dot(du, duv)
            row[v] = -dot(dv, duv)
        else:
            length = math.sqrt(float(gap))
            row[u] = float(dot(du, duv)) / (length * math.sqrt(float(norm_sq(du))))
            row[v] = -float(dot(dv, duv)) / (length * math.sqrt(float(norm_sq(dv))))
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# exact linear algebra


def _clear_denominators(rows: Sequence[Sequence[Fraction]]) -> list:
    """Scale each row by a positive integer so all entries are ints."""
    out = []
    for row in rows:
        mult = 1
        for x in row:
            mult = mult * x.denominator // math.gcd(mult, x.denominator)
        out.append([int(x * mult) for x in row])
    return out


def rank_exact(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank by integer Bareiss elimination."""
    if not rows:
        return 0
    m = _clear_denominators(rows)
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def det_exact(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square matrix (Bareiss with row swaps)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    scale = Fraction(1)
    m = []
    for row in rows:
        mult = 1
        for x in row:
            mult = mult * x.denominator // math.gcd(mult, x.denominator)
        m.append([int(x * mult) for x in row])
        scale *= mult
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return Fraction(sign * m[n - 1][n - 1]) / scale


def nullspace_exact(rows: Sequence[Sequence[Fraction]], ncols: int) -> list:
    """Basis of the exact kernel as a list of Fraction tuples."""
    work = [list(r) for r in rows]
    reduced = rref(work, exact=True)
    pivots = []
    for row in reduced:
        col = next(i for i, x in enumerate(row) if x != 0)
        pivots.append(col)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(tuple(vec))
    return basis


def kernel_dimension(matrix, mode: str = "exact") -> int:
    """Kernel dimension of a matrix.

    ``matrix`` is either a numpy array (float mode) or a sequence of rows.
    The float path counts singular values above 1e-8 of the largest.
    """
    if mode == "exact":
        rows = [list(r) for r in matrix]
        if not rows:
            if hasattr(matrix, "shape"):
                return int(matrix.shape[1])
            raise ValueError("cannot infer the column count of an empty row list")
        return len(rows[0]) - rank_exact(rows)
    if mode == "float":
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2:
            raise ValueError("float kernel dimension needs a 2-d array")
        if a.shape[0] == 0 or a.shape[1] == 0:
            return int(a.shape[1])
        s = np.linalg.svd(a, compute_uv=False)
        rank = int(np.sum(s > 1e-8 * s[0]))
        return int(a.shape[1]) - rank
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# infinitesimal rigidity


@dataclass(frozen=True)
class RigidityReport:
    """Exact rank data for the best of several random placements."""

    rank: int  # rank of the full matrix R
    kernel_dim: int  # dim ker R == dim ker R'
    reduced_rank: int  # rank of R'
    parallel_regime: bool  # all lines met by the graph mutually parallel
    rigid: bool
    placement_seed: int


def _used_all_parallel(g: PartitionedGraph, lines: LineSet) -> bool:
    used = sorted(lines_of(g))
    if not used:
        return False  # empty framework: treat as the generic regime
    return all(
        lines.classification(i, j) == PARALLEL
        for a, i in enumerate(used)
        for j in used[a + 1 :]
    )


def infinitesimally_rigid(
    g: PartitionedGraph, lines: LineSet, trials: int = 5, seed: int = 0
) -> RigidityReport:
    """Decide infinitesimal rigidity by exact rank, maximised over placements.

    Up to ``trials`` integer placements are drawn; the maximal rank wins
    (random integer parameters can be unlucky, generic ones cannot). The
    framework is rigid when the kernel dimension is 1 in the all-parallel
    regime and 0 otherwise.
    """
    d, n = lines.dim, g.n
    parallel = _used_all_parallel(g, lines)
    if n == 0:
        return RigidityReport(0, 0, 0, parallel, True, seed)
    want_kernel = 1 if parallel else 0
    best: Optional[tuple] = None
    for i in range(trials):
        fw = random_generic_framework(g, lines, seed=seed + i, mode="exact")
        rank = rank_exact(rigidity_matrix_full(fw))
        if best is None or rank > best[1]:
            best = (i, rank, fw)
        if d * n - rank == want_kernel:
            break
    i, rank, fw = best
    reduced_rank = rank_exact(rigidity_matrix_reduced(fw)) if g.edges else 0
    kernel = d * n - rank
    return RigidityReport(
        rank=rank,
        kernel_dim=kernel,
        reduced_rank=reduced_rank,
        parallel_regime=parallel,
        rigid=kernel == want_kernel,
        placement_seed=seed + i,
    )


# ---------------------------------------------------------------------------
# unicyclic determinant identity


def _unicyclic_orientation(g: PartitionedGraph):
    """Cycle (as a vertex list) and the in-degree-one orientation.

    Returns (cycle_vertices, head, tail) where head/tail map each edge to
    its oriented endpoints: the cycle is oriented cyclically and all tree
    edges point away from it, giving every vertex exactly one incoming edge.
    """
    if len(components(g)) != 1 or len(g.edges) != g.n or g.n == 0:
        raise NotUnicyclic("need a connected graph with exactly one cycle")
    adj = adjacency(g)
    deg = [len(a) for a in adj]
    # peel leaves to expose the unique cycle
    queue = [v for v in range(g.n) if deg[v] == 1]
    removed = [False] * g.n
    while queue:
        v = queue.pop()
        removed[v] = True
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    queue.append(w)
    core = [v for v in range(g.n) if not removed[v]]
    start = min(core)
    cycle = [start]
    prev = None
    while True:
        v = cycle[-1]
        nxt = next(w for w in adj[v] if not removed[w] and w != prev)
        if nxt == start:
            break
        cycle.append(nxt)
        prev = v
    head = {}
    tail = {}
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        head[(min(a, b), max(a, b))] = b
        tail[(min(a, b), max(a, b))] = a
    # orient tree edges away from the cycle by BFS
    seen = set(cycle)
    frontier = list(cycle)
    while frontier:
        v = frontier.pop(0)
        for w in adj[v]:
            e = (min(v, w), max(v, w))
            if e in head or w in seen:
                continue
            head[e] = w
            tail[e] = v
            seen.add(w)
            frontier.append(w)
    return cycle, head, tail


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_expansion_check(fw: Framework, mode: str = "float") -> tuple:
    """Determinant of R' versus its closed-form expansion for unicyclic graphs.

    Returns (det, expansion). For a connected graph with exactly one cycle,
    fixing the in-degree-one orientation, the determinant factors into the
    product of the tree entries times the sum of the two cyclic products;
    the expansion carries the sign of the orientation's row-to-column
    assignment so the comparison is literal. When all cycle lines are
    parallel the two cyclic terms cancel and both sides vanish.
    """
    g = fw.graph
    cycle, head, tail = _unicyclic_orientation(g)
    if mode == "exact" and not fw.exact:
        raise ValueError("exact mode needs an exact framework")
    use_exact = mode == "exact"
    pos = positions(fw)
    lines = fw.lines

    def entry(at: int, other: int):
        du = lines[g.part[at]].direction
        diff = vsub(pos[other], pos[at])
        if use_exact:
            return dot(du, diff)
        gap = float(norm_sq(diff))
        if gap == 0.0:
            raise DegenerateEdge(f"edge ({at}, {other}) has coincident endpoints")
        return float(dot(du, diff)) / (math.sqrt(gap) * math.sqrt(float(norm_sq(du))))

    cyc_edges = {(min(a, b), max(a, b)) for a, b in zip(cycle, cycle[1:] + cycle[:1])}
    tree_prod = Fraction(1) if use_exact else 1.0
    fwd = Fraction(1) if use_exact else 1.0
    bwd = Fraction(1) if use_exact else 1.0
    for e in g.edges:
        h, t = head[e], tail[e]
        if e in cyc_edges:
            fwd *= entry(h, t)
            bwd *= entry(t, h)
        else:
            tree_prod *= entry(h, t)
    sign = _perm_sign([head[e] for e in g.edges])
    orient_sign = -1 if (len(cycle) - 1) % 2 else 1
    expansion = sign * tree_prod * (fwd + orient_sign * bwd)

    if use_exact:
        det = det_exact(rigidity_matrix_reduced(fw))
    else:
        det = float(np.linalg.det(np.asarray(rigidity_matrix_reduced(fw), dtype=float)))
    return det, expansion
