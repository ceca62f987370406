"""Deciders and constructive certificates for global rigidity on lines.

Rigidity of a partitioned graph is purely combinatorial here: when all the
used lines are pairwise parallel it is plain connectivity, otherwise every
component must contain a cycle through an edge whose endpoint lines are not
parallel. Global rigidity (general-position lines, crossing graph) is the
conjunction of partition-connectivity and redundant rigidity, and a YES
answer comes with a construction that third parties can replay: a base
subgraph that is a figure-eight, dumbbell or theta, open-ear additions, and
gluings whose side conditions are re-checked at every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linegeom import PARALLEL, LineSet, is_general_position
from .pgraph import (
    PartitionedGraph,
    Subgraph,
    _block_tree_path,
    _blocks_edge_stack,
    _components_of,
    _norm_edge,
    _shortest_path_avoiding,
    adjacency,
    as_subgraph,
    components,
    disjoint_union,
    glue_at_vertex,
    induced_subgraph,
    is_crossing,
    is_two_connected,
    lines_of,
    open_ear_decomposition,
    replay_ears,
    subdivide,
    subgraph_adjacency,
    subgraph_blocks,
)
from .rigidity import MissingLine, _used_all_parallel


class NotGeneralPosition(ValueError):
    """The line set breaks the general position assumptions."""

    def __init__(self, violation):
        super().__init__(f"line set is not in general position: {violation.kind} pair/triple {violation.lines}")
        self.violation = violation


class NotCrossing(ValueError):
    """The graph must touch at least two parts."""


class HypothesesViolated(ValueError):
    """The operation's combinatorial hypotheses do not hold for this input."""


class InternalInconsistency(RuntimeError):
    """A certificate failed to replay or a guaranteed search came up empty.

    Reaching this on an input that satisfies the documented preconditions
    indicates a bug, not a user error.
    """


# ---------------------------------------------------------------------------
# rigidity


@dataclass(frozen=True)
class ConnectivityWitness:
    """Spanning tree certifying rigidity in the all-parallel regime."""

    tree_edges: tuple


@dataclass(frozen=True)
class CycleWitness:
    """One component's crossing cycle: the cycle and its designated edge."""

    component: tuple
    cycle: tuple
    edge: tuple


@dataclass(frozen=True)
class RigidityVerdict:
    rigid: bool
    regime: str  # "parallel" | "general"
    witnesses: tuple
    failing_component: Optional[tuple]


def _check_lines_cover(g: PartitionedGraph, lines: LineSet) -> None:
    if g.n and max(g.part) >= len(lines):
        raise MissingLine(f"part {max(g.part)} has no line (only {len(lines)} given)")


def _cycle_through_edge(adj: dict, e: tuple, avoid: tuple = ()) -> Optional[tuple]:
    """Vertex tuple of a cycle through edge e avoiding the given edges."""
    drop = {e}
    drop.update(avoid)
    adj2 = {v: [w for w in nbrs if _norm_edge(v, w) not in drop] for v, nbrs in adj.items()}
    try:
        path = _shortest_path_avoiding(adj2, e[1], {e[0]}, forbidden=set())
    except ValueError:
        return None
    return tuple(path)


def is_rigid(g: PartitionedGraph, lines: LineSet) -> RigidityVerdict:
    """Decide rigidity combinatorially.

    All used lines parallel: rigid iff connected, witnessed by a spanning
    tree. Otherwise: rigid iff every component contains a cycle through an
    edge whose endpoint lines are not parallel, witnessed per component by
    the smallest such non-bridge edge and a cycle through it.

    Args:
        g: the partitioned graph.
        lines: the line set the parts refer to.

    Returns:
        A RigidityVerdict; ``failing_component`` is set on the NO side.

    Raises:
        MissingLine: some part index has no line.
    """
    _check_lines_cover(g, lines)
    comps = components(g)
    if _used_all_parallel(g, lines):
        if len(comps) > 1:
            return RigidityVerdict(False, "parallel", (), comps[0])
        tree = []
        if g.n:
            adj = adjacency(g)
            seen = {0}
            queue = [0]
            while queue:
                v = queue.pop(0)
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        tree.append(_norm_edge(v, w))
                        queue.append(w)
        witness = ConnectivityWitness(tuple(sorted(tree)))
        return RigidityVerdict(True, "parallel", (witness,), None)

    adj = {v: nb for v, nb in enumerate(adjacency(g))}
    raw, _ = _blocks_edge_stack(range(g.n), adj)
    brs = {blk[0] for blk in raw if len(blk) == 1}
    witnesses = []
    for comp in comps:
        compset = set(comp)
        chosen = None
        for e in g.edges:
            if e[0] not in compset or e in brs:
                continue
            pu, pv = g.part[e[0]], g.part[e[1]]
            if pu == pv or lines.classification(pu, pv) == PARALLEL:
                continue
            chosen = e
            break
        if chosen is None:
            return RigidityVerdict(False, "general", tuple(witnesses), comp)
        cycle = _cycle_through_edge(adj, chosen)
        if cycle is None:  # unreachable: chosen is not a bridge
            raise InternalInconsistency(f"edge {chosen} is not a bridge yet has no cycle")
        witnesses.append(CycleWitness(comp, cycle, chosen))
    return RigidityVerdict(True, "general", tuple(witnesses), None)


@dataclass(frozen=True)
class RedundancyReport:
    redundant: bool
    failing_edge: Optional[tuple]
    failing_component: Optional[tuple]


def is_redundantly_rigid(g: PartitionedGraph, lines: LineSet) -> RedundancyReport:
    """Whether g stays rigid after deleting any single edge.

    Returns the first failing edge (in sorted edge order) and the component
    of the deleted graph that lost its crossing cycle or got disconnected.
    """
    _check_lines_cover(g, lines)
    for e in g.edges:
        rest = tuple(e2 for e2 in g.edges if e2 != e)
        verdict = is_rigid(PartitionedGraph(g.n, g.part, rest), lines)
        if not verdict.rigid:
            return RedundancyReport(False, e, verdict.failing_component)
    return RedundancyReport(True, None, None)


# ---------------------------------------------------------------------------
# partition-connectivity


@dataclass(frozen=True)
class PartitionViolation:
    """Why partition-connectivity fails.

    rule "component": a proper connected component meets fewer than 3 parts.
    rule "cut": removing ``vertex`` leaves ``component`` on fewer than 2.
    """

    rule: str
    vertex: Optional[int]
    component: tuple


@dataclass(frozen=True)
class PartitionReport:
    connected: bool
    violation: Optional[PartitionViolation]


def is_partition_connected(g: PartitionedGraph) -> PartitionReport:
    """Decide partition-connectivity from the part map alone.

    Requires (a) every proper connected component to meet at least three
    parts and (b) for every vertex v, every component of G - v to meet at
    least two. Reports the first violation found.
    """
    comps = components(g)
    if len(comps) > 1:
        for comp in comps:
            if len(lines_of(g, comp)) < 3:
                return PartitionReport(False, PartitionViolation("component", None, comp))
    adj = adjacency(g)
    for v in range(g.n):
        adjd = {u: [w for w in adj[u] if w != v] for u in range(g.n) if u != v}
        for comp in _components_of(adjd.keys(), adjd):
            if len(lines_of(g, comp)) < 2:
                return PartitionReport(False, PartitionViolation("cut", v, comp))
    return PartitionReport(True, None)


# ---------------------------------------------------------------------------
# core witnesses: figure-eight, dumbbell, theta


@dataclass(frozen=True)
class CoreWitness:
    """A figure-eight, dumbbell or theta subgraph with its designated edges.

    figure_eight: two cycles sharing exactly one vertex; each crossing edge
    lives on its cycle and avoids the shared vertex. dumbbell: two disjoint
    cycles joined by ``path`` meeting each cycle only at an endpoint; each
    crossing edge avoids its cycle's endpoint. theta: one cycle plus
    ``path`` whose interior avoids the cycle; the two cycle arcs between the
    path's endpoints each hold one of the two (vertex-disjoint) crossing
    edges.
    """

    kind: str  # "figure_eight" | "dumbbell" | "theta"
    cycles: tuple
    path: Optional[tuple]
    crossing_edges: tuple


def _path_edge_set(path) -> set:
    return {_norm_edge(a, b) for a, b in zip(path, path[1:])}


def _cycle_edge_set(cycle) -> set:
    out = _path_edge_set(cycle)
    out.add(_norm_edge(cycle[-1], cycle[0]))
    return out


def _cycle_arcs(cycle: tuple, a: int, b: int) -> tuple:
    """The two arcs of the cycle between a and b, each as a path a..b."""
    k = len(cycle)
    i, j = cycle.index(a), cycle.index(b)
    d1 = (j - i) % k
    arc1 = tuple(cycle[(i + s) % k] for s in range(d1 + 1))
    d2 = (i - j) % k
    arc2 = tuple(cycle[(i - s) % k] for s in range(d2 + 1))
    return arc1, arc2


def witness_subgraph(w: CoreWitness) -> Subgraph:
    """The subgraph a witness spans (no validity checking)."""
    vs: set = set()
    es: set = set()
    for cyc in w.cycles:
        vs.update(cyc)
        es.update(_cycle_edge_set(cyc))
    if w.path is not None:
        vs.update(w.path)
        es.update(_path_edge_set(w.path))
    return Subgraph(frozenset(vs), frozenset(es))


def validate_witness(g: PartitionedGraph, w: CoreWitness) -> Subgraph:
    """Check every structural condition of a witness against g.

    Returns the witness subgraph on success and raises
    InternalInconsistency otherwise.
    """

    def chk(cond: bool, msg: str) -> None:
        if not cond:
            raise InternalInconsistency(f"bad {w.kind} witness: {msg}")

    gedges = set(g.edges)

    def cycle_ok(cyc) -> None:
        chk(len(cyc) >= 3, f"cycle {cyc} is too short")
        chk(len(set(cyc)) == len(cyc), f"cycle {cyc} repeats a vertex")
        chk(all(0 <= x < g.n for x in cyc), f"cycle {cyc} leaves the vertex range")
        chk(_cycle_edge_set(cyc) <= gedges, f"cycle {cyc} uses a missing edge")

    def crossing_ok(e) -> None:
        chk(tuple(e) in gedges, f"edge {e} is not in the graph")
        chk(g.part[e[0]] != g.part[e[1]], f"edge {e} is not crossing")

    def path_ok(path) -> None:
        chk(len(path) >= 2, f"path {path} has no edge")
        chk(len(set(path)) == len(path), f"path {path} repeats a vertex")
        chk(all(0 <= x < g.n for x in path), f"path {path} leaves the vertex range")
        chk(_path_edge_set(path) <= gedges, f"path {path} uses a missing edge")

    chk(len(w.crossing_edges) == 2, "exactly two designated edges are needed")
    e, f = (tuple(x) for x in w.crossing_edges)
    crossing_ok(e)
    crossing_ok(f)

    if w.kind == "figure_eight":
        chk(len(w.cycles) == 2 and w.path is None, "needs two cycles and no path")
        c1, c2 = w.cycles
        cycle_ok(c1)
        cycle_ok(c2)
        shared = set(c1) & set(c2)
        chk(len(shared) == 1, "the cycles must share exactly one vertex")
        x = shared.pop()
        chk(e in _cycle_edge_set(c1), "first edge must lie on the first cycle")
        chk(f in _cycle_edge_set(c2), "second edge must lie on the second cycle")
        chk(x not in e and x not in f, "designated edges must avoid the shared vertex")
    elif w.kind == "dumbbell":
        chk(len(w.cycles) == 2 and w.path is not None, "needs two cycles and a path")
        c1, c2 = w.cycles
        cycle_ok(c1)
        cycle_ok(c2)
        chk(not (set(c1) & set(c2)), "the cycles must be disjoint")
        path_ok(w.path)
        a, b = w.path[0], w.path[-1]
        chk(a in set(c1), "path must start on the first cycle")
        chk(b in set(c2), "path must end on the second cycle")
        chk(set(w.path) & set(c1) == {a}, "path may meet the first cycle only at its start")
        chk(set(w.path) & set(c2) == {b}, "path may meet the second cycle only at its end")
        chk(e in _cycle_edge_set(c1) and a not in e, "first edge must lie on cycle one away from the path")
        chk(f in _cycle_edge_set(c2) and b not in f, "second edge must lie on cycle two away from the path")
    elif w.kind == "theta":
        chk(len(w.cycles) == 1 and w.path is not None, "needs one cycle and a path")
        (cyc,) = w.cycles
        cycle_ok(cyc)
        path_ok(w.path)
        v1, v2 = w.path[0], w.path[-1]
        cset = set(cyc)
        chk(v1 in cset and v2 in cset and v1 != v2, "path endpoints must be two cycle vertices")
        chk(set(w.path) & cset == {v1, v2}, "path interior must avoid the cycle")
        chk(not (set(e) & set(f)), "designated edges must be vertex disjoint")
        ce = _cycle_edge_set(cyc)
        chk(e in ce and f in ce, "both edges must lie on the cycle")
        chk(not (_path_edge_set(w.path) & ce), "path may not reuse a cycle edge")
        arc1, arc2 = _cycle_arcs(cyc, v1, v2)
        a1e, a2e = _path_edge_set(arc1), _path_edge_set(arc2)
        chk(
            (e in a1e and f in a2e) or (e in a2e and f in a1e),
            "each cycle arc between the path endpoints must hold one designated edge",
        )
    else:
        chk(False, f"unknown kind {w.kind!r}")
    return witness_subgraph(w)


# ---------------------------------------------------------------------------
# theta search in a 2-connected graph


def _adj_minus(adj: dict, drop) -> dict:
    dropped = set(drop)
    return {v: [w for w in nbrs if _norm_edge(v, w) not in dropped] for v, nbrs in adj.items()}


def _path_between_sets(adj: dict, sources: set, targets: set) -> Optional[list]:
    """Shortest path from any source to any target; interior avoids both."""
    prev: dict = {}
    queue = []
    for s in sorted(sources):
        prev[s] = None
        queue.append(s)
    hit = None
    while queue:
        v = queue.pop(0)
        if v in targets:
            hit = v
            break
        for w in adj[v]:
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if hit is None:
        return None
    path = []
    v = hit
    while v is not None:
        path.append(v)
        v = prev[v]
    path.reverse()
    return path


def _two_disjoint_paths(adj: dict, u: int, v: int, targets: set):
    """Fully vertex-disjoint paths from u and v into ``targets``.

    Each path meets the target set exactly in its final vertex. Classic
    unit-capacity flow on the vertex-split digraph; returns None when no
    such pair exists.
    """
    src, snk = ("s",), ("t",)
    fwd: dict = {src: [(u, 0), (v, 0)], snk: []}
    rev: dict = {src: [], snk: []}
    for x in adj:
        fwd[(x, 0)] = []
        fwd[(x, 1)] = []
        rev[(x, 0)] = []
        rev[(x, 1)] = []
    for b in (u, v):
        rev[(b, 0)].append(src)
    for x in sorted(adj):
        if x in targets:
            fwd[(x, 0)].append(snk)
            rev[snk].append((x, 0))
        else:
            fwd[(x, 0)].append((x, 1))
            rev[(x, 1)].append((x, 0))
        for y in sorted(adj[x]):
            fwd[(x, 1)].append((y, 0))
            rev[(y, 0)].append((x, 1))
    flow: dict = {}

    def augment() -> bool:
        prevmap = {src: None}
        queue = [src]
        while queue:
            a = queue.pop(0)
            if a == snk:
                break
            for b in fwd[a]:
                if b not in prevmap and flow.get((a, b), 0) == 0:
                    prevmap[b] = (a, 1)
                    queue.append(b)
            for b in rev[a]:
                if b not in prevmap and flow.get((b, a), 0) == 1:
                    prevmap[b] = (a, -1)
                    queue.append(b)
        if snk not in prevmap:
            return False
        node = snk
        while node != src:
            a, sgn = prevmap[node]
            if sgn > 0:
                flow[(a, node)] = 1
            else:
                flow[(node, a)] = 0
            node = a
        return True

    if not (augment() and augment()):
        return None

    def walk(start: int) -> list:
        path = [start]
        cur = (start, 0)
        while True:
            nxt = None
            for b in fwd[cur]:
                if flow.get((cur, b), 0) == 1:
                    nxt = b
                    break
            flow[(cur, nxt)] = 0
            if nxt == snk:
                return path
            if nxt[1] == 0:
                path.append(nxt[0])
            cur = nxt

    return walk(u), walk(v)


def _theta_from_attachment(D: tuple, Q: tuple, e: tuple, f: tuple) -> CoreWitness:
    """Assemble a theta from cycle D and a path Q through e attached to it."""
    v1, v2 = Q[0], Q[-1]
    arc1, arc2 = _cycle_arcs(D, v1, v2)
    if f in _path_edge_set(arc1):
        arc_f, arc_p = arc1, arc2
    else:
        arc_f, arc_p = arc2, arc1
    cyc = tuple(Q) + tuple(reversed(arc_f[1:-1]))
    return CoreWitness("theta", (cyc,), tuple(arc_p), (e, f))


def _theta_with_cycle(adj: dict, e: tuple, f: tuple, D: tuple) -> CoreWitness:
    """Theta from a cycle D through f that avoids e, by e's position."""
    Dv = set(D)
    u, v = e
    if u in Dv and v in Dv:
        Q: tuple = (u, v)
    elif u in Dv or v in Dv:
        on, off = (u, v) if u in Dv else (v, u)
        try:
            path = _shortest_path_avoiding(adj, off, Dv - {on}, forbidden={on})
        except ValueError:
            raise InternalInconsistency("2-connectivity should route around one vertex")
        Q = (on,) + tuple(path)
    else:
        got = _two_disjoint_paths(adj, u, v, Dv)
        if got is None:
            raise InternalInconsistency("2-connectivity should give two disjoint paths to a cycle")
        pu, pv = got
        Q = tuple(reversed(pu)) + tuple(pv)
    return _theta_from_attachment(D, Q, e, f)


def _theta_common_cycle(adj: dict, vertices, e: tuple, f: tuple, D: tuple) -> CoreWitness:
    """Theta when every cycle through f also uses e: D holds both."""
    k = len(D)
    cyc_edges = [_norm_edge(D[i], D[(i + 1) % k]) for i in range(k)]
    ie, jf = cyc_edges.index(e), cyc_edges.index(f)
    n1 = (jf - ie) % k
    arc_a = tuple(D[(ie + 1 + s) % k] for s in range(n1))
    n2 = (ie - jf) % k
    arc_b = tuple(D[(jf + 1 + s) % k] for s in range(n2))
    path = _path_between_sets(_adj_minus(adj, (e, f)), set(arc_a), set(arc_b))
    if path is None:
        raise InternalInconsistency("connectivity after removing both edges was checked")
    return CoreWitness("theta", (tuple(D),), tuple(path), (e, f))


def _theta_core(part: tuple, sub: Subgraph) -> CoreWitness:
    """Find a theta witness in a 2-connected subgraph (hypotheses assumed)."""
    adj = subgraph_adjacency(sub)
    cross = [e for e in sorted(sub.edges) if part[e[0]] != part[e[1]]]
    for e in cross:
        for f in cross:
            if e == f or (set(e) & set(f)):
                continue
            D = _cycle_through_edge(adj, f, avoid=(e,))
            if D is None:
                continue
            return _theta_with_cycle(adj, e, f, D)
    for i, e in enumerate(cross):
        for f in cross[i + 1 :]:
            if set(e) & set(f):
                continue
            D = _cycle_through_edge(adj, f)
            if D is None or e not in _cycle_edge_set(D):
                continue
            if len(_components_of(sub.vertices, _adj_minus(adj, (e, f)))) != 1:
                continue
            return _theta_common_cycle(adj, sub.vertices, e, f, D)
    raise InternalInconsistency("no theta subgraph found although the hypotheses hold")


def _component_without_crossing_cycle(n: int, part: tuple, edges: tuple) -> Optional[tuple]:
    """First component (by minimum vertex) lacking a crossing cycle."""
    adj: dict = {x: [] for x in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    raw, _ = _blocks_edge_stack(range(n), adj)
    brs = {blk[0] for blk in raw if len(blk) == 1}
    for comp in _components_of(range(n), adj):
        cs = set(comp)
        ok = any(
            e[0] in cs and part[e[0]] != part[e[1]] and e not in brs
            for e in edges
        )
        if not ok:
            return comp
    return None


def find_theta_witness(g: PartitionedGraph) -> CoreWitness:
    """Search a theta subgraph in a qualifying 2-connected graph.

    The hypotheses are checked first: g must be 2-connected,
    partition-connected, and deleting any single edge must leave a crossing
    cycle in every component. Under them a theta always exists; failing to
    find one raises InternalInconsistency (a bug, not an input error).

    Raises:
        HypothesesViolated: some hypothesis fails for g.
    """
    sub = as_subgraph(g)
    if not is_two_connected(sub) or len(sub.vertices) < 3:
        raise HypothesesViolated("theta search needs a 2-connected graph on 3+ vertices")
    pc = is_partition_connected(g)
    if not pc.connected:
        raise HypothesesViolated(f"theta search needs partition-connectivity ({pc.violation})")
    for e in g.edges:
        rest = tuple(e2 for e2 in g.edges if e2 != e)
        bad = _component_without_crossing_cycle(g.n, g.part, rest)
        if bad is not None:
            raise HypothesesViolated(
                f"theta search needs redundancy: deleting {e} strands component {bad}"
            )
    w = _theta_core(g.part, sub)
    validate_witness(g, w)
    return w


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class PieceCertificate:
    """One leaf-to-leaf block path: its blocks, base witness and ears."""

    blocks: tuple  # sorted vertex tuples, in path order
    base: CoreWitness
    ears: tuple


@dataclass(frozen=True)
class ComponentCertificate:
    """Construction for one connected component.

    kind "two_connected": grow ``base`` by ``ears`` to the component.
    kind "block_cover": pieces are leaf-to-leaf block paths sharing the
    first leaf block; their union is the component.
    """

    vertices: tuple
    kind: str  # "two_connected" | "block_cover"
    base: Optional[CoreWitness]
    ears: tuple
    pieces: tuple


@dataclass(frozen=True)
class Construction:
    components: tuple


@dataclass(frozen=True)
class NecessityViolation:
    """Which necessary condition failed, with its witness."""

    kind: str  # "not_partition_connected" | "not_redundantly_rigid"
    rule: Optional[str]
    vertex: Optional[int]
    edge: Optional[tuple]
    component: Optional[tuple]


@dataclass(frozen=True)
class GlobalCertificate:
    decision: bool
    violation: Optional[NecessityViolation]
    construction: Optional[Construction]


def _leaf_cycle_edge(part: tuple, block, vcut: int) -> tuple:
    """Smallest crossing edge of a leaf block avoiding its cutvertex."""
    for e in sorted(block.edges):
        if vcut in e:
            continue
        if part[e[0]] != part[e[1]]:
            return e
    raise InternalInconsistency(
        f"leaf block {sorted(block.vertices)} has no crossing edge away from vertex {vcut}"
    )


def _cycle_in_block(block, e: tuple) -> tuple:
    adj = subgraph_adjacency(Subgraph(block.vertices, block.edges))
    cyc = _cycle_through_edge(adj, e)
    if cyc is None:
        raise InternalInconsistency(f"edge {e} lies on no cycle of its block")
    return cyc


def _dumbbell_base(part: tuple, piece: Subgraph, CL: tuple, CK: tuple) -> CoreWitness:
    """Two disjoint cycles joined by a path avoiding both, endpoints valid."""
    adj = subgraph_adjacency(piece)
    clv, ckv = set(CL), set(CK)
    cross_l = [e for e in sorted(_cycle_edge_set(CL)) if part[e[0]] != part[e[1]]]
    cross_k = [e for e in sorted(_cycle_edge_set(CK)) if part[e[0]] != part[e[1]]]
    for a in sorted(clv):
        ea = [e for e in cross_l if a not in e]
        if not ea:
            continue
        for b in sorted(ckv):
            eb = [e for e in cross_k if b not in e]
            if not eb:
                continue
            forbidden = (clv | ckv) - {a, b}
            try:
                path = _shortest_path_avoiding(adj, a, {b}, forbidden=forbidden)
            except ValueError:
                continue
            return CoreWitness("dumbbell", (CL, CK), tuple(path), (ea[0], eb[0]))
    raise InternalInconsistency("no valid connecting path between the two leaf cycles")


def _certify_piece(g: PartitionedGraph, forest, leaf_a: int, leaf_b: int) -> PieceCertificate:
    idxs = _block_tree_path(forest, leaf_a, leaf_b)
    blks = [forest.blocks[i] for i in idxs]
    cuts = []
    for i in range(len(blks) - 1):
        shared = blks[i].vertices & blks[i + 1].vertices
        if len(shared) != 1:
            raise InternalInconsistency("consecutive path blocks must share one cutvertex")
        cuts.append(next(iter(shared)))
    first, last = blks[0], blks[-1]
    e_l = _leaf_cycle_edge(g.part, first, cuts[0])
    e_k = _leaf_cycle_edge(g.part, last, cuts[-1])
    cyc_l = _cycle_in_block(first, e_l)
    cyc_k = _cycle_in_block(last, e_k)

    piece = Subgraph(frozenset(), frozenset())
    for b in blks:
        piece = piece.union(Subgraph(b.vertices, b.edges))

    shared_cyc = set(cyc_l) & set(cyc_k)
    if shared_cyc:
        x = shared_cyc.pop()
        if shared_cyc or x != cuts[0] or len(blks) != 2:
            raise InternalInconsistency("leaf cycles may only meet in the single cutvertex")
        base = CoreWitness("figure_eight", (cyc_l, cyc_k), None, (e_l, e_k))
    else:
        base = _dumbbell_base(g.part, piece, cyc_l, cyc_k)
    bsub = validate_witness(g, base)

    ears: list = []
    for b in blks:
        whole = Subgraph(b.vertices, b.edges)
        start = Subgraph(b.vertices & bsub.vertices, b.edges & bsub.edges)
        if not start.edges:
            raise InternalInconsistency("every path block must meet the base in an edge")
        if start.vertices == whole.vertices and start.edges == whole.edges:
            continue
        ears.extend(open_ear_decomposition(whole, start).ears)
    return PieceCertificate(
        blocks=tuple(tuple(sorted(b.vertices)) for b in blks),
        base=base,
        ears=tuple(ears),
    )


def _certify_component(g: PartitionedGraph, comp: tuple) -> ComponentCertificate:
    sub = induced_subgraph(g, comp)
    if len(comp) >= 3 and is_two_connected(sub):
        w = _theta_core(g.part, sub)
        bsub = validate_witness(g, w)
        ears = open_ear_decomposition(sub, bsub).ears
        return ComponentCertificate(comp, "two_connected", w, ears, ())
    forest = subgraph_blocks(sub)
    leaves = forest.leaf_blocks()
    if len(leaves) < 2:
        raise InternalInconsistency(
            f"component {comp} is neither 2-connected nor multi-block"
        )
    pieces = tuple(_certify_piece(g, forest, leaves[0], lb) for lb in leaves[1:])
    return ComponentCertificate(comp, "block_cover", None, (), pieces)


def _build_construction(g: PartitionedGraph) -> Construction:
    return Construction(tuple(_certify_component(g, c) for c in components(g)))


def replay(g: PartitionedGraph, construction: Construction) -> None:
    """Re-validate a construction step by step against g.

    Checks every base witness, every ear, every gluing side condition, and
    that the final union is exactly g. Raises InternalInconsistency on the
    first failure; returns None when the certificate is sound.
    """
    comps = components(g)
    if len(construction.components) != len(comps):
        raise InternalInconsistency("certificate component count differs from the graph")
    total = Subgraph(frozenset(), frozenset())
    for cert, comp in zip(construction.components, comps):
        if tuple(cert.vertices) != comp:
            raise InternalInconsistency(f"certificate lists component {cert.vertices}, graph has {comp}")
        target = induced_subgraph(g, comp)
        try:
            if cert.kind == "two_connected":
                if cert.base is None:
                    raise InternalInconsistency("a 2-connected certificate needs a base witness")
                got = replay_ears(validate_witness(g, cert.base), cert.ears)
            elif cert.kind == "block_cover":
                if not cert.pieces:
                    raise InternalInconsistency("a block-cover certificate needs pieces")
                got = None
                for piece in cert.pieces:
                    psub = replay_ears(validate_witness(g, piece.base), piece.ears)
                    if got is None:
                        got = psub
                    elif got.vertices & psub.vertices:
                        got = got.union(psub)
                    else:
                        raise InternalInconsistency("pieces of one component must overlap")
            else:
                raise InternalInconsistency(f"unknown certificate kind {cert.kind!r}")
        except ValueError as exc:  # replay_ears signals malformed ears this way
            raise InternalInconsistency(f"ear replay failed: {exc}") from exc
        if got.vertices != target.vertices or got.edges != target.edges:
            raise InternalInconsistency(f"component {comp} was not rebuilt exactly")
        if total.vertices:
            if len(lines_of(g, total.vertices)) < 3 or len(lines_of(g, comp)) < 3:
                raise InternalInconsistency("gluing disjoint parts needs three lines on each side")
        total = total.union(got)
    full = as_subgraph(g)
    if total.vertices != full.vertices or total.edges != full.edges:
        raise InternalInconsistency("certificate does not rebuild the whole graph")


def is_generically_globally_rigid(g: PartitionedGraph, lines: LineSet) -> GlobalCertificate:
    """Decide generic global rigidity and certify the answer.

    The decision is partition-connectivity plus redundant rigidity. On YES
    the returned certificate carries a construction that has already been
    replayed once; on NO it carries the violated necessary condition.

    Args:
        g: a crossing partitioned graph.
        lines: the line set, which must be in general position.

    Raises:
        NotGeneralPosition: the line set breaks general position.
        NotCrossing: g does not touch two parts.
        MissingLine: some part has no line.
    """
    _check_lines_cover(g, lines)
    gp = is_general_position(lines)
    if gp is not True:
        raise NotGeneralPosition(gp)
    if not is_crossing(g):
        raise NotCrossing("global rigidity needs vertices on at least two parts")
    pc = is_partition_connected(g)
    if not pc.connected:
        v = pc.violation
        return GlobalCertificate(
            False,
            NecessityViolation("not_partition_connected", v.rule, v.vertex, None, v.component),
            None,
        )
    rr = is_redundantly_rigid(g, lines)
    if not rr.redundant:
        return GlobalCertificate(
            False,
            NecessityViolation("not_redundantly_rigid", None, None, rr.failing_edge, rr.failing_component),
            None,
        )
    cons = _build_construction(g)
    replay(g, cons)
    return GlobalCertificate(True, None, cons)


def certify(g: PartitionedGraph, lines: LineSet) -> Construction:
    """Build the replayable construction for a YES instance.

    Raises HypothesesViolated when the instance is not globally rigid.
    """
    cert = is_generically_globally_rigid(g, lines)
    if not cert.decision:
        raise HypothesesViolated(f"not globally rigid: {cert.violation}")
    return cert.construction


# ---------------------------------------------------------------------------
# JSON round trip


def witness_to_json(w: CoreWitness) -> dict:
    return {
        "kind": w.kind,
        "cycles": [list(c) for c in w.cycles],
        "path": list(w.path) if w.path is not None else None,
        "crossing_edges": [list(e) for e in w.crossing_edges],
    }


def witness_from_json(obj: dict) -> CoreWitness:
    try:
        kind = obj["kind"]
        cycles = tuple(tuple(int(x) for x in c) for c in obj["cycles"])
        path = obj["path"]
        if path is not None:
            path = tuple(int(x) for x in path)
        edges = tuple(_norm_edge(int(e[0]), int(e[1])) for e in obj["crossing_edges"])
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed witness object: {exc}") from exc
    return CoreWitness(kind, cycles, path, edges)


def construction_to_json(cons: Construction) -> dict:
    out = []
    for cert in cons.components:
        entry: dict = {"vertices": list(cert.vertices), "kind": cert.kind}
        if cert.kind == "two_connected":
            entry["base"] = witness_to_json(cert.base)
            entry["ears"] = [list(e) for e in cert.ears]
        else:
            entry["pieces"] = [
                {
                    "blocks": [list(b) for b in p.blocks],
                    "base": witness_to_json(p.base),
                    "ears": [list(e) for e in p.ears],
                }
                for p in cert.pieces
            ]
        out.append(entry)
    return {"components": out}


def construction_from_json(obj: dict) -> Construction:
    try:
        comps = []
        for entry in obj["components"]:
            vertices = tuple(int(x) for x in entry["vertices"])
            kind = entry["kind"]
            if kind == "two_connected":
                base = witness_from_json(entry["base"])
                ears = tuple(tuple(int(x) for x in e) for e in entry["ears"])
                comps.append(ComponentCertificate(vertices, kind, base, ears, ()))
            elif kind == "block_cover":
                pieces = tuple(
                    PieceCertificate(
                        blocks=tuple(tuple(int(x) for x in b) for b in p["blocks"]),
                        base=witness_from_json(p["base"]),
                        ears=tuple(tuple(int(x) for x in e) for e in p["ears"]),
                    )
                    for p in entry["pieces"]
                )
                comps.append(ComponentCertificate(vertices, kind, None, (), pieces))
            else:
                raise ValueError(f"unknown certificate kind {kind!r}")
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed construction object: {exc}") from exc
    return Construction(tuple(comps))


def certificate_to_json(cert: GlobalCertificate) -> dict:
    viol = None
    if cert.violation is not None:
        v = cert.violation
        viol = {
            "kind": v.kind,
            "rule": v.rule,
            "vertex": v.vertex,
            "edge": list(v.edge) if v.edge is not None else None,
            "component": list(v.component) if v.component is not None else None,
        }
    return {
        "format": 1,
        "decision": cert.decision,
        "violation": viol,
        "construction": construction_to_json(cert.construction) if cert.construction else None,
    }


# ---------------------------------------------------------------------------
# invariance harness


@dataclass(frozen=True)
class InvarianceCheck:
    name: str
    passed: bool


@dataclass(frozen=True)
class InvarianceReport:
    base_decision: bool
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verdict_invariance_suite(g: PartitionedGraph, lines: LineSet) -> InvarianceReport:
    """Re-check the decision under the operations that must preserve YES.

    For a YES instance: subdivide every edge (new vertex on either
    endpoint's part), glue a copy of g at a shared vertex, and, when g
    meets three parts, add a fully disjoint copy. Every derived instance
    must come back YES. For a NO instance the report is empty.
    """
    base = is_generically_globally_rigid(g, lines)
    if not base.decision:
        return InvarianceReport(False, ())
    checks = []
    for e in g.edges:
        for pt in sorted({g.part[e[0]], g.part[e[1]]}):
            got = is_generically_globally_rigid(subdivide(g, e, pt), lines)
            checks.append(InvarianceCheck(f"subdivide {e} onto part {pt}", got.decision))
    got = is_generically_globally_rigid(glue_at_vertex(g, g, 0, 0), lines)
    checks.append(InvarianceCheck("glue a copy at vertex 0", got.decision))
    if len(lines_of(g)) >= 3:
        got = is_generically_globally_rigid(disjoint_union(g, g), lines)
        checks.append(InvarianceCheck("glue a disjoint copy", got.decision))
    return InvarianceReport(True, tuple(checks))
