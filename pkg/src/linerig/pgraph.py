"""Partitioned graphs and the combinatorics used by the characterisation.

A partitioned graph is a finite simple graph on vertices 0..n-1 together
with a total map ``part`` assigning each vertex the index of the line it is
constrained to. Edges inside one part are allowed; an edge whose endpoints
lie in different parts is a crossing edge.

Also here: connected components, block (2-connected component) forests,
paths between leaf blocks in the block tree, open ear decompositions of
2-connected graphs from a base subgraph, and the subdivide / smooth pair.
All outputs are deterministic: ties break lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class NotLeafBlock(ValueError):
    """The named blocks are not two distinct leaf blocks."""


class Disconnected(ValueError):
    """The operation needs a connected graph."""


class NotTwoConnected(ValueError):
    """The operation needs a 2-connected graph."""


class BaseTooSmall(ValueError):
    """An ear decomposition base needs at least one edge."""


class EdgeAbsent(ValueError):
    """The named edge is not in the graph."""


class NotDegreeTwo(ValueError):
    """Smoothing needs a vertex of degree exactly 2."""


class MultiEdgeCreated(ValueError):
    """Smoothing would create a parallel edge."""


Edge = tuple  # (u, v) with u < v


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class PartitionedGraph:
    """Simple graph with a total vertex -> part (line index) assignment."""

    n: int
    part: tuple
    edges: tuple  # sorted tuple of (u, v), u < v


def partitioned_graph(n: int, part: Sequence[int], edges: Iterable) -> PartitionedGraph:
    """Validated constructor; normalises and sorts the edge list."""
    part = tuple(part)
    if len(part) != n:
        raise ValueError(f"part map has length {len(part)}, expected {n}")
    if any(p < 0 for p in part):
        raise ValueError("part indices must be non-negative")
    norm = set()
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {e} out of range")
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        ne = _norm_edge(u, v)
        if ne in norm:
            raise ValueError(f"duplicate edge {ne}")
        norm.add(ne)
    return PartitionedGraph(n=n, part=part, edges=tuple(sorted(norm)))


def adjacency(g: PartitionedGraph) -> list:
    """Sorted adjacency lists."""
    adj = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    for lst in adj:
        lst.sort()
    return adj


@dataclass(frozen=True)
class Subgraph:
    """A vertex and edge subset of some host graph (original vertex ids)."""

    vertices: frozenset
    edges: frozenset

    def union(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(self.vertices | other.vertices, self.edges | other.edges)

    @property
    def sorted_vertices(self) -> tuple:
        return tuple(sorted(self.vertices))

    @property
    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges))


def as_subgraph(g: PartitionedGraph) -> Subgraph:
    return Subgraph(frozenset(range(g.n)), frozenset(g.edges))


def subgraph_adjacency(sub: Subgraph) -> dict:
    adj = {v: [] for v in sub.vertices}
    for u, v in sorted(sub.edges):
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    for lst in adj.values():
        lst.sort()
    return adj


def induced_subgraph(g: PartitionedGraph, vertices: Iterable[int]) -> Subgraph:
    vs = frozenset(vertices)
    es = frozenset(e for e in g.edges if e[0] in vs and e[1] in vs)
    return Subgraph(vs, es)


# ---------------------------------------------------------------------------
# crossing structure


def is_crossing(g: PartitionedGraph, w: Optional[Iterable[int]] = None) -> bool:
    """Whether the (sub)graph meets at least two parts."""
    vs = range(g.n) if w is None else w
    return len({g.part[v] for v in vs}) >= 2


def lines_of(g: PartitionedGraph, h: Optional[Iterable[int]] = None) -> frozenset:
    """Set of part indices met by the vertex set ``h`` (default: all)."""
    vs = range(g.n) if h is None else h
    return frozenset(g.part[v] for v in vs)


def crossing_edges(g: PartitionedGraph, edges: Optional[Iterable[Edge]] = None) -> list:
    es = g.edges if edges is None else edges
    return [e for e in sorted(es) if g.part[e[0]] != g.part[e[1]]]


# ---------------------------------------------------------------------------
# connectivity


def components(g: PartitionedGraph) -> list:
    """Connected components as sorted vertex tuples, ordered by minimum."""
    adj = adjacency(g)
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    return out


def _components_of(vertices: Iterable[int], adj: dict) -> list:
    seen = set()
    out = []
    for s in sorted(vertices):
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    return out


def bridges(g: PartitionedGraph) -> set:
    """All bridge edges of g (= the single-edge blocks)."""
    adj = {v: nb for v, nb in enumerate(adjacency(g))}
    raw, _ = _blocks_edge_stack(range(g.n), adj)
    return {blk[0] for blk in raw if len(blk) == 1}


@dataclass(frozen=True)
class Block:
    """One block: a maximal 2-connected subgraph or a bridge edge."""

    vertices: frozenset
    edges: frozenset


@dataclass(frozen=True)
class BlockForest:
    """Blocks, cutvertices and their bipartite incidence.

    blocks are sorted by their sorted vertex tuple; ``adjacency`` lists
    (block index, cutvertex) pairs. The incidence structure is a forest, and
    a tree exactly when the graph is connected and has at least one edge.
    """

    blocks: tuple
    cutvertices: frozenset
    adjacency: tuple  # sorted (block index, cutvertex) pairs

    def leaf_blocks(self) -> list:
        """Indices of blocks incident to at most one cutvertex."""
        count = {i: 0 for i in range(len(self.blocks))}
        for bi, _ in self.adjacency:
            count[bi] += 1
        return [i for i in range(len(self.blocks)) if count[i] <= 1]


def _blocks_edge_stack(vertices: Sequence[int], adj: dict):
    """Biconnected components via the classic edge-stack DFS."""
    disc: dict = {}
    low: dict = {}
    estack: list = []
    raw_blocks: list = []
    cuts: set = set()

    for root in sorted(vertices):
        if root in disc:
            continue
        stack = [(root, None, iter(adj[root]))]
        disc[root] = low[root] = len(disc)
        root_children = 0
        while stack:
            v, p, it = stack[-1]
            advanced = False
            for w in it:
                if w == p:
                    continue  # the one tree edge back to the parent
                if w in disc:
                    if disc[w] < disc[v]:
                        estack.append(_norm_edge(v, w))
                        low[v] = min(low[v], disc[w])
                    continue
                disc[w] = low[w] = len(disc)
                estack.append(_norm_edge(v, w))
                stack.append((w, v, iter(adj[w])))
                if v == root:
                    root_children += 1
                advanced = True
                break
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    # u separates v's subtree: pop one block
                    blk = []
                    while estack:
                        e = estack.pop()
                        blk.append(e)
                        if e == _norm_edge(u, v):
                            break
                    raw_blocks.append(blk)
                    if u != root or root_children > 1:
                        cuts.add(u)
    return raw_blocks, cuts


def _forest_from_raw(raw: list, cuts: set) -> BlockForest:
    blks = []
    for blk_edges in raw:
        vs = frozenset(v for e in blk_edges for v in e)
        blks.append(Block(vertices=vs, edges=frozenset(blk_edges)))
    blks.sort(key=lambda b: tuple(sorted(b.vertices)))
    inc = []
    for i, b in enumerate(blks):
        for c in sorted(cuts & b.vertices):
            inc.append((i, c))
    return BlockForest(blocks=tuple(blks), cutvertices=frozenset(cuts), adjacency=tuple(sorted(inc)))


def blocks(g: PartitionedGraph) -> BlockForest:
    """Block forest of g. Isolated vertices belong to no block."""
    adj = {v: nb for v, nb in enumerate(adjacency(g))}
    raw, cuts = _blocks_edge_stack(range(g.n), adj)
    return _forest_from_raw(raw, cuts)


def subgraph_blocks(sub: Subgraph) -> BlockForest:
    """Block forest of a subgraph (original vertex ids)."""
    adj = subgraph_adjacency(sub)
    raw, cuts = _blocks_edge_stack(sorted(sub.vertices), adj)
    return _forest_from_raw(raw, cuts)


def block_path(g: PartitionedGraph, leaf_a: int, leaf_b: int) -> Subgraph:
    """Union of the blocks on the block-tree path between two leaf blocks.

    ``leaf_a`` and ``leaf_b`` index into ``blocks(g).blocks``. Requires g
    connected and the two blocks to be distinct leaves.
    """
    if len(components(g)) != 1:
        raise Disconnected("block paths need a connected graph")
    forest = blocks(g)
    leaves = set(forest.leaf_blocks())
    if leaf_a == leaf_b or leaf_a not in leaves or leaf_b not in leaves:
        raise NotLeafBlock(f"blocks {leaf_a} and {leaf_b} are not two distinct leaf blocks")
    path = _block_tree_path(forest, leaf_a, leaf_b)
    out = Subgraph(frozenset(), frozenset())
    for bi in path:
        b = forest.blocks[bi]
        out = out.union(Subgraph(b.vertices, b.edges))
    return out


def _block_tree_path(forest: BlockForest, src: int, dst: int) -> list:
    """Block indices along the tree path from src to dst (inclusive)."""
    # BFS over the bipartite block-cutvertex incidence graph.
    nbr_blocks: dict = {}
    nbr_cuts: dict = {}
    for bi, c in forest.adjacency:
        nbr_cuts.setdefault(bi, []).append(c)
        nbr_blocks.setdefault(c, []).append(bi)
    prev = {("b", src): None}
    queue = [("b", src)]
    while queue:
        node = queue.pop(0)
        if node == ("b", dst):
            break
        kind, x = node
        if kind == "b":
            nxt = [("c", c) for c in sorted(nbr_cuts.get(x, []))]
        else:
            nxt = [("b", b) for b in sorted(nbr_blocks.get(x, []))]
        for nd in nxt:
            if nd not in prev:
                prev[nd] = node
                queue.append(nd)
    if ("b", dst) not in prev:
        raise Disconnected("leaf blocks lie in different components")
    out = []
    node = ("b", dst)
    while node is not None:
        if node[0] == "b":
            out.append(node[1])
        node = prev[node]
    out.reverse()
    return out


def _articulation_points(sub: Subgraph) -> set:
    adj = subgraph_adjacency(sub)
    _, cuts = _blocks_edge_stack(sorted(sub.vertices), adj)
    return cuts


def is_two_connected(sub: Subgraph) -> bool:
    """Connected, at least one edge, and no internal cutvertex.

    A single edge counts (it is a block); so does any cycle.
    """
    if len(sub.vertices) < 2 or not sub.edges:
        return False
    adj = subgraph_adjacency(sub)
    if len(_components_of(sub.vertices, adj)) != 1:
        return False
    return not _articulation_points(sub)


# ---------------------------------------------------------------------------
# open ear decompositions


@dataclass(frozen=True)
class EarSequence:
    """Base subgraph plus open ears, each a vertex path.

    Each ear (v0, ..., vk) has k >= 1 edges, endpoints v0 and vk in the
    graph accumulated so far (v0 != vk), and all interior vertices fresh.
    """

    base: Subgraph
    ears: tuple


def replay_ears(base: Subgraph, ears: Iterable[Sequence[int]]) -> Subgraph:
    """Validate and apply an ear sequence, returning the accumulated graph."""
    acc_v = set(base.vertices)
    acc_e = set(base.edges)
    for ear in ears:
        if len(ear) < 2:
            raise ValueError(f"ear {ear} has no edge")
        v0, vk = ear[0], ear[-1]
        if v0 not in acc_v or vk not in acc_v:
            raise ValueError(f"ear {ear} must start and end in the accumulated graph")
        if v0 == vk:
            raise ValueError(f"ear {ear} is closed; open ears need distinct endpoints")
        interior = ear[1:-1]
        if len(set(ear)) != len(ear):
            raise ValueError(f"ear {ear} repeats a vertex")
        for w in interior:
            if w in acc_v:
                raise ValueError(f"ear {ear} reuses interior vertex {w}")
        for a, b in zip(ear, ear[1:]):
            e = _norm_edge(a, b)
            if e in acc_e:
                raise ValueError(f"ear {ear} repeats edge {e}")
            acc_e.add(e)
        acc_v.update(interior)
    return Subgraph(frozenset(acc_v), frozenset(acc_e))


def open_ear_decomposition(target: Subgraph, base: Subgraph) -> EarSequence:
    """Open ears growing ``base`` into the 2-connected graph ``target``.

    While vertices are missing, take the smallest edge (u, v) leaving the
    accumulated graph and the shortest path from v back that avoids u; once
    the vertex sets agree, the missing edges are single-edge ears.

    Raises NotTwoConnected if target is not 2-connected, BaseTooSmall if the
    base has no edge, and ValueError if base is not a subgraph of target.
    """
    if isinstance(target, PartitionedGraph):
        target = as_subgraph(target)
    if not is_two_connected(target):
        raise NotTwoConnected("ear decompositions need a 2-connected target")
    if not base.edges:
        raise BaseTooSmall("the base of an ear decomposition needs an edge")
    if not (base.vertices <= target.vertices and base.edges <= target.edges):
        raise ValueError("base is not a subgraph of the target")

    adj = subgraph_adjacency(target)
    acc_v = set(base.vertices)
    acc_e = set(base.edges)
    ears = []
    while acc_v != target.vertices:
        uv = min(
            (u, v)
            for u in acc_v
            for v in adj[u]
            if v not in acc_v
        )
        u, v = uv
        path = _shortest_path_avoiding(adj, v, acc_v, forbidden={u})
        ear = (u,) + tuple(path)
        for a, b in zip(ear, ear[1:]):
            acc_e.add(_norm_edge(a, b))
        acc_v.update(ear)
        ears.append(ear)
    for e in sorted(target.edges - acc_e):
        ears.append(e)
        acc_e.add(e)
    return EarSequence(base=base, ears=tuple(ears))


def _shortest_path_avoiding(adj: dict, start: int, targets: set, forbidden: set) -> list:
    """Lexicographic BFS path from start to any vertex of ``targets``."""
    if start in forbidden:
        raise ValueError("start vertex is forbidden")
    prev = {start: None}
    queue = [start]
    hit = None
    while queue:
        v = queue.pop(0)
        if v in targets:
            hit = v
            break
        for w in adj[v]:
            if w not in prev and w not in forbidden:
                prev[w] = v
                queue.append(w)
    if hit is None:
        raise ValueError("no path exists")
    path = []
    v = hit
    while v is not None:
        path.append(v)
        v = prev[v]
    path.reverse()
    return path


# ---------------------------------------------------------------------------
# subdivision and smoothing


def subdivide(g: PartitionedGraph, e, new_part: int) -> PartitionedGraph:
    """Replace edge e = (u, v) by the path u - w - v with w = n a new vertex
    assigned to part ``new_part``."""
    e = _norm_edge(*e)
    if e not in set(g.edges):
        raise EdgeAbsent(f"edge {e} is not in the graph")
    u, v = e
    w = g.n
    edges = [x for x in g.edges if x != e]
    edges.extend([_norm_edge(u, w), _norm_edge(v, w)])
    return partitioned_graph(g.n + 1, g.part + (new_part,), edges)


def smooth(g: PartitionedGraph, w: int) -> PartitionedGraph:
    """Remove a degree-2 vertex w and join its neighbours.

    Vertices above w shift down by one so ids stay dense. Raises
    NotDegreeTwo unless deg(w) == 2 and MultiEdgeCreated when the
    neighbours are already adjacent.
    """
    if not (0 <= w < g.n):
        raise ValueError(f"vertex {w} out of range")
    nbrs = sorted(e[0] if e[1] == w else e[1] for e in g.edges if w in e)
    deg = len(nbrs)
    if deg != 2:
        raise NotDegreeTwo(f"vertex {w} has degree {deg}")
    u, v = nbrs
    if _norm_edge(u, v) in set(g.edges):
        raise MultiEdgeCreated(f"{u} and {v} are already adjacent")

    def relabel(x: int) -> int:
        return x if x < w else x - 1

    edges = [
        _norm_edge(relabel(a), relabel(b))
        for a, b in g.edges
        if w not in (a, b)
    ]
    edges.append(_norm_edge(relabel(u), relabel(v)))
    part = tuple(p for i, p in enumerate(g.part) if i != w)
    return partitioned_graph(g.n - 1, part, edges)


def disjoint_union(g1: PartitionedGraph, g2: PartitionedGraph) -> PartitionedGraph:
    """Disjoint union; g2's vertices shift up, part indices are kept.

    Both graphs are read against one common line set, so parts do not move.
    """
    edges = list(g1.edges) + [(u + g1.n, v + g1.n) for u, v in g2.edges]
    return partitioned_graph(g1.n + g2.n, g1.part + g2.part, edges)


def glue_at_vertex(g1: PartitionedGraph, g2: PartitionedGraph, v1: int, v2: int) -> PartitionedGraph:
    """Identify vertex v2 of g2 with vertex v1 of g1.

    The glued vertices must sit on the same part. Remaining g2 vertices get
    fresh ids g1.n, g1.n+1, ... in their original order.
    """
    if not (0 <= v1 < g1.n and 0 <= v2 < g2.n):
        raise ValueError("glue vertex out of range")
    if g1.part[v1] != g2.part[v2]:
        raise ValueError(
            f"cannot glue: vertex {v1} is on part {g1.part[v1]}, vertex {v2} on part {g2.part[v2]}"
        )

    def relabel(x: int) -> int:
        if x == v2:
            return v1
        return g1.n + (x if x < v2 else x - 1)

    edges = set(g1.edges)
    for a, b in g2.edges:
        edges.add(_norm_edge(relabel(a), relabel(b)))
    part = g1.part + tuple(p for i, p in enumerate(g2.part) if i != v2)
    return partitioned_graph(g1.n + g2.n - 1, part, edges)
