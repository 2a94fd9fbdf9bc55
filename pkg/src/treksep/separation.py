"""t-separation, minimum separators via vertex min-cut, and CI queries.

The workhorse is a three-layer auxiliary flow network: for each vertex v
there are nodes v' (carrying the left directed path, traversed against the
edge directions), v'' (carrying undirected middle travel) and plain v
(carrying the right directed path).  Source-to-sink paths correspond to
treks from A to B, and unit vertex capacities turn minimum blocking sets
into minimum cuts (Menger).  Bidirected edges are removed up front by the
bidirected subdivision; the fresh subdivision vertices are made uncuttable
so certificates only ever mention original vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .graph import (DAG, MixedGraph, bidirected_subdivision, descendants,
                    graph_class)

PRIMED = "primed"
DOUBLEPRIMED = "doubleprimed"
PLAIN = "plain"
_LEVEL_RANK = {PRIMED: 0, DOUBLEPRIMED: 1, PLAIN: 2}

_SOURCE = ("source",)
_SINK = ("sink",)


class NotADAGError(Exception):
    """Operation requires a purely directed acyclic graph."""


@dataclass(frozen=True)
class SeparationTriple:
    c_left: FrozenSet[int] = frozenset()
    c_mid: FrozenSet[int] = frozenset()
    c_right: FrozenSet[int] = frozenset()

    @classmethod
    def of(cls, cl=(), cm=(), cr=()) -> "SeparationTriple":
        return cls(frozenset(cl), frozenset(cm), frozenset(cr))

    def size(self) -> int:
        return len(self.c_left) + len(self.c_mid) + len(self.c_right)

    def dag_pair_view(self) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        """(C_A, C_B) with the middle layer folded into the left side."""
        return (self.c_left | self.c_mid, self.c_right)


@dataclass(frozen=True)
class RankResult:
    rank: int
    certificate: SeparationTriple
    flow_value: int


@dataclass
class FlowNetwork:
    """Vertex-split flow network over the three-layer auxiliary graph."""

    nodes: List[tuple]
    arcs: Dict[tuple, Dict[tuple, int]]
    source: tuple
    sink: tuple
    infinity: int


def _node_key(node):
    if node == _SOURCE:
        return (0, 0, 0, 0)
    if node == _SINK:
        return (2, 0, 0, 0)
    v, level, side = node
    return (1, v, _LEVEL_RANK[level], 0 if side == "in" else 1)


def build_auxiliary_graph(g: MixedGraph, A, B,
                          uncuttable: FrozenSet[int] = frozenset()) -> FlowNetwork:
    """Auxiliary network whose source->sink paths are the treks from A to B.

    Requires a graph without bidirected edges.  Vertices in `uncuttable`
    get infinite internal capacity and can never appear in a minimum cut.
    """
    if g.bidirected_edges:
        raise ValueError("bidirected edges present; apply bidirected_subdivision first")
    A = frozenset(A)
    B = frozenset(B)
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    for v in sorted(A | B):
        if not 1 <= v <= g.m:
            raise ValueError(f"vertex {v} out of range [1,{g.m}]")

    inf = g.m + 1
    arcs: Dict[tuple, Dict[tuple, int]] = {}

    def add(u, x, c):
        arcs.setdefault(u, {})[x] = c

    for v in g.vertices:
        split = inf if v in uncuttable else 1
        for level in (PRIMED, DOUBLEPRIMED, PLAIN):
            add((v, level, "in"), (v, level, "out"), split)
        add((v, PRIMED, "out"), (v, DOUBLEPRIMED, "in"), inf)
        add((v, DOUBLEPRIMED, "out"), (v, PLAIN, "in"), inf)
    for i, j in g.directed_edges:
        add((i, PLAIN, "out"), (j, PLAIN, "in"), inf)
        add((j, PRIMED, "out"), (i, PRIMED, "in"), inf)
    for i, j in g.undirected_edges:
        add((i, DOUBLEPRIMED, "out"), (j, DOUBLEPRIMED, "in"), inf)
        add((j, DOUBLEPRIMED, "out"), (i, DOUBLEPRIMED, "in"), inf)
    for a in A:
        add(_SOURCE, (a, PRIMED, "in"), inf)
    for b in B:
        add((b, PLAIN, "out"), _SINK, inf)

    nodes = [_SOURCE, _SINK]
    for v in g.vertices:
        for level in (PRIMED, DOUBLEPRIMED, PLAIN):
            nodes.append((v, level, "in"))
            nodes.append((v, level, "out"))
    nodes.sort(key=_node_key)
    return FlowNetwork(nodes=nodes, arcs=arcs, source=_SOURCE, sink=_SINK,
                       infinity=inf)


def _max_flow_min_cut(net: FlowNetwork):
    """Edmonds-Karp with a deterministic lowest-node-first augmenting order.

    Returns (flow value, cut) where cut lists the (vertex, level) pairs whose
    internal split arc crosses the canonical source-side minimum cut.
    """
    index = {node: i for i, node in enumerate(net.nodes)}
    n = len(net.nodes)
    cap: Dict[Tuple[int, int], int] = {}
    adj: List[set] = [set() for _ in range(n)]
    for u, outs in net.arcs.items():
        ui = index[u]
        for x, c in outs.items():
            xi = index[x]
            cap[(ui, xi)] = cap.get((ui, xi), 0) + c
            adj[ui].add(xi)
            adj[xi].add(ui)
    adj = [sorted(s) for s in adj]
    flow: Dict[Tuple[int, int], int] = {}

    def residual(u, x):
        return cap.get((u, x), 0) - flow.get((u, x), 0)

    s, t = index[net.source], index[net.sink]
    value = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] == -1:
            u = queue.popleft()
            for x in adj[u]:
                if parent[x] == -1 and residual(u, x) > 0:
                    parent[x] = u
                    queue.append(x)
        if parent[t] == -1:
            break
        bottleneck = None
        x = t
        while x != s:
            u = parent[x]
            r = residual(u, x)
            bottleneck = r if bottleneck is None else min(bottleneck, r)
            x = u
        x = t
        while x != s:
            u = parent[x]
            flow[(u, x)] = flow.get((u, x), 0) + bottleneck
            flow[(x, u)] = flow.get((x, u), 0) - bottleneck
            x = u
        value += bottleneck

    reachable = [False] * n
    reachable[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for x in adj[u]:
            if not reachable[x] and residual(u, x) > 0:
                reachable[x] = True
                queue.append(x)

    cut = []
    for u, outs in net.arcs.items():
        for x in outs:
            if reachable[index[u]] and not reachable[index[x]]:
                # finite min cuts consist purely of internal split arcs
                assert len(u) == 3 and u[0] == x[0] and u[1] == x[1]
                cut.append((u[0], u[1]))
    cut.sort()
    return value, cut


def _subdivided(g: MixedGraph):
    if not g.bidirected_edges:
        return g, frozenset()
    g2 = bidirected_subdivision(g)
    return g2, frozenset(range(g.m + 1, g2.m + 1))


def min_t_separator(g: MixedGraph, A, B) -> RankResult:
    """Minimum t-separating triple and its size, by max-flow min-cut."""
    g2, fresh = _subdivided(g)
    net = build_auxiliary_graph(g2, A, B, uncuttable=fresh)
    value, cut = _max_flow_min_cut(net)
    cert = SeparationTriple.of(
        cl=(v for v, level in cut if level == PRIMED),
        cm=(v for v, level in cut if level == DOUBLEPRIMED),
        cr=(v for v, level in cut if level == PLAIN),
    )
    assert cert.size() == value
    return RankResult(rank=value, certificate=cert, flow_value=value)


def generic_rank(g: MixedGraph, A, B) -> int:
    """Generic rank of the covariance submatrix with rows A and columns B."""
    if not A or not B:
        return 0
    return min_t_separator(g, A, B).rank


def is_t_separating(g: MixedGraph, A, B, c: SeparationTriple) -> bool:
    """Does deleting c (layer by layer) block every trek from A to B?"""
    for v in sorted(c.c_left | c.c_mid | c.c_right):
        if not 1 <= v <= g.m:
            raise ValueError(f"vertex {v} out of range [1,{g.m}]")
    g2, fresh = _subdivided(g)
    net = build_auxiliary_graph(g2, A, B, uncuttable=fresh)
    blocked = ({(v, PRIMED) for v in c.c_left}
               | {(v, DOUBLEPRIMED) for v in c.c_mid}
               | {(v, PLAIN) for v in c.c_right})
    seen = {net.source}
    stack = [net.source]
    while stack:
        u = stack.pop()
        for x in net.arcs.get(u, ()):
            if x in seen:
                continue
            if len(u) == 3 and u[2] == "in" and (u[0], u[1]) in blocked:
                continue  # the split arc of a deleted node
            seen.add(x)
            stack.append(x)
    return net.sink not in seen


def _require_dag(g: MixedGraph):
    if graph_class(g) != DAG:
        raise NotADAGError("operation is defined for DAGs only")


def _require_disjoint(A, B, C):
    A, B, C = set(A), set(B), set(C)
    if A & B or A & C or B & C:
        raise ValueError("A, B and C must be pairwise disjoint")


def d_separates(g: MixedGraph, A, B, C) -> bool:
    """Classic d-separation via Bayes-ball reachability.

    Deliberately independent of the t-separation machinery so that the
    equivalence between the two criteria is a real cross-check.
    """
    _require_dag(g)
    _require_disjoint(A, B, C)
    C = set(C)
    anc_c = set()
    stack = list(C)
    while stack:
        v = stack.pop()
        if v in anc_c:
            continue
        anc_c.add(v)
        stack.extend(g.parents[v])

    reachable = set()
    visited = set()
    frontier = [(a, "up") for a in A]
    while frontier:
        v, direction = frontier.pop()
        if (v, direction) in visited:
            continue
        visited.add((v, direction))
        if direction == "up" and v not in C:
            reachable.add(v)
            frontier.extend((p, "up") for p in g.parents[v])
            frontier.extend((c, "down") for c in g.children[v])
        elif direction == "down":
            if v not in C:
                reachable.add(v)
                frontier.extend((c, "down") for c in g.children[v])
            if v in anc_c:
                frontier.extend((p, "up") for p in g.parents[v])
    return reachable.isdisjoint(B)


def _dag_pair_t_separates(g: MixedGraph, A, B, c_a, c_b) -> bool:
    """DAG pair view of t-separation: no trek avoids C_A on the left and C_B on the right."""

    def sided_sources(targets, blockers):
        grown = {t for t in targets if t not in blockers}
        stack = list(grown)
        while stack:
            v = stack.pop()
            for p in g.parents[v]:
                if p not in blockers and p not in grown:
                    grown.add(p)
                    stack.append(p)
        return grown

    left = sided_sources(set(A), set(c_a))
    right = sided_sources(set(B), set(c_b))
    return left.isdisjoint(right)


def d_sep_via_t_sep(g: MixedGraph, A, B, C) -> bool:
    """d-separation decided by searching partitions C = C_A | C_B."""
    _require_dag(g)
    _require_disjoint(A, B, C)
    C = sorted(set(C))
    if len(C) > 20:
        raise ValueError("partition search over more than 20 conditioning vertices")
    AC = set(A) | set(C)
    BC = set(B) | set(C)
    for mask in range(1 << len(C)):
        c_a = {C[i] for i in range(len(C)) if mask >> i & 1}
        c_b = set(C) - c_a
        if _dag_pair_t_separates(g, AC, BC, c_a, c_b):
            return True
    return False


def ci_implied(g: MixedGraph, A, B, C) -> bool:
    """Generic conditional independence of X_A and X_B given X_C."""
    return generic_rank(g, set(A) | set(C), set(B) | set(C)) == len(set(C))


@dataclass(frozen=True)
class ChokePoint:
    vertex: int
    side: str  # "left" or "right"


def vanishing_tetrad(g: MixedGraph, ij, kl) -> Optional[ChokePoint]:
    """Choke-point certificate for a vanishing 2x2 minor, or None.

    Returns a vertex c with a side such that ({c}, {}) or ({}, {c})
    t-separates {i,j} from {k,l}; None when the minor is generically
    nonzero (rank 2).  If the two blocks have no treks at all, any vertex
    works and the smallest row vertex is reported.
    """
    _require_dag(g)
    A = frozenset(ij)
    B = frozenset(kl)
    res = min_t_separator(g, A, B)
    if res.rank >= 2:
        return None
    if res.rank == 0:
        return ChokePoint(vertex=min(A), side="left")
    cert = res.certificate
    if cert.c_right:
        return ChokePoint(vertex=min(cert.c_right), side="right")
    c_a = cert.c_left | cert.c_mid
    return ChokePoint(vertex=min(c_a), side="left")
