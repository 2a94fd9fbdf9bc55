"""Mixed graphs: parsing, validation, and structural transforms.

A mixed graph has vertices 1..m split into an undirected block U and a
bidirected block W.  Undirected edges live inside U, bidirected edges inside
W, directed edges never point from W into U, and the directed part is
acyclic.  A vertex pair may carry a directed edge alongside an undirected or
bidirected one.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, List, Tuple

DAG = "DAG"
UNDIRECTED = "Undirected"
MIXED = "Mixed"


class GraphError(Exception):
    """Base class for graph construction failures."""


class ParseError(GraphError):
    """Syntax error in a graph file."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        self.message = message
        super().__init__(f"line {line_no}: {message}")


class InvalidGraphError(GraphError):
    """Structural invariant violation(s) in a graph."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class MixedGraph:
    """Immutable mixed graph on vertices 1..m.

    Undirected and bidirected edges are stored as (i, j) with i < j;
    directed edges as ordered (i, j) pairs.
    """

    m: int
    u_set: FrozenSet[int]
    w_set: FrozenSet[int]
    directed_edges: FrozenSet[Tuple[int, int]]
    undirected_edges: FrozenSet[Tuple[int, int]]
    bidirected_edges: FrozenSet[Tuple[int, int]]

    @property
    def vertices(self) -> range:
        return range(1, self.m + 1)

    @cached_property
    def parents(self):
        par = {v: [] for v in self.vertices}
        for i, j in self.directed_edges:
            par[j].append(i)
        return {v: tuple(sorted(ps)) for v, ps in par.items()}

    @cached_property
    def children(self):
        ch = {v: [] for v in self.vertices}
        for i, j in self.directed_edges:
            ch[i].append(j)
        return {v: tuple(sorted(cs)) for v, cs in ch.items()}

    @cached_property
    def undirected_neighbors(self):
        nbr = {v: [] for v in self.vertices}
        for i, j in self.undirected_edges:
            nbr[i].append(j)
            nbr[j].append(i)
        return {v: tuple(sorted(ns)) for v, ns in nbr.items()}


def graph_class(g: MixedGraph) -> str:
    """Classify a graph as DAG, Undirected or Mixed by its edge kinds."""
    if not g.undirected_edges and not g.bidirected_edges:
        return DAG
    if not g.directed_edges and not g.bidirected_edges:
        return UNDIRECTED
    return MIXED


def _norm_pair(i, j):
    return (i, j) if i < j else (j, i)


def make_graph(m, directed=(), undirected=(), bidirected=(), u=None, w=None) -> MixedGraph:
    """Build and validate a MixedGraph, inferring the U/W partition.

    Vertices incident to undirected edges (plus any explicitly declared U
    vertices) seed U; U is then closed under directed ancestors so that no
    directed edge can point from W into U.  Everything else lands in W,
    which matches the pure-DAG convention of a diagonal Phi over all
    vertices.  Raises InvalidGraphError on any rule violation.
    """
    directed = frozenset((int(i), int(j)) for i, j in directed)
    undirected = frozenset(_norm_pair(int(i), int(j)) for i, j in undirected)
    bidirected = frozenset(_norm_pair(int(i), int(j)) for i, j in bidirected)

    u0 = set(u or ())
    w0 = set(w or ())
    for i, j in undirected:
        u0.update((i, j))
    for i, j in bidirected:
        w0.update((i, j))

    # ancestral closure of U under directed edges
    par = {}
    for i, j in directed:
        par.setdefault(j, []).append(i)
    closure = set(u0)
    stack = list(u0)
    while stack:
        v = stack.pop()
        for p in par.get(v, ()):
            if p not in closure:
                closure.add(p)
                stack.append(p)

    violations = []
    for v in sorted(closure & w0):
        violations.append(f"vertex {v} cannot be in both U and W")
    u_set = frozenset(closure - w0)
    w_set = frozenset(set(range(1, m + 1)) - u_set)

    g = MixedGraph(m, u_set, w_set, directed, undirected, bidirected)
    violations.extend(validate(g))
    if violations:
        raise InvalidGraphError(violations)
    return g


def validate(g: MixedGraph) -> List[str]:
    """Return a list of invariant violations; an empty list means valid."""
    out = []
    universe = set(g.vertices)
    if set(g.u_set) | set(g.w_set) != universe or (set(g.u_set) & set(g.w_set)):
        out.append("U and W do not partition the vertex set")

    def check_ids(kind, edges):
        for i, j in sorted(edges):
            if i == j:
                out.append(f"{kind} self-loop at vertex {i}")
            for v in (i, j):
                if v not in universe:
                    out.append(f"{kind} edge ({i},{j}): vertex {v} out of range [1,{g.m}]")

    check_ids("directed", g.directed_edges)
    check_ids("undirected", g.undirected_edges)
    check_ids("bidirected", g.bidirected_edges)
    if out:
        return out

    for i, j in sorted(g.undirected_edges):
        for v in (i, j):
            if v not in g.u_set:
                out.append(f"undirected edge {i} -- {j}: endpoint {v} is not in U")
    for i, j in sorted(g.bidirected_edges):
        for v in (i, j):
            if v not in g.w_set:
                out.append(f"bidirected edge {i} <-> {j}: endpoint {v} is not in W")
    for i, j in sorted(g.directed_edges):
        if i in g.w_set and j in g.u_set:
            out.append(f"U->W direction violated: directed edge {i} -> {j} points from W into U")

    cycle = _find_directed_cycle(g)
    if cycle is not None:
        out.append("directed cycle: " + ",".join(str(v) for v in cycle))
    return out


def _find_directed_cycle(g: MixedGraph):
    indeg = {v: 0 for v in g.vertices}
    for _, j in g.directed_edges:
        indeg[j] += 1
    ready = [v for v in g.vertices if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for c in g.children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if seen == g.m:
        return None
    return sorted(v for v in g.vertices if indeg[v] > 0)


def topological_order(g: MixedGraph) -> List[int]:
    """Kahn's procedure with a lowest-id-first tie-break."""
    indeg = {v: 0 for v in g.vertices}
    for _, j in g.directed_edges:
        indeg[j] += 1
    heap = [v for v in g.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for c in g.children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != g.m:
        raise InvalidGraphError(["directed cycle detected"])
    return order


def ancestors(g: MixedGraph, v: int) -> FrozenSet[int]:
    """Vertices with a directed path into v, including v itself."""
    if v not in set(g.vertices):
        raise ValueError(f"vertex {v} out of range [1,{g.m}]")
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for p in g.parents[x]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def descendants(g: MixedGraph, v: int) -> FrozenSet[int]:
    """Vertices reachable from v by directed edges, including v."""
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for c in g.children[x]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return frozenset(seen)


def bidirected_subdivision(g: MixedGraph) -> MixedGraph:
    """Replace each bidirected edge i <-> j by a fresh vertex with edges into i and j.

    Fresh vertices get ids m+1, m+2, ... following the lexicographic order of
    the (i, j) pairs, so the result is deterministic.
    """
    directed = set(g.directed_edges)
    new_w = set(g.w_set)
    next_id = g.m
    for i, j in sorted(g.bidirected_edges):
        next_id += 1
        new_w.add(next_id)
        directed.add((next_id, i))
        directed.add((next_id, j))
    return MixedGraph(
        m=next_id,
        u_set=g.u_set,
        w_set=frozenset(new_w),
        directed_edges=frozenset(directed),
        undirected_edges=g.undirected_edges,
        bidirected_edges=frozenset(),
    )


def parse_graph(text: str) -> MixedGraph:
    """Parse the line-based graph format.

    Grammar: `v <m>` first, then optional `u`/`w` membership lines and
    `e i -> j`, `e i -- j`, `e i <-> j` edge lines.  `#` starts a comment.
    Raises ParseError for syntax problems and InvalidGraphError when the
    parsed graph breaks a structural invariant.
    """
    m = None
    explicit_u, explicit_w = set(), set()
    directed, undirected, bidirected = set(), set(), set()

    def want_id(tok, line_no):
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(line_no, f"expected a vertex id, got {tok!r}") from None
        if v < 1 or (m is not None and v > m):
            raise ParseError(line_no, f"vertex id {v} out of range [1,{m}]")
        return v

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if m is None:
            if kind != "v":
                raise ParseError(line_no, "first directive must be `v <m>`")
            if len(tokens) != 2:
                raise ParseError(line_no, "`v` takes exactly one argument")
            try:
                m = int(tokens[1])
            except ValueError:
                raise ParseError(line_no, f"bad vertex count {tokens[1]!r}") from None
            if m < 1:
                raise ParseError(line_no, f"vertex count must be positive, got {m}")
            continue
        if kind == "v":
            raise ParseError(line_no, "duplicate `v` directive")
        if kind in ("u", "w"):
            target = explicit_u if kind == "u" else explicit_w
            if len(tokens) < 2:
                raise ParseError(line_no, f"`{kind}` needs at least one vertex id")
            for tok in tokens[1:]:
                target.add(want_id(tok, line_no))
            continue
        if kind == "e":
            if len(tokens) != 4:
                raise ParseError(line_no, "edge lines look like `e <i> <op> <j>`")
            i = want_id(tokens[1], line_no)
            j = want_id(tokens[3], line_no)
            op = tokens[2]
            if op == "->":
                if (i, j) in directed:
                    raise ParseError(line_no, f"duplicate directed edge {i} -> {j}")
                directed.add((i, j))
            elif op == "--":
                if _norm_pair(i, j) in undirected:
                    raise ParseError(line_no, f"duplicate undirected edge {i} -- {j}")
                undirected.add(_norm_pair(i, j))
            elif op == "<->":
                if _norm_pair(i, j) in bidirected:
                    raise ParseError(line_no, f"duplicate bidirected edge {i} <-> {j}")
                bidirected.add(_norm_pair(i, j))
            else:
                raise ParseError(line_no, f"unknown edge kind {op!r}")
            continue
        raise ParseError(line_no, f"unknown directive {kind!r}")

    if m is None:
        raise ParseError(1, "empty graph file: missing `v <m>` directive")
    both = explicit_u & explicit_w
    if both:
        raise ParseError(1, "vertices listed under both `u` and `w`: "
                         + ",".join(str(v) for v in sorted(both)))
    return make_graph(m, directed, undirected, bidirected, u=explicit_u, w=explicit_w)


def serialize(g: MixedGraph) -> str:
    """Render a graph in the file format; parse_graph(serialize(g)) == g."""
    lines = [f"v {g.m}"]
    if g.u_set:
        lines.append("u " + " ".join(str(v) for v in sorted(g.u_set)))
    if g.w_set:
        lines.append("w " + " ".join(str(v) for v in sorted(g.w_set)))
    for i, j in sorted(g.directed_edges):
        lines.append(f"e {i} -> {j}")
    for i, j in sorted(g.undirected_edges):
        lines.append(f"e {i} -- {j}")
    for i, j in sorted(g.bidirected_edges):
        lines.append(f"e {i} <-> {j}")
    return "\n".join(lines) + "\n"
