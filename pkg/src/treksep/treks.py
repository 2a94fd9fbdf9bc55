"""Simple treks, trek systems, trek monomials and sided intersections.

A trek between i and j is a triple (left, middle, right): two directed
paths into i and j plus a middle segment joining their sources.  The middle
is trivial (the shared source), an undirected path, or a single bidirected
edge.  Simple treks have self-avoiding segments that overlap only at the
two sources.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .graph import MixedGraph

DEFAULT_CAP = 100_000

MIDDLE_UNDIRECTED = "undirected"
MIDDLE_BIDIRECTED = "bidirected"
_KIND_RANK = {None: 0, MIDDLE_UNDIRECTED: 1, MIDDLE_BIDIRECTED: 2}


class CapExceededError(Exception):
    """Enumeration outgrew its cap; the instance is too large for brute force."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"enumeration cap of {cap} exceeded")


@dataclass(frozen=True)
class Trek:
    """One trek; paths are vertex tuples written source -> sink."""

    left: Tuple[int, ...]
    middle_kind: Optional[str]
    middle: Tuple[int, ...]
    right: Tuple[int, ...]

    @property
    def source_left(self) -> int:
        return self.left[0]

    @property
    def source_right(self) -> int:
        return self.right[0]

    @property
    def sink_left(self) -> int:
        return self.left[-1]

    @property
    def sink_right(self) -> int:
        return self.right[-1]

    @property
    def top(self) -> Tuple[int, ...]:
        """The top vertex (trivial middle) or the two middle sources."""
        if self.middle_kind is None:
            return (self.source_left,)
        return (self.source_left, self.source_right)


def is_simple(t: Trek) -> bool:
    """Segments self-avoiding and overlapping only at the two sources."""
    for seg in (t.left, t.middle, t.right):
        if len(set(seg)) != len(seg):
            return False
    counts = Counter()
    for seg in (t.left, t.middle, t.right):
        counts.update(set(seg))
    allowed = {t.source_left, t.source_right}
    return all(v in allowed for v, c in counts.items() if c > 1)


def _directed_paths_into(g: MixedGraph, sink: int) -> Dict[int, List[Tuple[int, ...]]]:
    """All self-avoiding directed paths ending at sink, grouped by source."""
    out = defaultdict(list)
    stack = [(sink,)]
    while stack:
        path = stack.pop()
        out[path[0]].append(path)
        for p in g.parents[path[0]]:
            if p not in path:
                stack.append((p,) + path)
    return dict(out)


def _undirected_middles(g: MixedGraph) -> Dict[Tuple[int, int], List[Tuple[int, ...]]]:
    """Self-avoiding undirected paths with >= 1 edge, keyed by (start, end)."""
    out = defaultdict(list)
    for start in sorted(g.u_set):
        stack = [(start,)]
        while stack:
            path = stack.pop()
            if len(path) > 1:
                out[(start, path[-1])].append(path)
            for n in g.undirected_neighbors[path[-1]]:
                if n not in path:
                    stack.append(path + (n,))
    return dict(out)


def _trek_sort_key(t: Trek):
    return (t.source_left, t.source_right, _KIND_RANK[t.middle_kind],
            len(t.left), len(t.right), t.left, t.middle, t.right)


def enumerate_simple_treks(g: MixedGraph, i: int, j: int,
                           cap: int = DEFAULT_CAP) -> List[Trek]:
    """All simple treks between i and j, in a canonical deterministic order.

    Raises CapExceededError if there are more than `cap` of them, and
    ValueError for out-of-range endpoints.
    """
    for v in (i, j):
        if not 1 <= v <= g.m:
            raise ValueError(f"vertex {v} out of range [1,{g.m}]")
    paths_i = _directed_paths_into(g, i)
    paths_j = _directed_paths_into(g, j)

    treks: List[Trek] = []

    def push(t: Trek):
        if is_simple(t):
            treks.append(t)
            if len(treks) > cap:
                raise CapExceededError(cap)

    for top in sorted(set(paths_i) & set(paths_j)):
        for left in paths_i[top]:
            for right in paths_j[top]:
                push(Trek(left, None, (top,), right))

    for a, b in sorted(g.bidirected_edges):
        for s, t in ((a, b), (b, a)):
            if s in paths_i and t in paths_j:
                for left in paths_i[s]:
                    for right in paths_j[t]:
                        push(Trek(left, MIDDLE_BIDIRECTED, (s, t), right))

    if g.undirected_edges:
        middles = _undirected_middles(g)
        for (s, t), mids in sorted(middles.items()):
            if s in paths_i and t in paths_j:
                for mid in mids:
                    for left in paths_i[s]:
                        for right in paths_j[t]:
                            push(Trek(left, MIDDLE_UNDIRECTED, mid, right))

    treks.sort(key=_trek_sort_key)
    return treks


@dataclass(frozen=True)
class Monomial:
    """Product of parameter symbols with integer exponents.

    Symbol keys are ('lambda', i, j), ('phi', i, j) or ('psi', i, j).
    """

    powers: Tuple[Tuple[Tuple, int], ...]
    coefficient: int = 1

    @classmethod
    def from_factors(cls, factors, coefficient=1) -> "Monomial":
        counts = Counter(factors)
        return cls(tuple(sorted(counts.items())), coefficient)

    def __str__(self):
        if not self.powers:
            body = "1"
        else:
            parts = []
            for (name, i, j), exp in self.powers:
                s = f"{name}({i},{j})"
                if exp != 1:
                    s += f"^{exp}"
                parts.append(s)
            body = "*".join(parts)
        if self.coefficient == 1:
            return body
        return f"{self.coefficient}*{body}"


def trek_monomial(g: MixedGraph, t: Trek) -> Monomial:
    """Symbolic covariance contribution of one trek.

    Trivial middles contribute the top's variance symbol phi(top,top);
    bidirected middles a phi covariance; undirected middles one psi factor
    per middle edge (normalization by standard deviations is left to the
    algebraic layer).
    """
    factors = []
    for path in (t.left, t.right):
        for a, b in zip(path, path[1:]):
            factors.append(("lambda", a, b))
    if t.middle_kind is None:
        factors.append(("phi", t.middle[0], t.middle[0]))
    elif t.middle_kind == MIDDLE_BIDIRECTED:
        s, u = sorted(t.middle)
        factors.append(("phi", s, u))
    else:
        for a, b in zip(t.middle, t.middle[1:]):
            lo, hi = (a, b) if a < b else (b, a)
            factors.append(("psi", lo, hi))
    return Monomial.from_factors(factors)


@dataclass(frozen=True)
class TrekSystem:
    """A system of treks joining distinct A-vertices to distinct B-vertices."""

    treks: Tuple[Trek, ...]

    def __post_init__(self):
        a = [t.sink_left for t in self.treks]
        b = [t.sink_right for t in self.treks]
        if len(set(a)) != len(a) or len(set(b)) != len(b):
            raise ValueError("trek system endpoints must be pairwise distinct")

    @property
    def a_endpoints(self) -> Tuple[int, ...]:
        return tuple(t.sink_left for t in self.treks)

    @property
    def b_endpoints(self) -> Tuple[int, ...]:
        return tuple(t.sink_right for t in self.treks)


def _middle_tokens(t: Trek):
    # A bidirected middle behaves like its subdivision vertex: two bidirected
    # middles intersect only when they are the same edge, and never intersect
    # a vertex-valued middle.
    if t.middle_kind == MIDDLE_BIDIRECTED:
        return frozenset({("edge",) + tuple(sorted(t.middle))})
    return frozenset(t.middle)


def has_sided_intersection(sys: TrekSystem) -> bool:
    """Two treks sharing a vertex on the same side (left, middle or right)."""
    treks = sys.treks
    lefts = [frozenset(t.left) for t in treks]
    mids = [_middle_tokens(t) for t in treks]
    rights = [frozenset(t.right) for t in treks]
    for a in range(len(treks)):
        for b in range(a + 1, len(treks)):
            if lefts[a] & lefts[b] or mids[a] & mids[b] or rights[a] & rights[b]:
                return True
    return False


def exists_noncrossing_system(g: MixedGraph, A, B, r: int,
                              cap: int = DEFAULT_CAP) -> bool:
    """Brute-force search for r treks from A to B with no sided intersection."""
    A = sorted(set(A))
    B = sorted(set(B))
    if r < 1:
        raise ValueError("r must be positive")
    if r > min(len(A), len(B)):
        raise ValueError("r exceeds min(#A, #B)")

    table = {}
    for a in A:
        for b in B:
            table[(a, b)] = enumerate_simple_treks(g, a, b, cap)

    from itertools import combinations

    budget = [cap]

    def extend(chosen_a, k, free_b, used_l, used_m, used_r):
        if k == r:
            return True
        a = chosen_a[k]
        for b in free_b:
            for t in table[(a, b)]:
                budget[0] -= 1
                if budget[0] < 0:
                    raise CapExceededError(cap)
                lv, mv, rv = frozenset(t.left), _middle_tokens(t), frozenset(t.right)
                if lv & used_l or mv & used_m or rv & used_r:
                    continue
                if extend(chosen_a, k + 1, [x for x in free_b if x != b],
                          used_l | lv, used_m | mv, used_r | rv):
                    return True
        return False

    for chosen_a in combinations(A, r):
        if extend(chosen_a, 0, B, frozenset(), frozenset(), frozenset()):
            return True
    return False
