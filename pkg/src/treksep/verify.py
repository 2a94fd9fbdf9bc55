"""Randomized cross-checking harness.

Every combinatorial answer (min-cut ranks, separation verdicts, trek
enumeration) is checked against the exact-arithmetic algebraic oracle on
seeded random instances.  Each criterion function is deterministic given
its config and returns a CheckResult; run_suite aggregates them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional

from . import algebra, instances, separation, treks
from .graph import (DAG, MIXED, UNDIRECTED, MixedGraph, bidirected_subdivision,
                    graph_class, make_graph, serialize)

DEFAULT_SEED = 31415


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    max_vertices: int = 6
    graph_count: int = 200
    trials_per_instance: int = 5
    edge_density: float = 0.4

    def __post_init__(self):
        if self.max_vertices < 2:
            raise ValueError("max_vertices must be at least 2")
        if self.graph_count < 1:
            raise ValueError("graph_count must be at least 1")
        if not 0 < self.edge_density <= 1:
            raise ValueError("edge_density must lie in (0, 1]")


@dataclass
class CheckResult:
    name: str
    passes: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, g: Optional[MixedGraph], query: dict):
        if ok:
            self.passes += 1
        else:
            entry = dict(query)
            if g is not None:
                entry["graph"] = serialize(g)
            self.failures.append(entry)


@dataclass
class SuiteReport:
    checks: Dict[str, Dict[str, int]]
    failures: List[dict]

    @property
    def total_failures(self) -> int:
        return len(self.failures)

    def to_dict(self) -> dict:
        return {"checks": self.checks, "failures": self.failures}


def random_graph(cls: str, n: int, seed: int, density: float) -> MixedGraph:
    """Seed-deterministic random graph of the requested class, always valid.

    DAG: each pair i < j carries i -> j with the given probability.
    Undirected: each pair carries an undirected edge likewise.
    Mixed: low ids form U, high ids W; pair kinds are drawn from whatever
    the U/W rules allow (cross pairs can only be directed U -> W, W pairs
    may carry a directed and a bidirected edge in parallel).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    directed, undirected, bidirected = [], [], []
    if cls == DAG:
        for i, j in combinations(range(1, n + 1), 2):
            if rng.random() < density:
                directed.append((i, j))
        return make_graph(n, directed=directed)
    if cls == UNDIRECTED:
        for i, j in combinations(range(1, n + 1), 2):
            if rng.random() < density:
                undirected.append((i, j))
        return make_graph(n, undirected=undirected)
    if cls != MIXED:
        raise ValueError(f"unknown graph class {cls!r}")
    u = set(range(1, (n + 1) // 2 + 1))
    for i, j in combinations(range(1, n + 1), 2):
        if rng.random() >= density:
            continue
        if i in u and j in u:
            (directed if rng.random() < 0.5 else undirected).append((i, j))
        elif i not in u and j not in u:
            roll = rng.random()
            if roll < 0.4:
                directed.append((i, j))
            elif roll < 0.8:
                bidirected.append((i, j))
            else:
                directed.append((i, j))
                bidirected.append((i, j))
        else:
            directed.append((i, j))
    return make_graph(n, directed=directed, undirected=undirected,
                      bidirected=bidirected, u=u)


def _sample_set(rng: random.Random, n: int, max_size: int, exclude=frozenset(),
                nonempty: bool = True) -> frozenset:
    pool = [v for v in range(1, n + 1) if v not in exclude]
    lo = 1 if nonempty else 0
    size = rng.randint(lo, min(max_size, len(pool))) if pool else 0
    return frozenset(rng.sample(pool, size))


def cross_check_rank(g: MixedGraph, A, B, seed: int, trials: int = 5) -> dict:
    """Min-cut rank vs algebraic oracle, plus Menger duality on the certificate.

    Returns a detail dict with an overall "ok" verdict.  On small graphs the
    brute-force noncrossing-trek-system search is consulted as a third
    independent answer.
    """
    res = separation.min_t_separator(g, A, B) if A and B else None
    rank = res.rank if res else 0
    oracle = algebra.generic_rank_oracle(g, A, B, seed, trials)
    detail = {"A": sorted(A), "B": sorted(B), "rank": rank,
              "oracle_rank": oracle, "seed": seed}
    ok = rank == oracle
    if res is not None:
        cert = res.certificate
        menger = (res.flow_value == cert.size()
                  and separation.is_t_separating(g, A, B, cert))
        for level, members in (("c_left", cert.c_left), ("c_mid", cert.c_mid),
                               ("c_right", cert.c_right)):
            for v in members:
                weakened = separation.SeparationTriple(
                    cert.c_left - {v} if level == "c_left" else cert.c_left,
                    cert.c_mid - {v} if level == "c_mid" else cert.c_mid,
                    cert.c_right - {v} if level == "c_right" else cert.c_right)
                if separation.is_t_separating(g, A, B, weakened):
                    menger = False
        detail["menger_ok"] = menger
        ok = ok and menger
    if res is not None and g.m <= 5:
        try:
            sys_rank_ok = (rank == 0 or treks.exists_noncrossing_system(
                g, A, B, rank, cap=20_000))
            if sys_rank_ok and rank + 1 <= min(len(A), len(B)):
                sys_rank_ok = not treks.exists_noncrossing_system(
                    g, A, B, rank + 1, cap=20_000)
            detail["trek_system_ok"] = sys_rank_ok
            ok = ok and sys_rank_ok
        except treks.CapExceededError:
            pass
    detail["ok"] = ok
    return detail


def _graph_stream(cls, cfg: SuiteConfig, count, tag, min_n=2):
    rng = random.Random(f"{cfg.seed}/{tag}")
    for _ in range(count):
        n = rng.randint(min_n, cfg.max_vertices)
        yield random_graph(cls, n, rng.getrandbits(48), cfg.edge_density), rng


def criterion_trek_rule(cfg: SuiteConfig) -> CheckResult:
    """Trek rule == simple trek rule == covariance entry, exactly, on DAGs."""
    out = CheckResult("trek_rule_identity")
    for g, rng in _graph_stream(DAG, cfg, cfg.graph_count, "trek_rule"):
        p = algebra.sample_parameters(g, rng.getrandbits(48))
        sigma = algebra.build_covariance(g, p)
        ctx = algebra.trek_rule_context(g, p)
        ok = True
        for i in range(1, g.m + 1):
            for j in range(i, g.m + 1):
                entry = sigma.entries[i - 1][j - 1]
                if (algebra.trek_rule_covariance(g, p, i, j) != entry
                        or algebra.simple_trek_rule_covariance(g, p, ctx, i, j) != entry):
                    ok = False
        out.record(ok, g, {"check": "trek_rule_identity"})
    return out


def criterion_gvl(cfg: SuiteConfig) -> CheckResult:
    """Determinant of a minor of Lambda^{-1} == signed disjoint-path-system sum."""
    out = CheckResult("gvl_identity")
    for g, rng in _graph_stream(DAG, cfg, max(1, cfg.graph_count // 2), "gvl"):
        p = algebra.sample_parameters(g, rng.getrandbits(48))
        size = rng.randint(1, min(3, g.m))
        R = frozenset(rng.sample(range(1, g.m + 1), size))
        S = frozenset(rng.sample(range(1, g.m + 1), size))
        det_side, path_side = algebra.gvl_minor_two_ways(g, p, R, S)
        out.record(det_side == path_side, g,
                   {"check": "gvl_identity", "R": sorted(R), "S": sorted(S)})
    return out


def criterion_cauchy_binet(cfg: SuiteConfig) -> CheckResult:
    """det Sigma_{A,B} == phi_S-weighted sum of paired minors over column sets S."""
    out = CheckResult("cauchy_binet")
    small = min(cfg.max_vertices, 5)
    for g, rng in _graph_stream(DAG, cfg, max(1, cfg.graph_count // 4),
                                "cauchy_binet"):
        if g.m > small:
            g = random_graph(DAG, small, rng.getrandbits(48), cfg.edge_density)
        p = algebra.sample_parameters(g, rng.getrandbits(48))
        size = rng.randint(1, min(3, g.m))
        A = frozenset(rng.sample(range(1, g.m + 1), size))
        B = frozenset(rng.sample(range(1, g.m + 1), size))
        lhs, rhs = algebra.cauchy_binet_two_ways(g, p, A, B)
        out.record(lhs == rhs, g,
                   {"check": "cauchy_binet", "A": sorted(A), "B": sorted(B)})
    return out


def _criterion_rank(cfg: SuiteConfig, cls, name) -> CheckResult:
    out = CheckResult(name)
    for g, rng in _graph_stream(cls, cfg, cfg.graph_count, name):
        A = _sample_set(rng, g.m, 3)
        B = _sample_set(rng, g.m, 3)
        detail = cross_check_rank(g, A, B, rng.getrandbits(48),
                                  cfg.trials_per_instance)
        detail["check"] = name
        out.record(detail.pop("ok"), g, detail)
    return out


def criterion_rank_directed(cfg: SuiteConfig) -> CheckResult:
    return _criterion_rank(cfg, DAG, "rank_directed")


def criterion_rank_undirected(cfg: SuiteConfig) -> CheckResult:
    return _criterion_rank(cfg, UNDIRECTED, "rank_undirected")


def criterion_rank_mixed(cfg: SuiteConfig) -> CheckResult:
    return _criterion_rank(cfg, MIXED, "rank_mixed")


def _force_bidirected(g: MixedGraph, rng) -> MixedGraph:
    if g.bidirected_edges:
        return g
    w = sorted(g.w_set)
    if len(w) < 2:
        raise AssertionError("graph too small to carry a bidirected edge")
    return make_graph(g.m, directed=g.directed_edges,
                      undirected=g.undirected_edges,
                      bidirected=set(g.bidirected_edges) | {(w[0], w[1])},
                      u=g.u_set)


def criterion_subdivision(cfg: SuiteConfig) -> CheckResult:
    """Rank is unchanged by subdividing bidirected edges, both pipelines."""
    out = CheckResult("subdivision_invariance")
    count = max(1, cfg.graph_count // 2)
    for g, rng in _graph_stream(MIXED, cfg, count, "subdivision", min_n=4):
        g = _force_bidirected(g, rng)
        g2 = bidirected_subdivision(g)
        A = _sample_set(rng, g.m, 3)
        B = _sample_set(rng, g.m, 3)
        seed = rng.getrandbits(48)
        combinatorial = (separation.generic_rank(g, A, B)
                         == separation.generic_rank(g2, A, B))
        oracle = (algebra.generic_rank_oracle(g, A, B, seed, cfg.trials_per_instance)
                  == algebra.generic_rank_oracle(g2, A, B, seed,
                                                 cfg.trials_per_instance))
        out.record(combinatorial and oracle, g,
                   {"check": "subdivision_invariance", "A": sorted(A),
                    "B": sorted(B), "seed": seed})
    return out


def _disjoint_triples(n: int):
    vs = range(1, n + 1)
    for a_size in (1, 2):
        for A in combinations(vs, a_size):
            rest_a = [v for v in vs if v not in A]
            for b_size in (1, 2):
                for B in combinations(rest_a, b_size):
                    rest_b = [v for v in rest_a if v not in B]
                    for c_size in range(0, 4):
                        for C in combinations(rest_b, c_size):
                            yield frozenset(A), frozenset(B), frozenset(C)


def criterion_dsep_equivalence(cfg: SuiteConfig) -> CheckResult:
    """d-separation == partitioned t-separation == rank-#C test, exhaustively."""
    out = CheckResult("dsep_equivalence")
    for g, rng in _graph_stream(DAG, cfg, cfg.graph_count, "dsep"):
        ok = True
        bad = None
        for A, B, C in _disjoint_triples(g.m):
            d = separation.d_separates(g, A, B, C)
            t = separation.d_sep_via_t_sep(g, A, B, C)
            ci = separation.ci_implied(g, A, B, C)
            if not d == t == ci:
                ok = False
                bad = {"A": sorted(A), "B": sorted(B), "C": sorted(C),
                       "d_separates": d, "via_t_sep": t, "ci_implied": ci}
                break
        out.record(ok, g, {"check": "dsep_equivalence", **(bad or {})})
    return out


def criterion_canonical(cfg: SuiteConfig) -> CheckResult:
    """The choke and spider instances behave as advertised, oracle included."""
    out = CheckResult("canonical_instances")

    choke = instances.choke_graph()
    res = separation.min_t_separator(choke, instances.CHOKE_A, instances.CHOKE_B)
    oracle = algebra.generic_rank_oracle(choke, instances.CHOKE_A,
                                         instances.CHOKE_B, cfg.seed,
                                         cfg.trials_per_instance)
    out.record(res.rank == 1 == oracle and res.certificate.c_right == {4}
               and res.certificate.size() == 1,
               choke, {"check": "canonical_choke", "rank": res.rank,
                       "oracle_rank": oracle})

    tetrad = separation.vanishing_tetrad(choke, (1, 3), (4, 5))
    out.record(tetrad is not None and tetrad.vertex == 4 and tetrad.side == "right",
               choke, {"check": "canonical_choke_tetrad",
                       "certificate": None if tetrad is None
                       else [tetrad.vertex, tetrad.side]})

    spider = instances.spider_graph()
    res = separation.min_t_separator(spider, instances.SPIDER_A, instances.SPIDER_B)
    oracle = algebra.generic_rank_oracle(spider, instances.SPIDER_A,
                                         instances.SPIDER_B, cfg.seed,
                                         cfg.trials_per_instance)
    hub_triple = separation.SeparationTriple.of(cl={7}, cr={7})
    out.record(res.rank == 2 == oracle and res.certificate.size() == 2
               and separation.is_t_separating(spider, instances.SPIDER_A,
                                              instances.SPIDER_B, res.certificate)
               and separation.is_t_separating(spider, instances.SPIDER_A,
                                              instances.SPIDER_B, hub_triple),
               spider, {"check": "canonical_spider", "rank": res.rank,
                        "oracle_rank": oracle})
    return out


def criterion_menger(cfg: SuiteConfig) -> CheckResult:
    """Flow value == certificate size, certificate separating and minimal.

    Replays the exact instance streams of the three rank criteria (same
    seeds), so this covers every instance those criteria see.
    """
    out = CheckResult("menger_duality")
    for cls, tag in ((DAG, "rank_directed"), (UNDIRECTED, "rank_undirected"),
                     (MIXED, "rank_mixed")):
        for g, rng in _graph_stream(cls, cfg, cfg.graph_count, tag):
            A = _sample_set(rng, g.m, 3)
            B = _sample_set(rng, g.m, 3)
            rng.getrandbits(48)  # keep the stream aligned with _criterion_rank
            res = separation.min_t_separator(g, A, B)
            cert = res.certificate
            ok = (res.flow_value == cert.size() == res.rank
                  and separation.is_t_separating(g, A, B, cert))
            for level in ("c_left", "c_mid", "c_right"):
                for v in getattr(cert, level):
                    weakened = separation.SeparationTriple(
                        cert.c_left - {v} if level == "c_left" else cert.c_left,
                        cert.c_mid - {v} if level == "c_mid" else cert.c_mid,
                        cert.c_right - {v} if level == "c_right" else cert.c_right)
                    if separation.is_t_separating(g, A, B, weakened):
                        ok = False
            out.record(ok, g, {"check": "menger_duality", "A": sorted(A),
                               "B": sorted(B)})
    return out


ALL_CRITERIA = (
    criterion_trek_rule,
    criterion_gvl,
    criterion_cauchy_binet,
    criterion_rank_directed,
    criterion_rank_undirected,
    criterion_rank_mixed,
    criterion_subdivision,
    criterion_dsep_equivalence,
    criterion_canonical,
)


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run every check; deterministic given cfg. Menger duality is asserted
    per instance inside the three rank criteria via cross_check_rank."""
    checks = {}
    failures = []
    for criterion in ALL_CRITERIA:
        result = criterion(cfg)
        checks[result.name] = {"passes": result.passes,
                               "failures": len(result.failures)}
        failures.extend(result.failures)
    return SuiteReport(checks=checks, failures=failures)
