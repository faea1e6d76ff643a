"""Exhaustive small-instance property suites.

These checks verify, by enumeration on instances small enough for the exact
oracles, the structural properties everything else relies on: the three
employment models are monotone submodular, expected open positions in the
interview process are supermodular and monotone/convex in the job budget,
and matching size is submodular in the agent side.  The CLI `selftest`
subcommand and the acceptance tests both run them.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .matching import hopcroft_karp, max_matching_masks
from .models import expected_employment_exact, interview_open_positions_exact
from .scenario import Agent, Locality, Scenario

TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    checks: int = 0
    violations: int = 0
    worst: float = 0.0

    def record(self, slack: float) -> None:
        # slack < 0 is a violation of the inequality under test
        self.checks += 1
        if slack < -TOL:
            self.violations += 1
        self.worst = min(self.worst, slack)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def __str__(self) -> str:
        status = "ok" if self.ok else "FAIL"
        return (f"{self.name}: {status} ({self.checks} checks, "
                f"{self.violations} violations, worst slack {self.worst:.3e})")


def random_small_scenario(model: str, rng: np.random.Generator,
                          n_agents: int = 4, n_localities: int = 2,
                          max_jobs: int = 3) -> Scenario:
    """Random instance small enough for exact evaluation of every matching."""
    professions = [int(rng.integers(2)) for _ in range(n_agents)]
    agents = [Agent(id=i, profession=professions[i], p=float(rng.random()))
              for i in range(n_agents)]
    localities = []
    for l in range(n_localities):
        jobs = {0: int(rng.integers(max_jobs + 1)), 1: int(rng.integers(max_jobs + 1))}
        cap = int(rng.integers(n_agents + 1))
        localities.append(Locality(id=l, capacity=cap, jobs=jobs))
    return Scenario(model=model, agents=agents, localities=localities)


def enumerate_matchings(scenario: Scenario) -> List[FrozenSet[Tuple[int, int]]]:
    """All feasible matchings, as frozensets of (agent_id, locality_id)."""
    agent_ids = [a.id for a in scenario.agents]
    caps = {l.id: l.capacity for l in scenario.localities}
    loc_ids = list(caps)
    results: List[FrozenSet[Tuple[int, int]]] = []

    def extend(i: int, current: List[Tuple[int, int]], load: Dict[int, int]) -> None:
        if i == len(agent_ids):
            results.append(frozenset(current))
            return
        extend(i + 1, current, load)  # agent stays unmatched
        for lid in loc_ids:
            if load.get(lid, 0) < caps[lid]:
                load[lid] = load.get(lid, 0) + 1
                current.append((agent_ids[i], lid))
                extend(i + 1, current, load)
                current.pop()
                load[lid] -= 1

    extend(0, [], {})
    return results


def check_model_properties(model: str, draws: int = 20, seed: int = 0,
                           n_agents: int = 4, n_localities: int = 2,
                           max_jobs: int = 3) -> Tuple[CheckResult, CheckResult]:
    """Exhaustive submodularity and monotonicity of the exact expected
    employment over all feasible S subset T and additions x."""
    rng = np.random.default_rng(seed)
    sub = CheckResult(f"{model}: submodularity")
    mono = CheckResult(f"{model}: monotonicity")
    for _ in range(draws):
        scenario = random_small_scenario(model, rng, n_agents, n_localities, max_jobs)
        matchings = set(enumerate_matchings(scenario))
        cache: dict = {}
        values = {m: expected_employment_exact(sorted(m), scenario, cache=cache)
                  for m in matchings}
        if abs(values[frozenset()]) > TOL:
            mono.record(-abs(values[frozenset()]))
        for T in matchings:
            vT = values[T]
            for x in _feasible_additions(T, matchings, scenario):
                vTx = values[T | {x}]
                mono.record(vTx - vT)
                marg_T = vTx - vT
                for r in range(len(T) + 1):
                    for S_items in combinations(sorted(T), r):
                        S = frozenset(S_items)
                        if S == T or S not in matchings or (S | {x}) not in matchings:
                            continue
                        marg_S = values[S | {x}] - values[S]
                        sub.record(marg_S - marg_T)
    return sub, mono


def _feasible_additions(T, matchings, scenario: Scenario):
    matched_agents = {a for a, _ in T}
    out = []
    for a in scenario.agents:
        if a.id in matched_agents:
            continue
        for l in scenario.localities:
            x = (a.id, l.id)
            if T | {x} in matchings:
                out.append(x)
    return out


def check_interview_supermodularity(n_agents: int = 4, max_jobs: int = 4,
                                    draws: int = 20, seed: int = 0) -> CheckResult:
    """o(S+{x,y}) - o(S+{y}) >= o(S+{x}) - o(S) for every fixed agent order,
    exhaustively over subsets and job budgets."""
    rng = np.random.default_rng(seed)
    result = CheckResult("interview: open-positions supermodularity")
    for _ in range(draws):
        probs = rng.random(n_agents)
        order = list(range(n_agents))
        rng.shuffle(order)

        def open_for(subset: FrozenSet[int], k: int) -> float:
            ordered = [probs[i] for i in order if i in subset]
            return interview_open_positions_exact(ordered, k)

        for k in range(max_jobs + 1):
            for x, y in combinations(range(n_agents), 2):
                rest = [i for i in range(n_agents) if i not in (x, y)]
                for r in range(len(rest) + 1):
                    for S_items in combinations(rest, r):
                        S = frozenset(S_items)
                        lhs = open_for(S | {x, y}, k) - open_for(S | {y}, k)
                        rhs = open_for(S | {x}, k) - open_for(S, k)
                        result.record(lhs - rhs)
    return result


def check_open_positions_monotone_convex(trials: int = 50, max_n: int = 6,
                                         seed: int = 0) -> CheckResult:
    """Expected open positions as a function of the initial job budget is
    nondecreasing and convex, for random fixed agent sets and orders."""
    rng = np.random.default_rng(seed)
    result = CheckResult("interview: open positions monotone+convex in jobs")
    for _ in range(trials):
        size = int(rng.integers(1, 7))
        probs = list(rng.random(size))
        vals = [interview_open_positions_exact(probs, n) for n in range(max_n + 1)]
        for n in range(max_n):
            result.record(vals[n + 1] - vals[n])  # monotone
        for n in range(max_n - 1):
            result.record((vals[n + 2] - vals[n + 1]) - (vals[n + 1] - vals[n]))
    return result


def brute_force_matching_size(left: int, right: int,
                              edges: Sequence[Tuple[int, int]]) -> int:
    """Maximum matching by exhaustive search over edge subsets."""
    best = 0
    edges = list(edges)
    for r in range(min(left, right), 0, -1):
        for subset in combinations(edges, r):
            ls = {u for u, _ in subset}
            rs = {v for _, v in subset}
            if len(ls) == r and len(rs) == r:
                return r
    return best


def check_matching_submodularity(graphs: int = 100, max_side: int = 5,
                                 seed: int = 0) -> Tuple[CheckResult, CheckResult]:
    """On random bipartite graphs: max matching size of the induced subgraph
    is submodular in the left vertex set, and hopcroft_karp agrees with the
    brute-force matching size."""
    rng = np.random.default_rng(seed)
    sub = CheckResult("matching size: submodular in left vertices")
    agree = CheckResult("hopcroft_karp == brute force")
    for _ in range(graphs):
        nl = int(rng.integers(1, max_side + 1))
        nr = int(rng.integers(1, max_side + 1))
        edges = [(u, v) for u in range(nl) for v in range(nr) if rng.random() < 0.4]

        hk = hopcroft_karp(nl, nr, edges)
        bf = brute_force_matching_size(nl, nr, edges)
        agree.record(-abs(hk - bf))

        masks = [0] * nl
        for u, v in edges:
            masks[u] |= 1 << v
        f: Dict[FrozenSet[int], int] = {}
        for r in range(nl + 1):
            for S_items in combinations(range(nl), r):
                S = frozenset(S_items)
                f[S] = max_matching_masks([masks[u] for u in sorted(S)], nr)
        for T_items in f:
            T = frozenset(T_items)
            for x in set(range(nl)) - T:
                marg_T = f[T | {x}] - f[T]
                for r in range(len(T) + 1):
                    for S_items in combinations(sorted(T), r):
                        S = frozenset(S_items)
                        if S != T:
                            sub.record((f[S | {x}] - f[S]) - marg_T)
    return sub, agree


def run_all(full: bool = True, seed: int = 0) -> List[CheckResult]:
    draws = 20 if full else 5
    graphs = 100 if full else 20
    trials = 50 if full else 10
    results: List[CheckResult] = []
    for model in ("correction", "interview", "coordination"):
        results.extend(check_model_properties(model, draws=draws, seed=seed))
    results.append(check_interview_supermodularity(draws=draws, seed=seed))
    results.append(check_open_positions_monotone_convex(trials=trials, seed=seed))
    results.extend(check_matching_submodularity(graphs=graphs, seed=seed))
    return results
