"""Exact expectation oracles for the three employment models.

Each model decomposes over groups -- (locality, profession) for the
correction and interview models, whole localities for the coordination
model -- and total expected employment is the sum of per-group expectations.
Exact evaluation is only feasible for small groups; the Monte Carlo
estimators in `simulate` cover everything else.
"""
from __future__ import annotations

import math
from itertools import permutations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .matching import max_matching_masks
from .scenario import CorrectionFunction, Matching, Scenario, check_matching

DEFAULT_EXACT_CUTOFF = 7

GroupKey = Tuple  # (locality, profession) or (locality,)


def poisson_binomial_pmf(probs: Sequence[float]) -> List[float]:
    """Distribution of the number of successes among independent coins."""
    pmf = [1.0]
    for p in probs:
        nxt = [0.0] * (len(pmf) + 1)
        for k, m in enumerate(pmf):
            nxt[k] += m * (1.0 - p)
            nxt[k + 1] += m * p
        pmf = nxt
    return pmf


def correction_expected_exact(probs: Sequence[float], correction: CorrectionFunction,
                              cutoff: Optional[int] = None) -> float:
    """Exact E[C(#qualifying agents)] for one (locality, profession) group."""
    if cutoff is not None and len(probs) > cutoff:
        raise ValueError(f"group of {len(probs)} agents exceeds exact cutoff {cutoff}")
    pmf = poisson_binomial_pmf(probs)
    return sum(m * correction(k) for k, m in enumerate(pmf))


def interview_open_positions_exact(probs_in_order: Sequence[float], jobs: int) -> float:
    """Exact expected number of jobs left open after the application process
    runs over agents in the given fixed order, starting from `jobs` jobs.

    An agent facing a available jobs takes one with probability 1-(1-p)^a,
    independently of the other agents given a.
    """
    if jobs < 0:
        raise ValueError("job count must be nonnegative")
    # dist[a] = probability that a jobs are available
    dist = [0.0] * (jobs + 1)
    dist[jobs] = 1.0
    for p in probs_in_order:
        nxt = [0.0] * (jobs + 1)
        for a, m in enumerate(dist):
            if m == 0.0:
                continue
            hire = 1.0 - (1.0 - p) ** a
            if a > 0:
                nxt[a - 1] += m * hire
            nxt[a] += m * (1.0 - hire)
        dist = nxt
    return sum(a * m for a, m in enumerate(dist))


def interview_expected_exact(probs: Sequence[float], jobs: int,
                             cutoff: int = DEFAULT_EXACT_CUTOFF) -> float:
    """Exact expected employment of one (locality, profession) group under the
    interview process, averaged over all uniformly random agent orders."""
    if jobs < 0:
        raise ValueError("job count must be nonnegative")
    if len(probs) > cutoff:
        raise ValueError(f"group of {len(probs)} agents exceeds exact cutoff {cutoff}")
    if not probs or jobs == 0:
        return 0.0
    total_open = 0.0
    count = 0
    for order in permutations(probs):
        total_open += interview_open_positions_exact(order, jobs)
        count += 1
    return jobs - total_open / count


def coordination_expected_exact(prob_rows: Sequence[Sequence[float]],
                                budget: int = 20) -> float:
    """Exact expected maximum-matching size for one locality.

    `prob_rows[i][j]` is agent i's compatibility probability with job j.
    Enumerates realizations of the uncertain coins only (entries strictly
    between 0 and 1); the outcome count is limited by `budget` uncertain
    coins.
    """
    if not prob_rows:
        return 0.0
    n_jobs = len(prob_rows[0])
    if any(len(r) != n_jobs for r in prob_rows):
        raise ValueError("all agents must list one probability per job")
    n_uncertain = sum(1 for r in prob_rows for p in r if 0.0 < p < 1.0)
    if n_uncertain > budget:
        raise ValueError(
            f"{n_uncertain} uncertain compatibilities exceed enumeration budget {budget}")

    # per-agent outcome list: (mask, probability)
    agent_outcomes: List[List[Tuple[int, float]]] = []
    for row in prob_rows:
        fixed = 0
        uncertain: List[Tuple[int, float]] = []
        for j, p in enumerate(row):
            if p >= 1.0:
                fixed |= 1 << j
            elif p > 0.0:
                uncertain.append((j, p))
        outcomes = [(fixed, 1.0)]
        for j, p in uncertain:
            outcomes = [(m | (1 << j), w * p) for m, w in outcomes] + \
                       [(m, w * (1.0 - p)) for m, w in outcomes]
        agent_outcomes.append(outcomes)

    expected = 0.0
    for combo in product(*agent_outcomes):
        weight = 1.0
        masks = []
        for m, w in combo:
            weight *= w
            masks.append(m)
        if weight > 0.0:
            expected += weight * max_matching_masks(masks, n_jobs)
    return expected


def solo_probability(agent_id: int, locality_id: int, scenario: Scenario) -> float:
    """Exact probability of the agent finding employment at the locality if no
    other agent is matched anywhere -- the additive baseline's weight."""
    agent = scenario.agent_by_id(agent_id)
    if scenario.model == "correction":
        c = scenario.correction_at(locality_id, agent.profession)
        return agent.prob_at(locality_id) * min(c(1), 1.0)
    if scenario.model == "interview":
        k = scenario.jobs_at(locality_id, agent.profession)
        return 1.0 - (1.0 - agent.prob_at(locality_id)) ** k
    if scenario.model == "coordination":
        miss = 1.0
        for p in scenario.job_probs(agent_id, locality_id):
            miss *= 1.0 - p
        return 1.0 - miss
    raise ValueError(f"unknown model {scenario.model!r}")


def decompose_matching(matching: Matching, scenario: Scenario) -> Dict[GroupKey, Tuple[int, ...]]:
    """Split a matching into the per-group agent sets the models act on.

    Keys are (locality, profession) for correction/interview and (locality,)
    for coordination; values are sorted agent-id tuples.
    """
    groups: Dict[GroupKey, List[int]] = {}
    for aid, lid in matching:
        if scenario.model == "coordination":
            key: GroupKey = (lid,)
        else:
            key = (lid, scenario.agent_by_id(aid).profession)
        groups.setdefault(key, []).append(aid)
    return {k: tuple(sorted(v)) for k, v in groups.items()}


def group_expected_exact(key: GroupKey, agents: Sequence[int], scenario: Scenario,
                         cutoff: int = DEFAULT_EXACT_CUTOFF) -> float:
    """Exact expected employment of one group under the scenario's model."""
    if scenario.model == "correction":
        lid, prof = key
        probs = [scenario.agent_by_id(a).prob_at(lid) for a in agents]
        return correction_expected_exact(probs, scenario.correction_at(lid, prof), cutoff)
    if scenario.model == "interview":
        lid, prof = key
        probs = [scenario.agent_by_id(a).prob_at(lid) for a in agents]
        return interview_expected_exact(probs, scenario.jobs_at(lid, prof), cutoff)
    if scenario.model == "coordination":
        (lid,) = key
        rows = [scenario.job_probs(a, lid) for a in agents]
        return coordination_expected_exact(rows)
    raise ValueError(f"unknown model {scenario.model!r}")


def expected_employment_exact(matching: Matching, scenario: Scenario,
                              cutoff: int = DEFAULT_EXACT_CUTOFF,
                              cache: Optional[dict] = None) -> float:
    """Exact expected employment of a full matching (small instances only).

    `cache`, when given, memoizes per-group values across calls; keys include
    the agent set, so hits are exact."""
    check_matching(matching, scenario)
    total = 0.0
    for key, agents in decompose_matching(matching, scenario).items():
        if cache is not None and (key, agents) in cache:
            total += cache[(key, agents)]
            continue
        v = group_expected_exact(key, agents, scenario, cutoff)
        if cache is not None:
            cache[(key, agents)] = v
        total += v
    return total
