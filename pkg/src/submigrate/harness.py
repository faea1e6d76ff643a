"""Experiment harness: scenario generators, the memoizing greedy oracle,
greedy-vs-additive runs, and CSV/JSON-lines persistence.

Five experiment families are supported, each sweeping one structural
parameter of a common base setting (100 agents in two professions, as many
jobs as agents, locality capacity equal to its job count): the number of
localities, the number of agents, the number of professions, per-profession
job availability, and the degree of locality specialization.
"""
from __future__ import annotations

import bisect
import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .additive import additive_value, build_additive_instance, solve_additive
from .greedy import greedy_maximize
from .matroid import MatroidFamily, build_matching_matroids
from .models import decompose_matching
from .scenario import Agent, Locality, Scenario
from .simulate import EstimatorConfig, estimate_group, model_expected_mc

FAMILIES = ("num_localities", "num_agents", "num_professions",
            "job_availability", "specialization")

CSV_COLUMNS = ("family", "model", "x", "trial", "seed",
               "greedy_utility", "additive_utility", "rel_improvement",
               "greedy_ms", "additive_ms")

SweptValue = Union[int, Tuple[int, int]]


@dataclass(frozen=True)
class ExperimentSpec:
    family: str
    model: str
    values: Tuple[SweptValue, ...]
    trials: int = 10
    seed: int = 0
    samples: int = 1000
    exact_cutoff: int = 7

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if not self.values:
            raise ValueError("swept values must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass
class ExperimentRecord:
    family: str
    model: str
    x: str
    trial: int
    seed: int
    greedy_utility: float
    additive_utility: float
    rel_improvement: Optional[float]  # None when additive utility is 0
    greedy_ms: float
    additive_ms: float

    def as_row(self) -> dict:
        row = {k: getattr(self, k) for k in CSV_COLUMNS}
        if row["rel_improvement"] is None:
            row["rel_improvement"] = ""
        return row


# ---------------------------------------------------------------------------
# scenario generators


def _distribute_jobs(rng: np.random.Generator, n_localities: int,
                     per_profession: Dict[int, int]) -> List[Dict[int, int]]:
    """One job per locality first (profession uniform among those with budget
    left), then the remainder scattered uniformly."""
    total = sum(per_profession.values())
    if total < n_localities:
        raise ValueError("not enough jobs to give every locality one")
    remaining = dict(per_profession)
    jobs: List[Dict[int, int]] = [dict() for _ in range(n_localities)]

    for loc in range(n_localities):
        available = sorted(p for p, k in remaining.items() if k > 0)
        prof = available[rng.integers(len(available))]
        remaining[prof] -= 1
        jobs[loc][prof] = jobs[loc].get(prof, 0) + 1
    for prof in sorted(remaining):
        for _ in range(remaining[prof]):
            loc = int(rng.integers(n_localities))
            jobs[loc][prof] = jobs[loc].get(prof, 0) + 1
    return jobs


def _make_agents(rng: np.random.Generator, professions: Sequence[int]) -> List[Agent]:
    ps = rng.random(len(professions))
    return [Agent(id=i, profession=int(prof), p=float(p))
            for i, (prof, p) in enumerate(zip(professions, ps))]


def generate_standard(model: str, n_agents: int, n_localities: int, seed: int) -> Scenario:
    """The base setting: agents split equally between two professions, solo
    probabilities uniform on [0, 1] and equal across localities, one job per
    agent split half-and-half between the professions, and each locality's
    capacity equal to its job count."""
    if n_agents % 2 != 0:
        raise ValueError("n_agents must be even (professions are split equally)")
    if n_localities < 1:
        raise ValueError("need at least one locality")
    rng = np.random.default_rng(seed)
    professions = [0] * (n_agents // 2) + [1] * (n_agents // 2)
    agents = _make_agents(rng, professions)
    per_prof = {0: n_agents // 2, 1: n_agents // 2}
    jobs = _distribute_jobs(rng, n_localities, per_prof)
    localities = [Locality(id=l, capacity=sum(jobs[l].values()), jobs=jobs[l])
                  for l in range(n_localities)]
    return Scenario(model=model, agents=agents, localities=localities)


def _generate_num_agents(model: str, n_agents: int, seed: int) -> Scenario:
    # 10 localities with capacity n/10 and n/10 jobs each; the n/2 jobs of
    # each profession are placed randomly within those per-locality totals
    if n_agents % 20 != 0:
        raise ValueError("n_agents must be a multiple of 20 for this family")
    rng = np.random.default_rng(seed)
    n_loc, per_loc = 10, n_agents // 10
    professions = [0] * (n_agents // 2) + [1] * (n_agents // 2)
    agents = _make_agents(rng, professions)
    slots = np.repeat(np.arange(n_loc), per_loc)
    rng.shuffle(slots)
    jobs: List[Dict[int, int]] = [{0: 0, 1: 0} for _ in range(n_loc)]
    for i, loc in enumerate(slots):
        prof = 0 if i < n_agents // 2 else 1
        jobs[loc][prof] += 1
    localities = [Locality(id=l, capacity=per_loc, jobs=jobs[l]) for l in range(n_loc)]
    return Scenario(model=model, agents=agents, localities=localities)


def _generate_num_professions(model: str, n_professions: int, seed: int) -> Scenario:
    # 100 agents, 10 localities of capacity 10; every profession has at least
    # one agent; one job of the right profession per agent, dealt 10 per
    # locality
    n_agents, n_loc, per_loc = 100, 10, 10
    if not 1 <= n_professions <= n_agents:
        raise ValueError("need between 1 and 100 professions")
    rng = np.random.default_rng(seed)
    professions = list(range(n_professions))
    professions += [int(rng.integers(n_professions))
                    for _ in range(n_agents - n_professions)]
    agents = _make_agents(rng, professions)
    tokens = np.array(professions)
    rng.shuffle(tokens)
    localities = []
    for l in range(n_loc):
        chunk = tokens[l * per_loc:(l + 1) * per_loc]
        jobs: Dict[int, int] = {}
        for prof in chunk:
            jobs[int(prof)] = jobs.get(int(prof), 0) + 1
        localities.append(Locality(id=l, capacity=per_loc, jobs=jobs))
    return Scenario(model=model, agents=agents, localities=localities)


def _generate_job_availability(model: str, point: Tuple[int, int], seed: int) -> Scenario:
    # 100 agents 50/50, 10 localities of fixed capacity 10; per-profession job
    # counts are swept independently of the capacities
    k0, k1 = point
    if k0 < 0 or k1 < 0:
        raise ValueError("job counts must be nonnegative")
    rng = np.random.default_rng(seed)
    professions = [0] * 50 + [1] * 50
    agents = _make_agents(rng, professions)
    n_loc = 10
    jobs: List[Dict[int, int]] = [{0: 0, 1: 0} for _ in range(n_loc)]
    for prof, k in ((0, k0), (1, k1)):
        for _ in range(k):
            jobs[int(rng.integers(n_loc))][prof] += 1
    localities = [Locality(id=l, capacity=10, jobs=jobs[l]) for l in range(n_loc)]
    return Scenario(model=model, agents=agents, localities=localities)


def _generate_specialization(model: str, s: int, seed: int) -> Scenario:
    # 10 localities of capacity 10 and 10 jobs each; s localities specialize
    # in each profession with an 8/2 job split, the rest are 5/5
    if not 0 <= s <= 5:
        raise ValueError("specialization must lie in 0..5")
    rng = np.random.default_rng(seed)
    professions = [0] * 50 + [1] * 50
    agents = _make_agents(rng, professions)
    localities = []
    for l in range(10):
        if l < s:
            jobs = {0: 8, 1: 2}
        elif l < 2 * s:
            jobs = {0: 2, 1: 8}
        else:
            jobs = {0: 5, 1: 5}
        localities.append(Locality(id=l, capacity=10, jobs=jobs))
    return Scenario(model=model, agents=agents, localities=localities)


def generate_family(spec: ExperimentSpec, point: SweptValue, seed: int) -> Scenario:
    if spec.family == "num_localities":
        return generate_standard(spec.model, 100, int(point), seed)
    if spec.family == "num_agents":
        return _generate_num_agents(spec.model, int(point), seed)
    if spec.family == "num_professions":
        return _generate_num_professions(spec.model, int(point), seed)
    if spec.family == "job_availability":
        k0, k1 = point  # type: ignore[misc]
        return _generate_job_availability(spec.model, (int(k0), int(k1)), seed)
    if spec.family == "specialization":
        return _generate_specialization(spec.model, int(point), seed)
    raise ValueError(f"unknown family {spec.family!r}")


# ---------------------------------------------------------------------------
# memoized greedy oracle


class MemoizedOracle:
    """Value oracle over matchings backed by seeded Monte Carlo estimates.

    Estimates are cached by (group key, sorted agent ids); a hit returns the
    originally computed value bit-exactly.  The incremental interface
    (value_with / commit) tracks the greedy selection so candidate scans cost
    one cache probe instead of a full matching evaluation.  Only the greedy
    path ever reads this cache.
    """

    def __init__(self, scenario: Scenario, family: MatroidFamily,
                 cfg: EstimatorConfig, enabled: bool = True):
        self.scenario = scenario
        self.cfg = cfg
        self.enabled = enabled
        self.calls = 0
        self.cache: Dict[tuple, float] = {}
        self._group_agents: Dict[tuple, List[int]] = {}
        self._group_values: Dict[tuple, float] = {}
        self._total = 0.0
        coord = scenario.model == "coordination"
        prof = {a.id: a.profession for a in scenario.agents}
        self._elem_key = []
        self._elem_agent = []
        for aid, lid in family.ground:
            self._elem_key.append((lid,) if coord else (lid, prof[aid]))
            self._elem_agent.append(aid)

    def _group_value(self, key: tuple, agents: Tuple[int, ...]) -> float:
        cache_key = (key, agents)
        if self.enabled and cache_key in self.cache:
            return self.cache[cache_key]
        v = estimate_group(key, agents, self.scenario, self.cfg)
        if self.enabled:
            self.cache[cache_key] = v
        return v

    def base_value(self) -> float:
        return self._total

    def value_with(self, e: int) -> float:
        self.calls += 1
        key = self._elem_key[e]
        current = self._group_agents.get(key, [])
        extended = list(current)
        bisect.insort(extended, self._elem_agent[e])
        new_v = self._group_value(key, tuple(extended))
        return self._total - self._group_values.get(key, 0.0) + new_v

    def commit(self, e: int) -> None:
        key = self._elem_key[e]
        agents = self._group_agents.setdefault(key, [])
        bisect.insort(agents, self._elem_agent[e])
        new_v = self._group_value(key, tuple(agents))
        self._total += new_v - self._group_values.get(key, 0.0)
        self._group_values[key] = new_v

    def __call__(self, matching_elements: Iterable[int]) -> float:
        """Full evaluation of an arbitrary selection (set of element indices);
        used for spec-style value queries, shares the same cache."""
        self.calls += 1
        pairs = [(self._elem_agent[e], self._elem_key[e]) for e in matching_elements]
        groups: Dict[tuple, List[int]] = {}
        for aid, key in pairs:
            groups.setdefault(key, []).append(aid)
        return sum(self._group_value(k, tuple(sorted(v))) for k, v in groups.items())


# ---------------------------------------------------------------------------
# running experiments


def run_point(scenario: Scenario, samples: int, train_seed: int, eval_seed: int,
              exact_cutoff: int = 7, memoize: bool = True):
    """Run greedy and additive on one scenario and score both final matchings
    with fresh, memoization-free estimates under a reserved evaluation seed.

    Returns (greedy_matching, additive_matching, greedy_utility,
    additive_utility, greedy_seconds, additive_seconds).
    """
    family = build_matching_matroids(scenario)
    train_cfg = EstimatorConfig(samples=samples, seed=train_seed,
                                exact_cutoff=exact_cutoff)
    eval_cfg = EstimatorConfig(samples=samples, seed=eval_seed,
                               exact_cutoff=exact_cutoff)

    t0 = time.perf_counter()
    oracle = MemoizedOracle(scenario, family, train_cfg, enabled=memoize)
    trace = greedy_maximize(oracle, family)
    greedy_matching = sorted(family.ground.pair(e) for e in trace.selected)
    greedy_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    instance = build_additive_instance(scenario)
    additive_matching = solve_additive(instance)
    additive_s = time.perf_counter() - t0

    greedy_u = model_expected_mc(greedy_matching, scenario, eval_cfg)
    additive_u = model_expected_mc(additive_matching, scenario, eval_cfg)
    return greedy_matching, additive_matching, greedy_u, additive_u, greedy_s, additive_s


def format_x(point: SweptValue) -> str:
    if isinstance(point, tuple):
        return "/".join(str(v) for v in point)
    return str(point)


def _trial_seeds(spec: ExperimentSpec, point_idx: int, trial: int) -> Tuple[int, int, int]:
    ss = np.random.SeedSequence([spec.seed, FAMILIES.index(spec.family),
                                 point_idx, trial])
    scen, train, ev = (int(x) for x in ss.generate_state(3, np.uint64))
    return scen, train, ev


def run_trial(spec: ExperimentSpec, point_idx: int, trial: int) -> ExperimentRecord:
    point = spec.values[point_idx]
    scen_seed, train_seed, eval_seed = _trial_seeds(spec, point_idx, trial)
    scenario = generate_family(spec, point, scen_seed)
    (_, _, greedy_u, additive_u,
     greedy_s, additive_s) = run_point(scenario, spec.samples, train_seed, eval_seed,
                                       spec.exact_cutoff)
    rel = greedy_u / additive_u - 1.0 if additive_u > 0.0 else None
    return ExperimentRecord(
        family=spec.family, model=spec.model, x=format_x(point), trial=trial,
        seed=scen_seed, greedy_utility=greedy_u, additive_utility=additive_u,
        rel_improvement=rel, greedy_ms=greedy_s * 1e3, additive_ms=additive_s * 1e3,
    )


def _existing_keys(csv_path: Path) -> set:
    keys = set()
    if csv_path.exists():
        with open(csv_path, newline="") as fh:
            for row in csv.DictReader(fh):
                keys.add((row["family"], row["model"], row["x"], int(row["trial"])))
    return keys


def _worker(args) -> ExperimentRecord:
    spec, point_idx, trial = args
    return run_trial(spec, point_idx, trial)


def run_experiment(spec: ExperimentSpec, out_dir) -> Iterator[ExperimentRecord]:
    """Run every (swept value, trial) cell, append records to results.csv and
    results.jsonl in `out_dir`, and yield them.  Cells already present in the
    CSV are skipped, so interrupted runs can resume without duplicates.
    Set SUBMIGRATE_THREADS to parallelize across trials."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    jsonl_path = out / "results.jsonl"
    done = _existing_keys(csv_path)

    tasks = []
    for point_idx, point in enumerate(spec.values):
        for trial in range(spec.trials):
            key = (spec.family, spec.model, format_x(point), trial)
            if key not in done:
                tasks.append((spec, point_idx, trial))

    workers = int(os.environ.get("SUBMIGRATE_THREADS", "1"))
    write_header = not csv_path.exists()
    with open(csv_path, "a", newline="") as cf, open(jsonl_path, "a") as jf:
        writer = csv.DictWriter(cf, fieldnames=CSV_COLUMNS)
        if write_header:
            writer.writeheader()

        def emit(rec: ExperimentRecord) -> ExperimentRecord:
            writer.writerow(rec.as_row())
            cf.flush()
            row = rec.as_row()
            row["rel_improvement"] = rec.rel_improvement
            jf.write(json.dumps(row) + "\n")
            jf.flush()
            return rec

        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for rec in pool.map(_worker, tasks):
                    yield emit(rec)
        else:
            for task in tasks:
                yield emit(_worker(task))
