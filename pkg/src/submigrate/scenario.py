"""Problem instances: agents, localities, jobs, and the model selection.

The JSON schema consumed by the CLI mirrors these dataclasses:

    {
      "model": "correction" | "interview" | "coordination",
      "agents": [{"id": 0, "profession": 0, "p": 0.5}, ...],
      "localities": [{"id": 0, "capacity": 3, "jobs": {"0": 2, "1": 1}}, ...],
      "p_table": {"0": {"0": [0.1, 0.2, 0.3]}}   // optional, coordination only
    }

An agent's "p" is either a single probability (used for every locality) or a
mapping locality_id -> probability.  "jobs" maps profession id -> job count.
"p_table" overrides per-job compatibility probabilities: agent id -> locality
id -> one probability per job at that locality, jobs ordered by (profession,
slot).  Correction functions default to x -> min(x, c) with c the job count
at the (locality, profession); custom ones can be attached in code.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

MODEL_KINDS = ("correction", "interview", "coordination")


@dataclass(frozen=True)
class CorrectionFunction:
    """Monotone concave map from a qualifying-agent count to employment.

    ``kind="cap"`` is x -> min(x, cap).  ``kind="table"`` interpolates the
    given values at 0, 1, ..., len(values)-1 and stays constant afterwards.
    """

    kind: str = "cap"
    cap: int = 0
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "cap":
            if self.cap < 0:
                raise ValueError("cap must be nonnegative")
        elif self.kind == "table":
            v = self.values
            if not v or v[0] != 0.0:
                raise ValueError("table must start with C(0) = 0")
            diffs = [b - a for a, b in zip(v, v[1:])]
            if any(d < 0 for d in diffs):
                raise ValueError("correction function must be monotone")
            if any(d2 > d1 + 1e-12 for d1, d2 in zip(diffs, diffs[1:])):
                raise ValueError("correction function must be concave")
        else:
            raise ValueError(f"unknown correction kind {self.kind!r}")

    def __call__(self, n: int) -> float:
        if n < 0:
            raise ValueError("count must be nonnegative")
        if self.kind == "cap":
            return float(min(n, self.cap))
        if n >= len(self.values):
            return float(self.values[-1])
        return float(self.values[n])


@dataclass(frozen=True)
class Agent:
    id: int
    profession: int
    p: Union[float, Mapping[int, float]]

    def prob_at(self, locality_id: int) -> float:
        if isinstance(self.p, Mapping):
            return float(self.p[locality_id])
        return float(self.p)


@dataclass(frozen=True)
class Locality:
    id: int
    capacity: int
    jobs: Mapping[int, int]  # profession -> job count

    @property
    def total_jobs(self) -> int:
        return sum(self.jobs.values())

    def job_professions(self) -> List[int]:
        """Job slots at this locality, ordered by (profession, slot)."""
        out: List[int] = []
        for prof in sorted(self.jobs):
            out.extend([prof] * self.jobs[prof])
        return out


@dataclass
class Scenario:
    model: str
    agents: List[Agent]
    localities: List[Locality]
    # agent id -> locality id -> per-job probability (coordination overrides)
    p_table: Optional[Dict[int, Dict[int, Tuple[float, ...]]]] = None
    # (locality id, profession) -> correction function; default min(x, jobs)
    corrections: Optional[Dict[Tuple[int, int], CorrectionFunction]] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.model not in MODEL_KINDS:
            raise ValueError(f"model must be one of {MODEL_KINDS}, got {self.model!r}")
        seen = set()
        for a in self.agents:
            if a.id in seen:
                raise ValueError(f"duplicate agent id {a.id}")
            seen.add(a.id)
            probs = a.p.values() if isinstance(a.p, Mapping) else [a.p]
            for p in probs:
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"agent {a.id} has probability {p} outside [0, 1]")
        seen = set()
        for l in self.localities:
            if l.id in seen:
                raise ValueError(f"duplicate locality id {l.id}")
            seen.add(l.id)
            if l.capacity < 0:
                raise ValueError(f"locality {l.id} has negative capacity")
            if any(k < 0 for k in l.jobs.values()):
                raise ValueError(f"locality {l.id} has a negative job count")
        if self.p_table:
            loc_by_id = {l.id: l for l in self.localities}
            agent_ids = {a.id for a in self.agents}
            for aid, row in self.p_table.items():
                if aid not in agent_ids:
                    raise ValueError(f"p_table references unknown agent {aid}")
                for lid, ps in row.items():
                    if lid not in loc_by_id:
                        raise ValueError(f"p_table references unknown locality {lid}")
                    if len(ps) != loc_by_id[lid].total_jobs:
                        raise ValueError(
                            f"p_table for agent {aid}, locality {lid} must list "
                            f"{loc_by_id[lid].total_jobs} job probabilities"
                        )
                    if any(not 0.0 <= p <= 1.0 for p in ps):
                        raise ValueError("p_table probabilities must lie in [0, 1]")

    # -- lookups ----------------------------------------------------------

    def agent_by_id(self, aid: int) -> Agent:
        return self._agent_index()[aid]

    def locality_by_id(self, lid: int) -> Locality:
        return self._locality_index()[lid]

    def _agent_index(self) -> Dict[int, Agent]:
        idx = getattr(self, "_agents_by_id", None)
        if idx is None:
            idx = {a.id: a for a in self.agents}
            object.__setattr__(self, "_agents_by_id", idx)
        return idx

    def _locality_index(self) -> Dict[int, Locality]:
        idx = getattr(self, "_localities_by_id", None)
        if idx is None:
            idx = {l.id: l for l in self.localities}
            object.__setattr__(self, "_localities_by_id", idx)
        return idx

    def jobs_at(self, lid: int, profession: int) -> int:
        return int(self.locality_by_id(lid).jobs.get(profession, 0))

    def correction_at(self, lid: int, profession: int) -> CorrectionFunction:
        if self.corrections and (lid, profession) in self.corrections:
            return self.corrections[(lid, profession)]
        return CorrectionFunction(kind="cap", cap=self.jobs_at(lid, profession))

    def job_probs(self, aid: int, lid: int) -> List[float]:
        """Per-job compatibility probabilities of an agent at a locality."""
        if self.p_table and aid in self.p_table and lid in self.p_table[aid]:
            return [float(p) for p in self.p_table[aid][lid]]
        agent = self.agent_by_id(aid)
        p = agent.prob_at(lid)
        return [p if prof == agent.profession else 0.0
                for prof in self.locality_by_id(lid).job_professions()]

    # -- (de)serialization -------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {
            "model": self.model,
            "agents": [
                {
                    "id": a.id,
                    "profession": a.profession,
                    "p": ({str(k): v for k, v in a.p.items()}
                          if isinstance(a.p, Mapping) else a.p),
                }
                for a in self.agents
            ],
            "localities": [
                {
                    "id": l.id,
                    "capacity": l.capacity,
                    "jobs": {str(k): v for k, v in sorted(l.jobs.items())},
                }
                for l in self.localities
            ],
        }
        if self.p_table:
            d["p_table"] = {
                str(aid): {str(lid): list(ps) for lid, ps in row.items()}
                for aid, row in self.p_table.items()
            }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        agents = []
        for a in d["agents"]:
            p = a["p"]
            if isinstance(p, dict):
                p = {int(k): float(v) for k, v in p.items()}
            agents.append(Agent(id=int(a["id"]), profession=int(a["profession"]), p=p))
        localities = [
            Locality(
                id=int(l["id"]),
                capacity=int(l["capacity"]),
                jobs={int(k): int(v) for k, v in l.get("jobs", {}).items()},
            )
            for l in d["localities"]
        ]
        p_table = None
        if "p_table" in d and d["p_table"]:
            p_table = {
                int(aid): {int(lid): tuple(float(p) for p in ps) for lid, ps in row.items()}
                for aid, row in d["p_table"].items()
            }
        return cls(model=d["model"], agents=agents, localities=localities, p_table=p_table)

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "Scenario":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


Matching = Sequence[Tuple[int, int]]


def check_matching(matching: Matching, scenario: Scenario) -> None:
    """Raise if the matching is infeasible for the scenario."""
    agent_deg: Dict[int, int] = {}
    loc_deg: Dict[int, int] = {}
    for aid, lid in matching:
        scenario.agent_by_id(aid)
        loc = scenario.locality_by_id(lid)
        agent_deg[aid] = agent_deg.get(aid, 0) + 1
        loc_deg[lid] = loc_deg.get(lid, 0) + 1
        if agent_deg[aid] > 1:
            raise ValueError(f"agent {aid} matched more than once")
        if loc_deg[lid] > loc.capacity:
            raise ValueError(f"locality {lid} over capacity")
