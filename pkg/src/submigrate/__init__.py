"""Greedy submodular matching of agents to capacity-constrained localities."""

from .additive import AdditiveInstance, build_additive_instance, solve_additive
from .greedy import GreedyTrace, greedy_maximize, max_independent_size, theorem1_ratio
from .matching import hopcroft_karp
from .matroid import GroundSet, MatroidFamily, PartitionMatroid, build_matching_matroids
from .models import (
    correction_expected_exact,
    coordination_expected_exact,
    expected_employment_exact,
    interview_expected_exact,
    interview_open_positions_exact,
    solo_probability,
)
from .scenario import Agent, CorrectionFunction, Locality, Scenario
from .simulate import EstimatorConfig, model_expected_mc

__all__ = [
    "AdditiveInstance",
    "Agent",
    "CorrectionFunction",
    "EstimatorConfig",
    "GreedyTrace",
    "GroundSet",
    "Locality",
    "MatroidFamily",
    "PartitionMatroid",
    "Scenario",
    "build_additive_instance",
    "build_matching_matroids",
    "correction_expected_exact",
    "coordination_expected_exact",
    "expected_employment_exact",
    "greedy_maximize",
    "hopcroft_karp",
    "interview_expected_exact",
    "interview_open_positions_exact",
    "max_independent_size",
    "model_expected_mc",
    "solo_probability",
    "solve_additive",
    "theorem1_ratio",
]

__version__ = "0.1.0"
