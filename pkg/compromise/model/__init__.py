"""Stochastic program definitions, sampling and exact oracles."""

from compromise.model.costs import (
    NewsvendorCost,
    QuadraticCost,
    linear_cost,
    squared_distance_cost,
)
from compromise.model.oracles import (
    evaluate_cost,
    subgradient,
    true_objective,
    true_subgradient,
)
from compromise.model.probes import bound_probe, convexity_probe, holder_probe
from compromise.model.region import make_box, make_polyhedron, random_points, region_grid
from compromise.model.sampling import (
    BoxSampler,
    GaussianSampler,
    finite_space,
    sample_scenarios,
    sampler_space,
    stream_generator,
)
from compromise.model.types import (
    FEASIBILITY_TOLERANCE,
    ConvexOracle,
    CostFunction,
    DeclaredConstants,
    ExtensiveFormCost,
    FeasibleRegion,
    Matrix,
    ProbeReport,
    SampleSet,
    ScenarioSpace,
    StochasticProgram,
    Vector,
)

__all__ = [
    "FEASIBILITY_TOLERANCE",
    "BoxSampler",
    "ConvexOracle",
    "CostFunction",
    "DeclaredConstants",
    "ExtensiveFormCost",
    "FeasibleRegion",
    "GaussianSampler",
    "Matrix",
    "NewsvendorCost",
    "ProbeReport",
    "QuadraticCost",
    "SampleSet",
    "ScenarioSpace",
    "StochasticProgram",
    "Vector",
    "bound_probe",
    "convexity_probe",
    "evaluate_cost",
    "finite_space",
    "holder_probe",
    "linear_cost",
    "make_box",
    "make_polyhedron",
    "random_points",
    "region_grid",
    "sample_scenarios",
    "sampler_space",
    "squared_distance_cost",
    "stream_generator",
    "subgradient",
    "true_objective",
    "true_subgradient",
]
