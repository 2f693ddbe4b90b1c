"""Replicated SAA solves and compromise decisions."""

from compromise.saa.compromise import (
    AggregateSolution,
    aggregate_minimize,
    aggregate_value,
    algorithm_augmented_compromise,
    default_rho,
    exact_compromise,
    inexact_compromise,
    stopping_gap,
    verify_stopping,
)
from compromise.saa.replication import build_saa, compound_variance, sample_variance, solve_saa
from compromise.saa.statistics import margin_of_error, margin_of_error_bound, normal_quantile
from compromise.saa.types import CompromiseResult, ReplicationResult, SaaInstance

__all__ = [
    "AggregateSolution",
    "CompromiseResult",
    "ReplicationResult",
    "SaaInstance",
    "aggregate_minimize",
    "aggregate_value",
    "algorithm_augmented_compromise",
    "build_saa",
    "compound_variance",
    "default_rho",
    "exact_compromise",
    "inexact_compromise",
    "margin_of_error",
    "margin_of_error_bound",
    "normal_quantile",
    "sample_variance",
    "solve_saa",
    "stopping_gap",
    "verify_stopping",
]
