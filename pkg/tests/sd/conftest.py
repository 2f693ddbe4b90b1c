"""Pytest fixtures for Stochastic Decomposition tests."""

import numpy as np
import pytest

from compromise.model import finite_space, make_box
from compromise.problems import SqqpBundle, sqqp2
from compromise.sd import SdResult, SqqpProblem, run_sd


@pytest.fixture(scope="module")
def bundle() -> SqqpBundle:
    return sqqp2()


@pytest.fixture(scope="module")
def sd_runs(bundle: SqqpBundle) -> list[SdResult]:
    return [
        run_sd(bundle.problem, 30, master_seed=5, replication_index=i, stream_key=(30, 3, 0))
        for i in range(3)
    ]


def infeasible_problem() -> SqqpProblem:
    """``y1 + y2 = -1, y >= 0`` for every first-stage decision."""
    return SqqpProblem(
        q_matrix=np.eye(1),
        c_vector=np.zeros(1),
        region=make_box([0.0], [1.0]),
        p_matrix=np.eye(2),
        d_vector=np.zeros(2),
        d_matrix=np.array([[1.0, 1.0]]),
        scenarios=finite_space([[-1.0, 0.0]]),
    )
