"""Pytest fixtures for replicated SAA tests."""

import pytest

from compromise.model import sample_scenarios
from compromise.problems import newsvendor, quad2
from compromise.saa import SaaInstance, build_saa


def make_instances(program, n: int, m: int, seed: int = 3) -> list[SaaInstance]:
    return [
        build_saa(program, sample_scenarios(program.scenarios, n, seed, i, (n, m, 0)))
        for i in range(m)
    ]


@pytest.fixture
def quad2_instances() -> list[SaaInstance]:
    return make_instances(quad2(), 20, 4)


@pytest.fixture
def newsvendor_instances() -> list[SaaInstance]:
    return make_instances(newsvendor(), 15, 3)
