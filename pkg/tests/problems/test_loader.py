"""Tests for JSON and TOML problem documents."""

import json

import numpy as np
import pytest

from compromise.errors import ModelError
from compromise.loader import load_problem, parse_problem
from compromise.model import NewsvendorCost
from compromise.sd import SqqpCost

NEWSVENDOR = {
    "name": "tiny-newsvendor",
    "region": {"kind": "box", "lower": [0.0], "upper": [10.0]},
    "scenarios": {"atoms": [[3.0], [7.0]], "probabilities": [0.25, 0.75]},
    "cost": {"family": "newsvendor", "holding": [1.0], "backorder": [3.0]},
    "constants": {"lipschitz": 3.0, "bound": 30.0},
}

TOML_DOCUMENT = """\
name = "square"

[region]
kind = "box"
lower = [0.0, 0.0]
upper = [1.0, 1.0]

[scenarios]
atoms = [[0.2, 0.4], [0.6, 0.8]]

[cost]
family = "squared-distance"

[constants]
lipschitz = 1.5
bound = 1.0
"""


class TestParseProblem:
    def test_builtin(self):
        assert parse_problem({"builtin": "quad2"}).name == "quad2"

    def test_inline_newsvendor(self):
        program = parse_problem(NEWSVENDOR)
        assert program.name == "tiny-newsvendor"
        assert isinstance(program.cost, NewsvendorCost)
        np.testing.assert_allclose(program.scenarios.probabilities, [0.25, 0.75])
        assert program.constants.holder == 1.0

    def test_polyhedron_region(self):
        document = dict(
            NEWSVENDOR,
            region={"kind": "polyhedron", "a": [[1.0], [-1.0]], "b": [10.0, 0.0]},
        )
        program = parse_problem(document)
        assert program.region.kind == "polyhedron"
        assert program.region.contains(np.array([5.0]))

    def test_two_stage(self):
        document = {
            "region": {"kind": "box", "lower": [0.0], "upper": [1.0]},
            "scenarios": {"atoms": [[1.0, 0.5], [2.0, 0.5]]},
            "cost": {
                "family": "sqqp",
                "q": [[1.0]],
                "c": [0.0],
                "p": [[1.0, 0.0], [0.0, 1.0]],
                "d": [0.0, 0.0],
                "d_matrix": [[1.0, 1.0]],
            },
            "constants": {"lipschitz": 2.0, "bound": 3.0, "recourse_lipschitz": 1.0},
        }
        program = parse_problem(document)
        assert program.structure == "two-stage-SQQP"
        assert isinstance(program.cost, SqqpCost)

    def test_incomplete_document(self):
        document = {key: value for key, value in NEWSVENDOR.items() if key != "cost"}
        with pytest.raises(ModelError, match="invalid problem document"):
            parse_problem(document)

    def test_unknown_field(self):
        with pytest.raises(ModelError, match="invalid problem document"):
            parse_problem(dict(NEWSVENDOR, colour="blue"))

    def test_unknown_cost_family(self):
        document = dict(NEWSVENDOR, cost={"family": "cubic"})
        with pytest.raises(ModelError, match="invalid problem document"):
            parse_problem(document)


class TestLoadProblem:
    def test_toml(self, tmp_path):
        path = tmp_path / "square.toml"
        path.write_text(TOML_DOCUMENT, encoding="utf-8")
        program = load_problem(path)
        assert program.name == "square"
        assert program.scenarios.size == 2

    def test_json(self, tmp_path):
        path = tmp_path / "newsvendor.json"
        path.write_text(json.dumps(NEWSVENDOR), encoding="utf-8")
        assert load_problem(path).dimension == 1

    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / "problem.txt"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ModelError, match="unsupported problem document"):
            load_problem(path)
