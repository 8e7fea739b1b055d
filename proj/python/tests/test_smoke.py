import json
import math
import pathlib

import jsonschema
import pytest

import simplex_gibbs as sg

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "docs" / "schemas"


def load_schema(name):
    return json.loads((SCHEMAS / name).read_text())


def test_step_conserves_mass():
    x = sg.step([0.5, 0.25, 0.25], 1, 2, 0.3)
    assert math.isclose(sum(x), 1.0, abs_tol=1e-15)
    assert math.isclose(x[0], 0.3 * 0.75, abs_tol=1e-15)
    assert x[2] == 0.25


def test_bad_arguments_raise_value_error():
    with pytest.raises(ValueError):
        sg.step([0.5, 0.5], 1, 1, 0.3)
    with pytest.raises(ValueError):
        sg.sample_stationary(3, 1, "beta:-2")


def test_closed_forms():
    assert math.isclose(sg.contraction_factor(3), 5 / 9)
    assert math.isclose(sg.success_probability(0.9, -0.1), 0.8)
    assert math.isclose(sg.lower_bound_formula(3), 7.5)


def test_partitions_example():
    p = sg.build_partitions({"n": 3, "edges": [[1, 2], [2, 3]]})
    assert p["connected"]
    assert [s["time"] for s in p["splits"]] == [1, 2]


def test_cftp_is_deterministic():
    a = sg.cftp(4, 11)
    b = sg.cftp(4, 11)
    assert a == b
    assert math.isclose(sum(a), 1.0, abs_tol=1e-15)


def test_summaries_match_schema():
    schema = load_schema("summary.schema.json")
    for summary in (
        sg.run_contraction(2, 100, 1),
        sg.run_connectivity(8, 0.5, 50, 2),
        sg.run_couple(5, 2.0, 10, 3),
        sg.run_cftp(3, 20, 4),
        sg.run_lower_bound(4, 100, 5),
    ):
        jsonschema.validate(summary, schema)
    assert sg.run_contraction(2, 100, 1)["all_pass"]


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))
