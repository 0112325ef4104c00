import cmath
import json

import pytest

import nlsh


def test_mixed_power_matches_polar_form():
    z = 1.5 - 0.7j
    a, b = 0.3 + 0.2j, -1.1 + 0.4j
    r, theta = abs(z), cmath.phase(z)
    assert abs(nlsh.mixed_power(z, (a, b)) - cmath.exp(a * cmath.log(r) + 1j * b * theta)) < 1e-13


def test_mixed_power_rejects_zero():
    with pytest.raises(nlsh.NlshError, match="ZeroBase"):
        nlsh.mixed_power(0j, nlsh.E)


def test_basis_products():
    assert nlsh.pair_product(nlsh.I, nlsh.I) == (-1, -1)
    assert nlsh.pair_product(nlsh.J, nlsh.I) == (1, -1)
    assert nlsh.pair_product(nlsh.E, nlsh.B) == (1, -1)


def test_action_and_matrix():
    assert nlsh.pair_action(nlsh.B, 2 + 3j) == 2 - 3j
    assert nlsh.matrix_rep(nlsh.E) == [[1.0, 0.0], [0.0, 1.0]]


def test_catalog():
    names = [name for name, _, _ in nlsh.list_checks()]
    assert "product-table" in names
    assert len(names) >= 15
    assert "algebra" in nlsh.bundled_scenarios()


def test_run_bundled_is_deterministic():
    first = nlsh.run_bundled("algebra")
    assert first == nlsh.run_bundled("algebra")
    assert all(c["status"] == "pass" for c in first["checks"])


def test_overrides():
    report = nlsh.run_bundled("algebra", seed=5)
    assert report["seed"] == 5


def test_scenario_errors_carry_the_pointer():
    doc = json.loads(nlsh.bundled_scenario("algebra"))
    doc["checks"] = ["no-such-check"]
    with pytest.raises(nlsh.ScenarioError, match="/checks/0"):
        nlsh.run_scenario(json.dumps(doc))
    with pytest.raises(nlsh.NlshError):
        nlsh.run_scenario(json.dumps(doc))
