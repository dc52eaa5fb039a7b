"""Smoke tests for the python bindings against the bundled scenarios."""

import pytest

riskbn = pytest.importorskip("riskbn")


def test_scenario_loads_and_queries():
    bundle = riskbn.scenario("confined")
    assert len(bundle.network) == 22
    post = riskbn.posterior_ve(bundle.network, ["loss_of_eely"])
    dist = post["posteriors"]["loss_of_eely"]
    assert abs(dist["TRUE"] + dist["FALSE"] - 1.0) < 1e-9
    assert 0.0 < dist["TRUE"] < 1.0


def test_certain_loss_under_double_failure():
    bundle = riskbn.scenario("confined")
    post = riskbn.posterior_ve(
        bundle.network,
        ["loss_of_eely"],
        {"failure_of_autonomous_control": "TRUE",
         "failure_of_remote_control": "TRUE"},
    )
    assert post["posteriors"]["loss_of_eely"]["TRUE"] == pytest.approx(1.0)


def test_cpt_lookup_matches_reference_value():
    bundle = riskbn.scenario("confined")
    p = riskbn.cpt_lookup(
        bundle.network,
        "loss_of_eely",
        "TRUE",
        {"failure_of_autonomous_control": "TRUE",
         "failure_of_remote_control": "FALSE"},
    )
    assert p == 0.75


def test_methods_agree():
    bundle = riskbn.scenario("seabed")
    ve = riskbn.posterior_ve(bundle.network, ["loss_of_eely"])
    en = riskbn.posterior_enumeration(bundle.network, ["loss_of_eely"])
    assert ve["posteriors"]["loss_of_eely"]["TRUE"] == pytest.approx(
        en["posteriors"]["loss_of_eely"]["TRUE"], abs=1e-12)
    lw = riskbn.posterior_lw(bundle.network, ["loss_of_eely"], {},
                             samples=100000, seed=3)
    assert lw["posteriors"]["loss_of_eely"]["TRUE"] == pytest.approx(
        ve["posteriors"]["loss_of_eely"]["TRUE"], abs=0.02)


def test_simulation_is_monotone_and_ordered():
    seabed = riskbn.scenario("seabed")
    confined = riskbn.scenario("confined")
    runs = {}
    for bundle in (seabed, confined):
        rows = riskbn.simulate(bundle, 10, ["loss_of_eely"])
        values = [r["loss_of_eely"]["TRUE"] for r in rows]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        runs[bundle.label] = values
    assert all(c > s for s, c in zip(runs["seabed"], runs["confined"]))


def test_tornado_ranks_autonomous_control_first():
    bundle = riskbn.scenario("confined")
    ranked = riskbn.node_importance(bundle.network, "loss_of_eely", "TRUE")
    assert ranked[0][0] == "failure_of_autonomous_control"


def test_policy_and_utilities():
    bundle = riskbn.scenario("confined")
    policy = riskbn.optimal_policy(bundle)
    choices = dict(policy.choices)
    assert set(choices) == {"altitude_set_point", "speed_set_point",
                            "control_strategy", "shape_configuration"}
    eu = riskbn.expected_utility(bundle, choices)
    assert eu == pytest.approx(policy.expected_utility, abs=1e-9)


def test_pha_and_failure_rates():
    seabed = riskbn.pha_records("seabed")
    confined = riskbn.pha_records("confined")
    assert len(seabed) == 16
    assert len(confined) == 13
    assert max(r["rpn"] for r in seabed) == 18
    rates = riskbn.failure_rates()
    assert len(rates) == 9
    assert {r["component"]: r["p_annual"] for r in rates}[
        "Thruster module actuators"] == 0.1


def test_errors_surface_as_engine_errors():
    bundle = riskbn.scenario("seabed")
    with pytest.raises(riskbn.EngineError):
        riskbn.posterior_ve(bundle.network, ["no_such_node"])
    with pytest.raises(riskbn.EngineError):
        riskbn.scenario("lunar")
    with pytest.raises(riskbn.EngineError):
        riskbn.annual_to_step(1.5, 1.0)
