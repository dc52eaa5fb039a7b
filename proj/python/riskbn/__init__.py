"""Python surface of the riskbn engine.

The heavy lifting lives in the compiled ``_riskbn`` extension; this package
re-exports its operations under a stable name. The extension sits inside the
package in wheel installs and on ``PYTHONPATH`` for in-tree builds.
"""

try:
    from riskbn import _riskbn as _core
except ImportError:  # in-tree build: extension next to the build directory
    import _riskbn as _core

EngineError = _core.EngineError
Network = _core.Network
Policy = _core.Policy
ScenarioBundle = _core.ScenarioBundle
annual_to_step = _core.annual_to_step
cpt_lookup = _core.cpt_lookup
expected_utility = _core.expected_utility
failure_rates = _core.failure_rates
load_model = _core.load_model
network_from_json = _core.network_from_json
node_importance = _core.node_importance
optimal_policy = _core.optimal_policy
pha_records = _core.pha_records
posterior_enumeration = _core.posterior_enumeration
posterior_lw = _core.posterior_lw
posterior_ve = _core.posterior_ve
scenario = _core.scenario
scenario_labels = _core.scenario_labels
simulate = _core.simulate
tornado = _core.tornado
trajectory_csv = _core.trajectory_csv

__all__ = [
    "EngineError",
    "Network",
    "Policy",
    "ScenarioBundle",
    "annual_to_step",
    "cpt_lookup",
    "expected_utility",
    "failure_rates",
    "load_model",
    "network_from_json",
    "node_importance",
    "optimal_policy",
    "pha_records",
    "posterior_enumeration",
    "posterior_lw",
    "posterior_ve",
    "scenario",
    "scenario_labels",
    "simulate",
    "tornado",
    "trajectory_csv",
]
