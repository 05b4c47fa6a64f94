# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/test_scenario.py
# DESCRIPTION:    Tests for ppls.defense.scenario
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

import re

import numpy as np
import pytest

from ppls.defense.scenario import *
from ppls.defense.types import (
    BoundaryMode,
    DesignSource,
    ScenarioError,
    Strategy,
    TracePolicy,
    ValidationError,
)

@pytest.fixture
def text() -> str:
    return bundled_scenario_path().read_text(encoding='utf8')

def test_bundled(example_scenario):
    sc = example_scenario
    assert sc.title.value == 'Three-mode example with four sampling channels'
    assert [sub.name for sub in sc.subsystems.value] == ['subsystem-1', 'subsystem-2', 'subsystem-3']
    assert sc.x0.value == [2.0, 3.2, 1.3, 3.0]
    assert sc.horizon.value == 150
    assert sc.alpha == (1.3, 0.4, 0.3)
    assert sc.subsystems.value[0].a.value.shape == (4, 4)
    assert sc.subsystems.value[2].b.value[3, 1] == 0.8
    assert sc.attack.policy.value is TracePolicy.EXPLICIT
    assert sc.attack.attacked_steps.value == [1, 5, 10]
    assert sc.design.source.value is DesignSource.PRINTED
    assert sc.design.kbar.value == 100.0
    assert sc.design.solver.value is None
    assert sc.settings.boundary.value is BoundaryMode.PAPER_TABLE
    assert sc.settings.tie_tolerance.value == 1e-6
    assert sc.settings.strategy.value is Strategy.CROSS
    assert sc.settings.grid_density.value == 11
    assert sc.settings.cross_check.value is False
    assert sc.settings.w_prev.value is None
    assert load_scenario(BUNDLED_SCENARIO).title.value == sc.title.value

def test_build(example_scenario):
    sys = example_scenario.build_system()
    assert (sys.s, sys.n, sys.n_u, sys.period) == (3, 4, 2, 15)
    budget = example_scenario.build_budget()
    assert budget.durations == (2, 2, 2)
    assert budget.dwell_times == (4, 5, 6)
    cfg = example_scenario.build_network()
    assert cfg.total_bandwidth == 20.0
    assert np.array_equal(cfg.attack_cap, [15.0] * 4)
    defender = example_scenario.build_defender(sys)
    assert defender.kbar == 100.0
    assert defender.design.source == 'printed'

def test_build_trace(scenario):
    trace = scenario.build_trace()
    assert trace.policy is TracePolicy.EXPLICIT
    assert trace.attacked.sum() == 3
    scenario.attack.policy.value = TracePolicy.UNIFORM_SPLIT
    trace = scenario.build_trace(seed=5)
    assert trace.policy is TracePolicy.UNIFORM_SPLIT
    assert trace.seed == 5
    assert scenario.build_trace().seed == 0

def test_build_design_missing(scenario):
    scenario.subsystems.value[0].gain.value = None
    with pytest.raises(ScenarioError) as cm:
        scenario.build_design()
    assert cm.value.args == ("Section 'subsystem-1' needs 'lyapunov' and 'gain' for printed design",)
    assert cm.value.field == 'subsystem-1.lyapunov'

def test_save_round_trip(example_scenario, tmp_path):
    path = tmp_path / 'copy.cfg'
    save_scenario(example_scenario, path)
    copy = load_scenario(path)
    assert scenario_hash(copy) == scenario_hash(example_scenario)
    assert np.array_equal(copy.subsystems.value[1].lyapunov.value, example_scenario.subsystems.value[1].lyapunov.value)
    assert copy.design.source.value is DesignSource.PRINTED

def test_hash(example_scenario, scenario):
    digest = scenario_hash(example_scenario)
    assert re.fullmatch('[0-9a-f]{64}', digest)
    assert scenario_hash(scenario) == digest
    scenario.horizon.value = 30
    assert scenario_hash(scenario) != digest

def test_load_errors(tmp_path):
    missing = tmp_path / 'missing.cfg'
    with pytest.raises(ScenarioError) as cm:
        load_scenario(missing)
    assert cm.value.args == (f"Scenario file '{missing}' not found",)
    assert cm.value.field == 'path'

def test_parse_errors(text):
    with pytest.raises(ScenarioError) as cm:
        parse_scenario('[scenario\n')
    assert cm.value.args[0].startswith("Scenario parse error: ")
    assert cm.value.line == 1
    with pytest.raises(ScenarioError) as cm:
        parse_scenario(re.sub(r'\[network\].*?(?=\[attack\])', '', text, flags=re.S))
    assert cm.value.args == ("Configuration error: section 'network' not found!",)
    assert cm.value.field == 'network'
    with pytest.raises(ScenarioError) as cm:
        parse_scenario(text.replace('delay = 0.5', 'delay = abc'))
    assert cm.value.args[0].startswith("Configuration error: network.delay: ")
    assert cm.value.field == 'network.delay'
    with pytest.raises(ScenarioError) as cm:
        parse_scenario(text.replace('x0 = 2.0, 3.2, 1.3, 3.0\n', ''))
    assert cm.value.args == ("Configuration error: Missing value for required option 'x0'",)

def test_check_errors(text):
    with pytest.raises(ScenarioError) as cm:
        parse_scenario(text.replace('x0 = 2.0, 3.2, 1.3, 3.0', 'x0 = 2.0, 3.2, 1.3'))
    assert cm.value.args == ("Initial state must have 4 entries",)
    assert cm.value.field == 'scenario.x0'
    with pytest.raises(ScenarioError) as cm:
        parse_scenario(text.replace('\nflow = 5.0, 5.0, 5.0, 5.0\n', '\n'))
    assert cm.value.args == ("Explicit trace needs attack flow",)
    assert cm.value.field == 'attack.flow'
    with pytest.raises(ScenarioError) as cm:
        parse_scenario(text.replace('attacked_steps = 1, 5, 10', 'attacked_steps = 1, 150'))
    assert cm.value.args == ("Attacked step 150 outside horizon 150",)
    assert cm.value.field == 'attack.attacked_steps'

def test_assumption_errors(text):
    with pytest.raises(ValidationError) as cm:
        parse_scenario(text.replace('total_bandwidth = 20.0', 'total_bandwidth = 19.0'))
    assert cm.value.assumption == 'bandwidth-dominance'
    with pytest.raises(ValidationError) as cm:
        parse_scenario(text.replace('attacked_steps = 1, 5, 10', 'attacked_steps = 0, 1, 2'))
    assert cm.value.assumption == 'attack-duration'
    with pytest.raises(ValidationError) as cm:
        parse_scenario(text.replace('attack_duration = 2\n', 'attack_duration = 7\n', 1))
    assert cm.value.assumption == 'attack-duration'
