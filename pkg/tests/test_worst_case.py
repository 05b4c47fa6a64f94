# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/test_worst_case.py
# DESCRIPTION:    Tests for ppls.defense.worst_case
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

import numpy as np
import pytest

from ppls.defense.network import ChannelState, NetworkConfig
from ppls.defense.types import EXCLUDED, UNBOUNDED, BoundaryMode, InvalidInputError
from ppls.defense.worst_case import *

RATE_TOLERANCE = 0.005
ORACLE_INSTANCES = 12
WORST_RATES = (1.5038, 3.1578, 3.4006)

def network(**kwargs) -> NetworkConfig:
    params = {'normal_flow': [5.0] * 4, 'buffer_size': [10.0] * 4, 'delay': 0.5, 'total_bandwidth': 20.0,
              'attack_budget': 20.0, 'attack_cap': [15.0] * 4}
    params.update(kwargs)
    return NetworkConfig(**params)

def random_instance(rng: np.random.Generator) -> tuple[StateBetaTable, NetworkConfig]:
    r_11 = rng.uniform(0.5, 1.0)
    r_01 = r_11 + rng.uniform(0.1, 1.0)
    r_10 = r_11 + rng.uniform(0.1, 1.0)
    r_00 = max(r_01, r_10) + rng.uniform(0.1, 1.0)
    table = StateBetaTable.from_strings({'11': r_11, '01': r_01, '10': r_10, '00': r_00})
    flow = rng.uniform(1.0, 5.0, 2)
    cap = rng.uniform(5.0, 40.0, 2)
    cfg = NetworkConfig(normal_flow=flow, buffer_size=rng.uniform(5.0, 10.0, 2), delay=rng.uniform(0.2, 0.5),
                        total_bandwidth=float(np.max(flow + cap)) + rng.uniform(0.5, 10.0),
                        attack_budget=rng.uniform(5.0, 60.0), attack_cap=cap)
    return table, cfg

def test_state_beta_table(mode_1_table):
    assert len(mode_1_table) == 16
    assert mode_1_table.n == 4
    assert mode_1_table.mode is None
    assert mode_1_table[ChannelState.parse('1110')] == 1.5038
    ascending = [str(state) for state, _ in mode_1_table.ascending()]
    # equal rates: more enabled channels first, then smallest bits
    assert ascending[:4] == ['[1 1 1 1]', '[0 1 1 1]', '[1 0 1 1]', '[0 0 1 1]']
    assert ascending[-1] == '[0 0 0 0]'

def test_state_beta_table_errors():
    with pytest.raises(InvalidInputError) as cm:
        StateBetaTable({})
    assert cm.value.args == ("Rate table is empty",)
    with pytest.raises(InvalidInputError) as cm:
        StateBetaTable.from_strings({'11': 1.0, '01': 1.5, '10': 1.5})
    assert cm.value.args == ("Rate table misses 1 states, e.g. [0 0]",)
    with pytest.raises(InvalidInputError) as cm:
        StateBetaTable.from_strings({'11': 1.0, '01': 1.5, '10': 1.5, '00': -1.0})
    assert cm.value.args == ("Rate of state [0 0] must be non-negative, not -1.0",)

def test_force_pattern(example_network):
    pattern = ForcePattern.parse('[? ? ? 0]')
    assert pattern == ForcePattern(4, (3,))
    assert ForcePattern.parse('???0') == pattern
    assert str(pattern) == '[? ? ? 0]'
    assert pattern.free == (0, 1, 2)
    assert pattern.completion() == ChannelState.parse('1110')
    assert pattern.allows(ChannelState.parse('0110'))
    assert not pattern.allows(ChannelState.parse('0001'))
    assert pattern.cost(example_network) == 15.0
    assert ForcePattern(4).cost(example_network) == 0.0
    assert ForcePattern(3, (2, 0, 2)).jammed == (0, 2)
    assert force_cost(example_network, 1) == 15.0
    with pytest.raises(ValueError) as cm:
        ForcePattern.parse('?1')
    assert cm.value.args == ("Invalid force pattern '?1'",)
    with pytest.raises(InvalidInputError) as cm:
        ForcePattern(2, (2,))
    assert cm.value.args == ("Jammed channel out of range in (2,)",)

def test_enumerate_force(example_network):
    patterns = enumerate_force(example_network)
    assert [str(p) for p in patterns] == ['[? ? ? ?]', '[0 ? ? ?]', '[? 0 ? ?]', '[? ? 0 ?]', '[? ? ? 0]']
    assert len(enumerate_force(network(attack_budget=30.0))) == 11
    # threshold above the cap cannot be paid
    assert len(enumerate_force(network(attack_cap=[10.0] * 4))) == 1

def test_safe_states(example_network):
    cfg = example_network
    jam_4 = ForcePattern.parse('???0')
    safe = enumerate_safe(cfg, jam_4)
    assert len(safe) == 8
    assert ChannelState.parse('1110') in safe
    free = ForcePattern(4)
    # a single channel sits on the boundary of the cap term
    assert enumerate_safe(cfg, free) == [ChannelState.zeros(4)]
    assert not is_safe(cfg, free, ChannelState.parse('0001'))
    assert is_safe(cfg, free, ChannelState.parse('0001'), BoundaryMode.FORMULA)
    assert len(enumerate_safe(cfg, free, BoundaryMode.FORMULA)) == 5
    assert not is_safe(cfg, jam_4, ChannelState.parse('0001'))

def test_sea_hand_values(mode_1_table, example_network):
    result = sea_from_table(mode_1_table, example_network)
    assert result.boundary is BoundaryMode.PAPER_TABLE
    assert result.beta_tilde == pytest.approx(1.5038)
    assert result.beta_bar == pytest.approx(1.5038)
    assert len(result.patterns) == 5
    jam_4 = result.pattern('[? ? ? 0]')
    assert jam_4.completion_rate == 1.5038
    assert jam_4.beta_hat == pytest.approx(1.5038)
    assert jam_4.candidates == [ChannelState.parse('1110')]
    assert jam_4.value == pytest.approx(1.5038)
    assert np.array_equal(jam_4.witness, [0.0, 0.0, 0.0, 15.0])
    assert len(jam_4.checks) == 1
    assert not jam_4.checks[0].feasible
    free = result.pattern('[? ? ? ?]')
    assert free.beta_hat == pytest.approx(2.0661)
    assert free.value == pytest.approx(1.5038)
    assert len(free.candidates) == 8
    assert len(free.filtered_out()) == 8
    for text in ('[0 ? ? ?]', '[? 0 ? ?]', '[? ? 0 ?]'):
        assert result.pattern(text).excluded, text
        assert result.pattern(text).value is EXCLUDED
    # ties go to the pattern with more jammed channels
    assert result.worst is jam_4
    assert np.array_equal(result.witness, [0.0, 0.0, 0.0, 15.0])
    with pytest.raises(KeyError):
        result.pattern('[0 0 ? ?]')

def test_sea_formula(mode_1_table, example_network):
    result = sea_from_table(mode_1_table, example_network, boundary=BoundaryMode.FORMULA)
    assert result.boundary is BoundaryMode.FORMULA
    assert result.beta_bar == pytest.approx(1.5038)
    free = result.pattern('[? ? ? ?]')
    assert free.beta_hat == pytest.approx(1.4275)
    assert free.candidates == []
    assert free.excluded
    assert result.pattern('[? ? ? 0]').value == pytest.approx(1.5038)

def test_sea_single_channel():
    pattern = ForcePattern(1)
    cfg = NetworkConfig(normal_flow=[5.0], buffer_size=[10.0], delay=0.5, total_bandwidth=20.0,
                        attack_budget=20.0, attack_cap=[15.0])
    table = StateBetaTable.from_strings({'1': 1.0, '0': 2.0})
    # the zero state is always safe, so the upper bound exists
    result = analyze_pattern(table, cfg, pattern, 1.0)
    assert result.beta_hat is not UNBOUNDED
    assert result.beta_hat == 2.0
    assert result.value == 1.0

def test_sea_errors(example_network):
    table = StateBetaTable.from_strings({'11': 1.0, '01': 1.5, '10': 1.5, '00': 2.0})
    with pytest.raises(InvalidInputError) as cm:
        sea_from_table(table, example_network)
    assert cm.value.args == ("Rate table has 2 channels, network has 4",)
    with pytest.raises(InvalidInputError) as cm:
        brute_force_worst_case(table, example_network, grid_density=1)
    assert cm.value.args == ("Grid density must be at least 2",)

def test_oracle():
    rng = np.random.default_rng(20261018)
    for _ in range(ORACLE_INSTANCES):
        table, cfg = random_instance(rng)
        expected = brute_force_worst_case(table, cfg)
        assert sea_from_table(table, cfg).beta_bar == pytest.approx(expected, abs=1e-6)
        assert sea_from_table(table, cfg, boundary=BoundaryMode.FORMULA).beta_bar == pytest.approx(expected, abs=1e-6)

def test_boundary_tie():
    # channels 2 and 3 sit exactly on their bandwidth cap, and jamming channel 1 leaves
    # more budget than either cap
    cfg = NetworkConfig(normal_flow=[5.0, 5.0, 5.0], buffer_size=[4.5, 7.5, 7.5], delay=0.5,
                        total_bandwidth=20.0, attack_budget=20.0, attack_cap=[10.0, 15.0, 15.0])
    table = StateBetaTable.from_strings({'000': 2.0, '100': 1.6, '010': 1.4, '001': 1.3, '110': 1.2,
                                         '101': 1.1, '011': 1.0, '111': 0.8})
    pattern = ForcePattern.parse('[0 ? ?]')
    tie = ChannelState.parse('010')
    assert not is_safe(cfg, pattern, tie)
    assert is_safe(cfg, pattern, tie, BoundaryMode.FORMULA)
    paper = sea_from_table(table, cfg)
    formula = sea_from_table(table, cfg, boundary=BoundaryMode.FORMULA)
    assert paper.beta_tilde == formula.beta_tilde == 1.6
    assert paper.pattern('[0 ? ?]').beta_hat == 2.0
    assert paper.pattern('[0 ? ?]').value == 2.0
    assert formula.pattern('[0 ? ?]').beta_hat == 1.3
    assert formula.pattern('[0 ? ?]').excluded
    assert paper.beta_bar == 2.0
    assert formula.beta_bar == 1.6
    assert str(formula.worst.pattern) == '[? 0 0]'
    # the attacker must jam channels 2 and 3, which leaves channel 1 affordable
    assert brute_force_worst_case(table, cfg) == pytest.approx(formula.beta_bar)

def test_oracle_hand_values(mode_1_table, example_network):
    # four channels are within reach of the exhaustive analysis for a single table
    assert brute_force_worst_case(mode_1_table, example_network, grid_density=4) == pytest.approx(1.5038)

def test_sea(defender):
    for i, expected in enumerate(WORST_RATES, 1):
        result = sea(defender, i)
        assert result.mode == i
        assert result.beta_bar == pytest.approx(expected, abs=RATE_TOLERANCE)
        assert result.beta_tilde <= result.beta_bar
