# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/conftest.py
# DESCRIPTION:    Common fixtures
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

import pytest

from ppls.defense.defense import Defender
from ppls.defense.design import LyapunovDesign
from ppls.defense.network import NetworkConfig
from ppls.defense.plant import PplsSystem
from ppls.defense.scenario import BUNDLED_SCENARIO, Scenario, load_scenario
from ppls.defense.worst_case import StateBetaTable

#: Optimal rates of subsystem 1 of the bundled scenario, four decimal places.
MODE_1_RATES = {'1111': 1.2689, '1011': 1.2689, '0111': 1.2689, '0011': 1.2689,
                '1101': 1.3737, '0101': 1.3926, '1001': 1.4258, '0001': 1.4275,
                '1110': 1.5038, '0110': 1.5646, '1100': 1.6701, '0100': 1.7068,
                '1010': 1.8282, '1000': 1.9140, '0010': 2.0299, '0000': 2.0661,
                }

@pytest.fixture
def scenario() -> Scenario:
    """Returns freshly loaded bundled scenario (safe to modify).
    """
    return load_scenario(BUNDLED_SCENARIO)

@pytest.fixture(scope='session')
def example_scenario() -> Scenario:
    """Returns bundled scenario shared by the session (do not modify).
    """
    return load_scenario(BUNDLED_SCENARIO)

@pytest.fixture(scope='session')
def example_system(example_scenario) -> PplsSystem:
    return example_scenario.build_system()

@pytest.fixture(scope='session')
def example_network(example_scenario) -> NetworkConfig:
    return example_scenario.build_network()

@pytest.fixture(scope='session')
def example_design(example_scenario, example_system) -> LyapunovDesign:
    """Returns design built from printed Lyapunov matrices and default gains.
    """
    return example_scenario.build_design(example_system)

@pytest.fixture(scope='session')
def defender(example_system, example_design, example_network) -> Defender:
    """Returns defender shared by the session, so per-state rates are solved only once.
    """
    return Defender(example_system, example_design, example_network, kbar=100.0)

@pytest.fixture
def mode_1_table() -> StateBetaTable:
    """Returns printed rate table of subsystem 1.
    """
    return StateBetaTable.from_strings(MODE_1_RATES)
