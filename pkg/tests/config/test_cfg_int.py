# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/config/test_cfg_int.py
# DESCRIPTION:    Tests for ppls.defense.config IntOption
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

import pytest

from ppls.defense import config
from ppls.defense.types import Error, ScenarioError

SCENARIO = """[DEFAULT]
horizon = 60
[scenario]
horizon = 150
[attack]
[broken]
horizon = 15 steps
[shifted]
horizon = -3
"""

@pytest.fixture
def conf(base_conf):
    base_conf.read_string(SCENARIO)
    return base_conf

@pytest.fixture
def horizon() -> config.IntOption:
    return config.IntOption('horizon', 'Simulation horizon in steps')

def test_load(conf, horizon):
    assert (horizon.name, horizon.datatype, horizon.required) == ('horizon', int, False)
    assert horizon.default is None
    assert horizon.value is None
    horizon.validate()
    horizon.load_config(conf, 'scenario')
    assert horizon.value == 150
    assert horizon.get_as_str() == '150'
    # section without the option inherits DEFAULT
    horizon.load_config(conf, 'attack')
    assert horizon.value == 60
    horizon.value = None
    horizon.load_config(conf, 'DEFAULT')
    assert horizon.value == 60
    horizon.clear()
    assert horizon.value is None

def test_required(conf):
    opt = config.IntOption('horizon', 'Simulation horizon in steps', required=True)
    with pytest.raises(Error) as cm:
        opt.validate()
    assert cm.value.args == ("Missing value for required option 'horizon'",)
    opt.load_config(conf, 'scenario')
    opt.validate()
    with pytest.raises(ValueError) as cm:
        opt.value = None
    assert cm.value.args == ("Value is required for option 'horizon'.",)
    assert opt.value == 150

def test_invalid(conf, horizon):
    with pytest.raises(ScenarioError) as cm:
        horizon.load_config(conf, 'broken')
    assert cm.value.args == ("Configuration error: broken.horizon: "
                             "invalid literal for int() with base 10: '15 steps'",)
    assert cm.value.field == 'broken.horizon'
    with pytest.raises(TypeError) as cm:
        horizon.set_value('150')
    assert cm.value.args == ("Option 'horizon' value must be a 'int', not 'str'",)
    with pytest.raises(ScenarioError) as cm:
        horizon.load_config(conf, 'plant')
    assert cm.value.args == ("Configuration error: section 'plant' not found!",)

def test_negative(conf, horizon):
    with pytest.raises(ValueError) as cm:
        horizon.set_value(-1)
    assert cm.value.args == ("Negative numbers not allowed",)
    with pytest.raises(ScenarioError) as cm:
        horizon.load_config(conf, 'shifted')
    assert cm.value.args == ("Configuration error: shifted.horizon: Negative numbers not allowed",)
    offset = config.IntOption('horizon', 'Step offset', signed=True)
    offset.load_config(conf, 'shifted')
    assert offset.value == -3

def test_default_and_config(conf):
    opt = config.IntOption('seed', 'Random trace seed', default=0)
    assert opt.value == 0
    assert opt.get_config() == '; Random trace seed\n; Type: int\n;seed = 0\n'
    opt.value = 7
    assert opt.get_config() == '; Random trace seed\n; Type: int\nseed = 7\n'
    assert opt.get_config(plain=True) == 'seed = 7\n'
    opt.clear()
    assert opt.value == 0
    opt.clear(to_default=False)
    assert opt.get_config(plain=True) == ';seed = <UNDEFINED>\n'
