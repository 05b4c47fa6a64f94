# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/config/test_cfg_float.py
# DESCRIPTION:    Tests for ppls.defense.config FloatOption
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
delay = 0.25
[network]
delay = 0.5
total_bandwidth = 20
[channel-1]
[broken]
delay = half
[unbounded]
delay = inf
[undefined]
delay = nan
"""

@pytest.fixture
def conf(base_conf):
    base_conf.read_string(SCENARIO)
    return base_conf

def test_load(conf):
    opt = config.FloatOption('delay', 'Transmission delay')
    assert opt.datatype is float
    assert opt.value is None
    opt.load_config(conf, 'network')
    assert opt.value == 0.5
    opt.load_config(conf, 'channel-1')
    assert opt.value == 0.25
    bandwidth = config.FloatOption('total_bandwidth', 'Total bandwidth')
    bandwidth.load_config(conf, 'network')
    # integral text still gives float
    assert isinstance(bandwidth.value, float)
    assert bandwidth.get_as_str() == '20.0'

def test_required(conf):
    opt = config.FloatOption('total_bandwidth', 'Total bandwidth', required=True)
    with pytest.raises(Error) as cm:
        opt.validate()
    assert cm.value.args == ("Missing value for required option 'total_bandwidth'",)
    opt.load_config(conf, 'network')
    opt.validate()
    with pytest.raises(ValueError) as cm:
        opt.set_value(None)
    assert cm.value.args == ("Value is required for option 'total_bandwidth'.",)

@pytest.mark.parametrize('section, message', [
    ('broken', "could not convert string to float: 'half'"),
    ('unbounded', "Value 'inf' is not a finite number"),
    ('undefined', "Value 'nan' is not a finite number"),
])
def test_invalid_text(conf, section, message):
    opt = config.FloatOption('delay', 'Transmission delay')
    with pytest.raises(ScenarioError) as cm:
        opt.load_config(conf, section)
    assert cm.value.args == (f"Configuration error: {section}.delay: {message}",)
    assert cm.value.field == f'{section}.delay'
    assert opt.value is None

def test_invalid_type():
    opt = config.FloatOption('delay', 'Transmission delay')
    with pytest.raises(TypeError) as cm:
        opt.set_value(1)
    assert cm.value.args == ("Option 'delay' value must be a 'float', not 'int'",)

def test_config_text():
    opt = config.FloatOption('tie_tolerance', 'Relative tolerance of equal decay rates', default=1e-6)
    assert opt.get_config() == ('; Relative tolerance of equal decay rates\n; Type: float\n'
                                ';tie_tolerance = 1e-06\n')
    opt.value = 0.5038
    assert opt.get_config(plain=True) == 'tie_tolerance = 0.5038\n'
    opt.value = 0.1 + 0.2
    assert opt.get_as_str() == '0.30000000000000004'
    opt.clear()
    assert opt.value == 1e-6
