# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/config/test_cfg_bool.py
# DESCRIPTION:    Tests for ppls.defense.config BoolOption
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
cross_check = no
[settings]
cross_check = Yes
[compare]
[broken]
cross_check = maybe
"""

@pytest.fixture
def conf(base_conf):
    base_conf.read_string(SCENARIO)
    return base_conf

def test_load(conf):
    opt = config.BoolOption('cross_check', 'Verify worst case by brute force')
    assert opt.datatype is bool
    assert opt.value is None
    opt.load_config(conf, 'settings')
    assert opt.value is True
    assert opt.get_as_str() == 'yes'
    opt.load_config(conf, 'compare')
    assert opt.value is False
    assert opt.get_as_str() == 'no'

def test_required():
    opt = config.BoolOption('cross_check', 'Verify worst case by brute force', required=True)
    with pytest.raises(Error) as cm:
        opt.validate()
    assert cm.value.args == ("Missing value for required option 'cross_check'",)
    opt.value = False
    opt.validate()

def test_invalid(conf):
    opt = config.BoolOption('cross_check', 'Verify worst case by brute force')
    with pytest.raises(ScenarioError) as cm:
        opt.load_config(conf, 'broken')
    assert cm.value.args == ("Configuration error: broken.cross_check: "
                             "Value 'maybe' is not a valid bool string constant",)
    with pytest.raises(TypeError) as cm:
        opt.set_value(1)
    assert cm.value.args == ("Option 'cross_check' value must be a 'bool', not 'int'",)

def test_config_text():
    opt = config.BoolOption('no_plots', 'Skip figures', default=True)
    assert opt.get_config() == '; Skip figures\n; Type: bool\n;no_plots = yes\n'
    opt.value = False
    assert opt.get_config(plain=True) == 'no_plots = no\n'
