# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/config/test_cfg_conf.py
# DESCRIPTION:    Tests for ppls.defense.config Config and ConfigListOption
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

from configparser import ConfigParser

import numpy as np
import pytest

from ppls.defense import config
from ppls.defense.types import BoundaryMode, Error, ScenarioError

class ModeConfig(config.Config):
    "Mode for testing"
    def __init__(self, name: str):
        super().__init__(name)
        # options
        self.a: config.MatrixOption = config.MatrixOption("a", "State matrix", required=True, shape=(2, 2))
        self.dwell: config.IntOption = config.IntOption("dwell", "Dwell time", required=True, default=1)

class NetConfig(config.Config):
    "Network for testing"
    def __init__(self, name: str):
        super().__init__(name)
        # options
        self.rates: config.ListOption = config.ListOption("rates", float, "Normal flows", required=True)
        self.boundary: config.EnumOption = config.EnumOption("boundary", BoundaryMode, "Boundary mode",
                                                             default=BoundaryMode.PAPER_TABLE)

class PlantConfig(config.Config):
    """Plant for testing.

Has two options, list of modes and network sub-config.
"""
    def __init__(self, *, optional: bool=False):
        super().__init__("plant", optional=optional)
        # options
        self.label: config.StrOption = config.StrOption("label", "Plant label")
        self.modes: config.ConfigListOption = config.ConfigListOption("modes", ModeConfig, "Modes",
                                                                      required=True)
        # sub configs
        self.net: NetConfig = NetConfig("net")

@pytest.fixture
def conf(base_conf):
    """Returns configparser initialized with data.
    """
    conf_str = """[DEFAULT]
dwell = 4
[scenario]
label = toy plant
modes = mode-1, mode-2

[mode-1]
a =
   1.1, 0.2
   0.0, 0.9

[mode-2]
a =
   0.8, 0.0
   0.3, 1.05
dwell = 6

[net]
rates = 5, 5

[empty]

[bad-mode]
a = 1.0, 2.0
"""
    base_conf.read_string(conf_str)
    return base_conf

def test_basics():
    cfg = PlantConfig()
    assert cfg.name == "plant"
    assert not cfg.optional
    assert cfg.get_description() == PlantConfig.__doc__
    assert len(cfg.options) == 2
    assert cfg.label in cfg.options
    assert cfg.modes in cfg.options
    assert cfg.configs == [cfg.net]
    assert cfg.modes.value == []
    assert cfg.modes.get_formatted() == "<UNDEFINED>"
    assert cfg.net.boundary.value is BoundaryMode.PAPER_TABLE
    #
    with pytest.raises(ValueError) as cm:
        cfg.label = "value"
    assert cm.value.args == ("Cannot assign values to option itself, use 'option.value' instead",)
    #
    cfg.modes.value = [ModeConfig("test-mode")]
    assert len(cfg.configs) == 2
    assert cfg.modes.value[0].name == "test-mode"
    assert cfg.modes.get_formatted() == "test-mode"
    with pytest.raises(ValueError) as cm:
        cfg.modes.value = [NetConfig("net-2")]
    assert cm.value.args == ("List item[0] has wrong type",)

def test_load_config(conf):
    ocfg = PlantConfig(optional=True)
    ocfg.load_config(conf, "(no-section)")
    assert ocfg.label.value is None
    #
    cfg = PlantConfig()
    with pytest.raises(ScenarioError) as cm:
        cfg.load_config(conf)
    assert cm.value.args == ("Configuration error: section 'plant' not found!",)
    assert cm.value.field == "plant"
    #
    cfg.load_config(conf, "scenario")
    cfg.validate()
    assert cfg.label.value == "toy plant"
    assert [mode.name for mode in cfg.modes.value] == ["mode-1", "mode-2"]
    assert len(cfg.configs) == 3
    mode_1, mode_2 = cfg.modes.value
    assert np.array_equal(mode_1.a.value, [[1.1, 0.2], [0.0, 0.9]])
    assert mode_1.dwell.value == 4
    assert mode_2.dwell.value == 6
    assert cfg.net.rates.value == [5.0, 5.0]
    assert cfg.net.boundary.value is BoundaryMode.PAPER_TABLE

def test_validate(conf):
    cfg = PlantConfig()
    with pytest.raises(Error) as cm:
        cfg.validate()
    assert cm.value.args == ("Missing value for required option 'modes'",)
    cfg.modes.value = [ModeConfig("mode-1")]
    cfg.net.rates.value = [1.0]
    with pytest.raises(Error) as cm:
        cfg.validate()
    assert cm.value.args == ("Missing value for required option 'a'",)
    cfg.modes.value[0].a.value = np.eye(2)
    cfg.validate()

def test_load_bad_subconfig(conf):
    mode = ModeConfig("bad-mode")
    with pytest.raises(ScenarioError) as cm:
        mode.load_config(conf)
    assert cm.value.args == ("Configuration error: bad-mode.a: Option 'a' dimension 0 must be 2, not 1",)
    assert cm.value.field == "bad-mode.a"

def test_clear(conf):
    cfg = PlantConfig()
    cfg.load_config(conf, "scenario")
    mode_1 = cfg.modes.value[0]
    cfg.clear()
    assert cfg.label.value is None
    assert cfg.modes.value == []
    assert cfg.net.rates.value is None
    assert cfg.net.boundary.value is BoundaryMode.PAPER_TABLE
    # cleared list no longer owns the sub-configs
    assert mode_1.dwell.value == 4
    assert np.array_equal(mode_1.a.value, [[1.1, 0.2], [0.0, 0.9]])
    cfg.load_config(conf, "scenario")
    assert cfg.modes.value[0] is not mode_1
    cfg.net.clear(to_default=False)
    assert cfg.net.boundary.value is None

def test_get_config(conf):
    cfg = PlantConfig()
    cfg.load_config(conf, "scenario")
    text = cfg.get_config(plain=True)
    assert text.startswith("[plant]\nlabel = toy plant\nmodes = mode-1, mode-2\n")
    assert "[mode-2]\n" in text
    assert ";boundary = paper-table\n" in text
    # written configuration is read back to the same values
    reread = ConfigParser(interpolation=None)
    reread.read_string(text)
    cfg_2 = PlantConfig()
    cfg_2.load_config(reread)
    cfg_2.validate()
    assert cfg_2.label.value == "toy plant"
    assert [mode.dwell.value for mode in cfg_2.modes.value] == [4, 6]
    assert np.array_equal(cfg_2.modes.value[1].a.value, [[0.8, 0.0], [0.3, 1.05]])
    assert cfg_2.net.rates.value == [5.0, 5.0]
    #
    described = cfg.get_config()
    assert described.startswith("[plant]\n;\n; Plant for testing.\n")
    assert "; REQUIRED option.\n" in described
