# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/config/conftest.py
# DESCRIPTION:    Common fixtures for ppls.defense.config tests
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

from configparser import ConfigParser

import pytest

@pytest.fixture
def base_conf() -> ConfigParser:
    """Returns configparser without interpolation (as used for scenario files).
    """
    return ConfigParser(interpolation=None)
