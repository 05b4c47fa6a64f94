# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/__init__.py
# DESCRIPTION:    Package initialization
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Cross-layered DoS defense for multi-channel periodic piecewise linear systems
"""

from .__about__ import __version__

__all__ = ['__version__']
