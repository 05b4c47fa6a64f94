# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
__version__ = "0.9.0"
