# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/types.py
# DESCRIPTION:    Types
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Types

Exceptions, sentinels and enumerations shared by all modules of the package.
"""

from __future__ import annotations

from enum import Enum, IntEnum
from typing import ClassVar

# Exceptions

class Error(Exception):
    """Base of all errors raised by the package.

    Keyword arguments become instance attributes, and attributes that were not given read
    as `None`, so handlers can test for optional detail without `getattr`::

        try:
            design(system, alpha)
        except InfeasibleError as exc:
            if exc.mode is not None:
                log.error(BraceMessage("mode {}: {}", exc.mode, exc.hint))
    """
    def __init__(self, *args, **kwargs):
        super().__init__(*args)
        self.__dict__.update(kwargs)
    def __getattr__(self, name):
        # called only for missing attributes; `__notes__` must stay missing for tracebacks
        if name == '__notes__':
            raise AttributeError(name)

class InvalidInputError(Error):
    """Numerical input is malformed (wrong shape, non-finite entries, negative rates...).
    """

class ConditioningError(Error):
    """Matrix is too close to singular. The `condition` attribute holds the estimate.
    """

class ScenarioError(Error):
    """Scenario document could not be parsed. The `field` attribute holds the dotted path
    of the offending value.
    """

class ValidationError(Error):
    """Scenario or model data violate a modelling assumption. The `assumption` attribute
    holds a stable identifier of the violated condition.
    """

class InfeasibleError(Error):
    """Constraint system has no solution. Attributes `problem`, `mode`, `channel_state` and
    `hint` describe where and what to do about it.
    """

class SolverError(Error):
    """Numerical engine failed to deliver a usable answer. The `detail` attribute holds
    the engine status.
    """

# Sentinels

class Sentinel:
    """Named marker value that stands in for a number in result tables.

    Names are upper-cased, and each name has exactly one instance, so sentinels are compared
    with `is`.
    """
    #: Registry of created sentinels by name.
    instances: ClassVar[dict[str, Sentinel]] = {}
    name: str
    def __new__(cls, name: str):
        key = name.upper()
        if (obj := cls.instances.get(key)) is None:
            obj = super().__new__(cls)
            obj.name = key
            cls.instances[key] = obj
        return obj
    def __str__(self):
        return self.name
    def __repr__(self):
        return f"Sentinel('{self.name}')"
    def __reduce__(self):
        return (Sentinel, (self.name,))

#: Worst-case branch the attacker cannot use (minus infinity)
EXCLUDED: Sentinel = Sentinel('EXCLUDED')
#: Missing upper bound (plus infinity)
UNBOUNDED: Sentinel = Sentinel('UNBOUNDED')

# Enums

class BoundaryMode(Enum):
    """Comparison used when deciding whether a channel state is safe for the defender.
    """
    #: Non-strict comparison against the smaller of the budget and cap terms
    FORMULA = 'formula'
    #: Strict comparison against the cap term, non-strict against the budget term
    PAPER_TABLE = 'paper-table'

class Strategy(Enum):
    """Defense strategy driven by the simulator.
    """
    #: Joint bandwidth allocation and gain optimization
    CROSS = 'cross'
    #: Fixed bandwidth equal to normal flow, gain optimized
    A = 'a'
    #: Default gains, bandwidth allocation optimized
    B = 'b'
    #: No control input at all
    OPEN_LOOP = 'open-loop'

class DesignSource(Enum):
    """Origin of Lyapunov matrices and default gains.
    """
    #: Solve the attack-free design problem
    SOLVE = 'solve'
    #: Use matrices given in the scenario
    PRINTED = 'printed'

class TracePolicy(Enum):
    """Attack trace generator policy.
    """
    UNIFORM_SPLIT = 'uniform-split'
    FORCE_ONE = 'force-one'
    RANDOM = 'random'
    EXPLICIT = 'explicit'

class SolveStatus(IntEnum):
    """Outcome of a conic or linear program.
    """
    OPTIMAL = 1
    FEASIBLE = 2
    INFEASIBLE = 3
    NUMERICAL_FAILURE = 4
