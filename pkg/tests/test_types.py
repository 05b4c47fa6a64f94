# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/test_types.py
# DESCRIPTION:    Tests for ppls.defense.types
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

import copy

import pytest

from ppls.defense.types import *

def test_exceptions():
    "Test exceptions"
    e = Error("Message", code=1, subject='x')
    assert e.args == ("Message",)
    assert e.code == 1
    assert e.subject == 'x'
    assert e.other_attr is None
    with pytest.raises(AttributeError):
        _ = e.__notes__

def test_exception_hierarchy():
    for cls in (InvalidInputError, ConditioningError, ScenarioError, ValidationError, InfeasibleError,
                SolverError):
        assert issubclass(cls, Error)
    e = ValidationError("Total bandwidth too low", assumption='bandwidth-dominance')
    assert e.assumption == 'bandwidth-dominance'
    assert e.field is None
    e = InfeasibleError("No design", problem='offline', mode=2, hint="raise alpha")
    assert (e.problem, e.mode, e.hint) == ('offline', 2, "raise alpha")
    assert e.channel_state is None

def test_sentinel():
    "Test Sentinel"
    assert EXCLUDED.name == "EXCLUDED"
    assert str(UNBOUNDED) == "UNBOUNDED"
    assert repr(EXCLUDED) == "Sentinel('EXCLUDED')"
    for name in ("EXCLUDED", "UNBOUNDED"):
        assert name in Sentinel.instances
    for name, sentinel in Sentinel.instances.items():
        assert sentinel is Sentinel(name)
    assert Sentinel('excluded') is EXCLUDED
    assert EXCLUDED is not UNBOUNDED
    assert copy.deepcopy([EXCLUDED])[0] is EXCLUDED

def test_enums():
    assert BoundaryMode('paper-table') is BoundaryMode.PAPER_TABLE
    assert BoundaryMode('formula') is BoundaryMode.FORMULA
    assert Strategy('open-loop') is Strategy.OPEN_LOOP
    assert [s.value for s in Strategy] == ['cross', 'a', 'b', 'open-loop']
    assert TracePolicy('uniform-split') is TracePolicy.UNIFORM_SPLIT
    assert DesignSource('printed') is DesignSource.PRINTED
    assert SolveStatus.OPTIMAL < SolveStatus.INFEASIBLE
