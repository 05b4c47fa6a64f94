# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/strconv.py
# DESCRIPTION:    Data conversion from/to string
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Data conversion from/to string

Scenario files keep floats in shortest round-trip form so that a saved scenario loads back
to identical values. Result files use `format_float` (9 significant digits).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Any

#: Formats a value as scenario text.
TConvertToStr = Callable[[Any], str]
#: Parses scenario text into a value of the given class.
TConvertFromStr = Callable[[type, str], Any]

#: Accepted spellings of True (case insensitive).
TRUE_STR = ['yes', 'true', 'on', 'y', '1']
#: Accepted spellings of False (case insensitive).
FALSE_STR = ['no', 'false', 'off', 'n', '0']

@dataclass(frozen=True)
class Convertor:
    """Registry entry with the conversion pair of one type.
    """
    cls: type
    to_str: TConvertToStr
    from_str: TConvertFromStr
    @property
    def name(self) -> str:
        return self.cls.__name__

_convertors: dict[type, Convertor] = {}

def any2str(value: Any) -> str:
    return str(value)

def str2any(cls: type, value: str) -> Any:
    """Parses by calling `cls(value)`.
    """
    return cls(value)

def float2str(value: float) -> str:
    """Shortest representation that converts back to the same float.
    """
    return repr(float(value))

def str2float(cls: type, value: str) -> float: # noqa: ARG001
    """Converts string to finite float.

    Raises:
        ValueError: When value is not a number or is not finite.
    """
    result = float(value)
    if not math.isfinite(result):
        raise ValueError(f"Value '{value}' is not a finite number")
    return result

def bool2str(value: bool) -> str: # noqa: FBT001
    return 'yes' if value else 'no'

def str2bool(cls: type, value: str) -> bool: # noqa: ARG001
    """Converts string to bool using `TRUE_STR` and `FALSE_STR` literals.
    """
    if (text := value.strip().lower()) in TRUE_STR:
        return True
    if text in FALSE_STR:
        return False
    raise ValueError(f"Value '{value}' is not a valid bool string constant")

def enum2str(value: Enum) -> str:
    return str(value.value)

def str2enum(cls: type[Enum], value: str) -> Enum:
    """Converts member value or (case insensitive) member name to enum member.
    """
    text = value.strip()
    for member in cls:
        if text == str(member.value) or text.lower() == member.name.lower():
            return member
    raise ValueError(f"Illegal value '{value}' for enum type '{cls.__name__}'")

def format_float(value: float, digits: int=9) -> str:
    """Formats float with given number of significant digits (used in result files).
    """
    return f'{value:.{digits}g}'

def register_convertor(cls: type, *, to_str: TConvertToStr=any2str, from_str: TConvertFromStr=str2any) -> None:
    """Registers conversion pair for `cls` and its subclasses, replacing earlier entry.

    `from_str` is called with the target class, so one entry serves a whole class hierarchy
    (all `Enum` types share one).
    """
    _convertors[cls] = Convertor(cls, to_str, from_str)

def _lookup(cls: type) -> Convertor | None:
    return next((_convertors[base] for base in cls.__mro__ if base in _convertors), None)

def get_convertor(cls: type) -> Convertor:
    """Returns entry registered for `cls` or its nearest base class.

    Raises:
        TypeError: When no class in the MRO is registered.
    """
    if (conv := _lookup(cls)) is None:
        raise TypeError(f"Type '{cls.__name__}' has no Convertor")
    return conv

def convert_to_str(value: Any) -> str:
    return get_convertor(type(value)).to_str(value)

def convert_from_str(cls: type, value: str) -> Any:
    """Parses `value` as `cls`.

    Raises:
        TypeError: When `cls` has no convertor.
        ValueError: When text is not valid for `cls`.
    """
    return get_convertor(cls).from_str(cls, value)

register_convertor(str)
register_convertor(int)
register_convertor(float, to_str=float2str, from_str=str2float)
register_convertor(bool, to_str=bool2str, from_str=str2bool)
register_convertor(Enum, to_str=enum2str, from_str=str2enum)
