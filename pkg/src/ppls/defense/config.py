# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/config.py
# DESCRIPTION:    Classes for configuration definitions
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Classes for configuration definitions

Scenario files are `configparser` documents. A `Config` maps to one section and owns typed
`Option` attributes. Sub-configs are either attributes of `Config` type (fixed section
name) or items of a `ConfigListOption` (section names listed in the owning section, like
`subsystems = subsystem-1, subsystem-2`).

Values are converted from/to text by `~ppls.defense.strconv`, so a written scenario reads
back to identical values. Load errors are raised as `ScenarioError` with `field` set to
`section.option`.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from configparser import DEFAULTSECT, ConfigParser
from enum import Enum
from typing import Any, Generic, TypeVar

import numpy as np

from .strconv import convert_from_str, convert_to_str, str2enum
from .types import Error, ScenarioError

T = TypeVar("T")

#: Text written for options without value.
UNDEFINED_STR = '<UNDEFINED>'

#: Indentation of continuation lines in written values.
CONTINUATION = '\n   '

def _split_items(value: str, separator: str | None) -> list[str]:
    if separator is None:
        separator = '\n' if '\n' in value else ','
    return [item.strip() for item in value.split(separator) if item.strip()]

def _commented(text: str) -> list[str]:
    return [f"; {line}\n" for line in text.strip().splitlines()]

class Option(Generic[T], ABC):
    """Base class of typed scenario options.

    Arguments:
        name:        Option name (key in the section).
        datatype:    Python type of the value.
        description: Text written as comment above the option. Can span multiple lines.
        required:    Whether `validate` demands a value.
        default:     Value used when the section does not set the option.
    """
    def __init__(self, name: str, datatype: type, description: str, *, required: bool=False,
                 default: T | None=None):
        assert name and isinstance(name, str), "name required" # noqa: S101
        assert datatype and isinstance(datatype, type), "datatype required" # noqa: S101
        assert description and isinstance(description, str), "description required" # noqa: S101
        assert default is None or isinstance(default, datatype), "default has wrong data type" # noqa: S101
        self.name: str = name
        self.datatype: type = datatype
        self.description: str = description
        self.required: bool = required
        self.default: T | None = default
        if default is not None:
            self.set_value(default)
    def _check_value(self, value: T) -> None:
        if value is None:
            if self.required:
                raise ValueError(f"Value is required for option '{self.name}'.")
        elif not isinstance(value, self.datatype):
            raise TypeError(f"Option '{self.name}' value must be a '{self.datatype.__name__}',"
                            f" not '{type(value).__name__}'")
    def _get_value_description(self) -> str:
        return f'{self.datatype.__name__}\n'
    def _is_default(self) -> bool:
        return self.get_value() == self.default
    def _get_config_lines(self, *, plain: bool=False) -> list[str]:
        # options left at default (or undefined) are written commented out
        lines = []
        if not plain:
            if self.required:
                lines.append("; REQUIRED option.\n")
            lines.extend(_commented(self.description))
            kinds = self._get_value_description().splitlines()
            lines.extend(f"; {'Type: ' if i == 0 else ''}{kind}\n" for i, kind in enumerate(kinds))
        value = self.get_value()
        prefix = ';' if value is None or self._is_default() else ''
        first, *rest = (UNDEFINED_STR if value is None else self.get_formatted()).splitlines(keepends=True) or ['']
        lines.append(''.join([f'{prefix}{self.name} = {first}', *(f'{prefix}{line}' for line in rest)]))
        if not lines[-1].endswith('\n'):
            lines[-1] += '\n'
        return lines
    def load_config(self, config: ConfigParser, section: str) -> None:
        """Sets value from `section` of `config`. Keeps the current value when the section
        does not set the option.

        Raises:
            ScenarioError: When the section is missing or the value is invalid.
        """
        if not config.has_section(section) and section != DEFAULTSECT:
            raise ScenarioError(f"Configuration error: section '{section}' not found!", field=section)
        if not config.has_option(section, self.name):
            return
        try:
            self.set_as_str(config[section][self.name])
        except (ValueError, TypeError) as exc:
            raise ScenarioError(f"Configuration error: {section}.{self.name}: {exc}",
                                field=f'{section}.{self.name}') from exc
    def validate(self) -> None:
        """Raises `.Error` when a required option has no value.
        """
        if self.required and self.get_value() is None:
            raise Error(f"Missing value for required option '{self.name}'")
    def get_config(self, *, plain: bool=False) -> str:
        """Returns option as `configparser` text. With `plain`, comments (description, type)
        are left out.
        """
        return ''.join(self._get_config_lines(plain=plain))
    def clear(self, *, to_default: bool=True) -> None:
        """Resets value to default, or to None when `to_default` is False.
        """
        self._value = self.default if to_default else None
    @abstractmethod
    def get_formatted(self) -> str:
        """Returns value as written into scenario files.
        """
    @abstractmethod
    def set_as_str(self, value: str) -> None:
        """Sets value from scenario file text.

        Raises:
            ValueError: When text is not a valid value.
        """
    def get_as_str(self) -> str:
        return self.get_formatted()
    def get_value(self) -> T:
        return self._value
    def set_value(self, value: T) -> None:
        """Sets value.

        Raises:
            TypeError: When value has wrong type.
            ValueError: When value is not valid for the option.
        """
        self._check_value(value)
        self._value = value

class Config:
    """Scenario section with options and sub-configs.

    Descendants create their options and sub-configs as instance attributes in `__init__`.
    Option attributes can't be rebound; assign to `option.value` instead.

    Arguments:
        name:        Section name.
        optional:    When True, a missing section is not an error and leaves values untouched.
        description: Section description; defaults to the class docstring.
    """
    def __init__(self, name: str, *, optional: bool=False, description: str | None=None):
        self._name: str = name
        self._optional: bool = optional
        self._description: str | None = self.__doc__ if description is None else description
    def __setattr__(self, name, value):
        if any(isinstance(attr, Option) and attr.name == name for attr in vars(self).values()):
            raise ValueError("Cannot assign values to option itself, use 'option.value' instead")
        super().__setattr__(name, value)
    def validate(self) -> None:
        """Validates options of this section and of all sub-configs.

        Raises:
            Error: When a required option has no value, or a descendant check fails.
        """
        for item in (*self.options, *self.configs):
            item.validate()
    def clear(self, *, to_default: bool=True) -> None:
        """Clears options of this section and of sub-configs held as attributes. Items of
        `ConfigListOption` options are detached with their values untouched.
        """
        for item in (*self.options, *self._attr_configs()):
            item.clear(to_default=to_default)
    def get_description(self) -> str:
        return self._description or ''
    def get_config(self, *, plain: bool=False) -> str:
        """Returns section and all sub-config sections as `configparser` text.
        """
        lines = [f"[{self.name}]\n"]
        if not plain:
            lines.append(';\n')
            lines.extend(_commented(self.get_description()))
        for option in self.options:
            if not plain:
                lines.append('\n')
            lines.append(option.get_config(plain=plain))
        for config in self.configs:
            lines.append('\n')
            lines.append(config.get_config(plain=plain))
        return ''.join(lines)
    def load_config(self, config: ConfigParser, section: str | None=None) -> None:
        """Loads values from `section` (own name by default) of `config`. Sub-configs are
        loaded from their own sections.

        Raises:
            ScenarioError: When a value is invalid, or the section is missing and the config
                           is not optional.
        """
        section = self.name if section is None else section
        if not config.has_section(section):
            if self._optional:
                return
            if section != DEFAULTSECT:
                raise ScenarioError(f"Configuration error: section '{section}' not found!", field=section)
        try:
            for option in self.options:
                option.load_config(config, section)
            for subcfg in self.configs:
                subcfg.load_config(config)
        except Error:
            raise
        except Exception as exc: # pragma: no cover
            raise ScenarioError(f"Configuration error: {exc}", field=section) from exc
    @property
    def name(self) -> str:
        """Section name.
        """
        return self._name
    @property
    def optional(self) -> bool:
        return self._optional
    @property
    def options(self) -> list[Option]:
        """Options owned by this section, in definition order.
        """
        return [v for v in vars(self).values() if isinstance(v, Option)]
    def _attr_configs(self) -> list[Config]:
        return [v for v in vars(self).values() if isinstance(v, Config)]
    @property
    def configs(self) -> list[Config]:
        """Sub-configs: `Config` attributes first, then items of `ConfigListOption` options.
        """
        result = self._attr_configs()
        for opt in self.options:
            if isinstance(opt, ConfigListOption):
                result.extend(opt.value)
        return result

# Options

class _ConvertedOption(Option[T]):
    """Option with scalar value converted by the `strconv` registry.
    """
    def __init__(self, name: str, datatype: type, description: str, *, required: bool=False,
                 default: T | None=None):
        self._value: T | None = None
        super().__init__(name, datatype, description, required=required, default=default)
    def get_formatted(self) -> str:
        return UNDEFINED_STR if self._value is None else convert_to_str(self._value)
    def set_as_str(self, value: str) -> None:
        self.set_value(convert_from_str(self.datatype, value))

class StrOption(_ConvertedOption[str]):
    """Option with string value. Multi-line values are written on continuation lines.
    """
    def __init__(self, name: str, description: str, *, required: bool=False, default: str | None=None):
        super().__init__(name, str, description, required=required, default=default)
    def get_formatted(self) -> str:
        if self._value is None:
            return UNDEFINED_STR
        return CONTINUATION.join(self._value.splitlines()) if '\n' in self._value else self._value
    value: str = property(Option.get_value, Option.set_value, doc="Current option value")

class IntOption(_ConvertedOption[int]):
    """Option with integer value, non-negative unless `signed`.
    """
    def __init__(self, name: str, description: str, *, required: bool=False,
                 default: int | None=None, signed: bool=False):
        self.signed: bool = signed
        super().__init__(name, int, description, required=required, default=default)
    def set_value(self, value: int | None) -> None:
        """Sets value.

        Raises:
            TypeError: When value is not an int.
            ValueError: When value is negative and option is not signed.
        """
        self._check_value(value)
        if value is not None and value < 0 and not self.signed:
            raise ValueError("Negative numbers not allowed")
        self._value = value
    value: int = property(Option.get_value, set_value, doc="Current option value")

class FloatOption(_ConvertedOption[float]):
    """Option with finite float value, written in shortest round-trip form.
    """
    def __init__(self, name: str, description: str, *, required: bool=False,
                 default: float | None=None):
        super().__init__(name, float, description, required=required, default=default)
    value: float = property(Option.get_value, Option.set_value, doc="Current option value")

class BoolOption(_ConvertedOption[bool]):
    """Option with boolean value (`yes`/`no`, `true`/`false`, `on`/`off`, `1`/`0`).
    """
    def __init__(self, name: str, description: str, *, required: bool=False,
                 default: bool | None=None):
        super().__init__(name, bool, description, required=required, default=default)
    value: bool = property(Option.get_value, Option.set_value, doc="Current option value")

class EnumOption(_ConvertedOption[Enum]):
    """Option with enum value, written by member value. Member names (case insensitive) are
    accepted as well.

    Arguments:
        allowed: Accepted members; all members of `enum_class` when not given.
    """
    def __init__(self, name: str, enum_class: type[Enum], description: str, *, required: bool=False,
                 default: Enum | None=None, allowed: Sequence[Enum] | None=None):
        self.allowed: Sequence[Enum] = list(enum_class if allowed is None else allowed)
        super().__init__(name, enum_class, description, required=required, default=default)
    def _get_value_description(self) -> str:
        return f"enum [{', '.join(str(x.value) for x in self.allowed)}]\n"
    def set_as_str(self, value: str) -> None:
        self.set_value(str2enum(self.datatype, value))
    def set_value(self, value: Enum | None) -> None:
        """Sets value.

        Raises:
            TypeError: When value is not a member of the enum.
            ValueError: When the member is not allowed.
        """
        self._check_value(value)
        if value is not None and value not in self.allowed:
            raise ValueError(f"Value '{value!r}' not allowed")
        self._value = value
    value: Enum = property(Option.get_value, set_value, doc="Current option value")

class ListOption(Option[list]):
    """Option with list of `item_type` values, like `x0 = 2.0, 3.2, 1.3, 3.0`.

    Without explicit `separator`, items are split on line breaks when the text has any, and
    on commas otherwise. Empty items are dropped.
    """
    def __init__(self, name: str, item_type: type, description: str,
                 *, required: bool=False, default: list | None=None, separator: str | None=None):
        self._value: list | None = None
        self.item_type: type = item_type
        self.separator: str | None = separator
        super().__init__(name, list, description, required=required, default=default)
    def _get_value_description(self) -> str:
        return f"list [{self.item_type.__name__}]\n"
    def _check_value(self, value: list) -> None:
        super()._check_value(value)
        for i, item in enumerate(value or ()):
            if not isinstance(item, self.item_type):
                raise ValueError(f"List item[{i}] has wrong type")
    def get_formatted(self) -> str:
        if self._value is None:
            return UNDEFINED_STR
        return f"{self.separator or ','} ".join(convert_to_str(item) for item in self._value)
    def set_as_str(self, value: str) -> None:
        """Sets value from text.

        Raises:
            ValueError: When an item is not a valid `item_type` value.
        """
        self._value = [convert_from_str(self.item_type, item) for item in _split_items(value, self.separator)]
    def set_value(self, value: list | None) -> None:
        """Sets value (the list is copied).
        """
        self._check_value(value)
        self._value = None if value is None else list(value)
    value: list = property(Option.get_value, set_value, doc="Current option value")

class MatrixOption(Option[np.ndarray]):
    """Option with real matrix value. Each row goes on its own line, entries are separated
    by commas; a single line is a one-row matrix::

        a =
           1.0526, -0.0066
           -0.05, 1.1

    Arguments:
        shape: Required shape; `None` entries are not checked.
    """
    def __init__(self, name: str, description: str, *, required: bool=False,
                 default: np.ndarray | None=None, shape: tuple[int | None, int | None] | None=None):
        self._value: np.ndarray | None = None
        self.shape: tuple[int | None, int | None] | None = shape
        super().__init__(name, np.ndarray, description, required=required, default=default)
    def _get_value_description(self) -> str:
        return "matrix (one row per line, comma separated entries)\n"
    def _is_default(self) -> bool:
        if self._value is None or self.default is None:
            return self._value is self.default
        return self._value.shape == self.default.shape and bool(np.all(self._value == self.default))
    def _check_value(self, value: np.ndarray) -> None:
        super()._check_value(value)
        if value is None:
            return
        if value.ndim != 2: # noqa: PLR2004
            raise ValueError(f"Option '{self.name}' value must be a two-dimensional matrix")
        if not np.all(np.isfinite(value)):
            raise ValueError(f"Option '{self.name}' value has non-finite entries")
        for dim, (actual, wanted) in enumerate(zip(value.shape, self.shape or (None, None), strict=True)):
            if wanted is not None and actual != wanted:
                raise ValueError(f"Option '{self.name}' dimension {dim} must be {wanted}, not {actual}")
    def get_formatted(self) -> str:
        if self._value is None:
            return UNDEFINED_STR
        rows = [', '.join(convert_to_str(float(x)) for x in row) for row in self._value]
        return rows[0] if len(rows) == 1 else CONTINUATION + CONTINUATION.join(rows)
    def set_as_str(self, value: str) -> None:
        """Sets value from text.

        Raises:
            ValueError: When text is not a rectangular matrix of finite numbers.
        """
        rows = [[convert_from_str(float, x) for x in line.split(',') if x.strip()]
                for line in value.splitlines() if line.strip()]
        if not rows:
            raise ValueError("Empty matrix")
        if len({len(row) for row in rows}) != 1:
            raise ValueError("Matrix rows must have the same number of entries")
        self.set_value(np.array(rows, dtype=float))
    def set_value(self, value: np.ndarray | None) -> None:
        """Sets value (the matrix is copied).
        """
        self._check_value(value)
        self._value = None if value is None else np.array(value, dtype=float)
    value: np.ndarray = property(Option.get_value, set_value, doc="Current option value")

class ConfigListOption(Option[list]):
    """Option with list of sub-configs of one `Config` type.

    The option value is written as list of section names. Every name creates a new
    `item_type` instance; its options are loaded by the owning `Config` from the section of
    that name. The option has no default, clearing always empties the list.
    """
    def __init__(self, name: str, item_type: type[Config], description: str, *,
                 required: bool=False, separator: str | None=None):
        assert issubclass(item_type, Config) # noqa: S101
        self._value: list = []
        self.item_type: type[Config] = item_type
        self.separator: str | None = separator
        super().__init__(name, list, description, required=required, default=[])
    def _get_value_description(self) -> str:
        return "list of configuration section names\n"
    def _check_value(self, value: list) -> None:
        super()._check_value(value)
        for i, item in enumerate(value or ()):
            if item.__class__ is not self.item_type:
                raise ValueError(f"List item[{i}] has wrong type")
    def _is_default(self) -> bool:
        return False
    def clear(self, *, to_default: bool=True) -> None: # noqa: ARG002
        self._value = []
    def validate(self) -> None:
        """Raises `.Error` when a required list is empty.
        """
        if self.required and not self._value:
            raise Error(f"Missing value for required option '{self.name}'")
    def get_formatted(self) -> str:
        if not self._value:
            return UNDEFINED_STR
        return f"{self.separator or ','} ".join(item.name for item in self._value)
    def set_as_str(self, value: str) -> None:
        self._value = [self.item_type(item) for item in _split_items(value, self.separator)]
    def set_value(self, value: list | None) -> None:
        """Sets value; None empties the list.
        """
        self._check_value(value)
        if value is None:
            self.clear()
        else:
            self._value = list(value)
    value: list = property(Option.get_value, set_value, doc="Current option value")

def get_option_value(option: Option[T]) -> Any:
    """Returns option value, or raises `ScenarioError` naming the option when it's missing.
    """
    if (value := option.value) is None:
        raise ScenarioError(f"Missing value for option '{option.name}'", field=option.name)
    return value
