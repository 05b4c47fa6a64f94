# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/logging.py
# DESCRIPTION:    Context-based logging
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Context-based logging

Loggers are requested by *agent* (a name or an object) and optional *topic*. The manager
builds the `logging.Logger` name from `logger_fmt`, the package domain and the topic, so
solver, enumeration, defense and simulation messages can be routed independently::

    log = get_logger(self, 'solver')
    log.debug(BraceMessage("mode {} state {} beta {:.6f}", mode, state, beta))

With package defaults the defender above logs to "ppls.defense.solver". The CLI installs
one console handler on the "ppls" logger through `LoggingManager.configure`.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterable
from enum import Enum, IntEnum
from typing import Any, TextIO

#: Name of the package root logger.
ROOT_LOGGER = 'ppls'
#: Record attributes guaranteed by `ContextFilter`.
CONTEXT_FIELDS = ('domain', 'topic', 'agent', 'context')
#: Format used by `LoggingManager.configure` for console output.
CONSOLE_FORMAT = '%(levelname)-7s %(topic)s [%(agent)s] %(message)s'

class FormatElement(Enum):
    """Placeholders in `LoggingManager.logger_fmt`.
    """
    DOMAIN = 1
    TOPIC = 2

DOMAIN = FormatElement.DOMAIN
TOPIC = FormatElement.TOPIC

class LogLevel(IntEnum):
    """Logging levels as enum (used by the CLI `-v` switch).
    """
    NOTSET = logging.NOTSET
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL

class BraceMessage:
    """Message formatted with `str.format` when the record is emitted, so disabled debug
    output of the solver loops costs no formatting.
    """
    def __init__(self, fmt: str, /, *args, **kwargs):
        self.fmt = fmt
        self.args = args
        self.kwargs = kwargs
    def __str__(self):
        return self.fmt.format(*self.args, **self.kwargs)

class ContextFilter(logging.Filter):
    """Sets missing context fields of a record to None, so `CONSOLE_FORMAT` works for
    records of foreign loggers too.
    """
    def filter(self, record):
        for name in CONTEXT_FIELDS:
            if not hasattr(record, name):
                setattr(record, name, None)
        return True

class ContextLoggerAdapter(logging.LoggerAdapter):
    """Adds domain, topic and agent name to every record. `context` is read from the
    agent's `log_context` attribute at call time (for example the mode being solved).
    """
    def __init__(self, logger: logging.Logger, domain: Any, topic: Any, agent: Any, agent_name: str):
        self.agent = agent
        super().__init__(logger, {'domain': domain, 'topic': topic, 'agent': agent_name})
    def process(self, msg, kwargs):
        kwargs['extra'] = {**self.extra, 'context': getattr(self.agent, 'log_context', None)}
        return msg, kwargs

def _validated_format(items: Iterable[Any]) -> list[str | FormatElement]:
    result = []
    for item in items:
        match item:
            case str():
                if item:
                    result.append(item)
            case FormatElement():
                if item in result:
                    raise ValueError(f"Only one occurence of {item.name} allowed")
                result.append(item)
            case _:
                raise ValueError(f"Unsupported item type {type(item)}")
    return result

class LoggingManager:
    """Builds logger names for agents from `logger_fmt`, the package domain and a topic.
    """
    def __init__(self):
        self._logger_fmt: list[str | FormatElement] = []
        self._domain: str | None = None
    @property
    def logger_fmt(self) -> list[str | FormatElement]:
        """Logger name template.

        Strings are used literally (empty ones are dropped), `DOMAIN` and `TOPIC` (each at
        most once) are replaced by the actual names, or skipped when not defined. Elements
        are joined with dots: `['ppls', DOMAIN, TOPIC]` with domain 'defense' and topic
        'sea' gives "ppls.defense.sea".
        """
        return self._logger_fmt
    @logger_fmt.setter
    def logger_fmt(self, value: list[str | FormatElement]) -> None:
        self._logger_fmt = _validated_format(value)
    @property
    def domain(self) -> str | None:
        """Domain placed into logger names and records.
        """
        return self._domain
    @domain.setter
    def domain(self, value: str | None) -> None:
        self._domain = None if value is None else str(value)
    def _get_logger_name(self, domain: str | None, topic: str | None) -> str:
        names = {DOMAIN: domain, TOPIC: topic}
        parts = (names[item] if isinstance(item, FormatElement) else item for item in self._logger_fmt)
        return '.'.join(part for part in parts if part)
    def get_agent_name(self, agent: Any) -> str:
        """Returns `agent` itself for strings, the `_agent_name_` attribute of objects that
        define it, and "MODULE.CLASS_QUALNAME" otherwise.
        """
        if isinstance(agent, str):
            return agent
        if name := getattr(agent, '_agent_name_', None):
            return str(name)
        cls = type(agent)
        return f'{cls.__module__}.{cls.__qualname__}'
    def get_logger(self, agent: Any, topic: str | None=None) -> ContextLoggerAdapter:
        """Returns `.ContextLoggerAdapter` for `agent` and optional `topic`.
        """
        return ContextLoggerAdapter(logging.getLogger(self._get_logger_name(self._domain, topic)), self._domain,
                                    topic, agent, self.get_agent_name(agent))
    def apply_defaults(self) -> None:
        """Sets `logger_fmt` to `['ppls', DOMAIN, TOPIC]` and domain to 'defense'.
        """
        self.logger_fmt = [ROOT_LOGGER, DOMAIN, TOPIC]
        self.domain = 'defense'
    def configure(self, level: LogLevel=LogLevel.WARNING, stream: TextIO | None=None) -> logging.Handler:
        """Installs console handler (stderr by default) on the package root logger and
        sets its level.

        Returns:
            Installed handler, to be passed to `remove_handler`.
        """
        handler = logging.StreamHandler(sys.stderr if stream is None else stream)
        handler.addFilter(ContextFilter())
        handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
        root = logging.getLogger(ROOT_LOGGER)
        root.addHandler(handler)
        root.setLevel(level)
        return handler
    def remove_handler(self, handler: logging.Handler) -> None:
        logging.getLogger(ROOT_LOGGER).removeHandler(handler)

#: Package logging manager with defaults applied.
logging_manager: LoggingManager = LoggingManager()
logging_manager.apply_defaults()
#: Shortcut to `logging_manager.get_logger`.
get_logger = logging_manager.get_logger
#: Shortcut to `logging_manager.get_agent_name`.
get_agent_name = logging_manager.get_agent_name
