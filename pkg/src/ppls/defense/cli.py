# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/cli.py
# DESCRIPTION:    Command-line interface
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Command-line interface

Commands::

    ppls-defense design   <scenario> [--out DIR]
    ppls-defense analyze  <scenario> [--out DIR] [--boundary paper-table|formula]
    ppls-defense simulate <scenario> [--out DIR] [--seed N] [--strategy cross|a|b|open-loop]
    ppls-defense compare  <scenario> [--out DIR] [--seed N]

`<scenario>` is a scenario file or 'paper_example' for the bundled one.

Exit codes: 0 success, 2 invalid scenario or violated assumption, 3 infeasible problem or
failed certificate, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from enum import IntEnum
from pathlib import Path
from typing import TextIO

from .__about__ import __version__
from .design import validate
from .logging import BraceMessage, LogLevel, get_logger, logging_manager
from .plant import PplsSystem
from .report import (
    ReportContext,
    plot_bandwidth,
    plot_norm,
    settings_of,
    write_beta_table,
    write_certificate,
    write_decisions,
    write_design,
    write_force_table,
    write_metrics,
    write_safe_table,
    write_trajectory,
)
from .scenario import Scenario, load_scenario, scenario_hash
from .simulation import compare, run
from .stability import certify
from .strconv import str2enum
from .types import (
    BoundaryMode,
    ConditioningError,
    InfeasibleError,
    InvalidInputError,
    ScenarioError,
    SolverError,
    Strategy,
    ValidationError,
)
from .worst_case import StateBetaTable, brute_force_worst_case, sea

#: Largest number of channels for the exhaustive worst-case cross-check.
MAX_CROSS_CHECK_CHANNELS = 3

class ExitCode(IntEnum):
    """Process exit codes.
    """
    SUCCESS = 0
    INVALID = 2
    INFEASIBLE = 3
    SOLVER = 4

class Command:
    """Base of CLI commands. Holds parsed arguments, loaded scenario and output stream.
    """
    _agent_name_ = 'cli'
    def __init__(self, args: argparse.Namespace, out: TextIO):
        self.args: argparse.Namespace = args
        self.out: TextIO = out
        self.scenario: Scenario = load_scenario(args.scenario)
        self.sys: PplsSystem = self.scenario.build_system()
        self.outdir: Path = Path(args.out)
        self.log = get_logger(self, 'cli')
        if args.boundary is not None:
            self.scenario.settings.boundary.value = args.boundary
        if args.strategy is not None:
            self.scenario.settings.strategy.value = args.strategy
    def context(self, **extra) -> ReportContext:
        cfg = self.scenario.build_network()
        settings = settings_of(self.sys, cfg, boundary=self.scenario.settings.boundary.value,
                               tie_tolerance=self.scenario.settings.tie_tolerance.value,
                               design_source=self.scenario.design.source.value, kbar=self.scenario.design.kbar.value,
                               **extra)
        return ReportContext(scenario_hash(self.scenario), settings)
    def print(self, text: str='') -> None:
        self.out.write(text + '\n')
    def execute(self) -> ExitCode:
        raise NotImplementedError

class DesignCommand(Command):
    """Attack-free design and its numerical validation.
    """
    def execute(self) -> ExitCode:
        lyapunov_design = self.scenario.build_design(self.sys)
        report = validate(lyapunov_design, self.sys)
        path = write_design(self.outdir / 'design.csv', lyapunov_design, self.context())
        for check in report.failed:
            self.log.warning(BraceMessage("design check '{}' failed (margin {:.3e})", check.name, check.margin))
        self.print(f"design ({lyapunov_design.source}): alpha = {lyapunov_design.alpha}, "
                   f"{len(report.checks) - len(report.failed)}/{len(report.checks)} checks passed")
        self.print(f"written {path}")
        return ExitCode.SUCCESS

class AnalyzeCommand(Command):
    """Worst-case rates, rate tables and stability certificate.
    """
    def execute(self) -> ExitCode:
        settings = self.scenario.settings
        defender = self.scenario.build_defender(self.sys)
        results = {}
        tables = {}
        for i in range(1, self.sys.s + 1):
            tables[i] = StateBetaTable.from_defender(defender, i)
            results[i] = sea(defender, i, boundary=settings.boundary.value,
                             tie_tolerance=settings.tie_tolerance.value)
            self.print(f"mode {i}: beta_tilde = {results[i].beta_tilde:.4f}, beta_bar = {results[i].beta_bar:.4f}")
            if settings.cross_check.value and self.sys.n <= MAX_CROSS_CHECK_CHANNELS:
                oracle = brute_force_worst_case(tables[i], defender.cfg, settings.grid_density.value)
                self.print(f"mode {i}: exhaustive worst case = {oracle:.4f}")
        alpha = self.scenario.alpha
        beta_bar = [results[i].beta_bar for i in range(1, self.sys.s + 1)]
        cert = certify(alpha, beta_bar, self.scenario.build_budget(), defender.design.lyapunov)
        context = self.context()
        write_beta_table(self.outdir / 'beta_table.csv', tables, context)
        write_force_table(self.outdir / 'force_patterns.csv', results, context)
        write_safe_table(self.outdir / 'safe_states.csv', results, context)
        write_certificate(self.outdir / 'certificate.csv', alpha, results, cert, context)
        if cert.certified:
            self.print(f"chi = {cert.chi:.4f}, c = {cert.c:.4g}: exponentially stable")
            return ExitCode.SUCCESS
        self.print(f"chi = {cert.chi:.4f} (period product {cert.lhs:.4g}): not certified")
        return ExitCode.INFEASIBLE

class SimulateCommand(Command):
    """Closed-loop simulation under the scenario's attack trace.
    """
    def execute(self) -> ExitCode:
        strategy = self.scenario.settings.strategy.value
        defender = self.scenario.build_defender(self.sys)
        trace = self.scenario.build_trace(seed=self.args.seed)
        result = run(defender, trace, self.scenario.x0.value, strategy, w_prev=self.scenario.settings.w_prev.value)
        context = self.context(strategy=strategy, seed=trace.seed)
        write_trajectory(self.outdir / 'trajectory.csv', result, context)
        write_decisions(self.outdir / 'decisions.csv', result, trace, context)
        write_metrics(self.outdir / 'metrics.csv', {strategy: result}, context)
        if not self.args.no_plots:
            plot_norm(self.outdir / 'norm.svg', {strategy: result}, self.scenario.title.value or '')
            plot_bandwidth(self.outdir / 'bandwidth.svg', result, trace, defender.cfg)
        metrics = result.metrics
        self.print(f"{strategy.value}: final norm {metrics['final_norm']:.3e}, "
                   f"peak ratio {metrics['peak_ratio']:.4f}")
        return ExitCode.SUCCESS

class CompareCommand(Command):
    """Cross-layered defense against Strategies A and B on a shared trace.
    """
    def execute(self) -> ExitCode:
        defender = self.scenario.build_defender(self.sys)
        trace = self.scenario.build_trace(seed=self.args.seed)
        results = compare(defender, trace, self.scenario.x0.value, w_prev=self.scenario.settings.w_prev.value)
        context = self.context(seed=trace.seed)
        for strategy, result in results.items():
            write_trajectory(self.outdir / f'trajectory_{strategy.value}.csv', result, context)
        write_metrics(self.outdir / 'metrics.csv', results, context)
        if not self.args.no_plots:
            plot_norm(self.outdir / 'norm.svg', results, self.scenario.title.value or '')
        for strategy, result in results.items():
            metrics = result.metrics
            self.print(f"{strategy.value:>5}: peak ratio {metrics['peak_ratio']:.4f}, "
                       f"oscillation {metrics['oscillation']:.4f}")
        return ExitCode.SUCCESS

COMMANDS: dict[str, type[Command]] = {'design': DesignCommand, 'analyze': AnalyzeCommand,
                                      'simulate': SimulateCommand, 'compare': CompareCommand}

def _enum_type(enum_class):
    def convert(value: str):
        try:
            return str2enum(enum_class, value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    convert.__name__ = enum_class.__name__
    return convert

def build_parser() -> argparse.ArgumentParser:
    """Returns argument parser.
    """
    parser = argparse.ArgumentParser(prog='ppls-defense',
                                     description="Cross-layered DoS defense for multi-channel periodic "
                                     "piecewise linear systems")
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('scenario', help="scenario file, or 'paper_example'")
    common.add_argument('--out', default='results', help="output directory (default: %(default)s)")
    common.add_argument('--seed', type=int, default=None, help="seed of generated attack traces")
    common.add_argument('--boundary', type=_enum_type(BoundaryMode), default=None,
                        help="safe state comparison: paper-table or formula")
    common.add_argument('--strategy', type=_enum_type(Strategy), default=None,
                        help="strategy for 'simulate': cross, a, b or open-loop")
    common.add_argument('--no-plots', action='store_true', help="do not write SVG plots")
    common.add_argument('-v', '--verbose', action='count', default=0, help="more log output (repeatable)")
    sub = parser.add_subparsers(dest='command', required=True)
    for name, cls in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=cls.__doc__.strip().splitlines()[0])
    return parser

def main(argv: Sequence[str] | None=None, out: TextIO | None=None) -> int:
    """Runs the command line and returns exit code.
    """
    args = build_parser().parse_args(argv)
    level = {0: LogLevel.WARNING, 1: LogLevel.INFO}.get(args.verbose, LogLevel.DEBUG)
    handler = logging_manager.configure(level)
    out = sys.stdout if out is None else out
    try:
        return int(COMMANDS[args.command](args, out).execute())
    except (ScenarioError, ValidationError, InvalidInputError) as exc:
        hint = f" (assumption: {exc.assumption})" if exc.assumption else ''
        sys.stderr.write(f"error: {exc}{hint}\n")
        return ExitCode.INVALID
    except InfeasibleError as exc:
        hint = f"; hint: {exc.hint}" if exc.hint else ''
        sys.stderr.write(f"infeasible: {exc}{hint}\n")
        return ExitCode.INFEASIBLE
    except (SolverError, ConditioningError) as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return ExitCode.SOLVER
    finally:
        logging_manager.remove_handler(handler)
