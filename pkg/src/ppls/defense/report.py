# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/report.py
# DESCRIPTION:    Result files
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Result files

CSV result files start with `#` comment lines holding the scenario hash and the settings
the results depend on. Floats are written with 9 significant digits. Plots are SVG files.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import matplotlib as mpl

mpl.use('Agg')

import matplotlib.pyplot as plt # noqa: E402

from .design import LyapunovDesign
from .network import NetworkConfig
from .plant import PplsSystem
from .simulation import AttackTrace, SimResult
from .stability import Certificate, NotCertified
from .strconv import format_float
from .types import EXCLUDED, UNBOUNDED, Sentinel, Strategy
from .worst_case import StateBetaTable, WorstCaseResult

#: Columns of the metrics file (after 'strategy').
METRIC_COLUMNS = ('peak_ratio', 'oscillation', 'settling_step', 'final_norm', 'max_lyapunov_ratio',
                  'attacked_steps')

@dataclass
class ReportContext:
    """Data embedded in every result file.
    """
    scenario_hash: str
    settings: dict[str, str] = field(default_factory=dict)
    def header(self) -> list[str]:
        """Returns comment lines (without line ends).
        """
        lines = [f'# scenario-sha256: {self.scenario_hash}']
        lines.extend(f'# {key}: {value}' for key, value in self.settings.items())
        return lines

def _cell(value: Any) -> str:
    if value is EXCLUDED:
        return 'excluded'
    if value is UNBOUNDED:
        return 'unbounded'
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format_float(value)
    return str(value)

def _write(path: Path, context: ReportContext, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf8', newline='') as fh:
        _write_rows(fh, context, columns, rows)
    return path

def _write_rows(fh: TextIO, context: ReportContext, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    for line in context.header():
        fh.write(line + '\n')
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])

def read_rows(path: str | Path) -> list[dict[str, str]]:
    """Reads result file back as list of dictionaries (comment lines are skipped).
    """
    with Path(path).open(encoding='utf8', newline='') as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith('#')))

def write_design(path: Path, design: LyapunovDesign, context: ReportContext) -> Path:
    """Writes Lyapunov matrices `P_1 .. P_s` and default gains, one matrix row per line.
    """
    n = design.lyapunov[0].shape[1]
    rows = []
    for i in range(1, design.s + 1):
        for r, row in enumerate(design.lyapunov[i], 1):
            rows.append(('lyapunov', i, r, *(float(x) for x in row)))
        for r, row in enumerate(design.gain(i), 1):
            rows.append(('gain', i, r, *(float(x) for x in row)))
    return _write(path, context, ('matrix', 'mode', 'row', *(f'c{j}' for j in range(1, n + 1))), rows)

def write_beta_table(path: Path, tables: Mapping[int, StateBetaTable], context: ReportContext) -> Path:
    """Writes optimal rate of every channel state per mode, in ascending rate order.
    """
    rows = [(mode, ''.join(str(b) for b in state), rate)
            for mode, table in tables.items() for state, rate in table.ascending()]
    return _write(path, context, ('mode', 'state', 'beta'), rows)

def write_force_table(path: Path, results: Mapping[int, WorstCaseResult], context: ReportContext) -> Path:
    """Writes force patterns with the rate of their completion and their worst-case value.
    """
    rows = [(mode, str(item.pattern), item.completion_rate, item.value)
            for mode, result in results.items() for item in result.patterns]
    return _write(path, context, ('mode', 'pattern', 'completion_beta', 'worst_beta'), rows)

def write_safe_table(path: Path, results: Mapping[int, WorstCaseResult], context: ReportContext) -> Path:
    """Writes safe states and their smallest rate per force pattern.
    """
    rows = [(mode, str(item.pattern), ' '.join(''.join(str(b) for b in s) for s in item.safe), item.beta_hat)
            for mode, result in results.items() for item in result.patterns]
    return _write(path, context, ('mode', 'pattern', 'safe_states', 'beta_hat'), rows)

def write_certificate(path: Path, alpha: Sequence[float], results: Mapping[int, WorstCaseResult],
                      cert: Certificate | NotCertified, context: ReportContext) -> Path:
    """Writes per-mode rates followed by the stability certificate.
    """
    rows: list[tuple] = [(f'mode-{mode}', alpha[mode - 1], result.beta_tilde, result.beta_bar,
                          cert.theta[mode - 1] if cert.certified and cert.theta else '')
                         for mode, result in results.items()]
    rows.append(('certificate', cert.chi, cert.lhs, getattr(cert, 'c', None) or '', cert.certified))
    return _write(path, context, ('item', 'alpha|chi', 'beta_tilde|lhs', 'beta_bar|c', 'theta|certified'), rows)

def write_trajectory(path: Path, result: SimResult, context: ReportContext) -> Path:
    """Writes step, mode, state, Lyapunov value and attack flag per step.
    """
    n = result.trajectory[0].x.size
    rows = []
    for k, (st, value) in enumerate(zip(result.trajectory, result.lyapunov, strict=True)):
        decision = result.decisions[k] if k < len(result.decisions) else None
        rows.append((st.k, decision.mode if decision else '', *(float(x) for x in st.x), value,
                     decision.attacked if decision else ''))
    return _write(path, context, ('k', 'mode', *(f'x{j}' for j in range(1, n + 1)), 'v', 'attacked'), rows)

def write_decisions(path: Path, result: SimResult, trace: AttackTrace, context: ReportContext) -> Path:
    """Writes attack flow, allocation, channel state and rate per step.
    """
    n = trace.flows.shape[1]
    rows = [(k, d.mode, *(float(r) for r in trace.flows[k]), *(float(w) for w in d.w),
             ''.join(str(b) for b in d.channel_state), d.beta_star, d.attacked)
            for k, d in enumerate(result.decisions)]
    columns = ('k', 'mode', *(f'r{j}' for j in range(1, n + 1)), *(f'w{j}' for j in range(1, n + 1)),
               'state', 'beta', 'attacked')
    return _write(path, context, columns, rows)

def write_metrics(path: Path, results: Mapping[Strategy, SimResult], context: ReportContext) -> Path:
    """Writes summary metrics, one row per strategy.
    """
    rows = []
    for strategy, result in results.items():
        values = result.metrics
        rows.append((strategy.value, *(values[name] for name in METRIC_COLUMNS)))
    return _write(path, context, ('strategy', *METRIC_COLUMNS), rows)

def plot_norm(path: Path, results: Mapping[Strategy, SimResult], title: str='') -> Path:
    """Plots state norm over time for one or several strategies.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    try:
        for strategy, result in results.items():
            ax.plot([st.k for st in result.trajectory], result.norms, label=strategy.value)
        ax.set_xlabel('k')
        ax.set_ylabel('||x(k)||')
        if title:
            ax.set_title(title)
        ax.legend()
        ax.grid(visible=True, alpha=0.3)
        fig.savefig(path, format='svg')
    finally:
        plt.close(fig)
    return path

def plot_bandwidth(path: Path, result: SimResult, trace: AttackTrace, cfg: NetworkConfig) -> Path:
    """Plots allocated bandwidth against input flow `R + r` per channel.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    steps = list(range(len(result.decisions)))
    fig, axes = plt.subplots(cfg.n, 1, sharex=True, figsize=(7.0, 1.8 * cfg.n), squeeze=False)
    try:
        for j, ax in enumerate(axes[:, 0]):
            ax.step(steps, [d.w[j] for d in result.decisions], where='post', label='W')
            ax.step(steps, cfg.normal_flow[j] + trace.flows[:len(steps), j], where='post', label='R + r')
            ax.set_ylabel(f'channel {j + 1}')
            ax.grid(visible=True, alpha=0.3)
        axes[0, 0].legend(loc='upper right')
        axes[-1, 0].set_xlabel('k')
        fig.savefig(path, format='svg')
    finally:
        plt.close(fig)
    return path

def settings_of(sys: PplsSystem, cfg: NetworkConfig, **extra: Any) -> dict[str, str]:
    """Returns settings recorded in result headers.
    """
    result = {'channels': str(cfg.n), 'subsystems': str(sys.s), 'period': str(sys.period),
              'strict-eps': format_float(cfg.default_strict_eps), 'surplus-policy': 'equal-share'}
    for key, value in extra.items():
        if value is None:
            continue
        key = key.replace('_', '-')
        if isinstance(value, Sentinel):
            result[key] = value.name.lower()
        elif hasattr(value, 'value') and not isinstance(value, (int, float)):
            result[key] = str(value.value)
        elif isinstance(value, float):
            result[key] = format_float(value)
        else:
            result[key] = str(value)
    return result
