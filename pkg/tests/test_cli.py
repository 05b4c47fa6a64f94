# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           tests/test_cli.py
# DESCRIPTION:    Tests for ppls.defense.cli
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

from __future__ import annotations

import io
import logging

import pytest

from ppls.defense.cli import *
from ppls.defense.report import read_rows
from ppls.defense.scenario import bundled_scenario_path
from ppls.defense.types import BoundaryMode, Strategy

@pytest.fixture(autouse=True)
def _reset_logging():
    yield
    logging.getLogger('ppls').setLevel(logging.NOTSET)

def call(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    return main(list(argv), out), out.getvalue()

def scenario_file(tmp_path, old: str, new: str):
    path = tmp_path / 'scenario.cfg'
    path.write_text(bundled_scenario_path().read_text(encoding='utf8').replace(old, new), encoding='utf8')
    return str(path)

def test_parser():
    args = build_parser().parse_args(['analyze', 'paper_example', '--boundary', 'formula', '-vv'])
    assert args.command == 'analyze'
    assert args.boundary is BoundaryMode.FORMULA
    assert args.verbose == 2
    assert args.out == 'results'
    assert args.seed is None
    args = build_parser().parse_args(['simulate', 'x.cfg', '--strategy', 'open-loop', '--seed', '4'])
    assert args.strategy is Strategy.OPEN_LOOP
    assert args.seed == 4
    assert not args.no_plots
    with pytest.raises(SystemExit) as cm:
        build_parser().parse_args(['analyze', 'paper_example', '--boundary', 'bogus'])
    assert cm.value.code == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args(['plot', 'paper_example'])

def test_design(tmp_path):
    code, text = call('design', 'paper_example', '--out', str(tmp_path))
    assert code == ExitCode.SUCCESS
    assert text.startswith('design (printed): alpha = (1.3, 0.4, 0.3)')
    rows = read_rows(tmp_path / 'design.csv')
    assert rows[0]['c1'] == '1.8998'
    assert (tmp_path / 'design.csv').read_text(encoding='utf8').startswith('# scenario-sha256: ')

def test_analyze(tmp_path):
    code, text = call('analyze', 'paper_example', '--out', str(tmp_path))
    assert code == ExitCode.SUCCESS
    assert 'exponentially stable' in text
    assert len(read_rows(tmp_path / 'beta_table.csv')) == 3 * 16
    assert len(read_rows(tmp_path / 'force_patterns.csv')) == 3 * 5
    assert len(read_rows(tmp_path / 'safe_states.csv')) == 3 * 5
    rows = read_rows(tmp_path / 'certificate.csv')
    assert [row['item'] for row in rows] == ['mode-1', 'mode-2', 'mode-3', 'certificate']
    assert float(rows[0]['beta_bar|c']) == pytest.approx(1.5038, abs=0.005)
    assert float(rows[-1]['alpha|chi']) == pytest.approx(0.9520, abs=2e-3)
    assert rows[-1]['theta|certified'] == '1'

def test_not_certified(tmp_path):
    path = scenario_file(tmp_path, 'alpha = 1.3', 'alpha = 5.0')
    code, text = call('analyze', path, '--out', str(tmp_path / 'out'))
    assert code == ExitCode.INFEASIBLE
    assert 'not certified' in text
    rows = read_rows(tmp_path / 'out' / 'certificate.csv')
    assert rows[-1]['theta|certified'] == '0'

def test_simulate(tmp_path):
    code, text = call('simulate', 'paper_example', '--out', str(tmp_path))
    assert code == ExitCode.SUCCESS
    assert text.startswith('cross: final norm ')
    assert len(read_rows(tmp_path / 'trajectory.csv')) == 151
    decisions = read_rows(tmp_path / 'decisions.csv')
    assert len(decisions) == 150
    assert decisions[1]['state'] == '0011'
    assert decisions[1]['attacked'] == '1'
    assert [row['strategy'] for row in read_rows(tmp_path / 'metrics.csv')] == ['cross']
    assert (tmp_path / 'norm.svg').is_file()
    assert (tmp_path / 'bandwidth.svg').is_file()
    assert '# strategy: cross' in (tmp_path / 'metrics.csv').read_text(encoding='utf8')

def test_simulate_open_loop(tmp_path):
    code, _ = call('simulate', 'paper_example', '--out', str(tmp_path), '--strategy', 'open-loop', '--no-plots')
    assert code == ExitCode.SUCCESS
    assert [row['strategy'] for row in read_rows(tmp_path / 'metrics.csv')] == ['open-loop']
    assert not (tmp_path / 'norm.svg').exists()

def test_compare(tmp_path):
    code, text = call('compare', 'paper_example', '--out', str(tmp_path), '--no-plots')
    assert code == ExitCode.SUCCESS
    assert len(text.splitlines()) == 3
    for name in ('cross', 'a', 'b'):
        assert len(read_rows(tmp_path / f'trajectory_{name}.csv')) == 151
    assert [row['strategy'] for row in read_rows(tmp_path / 'metrics.csv')] == ['cross', 'a', 'b']

def test_invalid(tmp_path, capsys):
    code, _ = call('design', str(tmp_path / 'missing.cfg'))
    assert code == ExitCode.INVALID
    assert capsys.readouterr().err.startswith('error: Scenario file ')
    path = scenario_file(tmp_path, 'total_bandwidth = 20.0', 'total_bandwidth = 19.0')
    code, _ = call('design', path, '--out', str(tmp_path))
    assert code == ExitCode.INVALID
    assert capsys.readouterr().err.endswith('(assumption: bandwidth-dominance)\n')
