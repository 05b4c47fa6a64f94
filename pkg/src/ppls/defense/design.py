# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/design.py
# DESCRIPTION:    Attack-free Lyapunov design
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Attack-free Lyapunov design

Produces Lyapunov matrices `P_0 .. P_s` (`P_s = P_0`) and default gains `K_i` for which the
interpolated Lyapunov function decreases at least with per-mode rates `alpha_i` when no
attack is present.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg as sla

from .conic import STRICT_MARGIN, solve_lmi
from .linalg import as_matrix, condition_number, eig_extrema, invert
from .lmi import build_offline, certified_rate, interpolation_bounds
from .logging import BraceMessage, get_logger
from .network import ChannelState
from .plant import PplsSystem
from .types import ConditioningError, InfeasibleError, InvalidInputError, SolverError, SolveStatus

#: Largest accepted condition number of slack matrices `G_i`.
MAX_CONDITION = 1e10
#: Relative tolerance of rate checks in `validate`.
RATE_TOLERANCE = 1e-6

@dataclass(frozen=True, eq=False)
class LyapunovDesign:
    """Lyapunov matrices and default gains.
    """
    #: Attack-free rates `alpha_i`.
    alpha: tuple[float, ...]
    #: Lyapunov matrices `P_0 .. P_s` with `P_s = P_0`.
    lyapunov: tuple[np.ndarray, ...]
    #: Default gains `K_1 .. K_s`.
    gains: tuple[np.ndarray, ...]
    #: Inverses `Q_0 .. Q_s` of the Lyapunov matrices.
    inverses: tuple[np.ndarray, ...] = field(default=())
    #: Slack matrices `G_i` (empty for designs not produced by `design`).
    slack: tuple[np.ndarray, ...] = field(default=())
    #: Matrices `Y_i = K_i G_i` (empty for designs not produced by `design`).
    gain_products: tuple[np.ndarray, ...] = field(default=())
    #: 'solved' or 'printed'.
    source: str = 'solved'
    @property
    def s(self) -> int:
        return len(self.gains)
    def pair(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Returns `(P_{i-1}, P_i)` for 1-based mode.
        """
        return self.lyapunov[i - 1], self.lyapunov[i]
    def gain(self, i: int) -> np.ndarray:
        """Returns default gain for 1-based mode.
        """
        return self.gains[i - 1]

def _recover_gain(g: np.ndarray, y: np.ndarray, i: int) -> np.ndarray:
    cond = condition_number(g)
    if cond >= MAX_CONDITION:
        raise ConditioningError(f"Slack matrix G_{i} is ill-conditioned ({cond:.3e})", condition=cond)
    # K = Y G^-1  <=>  G' K' = Y'
    return sla.solve(g.T, y.T).T

def design(sys: PplsSystem, alpha: Sequence[float], *, solver: str | None=None) -> LyapunovDesign:
    """Solves attack-free design problem for rates `alpha`.

    Raises:
        InvalidInputError: For invalid rates.
        InfeasibleError: When no design exists for given rates (raise rates of unstable
            modes).
        SolverError: When the conic engine fails.
        ConditioningError: When a slack matrix stays ill-conditioned after re-solve.
    """
    log = get_logger('design', 'solver')
    problem = build_offline(sys, alpha)
    margin = STRICT_MARGIN
    for attempt in range(2):
        result = solve_lmi(problem, margin=margin, solver=solver)
        if result.status is SolveStatus.INFEASIBLE:
            raise InfeasibleError(f"No attack-free design exists for alpha = {tuple(alpha)}",
                                  problem='offline', hint="raise alpha for modes that cannot be stabilized")
        if not result.solved:
            raise SolverError(f"Attack-free design failed: {result.detail}", detail=result.detail)
        v = result.values
        try:
            gains = tuple(_recover_gain(v[f'G{i}'], v[f'Y{i}'], i) for i in range(1, sys.s + 1))
        except ConditioningError:
            if attempt:
                raise
            margin *= 10.0
            log.info(BraceMessage("ill-conditioned slack matrix, re-solving with margin {:.1e}", margin))
            continue
        inverses = tuple(v[f'Q{sys.s if i == 0 else i}'] for i in range(sys.s + 1))
        lyapunov = tuple(invert(q) for q in inverses)
        log.info(BraceMessage("design found for alpha = {}", tuple(alpha)))
        return LyapunovDesign(tuple(float(a) for a in alpha), lyapunov, gains, inverses,
                              tuple(v[f'G{i}'] for i in range(1, sys.s + 1)),
                              tuple(v[f'Y{i}'] for i in range(1, sys.s + 1)))
    raise AssertionError("unreachable") # pragma: no cover

def from_matrices(sys: PplsSystem, alpha: Sequence[float], lyapunov: Sequence[ArrayLike],
                  gains: Sequence[ArrayLike]) -> LyapunovDesign:
    """Returns design built from given Lyapunov matrices `P_1 .. P_s` (`P_0 = P_s`) and
    default gains, without solving.

    Raises:
        InvalidInputError: On wrong number or shape of matrices.
        ConditioningError: When some Lyapunov matrix is not positive definite.
    """
    if not len(alpha) == len(lyapunov) == len(gains) == sys.s:
        raise InvalidInputError(f"One rate, Lyapunov matrix and gain per subsystem required ({sys.s})")
    mats = [as_matrix(p, f'lyapunov{i}', shape=(sys.n, sys.n)) for i, p in enumerate(lyapunov, 1)]
    mats = [(p + p.T) / 2.0 for p in mats]
    full = (mats[-1], *mats)
    return LyapunovDesign(tuple(float(a) for a in alpha), full,
                          tuple(as_matrix(k, f'gain{i}', shape=(sys.n_u, sys.n)) for i, k in enumerate(gains, 1)),
                          tuple(invert(p) for p in full), source='printed')

@dataclass
class DesignCheck:
    """Single numerical check of `validate`. Positive margin means the check holds.
    """
    name: str
    passed: bool
    margin: float

@dataclass
class DesignReport:
    """Result of `validate`.
    """
    checks: list[DesignCheck] = field(default_factory=list)
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
    @property
    def failed(self) -> list[DesignCheck]:
        return [check for check in self.checks if not check.passed]
    def add(self, name: str, margin: float, *, passed: bool | None=None) -> None:
        self.checks.append(DesignCheck(name, margin > 0.0 if passed is None else passed, margin))

def validate(design: LyapunovDesign, sys: PplsSystem) -> DesignReport:
    """Re-checks design invariants numerically: positive definite Lyapunov matrices,
    positive definite interpolation matrices, attack-free rates of default gains and gain
    recovery from stored slack matrices.
    """
    report = DesignReport()
    report.add('cyclic', 0.0, passed=bool(np.allclose(design.lyapunov[0], design.lyapunov[-1])))
    for i, p in enumerate(design.lyapunov[1:], 1):
        report.add(f'positive-definite-{i}', eig_extrema(p)[0])
    all_on = ChannelState.ones(sys.n)
    for i in range(1, sys.s + 1):
        p_prev, p_cur = design.pair(i)
        m_start, _ = interpolation_bounds(sys.dwell_time(i), p_prev, p_cur)
        min_eig = eig_extrema(m_start)[0]
        report.add(f'interpolation-{i}', min_eig)
        if min_eig > 0.0:
            rate = certified_rate(sys.subsystem(i), sys.dwell_time(i), p_prev, p_cur, design.gain(i), all_on)
            alpha = design.alpha[i - 1]
            report.add(f'rate-{i}', alpha * (1.0 + RATE_TOLERANCE) - rate)
        else:
            report.add(f'rate-{i}', -np.inf)
        if design.slack:
            g, y = design.slack[i - 1], design.gain_products[i - 1]
            residual = float(np.max(np.abs(design.gain(i) @ g - y)))
            report.add(f'gain-recovery-{i}', 1e-6 * max(1.0, float(np.max(np.abs(y)))) - residual)
    return report

def minimal_alpha(sys: PplsSystem, alpha: Sequence[float], index: int, *, factor: float=1.05,
                  max_steps: int=100, solver: str | None=None) -> tuple[float, ...]:
    """Lowers rate of mode `index` (1-based) geometrically while the design stays feasible.

    Returns:
        The last feasible rate vector.

    Raises:
        InfeasibleError: When the initial rates are infeasible.
    """
    if factor <= 1.0:
        raise InvalidInputError("Factor must be greater than 1", field='factor')
    log = get_logger('design', 'solver')
    current = [float(a) for a in alpha]
    design(sys, current, solver=solver)
    for _ in range(max_steps):
        trial = list(current)
        trial[index - 1] /= factor
        try:
            design(sys, trial, solver=solver)
        except (InfeasibleError, SolverError, ConditioningError):
            break
        current = trial
    log.info(BraceMessage("minimal alpha for mode {}: {:.6g}", index, current[index - 1]))
    return tuple(current)
