# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/stability.py
# DESCRIPTION:    Exponential stability certificate
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Exponential stability certificate

Combines attack-free rates `alpha_i`, worst-case rates `beta_bar_i` and attack duration
ratios `delta_i` into the decay rate `chi` of `||x(k)|| <= c * chi^k * ||x(0)||`::

    chi^(2T) = prod_i alpha_i^((1 - delta_i) T_i) * beta_bar_i^(delta_i T_i)
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .design import LyapunovDesign
from .linalg import eig_extrema
from .plant import PplsSystem, SystemState, lyapunov_value, mode_at
from .types import InvalidInputError, ValidationError

#: Relative slack of envelope and contraction checks.
ENVELOPE_TOLERANCE = 1e-6

@dataclass(frozen=True)
class AttackBudget:
    """Per-subsystem caps `Ttilde_i` of attacked steps within one dwell interval.

    Raises:
        ValidationError: When some cap is negative or exceeds its dwell time
            (`assumption` is 'attack-duration').
    """
    durations: tuple[int, ...]
    dwell_times: tuple[int, ...]
    def __post_init__(self):
        if len(self.durations) != len(self.dwell_times):
            raise InvalidInputError("One attack duration per subsystem required", field='attack_duration')
        for i, (cap, dwell) in enumerate(zip(self.durations, self.dwell_times, strict=True), 1):
            if not 0 <= cap <= dwell:
                raise ValidationError(f"Attack duration {cap} of subsystem {i} must be within [0, {dwell}]",
                                      assumption='attack-duration', field=f'subsystem-{i}.attack_duration')
    @property
    def delta(self) -> tuple[float, ...]:
        """Attack duration ratios `Ttilde_i / T_i`.
        """
        return tuple(cap / dwell for cap, dwell in zip(self.durations, self.dwell_times, strict=True))
    @property
    def period(self) -> int:
        return sum(self.dwell_times)

@dataclass(frozen=True)
class Certificate:
    """Successful stability certificate.
    """
    #: Decay rate of the state norm.
    chi: float
    #: Envelope constant, or None when Lyapunov matrices were not given.
    c: float | None
    #: Per-subsystem growth factors over one dwell interval.
    theta: tuple[float, ...]
    #: Period product of rates.
    lhs: float
    certified: bool = field(default=True, init=False)

@dataclass(frozen=True)
class NotCertified:
    """Failed stability certificate: the period product of rates is not below one.
    """
    lhs: float
    chi: float
    certified: bool = field(default=False, init=False)

def _rates(alpha: Sequence[float], beta_bar: Sequence[float], budget: AttackBudget) -> tuple[np.ndarray, np.ndarray]:
    alpha = np.asarray(alpha, dtype=float)
    beta_bar = np.asarray(beta_bar, dtype=float)
    s = len(budget.dwell_times)
    if alpha.shape != (s,) or beta_bar.shape != (s,):
        raise InvalidInputError(f"One attack-free and one worst-case rate per subsystem required ({s})")
    if not (np.all(alpha > 0.0) and np.all(beta_bar > 0.0)):
        raise InvalidInputError("Rates must be positive")
    if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(beta_bar))):
        raise InvalidInputError("Rates must be finite")
    return alpha, beta_bar

def period_log_product(alpha: Sequence[float], beta_bar: Sequence[float], budget: AttackBudget) -> float:
    """Returns logarithm of `prod_i alpha_i^((1 - delta_i) T_i) * r_i^(delta_i T_i)`, where
    attacked steps are charged with `r_i = max(alpha_i, beta_bar_i)`.
    """
    alpha, beta_bar = _rates(alpha, beta_bar, budget)
    dwell = np.asarray(budget.dwell_times, dtype=float)
    delta = np.asarray(budget.delta)
    attacked = np.maximum(alpha, beta_bar)
    return float(np.sum((1.0 - delta) * dwell * np.log(alpha) + delta * dwell * np.log(attacked)))

def certify(alpha: Sequence[float], beta_bar: Sequence[float], budget: AttackBudget,
            lyapunov: Sequence[np.ndarray] | None=None) -> Certificate | NotCertified:
    """Returns stability certificate.

    Arguments:
        alpha:     Attack-free rates.
        beta_bar:  Worst-case rates.
        budget:    Attack duration caps.
        lyapunov:  Lyapunov matrices `P_0 .. P_s`, needed for envelope constant `c`.

    Attacked steps are charged with `max(alpha_i, beta_bar_i)` in the period product and
    in the envelope constant.

    Raises:
        InvalidInputError: For non-positive rates or inconsistent lengths.
    """
    log_lhs = period_log_product(alpha, beta_bar, budget)
    period = budget.period
    chi = math.exp(log_lhs / (2 * period))
    lhs = math.exp(log_lhs)
    if not chi < 1.0:
        return NotCertified(lhs, chi)
    if lyapunov is None:
        return Certificate(chi, None, (), lhs)
    s = len(budget.dwell_times)
    if len(lyapunov) != s + 1:
        raise InvalidInputError(f"Lyapunov matrices P_0 .. P_{s} required")
    theta = []
    for i in range(1, s + 1):
        low_prev, high_prev = eig_extrema(lyapunov[i - 1])
        low_cur, high_cur = eig_extrema(lyapunov[i])
        rate = max(alpha[i - 1], beta_bar[i - 1])
        ratio = rate * max(high_prev, high_cur) / min(low_prev, low_cur)
        theta.append(max(1.0, ratio ** (budget.dwell_times[i - 1] / 2.0)))
    low, high = eig_extrema(lyapunov[-1])
    c = math.prod(theta) * math.sqrt(high / low) / chi ** period
    return Certificate(chi, c, tuple(theta), lhs)

def attack_counts(sys: PplsSystem, attacked: Sequence[bool]) -> list[tuple[int, int, int]]:
    """Returns `(period, mode, count)` of attacked steps for every dwell interval touched by
    the attack flags (one flag per step, starting at `k = 0`).
    """
    counts: dict[tuple[int, int], int] = {}
    for k, flag in enumerate(attacked):
        i, _ = mode_at(sys, k)
        key = (k // sys.period, i)
        counts[key] = counts.get(key, 0) + int(bool(flag))
    return [(period, i, count) for (period, i), count in sorted(counts.items())]

def budget_violations(sys: PplsSystem, budget: AttackBudget, attacked: Sequence[bool]) -> list[tuple[int, int, int]]:
    """Returns dwell intervals whose attacked step count exceeds the budget.
    """
    return [(period, i, count) for period, i, count in attack_counts(sys, attacked)
            if count > budget.durations[i - 1]]

@dataclass
class EnvelopeReport:
    """Result of `check_envelope`.
    """
    #: Largest `||x(k)|| / (c chi^k ||x(0)||)`.
    max_ratio: float
    #: Time index of the largest ratio.
    worst_step: int
    passed: bool
    #: Dwell intervals exceeding the attack budget (the envelope is not guaranteed then).
    violations: list[tuple[int, int, int]] = field(default_factory=list)
    @property
    def budget_respected(self) -> bool:
        return not self.violations

def check_envelope(trajectory: Sequence[SystemState], cert: Certificate, *, sys: PplsSystem | None=None,
                   budget: AttackBudget | None=None, attacked: Sequence[bool] | None=None,
                   tolerance: float=ENVELOPE_TOLERANCE) -> EnvelopeReport:
    """Checks `||x(k)|| <= c chi^k ||x(0)||` along `trajectory`.

    When `sys`, `budget` and attack flags are given, dwell intervals violating the budget
    are reported as well.

    Raises:
        InvalidInputError: When certificate has no envelope constant or trajectory is empty.
    """
    if cert.c is None:
        raise InvalidInputError("Certificate has no envelope constant")
    if not trajectory:
        raise InvalidInputError("Empty trajectory")
    x0 = trajectory[0].norm
    violations = []
    if sys is not None and budget is not None and attacked is not None:
        violations = budget_violations(sys, budget, attacked)
    if x0 == 0.0:
        return EnvelopeReport(0.0, 0, all(st.norm == 0.0 for st in trajectory), violations)
    ratios = [st.norm / (cert.c * cert.chi ** (st.k - trajectory[0].k) * x0) for st in trajectory]
    worst = int(np.argmax(ratios))
    return EnvelopeReport(float(ratios[worst]), trajectory[worst].k, ratios[worst] <= 1.0 + tolerance, violations)

@dataclass
class ContractionReport:
    """Result of `period_contraction`: `(period, V(lT), chi^(2lT) V(0))` per period boundary.
    """
    values: list[tuple[int, float, float]] = field(default_factory=list)
    passed: bool = True

def period_contraction(sys: PplsSystem, design: LyapunovDesign, trajectory: Sequence[SystemState],
                       cert: Certificate, *, tolerance: float=ENVELOPE_TOLERANCE) -> ContractionReport:
    """Checks `V(lT) <= chi^(2lT) V(0)` at every period boundary of `trajectory` (starting
    at `k = 0`).
    """
    report = ContractionReport()
    if not trajectory:
        return report
    v0 = lyapunov_value(sys, design, trajectory[0])
    for st in trajectory:
        if st.k % sys.period:
            continue
        periods = st.k // sys.period
        value = lyapunov_value(sys, design, st)
        bound = cert.chi ** (2 * st.k) * v0
        report.values.append((periods, value, bound))
        if value > bound * (1.0 + tolerance):
            report.passed = False
    return report
