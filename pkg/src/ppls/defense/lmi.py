# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/lmi.py
# DESCRIPTION:    Linear matrix inequality systems
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Linear matrix inequality systems

Builders for the two semidefinite programs of the defense:

* `build_offline` - attack-free design over `Q_i = P_i^-1`, slack matrices `G_i` and
  `Y_i = K_i G_i` for given per-mode rates `alpha_i`.
* `build_online` - smallest rate `beta` and gain `K` for fixed Lyapunov matrices and fixed
  channel state.

Both guarantee `V(k+1) <= rate * V(k)` for the interpolated Lyapunov function. For fixed
`(P_{i-1}, P_i)` the condition reads `Acl' P(p+1) Acl <= rate * P(p)` where `P(p)` is the
interpolated matrix at phase `p`. It's affine in `p`, so it's enough to check it at
`p = -1` and `p = T_i - 1`::

    Acl' P_{i-1} Acl <= rate * ((T_i + 1) P_{i-1} - P_i) / T_i
    Acl' P_i Acl     <= rate * (P_{i-1} + (T_i - 1) P_i) / T_i

The module also provides the linear encoding of the gain/channel-state product.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike

from .conic import LmiProblem, LpProblem
from .linalg import eig_extrema, invert, max_generalized_eig
from .network import ChannelState
from .plant import PplsSystem, Subsystem, SystemState, interpolated_lyapunov
from .types import InvalidInputError

if TYPE_CHECKING:
    from .design import LyapunovDesign

#: Relative tolerance of `verify_lemma_rates`.
RATE_TOLERANCE = 1e-6

def interpolation_bounds(dwell_time: int, p_prev: np.ndarray, p_cur: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Returns right-hand matrices `((T+1) P_{i-1} - P_i) / T` and `(P_{i-1} + (T-1) P_i) / T`
    of the two rate conditions (without the rate factor).
    """
    t = float(dwell_time)
    return ((t + 1.0) * p_prev - p_cur) / t, (p_prev + (t - 1.0) * p_cur) / t

def build_offline(sys: PplsSystem, alpha: Sequence[float]) -> LmiProblem:
    """Returns attack-free design problem.

    Variables are `Q1..Qs` (symmetric, `Q0 = Qs`), `G1..Gs` and `Y1..Ys`. The design
    matrices are recovered as `P_i = Q_i^-1` and `K_i = Y_i G_i^-1`. Normalization `Q_i >= I`
    fixes the scale of the homogeneous system, the objective keeps `trace(Q_i)` small.

    Raises:
        InvalidInputError: When `alpha` has wrong length or non-positive entries.
    """
    if len(alpha) != sys.s:
        raise InvalidInputError(f"One rate per subsystem required ({sys.s})", field='alpha')
    if any(not a > 0.0 for a in alpha):
        raise InvalidInputError("Rates must be positive", field='alpha')
    n, n_u = sys.n, sys.n_u
    problem = LmiProblem('offline')
    for i in range(1, sys.s + 1):
        problem.add_variable(f'Q{i}', (n, n), symmetric=True)
        problem.add_variable(f'G{i}', (n, n))
        problem.add_variable(f'Y{i}', (n_u, n))
    eye = np.eye(n)
    zero = np.zeros((n, n))

    def q_name(i: int) -> str:
        return f'Q{sys.s if i == 0 else i}'

    for i in range(1, sys.s + 1):
        sub = sys.subsystem(i)
        a_i = float(alpha[i - 1])
        t_i = float(sys.dwell_time(i))
        qp, qc, g, y = q_name(i - 1), q_name(i), f'G{i}', f'Y{i}'

        def first(v, bmat, sub=sub, a_i=a_i, t_i=t_i, qp=qp, qc=qc, g=g, y=y):
            acl = sub.a @ v[g] + sub.b @ v[y]
            return bmat([[(t_i + 1) / t_i * a_i * (v[qp] - v[g].T - v[g]), acl.T, v[g].T],
                         [acl, -v[qp], zero],
                         [v[g], zero, -(t_i / a_i) * v[qc]]])

        def second(v, bmat, sub=sub, a_i=a_i, t_i=t_i, qp=qp, qc=qc, g=g, y=y):
            acl = sub.a @ v[g] + sub.b @ v[y]
            return bmat([[(t_i - 1) / t_i * a_i * v[qc] + a_i / t_i * v[qp] - a_i * (v[g].T + v[g]), acl.T],
                         [acl, -v[qc]]])

        def normalization(v, bmat, qc=qc):
            return bmat([[eye - v[qc]]])

        problem.add_inequality(f'rate-start-{i}', first, strict=True)
        problem.add_inequality(f'rate-end-{i}', second, strict=True)
        problem.add_inequality(f'normalization-{i}', normalization)
    problem.minimize(lambda v: sum(v[f'Q{i}'][j, j] for i in range(1, sys.s + 1) for j in range(n)))
    return problem

def build_online(sub: Subsystem, dwell_time: int, p_prev: np.ndarray, p_cur: np.ndarray,
                 channel_state: ChannelState, kbar: float | None=None) -> LmiProblem:
    """Returns problem that minimizes `beta` over `beta >= 0` and gain `K` for fixed channel
    state. Gain columns of disabled channels are fixed to zero (they do not act on the
    plant), other entries are boxed to `[-kbar, kbar]` when `kbar` is given.

    Raises:
        InvalidInputError: When channel state length does not match the system.
    """
    n, n_u = sub.n, sub.n_u
    if len(channel_state) != n:
        raise InvalidInputError(f"Channel state must have {n} entries", field='channel_state')
    m_start, m_end = interpolation_bounds(dwell_time, p_prev, p_cur)
    inv_prev, inv_cur = invert(p_prev), invert(p_cur)
    mask = np.diag(channel_state.mask)
    problem = LmiProblem(f'online {channel_state}')
    problem.add_variable('beta', (), lower=0.0)
    problem.add_variable('K', (n_u, n), lower=None if kbar is None else -kbar,
                         upper=None if kbar is None else kbar)

    def first(v, bmat):
        acl = sub.a + sub.b @ v['K'] @ mask
        return bmat([[-v['beta'] * m_start, acl.T], [acl, -inv_prev]])

    def second(v, bmat):
        acl = sub.a + sub.b @ v['K'] @ mask
        return bmat([[-v['beta'] * m_end, acl.T], [acl, -inv_cur]])

    problem.add_inequality('rate-start', first)
    problem.add_inequality('rate-end', second)
    if not all(channel_state):
        problem.add_linear('disabled-columns', lambda v: v['K'] @ (np.eye(n) - mask), '==')
    problem.minimize(lambda v: v['beta'])
    return problem

def certified_rate(sub: Subsystem, dwell_time: int, p_prev: np.ndarray, p_cur: np.ndarray,
                   gain: ArrayLike, channel_state: ChannelState) -> float:
    """Returns the smallest rate `beta` for which both rate conditions hold with fixed gain,
    computed as generalized symmetric eigenvalue problem.

    Raises:
        ConditioningError: When the interpolation matrices are not positive definite.
    """
    acl = sub.a + sub.b @ np.asarray(gain, dtype=float) @ np.diag(channel_state.mask)
    m_start, m_end = interpolation_bounds(dwell_time, p_prev, p_cur)
    first = max_generalized_eig(acl.T @ p_prev @ acl, m_start)
    second = max_generalized_eig(acl.T @ p_cur @ acl, m_end)
    return max(first, second, 0.0)

def rate_residuals(sub: Subsystem, dwell_time: int, p_prev: np.ndarray, p_cur: np.ndarray,
                   gain: ArrayLike, channel_state: ChannelState, rate: float) -> tuple[float, float]:
    """Returns largest eigenvalues of `Acl' P_{i-1} Acl - rate * M_start` and
    `Acl' P_i Acl - rate * M_end` (both non-positive when the rate holds).
    """
    acl = sub.a + sub.b @ np.asarray(gain, dtype=float) @ np.diag(channel_state.mask)
    m_start, m_end = interpolation_bounds(dwell_time, p_prev, p_cur)
    return (eig_extrema(acl.T @ p_prev @ acl - rate * m_start)[1],
            eig_extrema(acl.T @ p_cur @ acl - rate * m_end)[1])

# Gain / channel state product

@dataclass(frozen=True)
class ProductEncoding:
    """Linear encoding of the product `K diag(L)` for gains boxed in `[-kbar, kbar]`.

    Auxiliary matrix `Q` (same shape as `K`) is constrained entrywise by::

        0 <= q <= 2 kbar
        q - 2 kbar l <= 0
        q - k - kbar <= 0
        q - k + kbar (1 - 2 l) >= 0

    which forces `q = (k + kbar) l`, so that `Q - kbar 1 diag(L) = K diag(L)`.
    """
    kbar: float
    channel_state: ChannelState
    shape: tuple[int, int]
    def q_range(self, gain: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        """Returns entrywise `(lower, upper)` bounds on `Q` implied by the constraints for
        fixed gain. Unique solution has `lower == upper`; empty when `lower > upper`.
        """
        k = np.asarray(gain, dtype=float)
        col = np.broadcast_to(self.channel_state.mask, self.shape)
        lower = np.maximum(0.0, k - self.kbar * (1.0 - 2.0 * col))
        upper = np.minimum(2.0 * self.kbar * col, k + self.kbar)
        return lower, upper
    def satisfied(self, q: ArrayLike, gain: ArrayLike, tol: float=0.0) -> bool:
        """Returns True when `(Q, K)` satisfies all constraints within `tol`.
        """
        lower, upper = self.q_range(gain)
        q = np.asarray(q, dtype=float)
        return bool(np.all(q >= lower - tol) and np.all(q <= upper + tol))
    def product(self, q: ArrayLike) -> np.ndarray:
        """Returns `Q - kbar 1 diag(L)`, the linearized value of `K diag(L)`.
        """
        return np.asarray(q, dtype=float) - self.kbar * np.broadcast_to(self.channel_state.mask, self.shape)
    def to_lp(self, gain: ArrayLike) -> LpProblem:
        """Returns linear program over entries of `Q` (row-major) for fixed gain.
        """
        k = np.asarray(gain, dtype=float).ravel()
        rows, cols = self.shape
        problem = LpProblem('product')
        problem.add_variables(rows * cols, 0.0, 2.0 * self.kbar)
        for idx in range(rows * cols):
            l = self.channel_state[idx % cols]
            unit = np.zeros(rows * cols)
            unit[idx] = 1.0
            problem.add_row(unit, '<=', 2.0 * self.kbar * l, f'q{idx}-mask')
            problem.add_row(unit, '<=', k[idx] + self.kbar, f'q{idx}-upper')
            problem.add_row(unit, '>=', k[idx] - self.kbar * (1.0 - 2.0 * l), f'q{idx}-lower')
        return problem

def build_product_encoding(kbar: float, channel_state: ChannelState, n_u: int=1) -> ProductEncoding:
    """Returns product encoding for `n_u x n` gains.

    Raises:
        InvalidInputError: When `kbar` is not positive.
    """
    if not kbar > 0.0:
        raise InvalidInputError("Gain bound must be positive", field='kbar')
    return ProductEncoding(float(kbar), channel_state, (n_u, len(channel_state)))

# Trajectory checks

@dataclass
class RateViolation:
    """Step where `V(k+1) > rate * V(k)`.
    """
    k: int
    ratio: float
    rate: float

@dataclass
class RateReport:
    """Result of `verify_lemma_rates`.
    """
    checked: int = 0
    violations: list[RateViolation] = field(default_factory=list)
    #: Largest `V(k+1) / (rate * V(k))` observed.
    worst: float = 0.0
    @property
    def passed(self) -> bool:
        return not self.violations

def verify_lemma_rates(sys: PplsSystem, design: LyapunovDesign, trajectory: Sequence[SystemState],
                       rates: Sequence[float], tolerance: float=RATE_TOLERANCE) -> RateReport:
    """Checks `V(k+1) <= rate(k) * V(k) * (1 + tolerance)` along trajectory.

    Arguments:
        sys:        The system.
        design:     Design with Lyapunov matrices.
        trajectory: States `x(0) .. x(N)`.
        rates:      Logged rates for steps `0 .. N-1` (`alpha_i` or `beta*`).
        tolerance:  Relative tolerance.
    """
    report = RateReport()
    values = [float(st.x @ interpolated_lyapunov(sys, design.lyapunov, st.k) @ st.x) for st in trajectory]
    for idx, rate in enumerate(rates[:len(values) - 1]):
        report.checked += 1
        v, v_next = values[idx], values[idx + 1]
        bound = rate * v
        if v_next <= bound * (1.0 + tolerance):
            if bound > 0.0:
                report.worst = max(report.worst, v_next / bound)
            continue
        ratio = np.inf if v == 0.0 else v_next / v
        report.worst = np.inf if bound == 0.0 else max(report.worst, v_next / bound)
        report.violations.append(RateViolation(trajectory[idx].k, ratio, rate))
    return report
