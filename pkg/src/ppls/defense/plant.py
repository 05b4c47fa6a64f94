# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/plant.py
# DESCRIPTION:    Multi-channel periodic piecewise linear system
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Multi-channel periodic piecewise linear system

The plant cycles through `s` linear subsystems `x(k+1) = A_i x(k) + B_i u(k)`, each active
for `T_i` steps of period `T = sum(T_i)`. State feedback `u(k) = K L x(k)` reaches the
controller only through enabled sampling channels (the diagonal mask `L`).

Mode indices are 1-based (`1..s`), dwell phases 0-based.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike

from .linalg import as_matrix
from .types import InvalidInputError

if TYPE_CHECKING:
    from .design import LyapunovDesign

@dataclass(frozen=True, eq=False)
class Subsystem:
    """Single linear mode `(A_i, B_i)`.
    """
    a: np.ndarray
    b: np.ndarray
    @property
    def n(self) -> int:
        return self.a.shape[0]
    @property
    def n_u(self) -> int:
        return self.b.shape[1]

@dataclass(frozen=True, eq=False)
class PplsSystem:
    """Periodic piecewise linear system.

    Raises:
        InvalidInputError: When matrices have inconsistent shapes or dwell times are not
            positive integers.
    """
    subsystems: tuple[Subsystem, ...]
    dwell_times: tuple[int, ...]
    #: Switching offsets `k_0 = 0, k_i = T_1 + ... + T_i`.
    offsets: tuple[int, ...] = field(init=False)
    def __post_init__(self):
        if not self.subsystems:
            raise InvalidInputError("At least one subsystem required")
        if len(self.dwell_times) != len(self.subsystems):
            raise InvalidInputError("One dwell time per subsystem required", field='dwell_times')
        if any(not isinstance(t, int) or isinstance(t, bool) or t <= 0 for t in self.dwell_times):
            raise InvalidInputError("Dwell times must be positive integers", field='dwell_times')
        n = self.subsystems[0].a.shape[0]
        n_u = self.subsystems[0].b.shape[1]
        for i, sub in enumerate(self.subsystems, 1):
            if sub.a.shape != (n, n):
                raise InvalidInputError(f"A_{i} must be {n}x{n}, not {sub.a.shape}", field=f'a{i}')
            if sub.b.shape != (n, n_u):
                raise InvalidInputError(f"B_{i} must be {n}x{n_u}, not {sub.b.shape}", field=f'b{i}')
        object.__setattr__(self, 'offsets', tuple(int(x) for x in np.cumsum((0, *self.dwell_times))))
    @classmethod
    def from_matrices(cls, a: Sequence[ArrayLike], b: Sequence[ArrayLike],
                      dwell_times: Sequence[int]) -> PplsSystem:
        """Creates system from lists of `A_i` and `B_i` matrices.
        """
        if len(a) != len(b):
            raise InvalidInputError("Same number of A and B matrices required")
        subsystems = tuple(Subsystem(as_matrix(ai, f'a{i}'), as_matrix(bi, f'b{i}'))
                           for i, (ai, bi) in enumerate(zip(a, b, strict=True), 1))
        return cls(subsystems, tuple(int(t) for t in dwell_times))
    @property
    def s(self) -> int:
        """Number of subsystems.
        """
        return len(self.subsystems)
    @property
    def period(self) -> int:
        """Period `T`.
        """
        return self.offsets[-1]
    @property
    def n(self) -> int:
        """State dimension (= number of sampling channels).
        """
        return self.subsystems[0].n
    @property
    def n_u(self) -> int:
        """Input dimension.
        """
        return self.subsystems[0].n_u
    def subsystem(self, i: int) -> Subsystem:
        """Returns subsystem for 1-based mode index.
        """
        return self.subsystems[i - 1]
    def dwell_time(self, i: int) -> int:
        """Returns dwell time for 1-based mode index.
        """
        return self.dwell_times[i - 1]

@dataclass(frozen=True, eq=False)
class SystemState:
    """Time index and state vector.
    """
    k: int
    x: np.ndarray
    def __post_init__(self):
        if self.k < 0:
            raise InvalidInputError("Time index must be non-negative")
        if not np.all(np.isfinite(self.x)):
            raise InvalidInputError("State has non-finite entries")
    @classmethod
    def initial(cls, x: ArrayLike) -> SystemState:
        return cls(0, np.array(x, dtype=float).ravel())
    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.x))

def mode_at(sys: PplsSystem, k: int) -> tuple[int, int]:
    """Returns `(i, phase)` where `i` (1-based) is the active subsystem at time `k` and
    `phase` is the number of steps since the mode was entered.
    """
    if k < 0:
        raise InvalidInputError("Time index must be non-negative")
    local = k % sys.period
    for i in range(1, sys.s + 1):
        if local < sys.offsets[i]:
            return i, local - sys.offsets[i - 1]
    raise AssertionError("unreachable") # pragma: no cover

def closed_loop(sys: PplsSystem, i: int, gain: ArrayLike, channel_state: Sequence[int]) -> np.ndarray:
    """Returns closed-loop matrix `A_i + B_i K diag(L)`.

    Raises:
        InvalidInputError: On dimension mismatch.
    """
    sub = sys.subsystem(i)
    gain = np.asarray(gain, dtype=float)
    if gain.shape != (sys.n_u, sys.n):
        raise InvalidInputError(f"Gain must be {sys.n_u}x{sys.n}, not {gain.shape}", field='gain')
    if len(channel_state) != sys.n:
        raise InvalidInputError(f"Channel state must have {sys.n} entries", field='channel_state')
    return sub.a + sub.b @ gain @ np.diag(np.asarray(channel_state, dtype=float))

def step(sys: PplsSystem, st: SystemState, gain: ArrayLike, channel_state: Sequence[int]) -> SystemState:
    """Advances the plant by one step under `u = K diag(L) x`.
    """
    if st.x.shape != (sys.n,):
        raise InvalidInputError(f"State must have {sys.n} entries", field='x')
    i, _ = mode_at(sys, st.k)
    return SystemState(st.k + 1, closed_loop(sys, i, gain, channel_state) @ st.x)

def interpolated_lyapunov(sys: PplsSystem, lyapunov: Sequence[np.ndarray], k: int) -> np.ndarray:
    """Returns time-varying Lyapunov matrix `P_{i-1} + (phase / T_i)(P_i - P_{i-1})`.

    Arguments:
        sys:       The system.
        lyapunov:  Matrices `P_0 .. P_s` (with `P_s = P_0`).
        k:         Time index.
    """
    i, phase = mode_at(sys, k)
    prev, cur = lyapunov[i - 1], lyapunov[i]
    return prev + (phase / sys.dwell_time(i)) * (cur - prev)

def lyapunov_value(sys: PplsSystem, design: LyapunovDesign, st: SystemState) -> float:
    """Returns `x' P_i(k) x` for the design's interpolated Lyapunov matrix.
    """
    return float(st.x @ interpolated_lyapunov(sys, design.lyapunov, st.k) @ st.x)
