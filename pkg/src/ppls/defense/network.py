# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/network.py
# DESCRIPTION:    Sampling channels, bandwidth allocation and attack flows
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Sampling channels, bandwidth allocation and attack flows

Each state entry is sampled through its own channel. Channel `j` carries normal flow
`R_j` plus attack flow `r_j`, and is served by a router with bandwidth `W_j` (total
`W_sum`) and buffer `S_j`. Bandwidth is re-allocated with delay `tau`, so a channel is
enabled at step `k` iff its buffer survives the allocation lag under the old bandwidth
(delay test) and the new bandwidth covers the input flow (allocation test)::

    (R_j + r_j - W_j(k-1)) * tau < S_j   and   W_j(k) >= R_j + r_j

Both comparisons are exact (no tolerance), as results are sensitive to boundary cases.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from .types import InvalidInputError, ValidationError

def _vector(value: ArrayLike, name: str, n: int | None=None) -> np.ndarray:
    result = np.array(value, dtype=float).ravel()
    if n is not None and result.shape != (n,):
        raise InvalidInputError(f"'{name}' must have {n} entries, not {result.size}", field=name)
    if not np.all(np.isfinite(result)):
        raise InvalidInputError(f"'{name}' has non-finite entries", field=name)
    return result

@dataclass(frozen=True, eq=False)
class NetworkConfig:
    """Network and attacker parameters.

    Raises:
        InvalidInputError: On shape mismatch, negative values or non-positive delay.
        ValidationError: When total bandwidth is below `R_j + Rbar_j` for some
            channel (`assumption` is 'bandwidth-dominance').
    """
    #: Normal flow `R` per channel.
    normal_flow: np.ndarray
    #: Buffer size `S` per channel.
    buffer_size: np.ndarray
    #: Bandwidth allocation delay `tau`.
    delay: float
    #: Total bandwidth `W_sum`.
    total_bandwidth: float
    #: Total attack budget `Rtilde_sum`.
    attack_budget: float
    #: Per-channel attack cap `Rbar`.
    attack_cap: np.ndarray
    def __post_init__(self):
        n = np.size(self.normal_flow)
        object.__setattr__(self, 'normal_flow', _vector(self.normal_flow, 'normal_flow'))
        object.__setattr__(self, 'buffer_size', _vector(self.buffer_size, 'buffer_size', n))
        object.__setattr__(self, 'attack_cap', _vector(self.attack_cap, 'attack_cap', n))
        object.__setattr__(self, 'delay', float(self.delay))
        object.__setattr__(self, 'total_bandwidth', float(self.total_bandwidth))
        object.__setattr__(self, 'attack_budget', float(self.attack_budget))
        if n == 0:
            raise InvalidInputError("At least one channel required", field='normal_flow')
        for name in ('normal_flow', 'buffer_size', 'attack_cap'):
            if np.any(getattr(self, name) < 0.0):
                raise InvalidInputError(f"'{name}' must be non-negative", field=name)
        for name in ('total_bandwidth', 'attack_budget'):
            if getattr(self, name) < 0.0 or not np.isfinite(getattr(self, name)):
                raise InvalidInputError(f"'{name}' must be non-negative", field=name)
        if not self.delay > 0.0 or not np.isfinite(self.delay):
            raise InvalidInputError("'delay' must be positive", field='delay')
        for j in range(n):
            if self.total_bandwidth < self.normal_flow[j] + self.attack_cap[j]:
                raise ValidationError(f"Total bandwidth {self.total_bandwidth:g} is below "
                                      f"normal flow plus attack cap of channel {j + 1} "
                                      f"({self.normal_flow[j] + self.attack_cap[j]:g})",
                                      assumption='bandwidth-dominance', field='total_bandwidth')
    @property
    def n(self) -> int:
        """Number of channels.
        """
        return self.normal_flow.size
    @property
    def default_strict_eps(self) -> float:
        """Strict-inequality epsilon for attacker feasibility programs.
        """
        return 1e-9 * max(self.total_bandwidth + self.attack_budget, 1.0)

@dataclass(frozen=True, order=True)
class ChannelState:
    """Binary channel state (1 = enabled). Ordering is lexicographic on bits.
    """
    bits: tuple[int, ...]
    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise InvalidInputError(f"Channel state entries must be 0 or 1, got {self.bits}")
        object.__setattr__(self, 'bits', tuple(int(b) for b in self.bits))
    def __str__(self):
        return f"[{' '.join(str(b) for b in self.bits)}]"
    def __len__(self):
        return len(self.bits)
    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)
    def __getitem__(self, index: int) -> int:
        return self.bits[index]
    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> ChannelState:
        return cls(tuple(int(b) for b in bits))
    @classmethod
    def parse(cls, text: str) -> ChannelState:
        """Parses '[1 1 0 1]', '1 1 0 1' or '1101'.

        Raises:
            ValueError: For invalid text.
        """
        digits = [c for c in text if not c.isspace() and c not in '[],']
        if not digits or any(c not in '01' for c in digits):
            raise ValueError(f"Invalid channel state '{text}'")
        return cls(tuple(int(c) for c in digits))
    @classmethod
    def zeros(cls, n: int) -> ChannelState:
        return cls((0,) * n)
    @classmethod
    def ones(cls, n: int) -> ChannelState:
        return cls((1,) * n)
    @classmethod
    def all_states(cls, n: int) -> list[ChannelState]:
        """Returns all 2^n states in lexicographic order.
        """
        return [cls(bits) for bits in itertools.product((0, 1), repeat=n)]
    @property
    def enabled(self) -> tuple[int, ...]:
        """0-based indices of enabled channels.
        """
        return tuple(j for j, b in enumerate(self.bits) if b)
    @property
    def count(self) -> int:
        """Number of enabled channels.
        """
        return sum(self.bits)
    @property
    def is_zero(self) -> bool:
        return not any(self.bits)
    @property
    def mask(self) -> np.ndarray:
        """Float 0/1 vector.
        """
        return np.array(self.bits, dtype=float)
    def disjoint(self, channels: Sequence[int]) -> bool:
        """True when no channel from `channels` (0-based) is enabled.
        """
        return not any(self.bits[j] for j in channels)
    def covers(self, other: ChannelState) -> bool:
        """True when every channel enabled in `other` is enabled here too.
        """
        return all(a >= b for a, b in zip(self.bits, other.bits, strict=True))

def delay_test(cfg: NetworkConfig, w_prev: ArrayLike, attack: ArrayLike) -> np.ndarray:
    """Returns boolean vector: `(R + r - W(k-1)) * tau < S` (exact, strict).
    """
    w_prev = _vector(w_prev, 'w_prev', cfg.n)
    attack = _vector(attack, 'attack', cfg.n)
    return (cfg.normal_flow + attack - w_prev) * cfg.delay < cfg.buffer_size

def allocation_test(cfg: NetworkConfig, w: ArrayLike, attack: ArrayLike) -> np.ndarray:
    """Returns boolean vector: `W(k) >= R + r` (exact).
    """
    w = _vector(w, 'w', cfg.n)
    attack = _vector(attack, 'attack', cfg.n)
    return w >= cfg.normal_flow + attack

def enabling_state(cfg: NetworkConfig, w_prev: ArrayLike, w: ArrayLike, attack: ArrayLike) -> ChannelState:
    """Returns channel state realized by allocation `w` after `w_prev` under attack flow.
    """
    enabled = delay_test(cfg, w_prev, attack) & allocation_test(cfg, w, attack)
    return ChannelState(tuple(int(x) for x in enabled))

def force_jam_threshold(cfg: NetworkConfig, j: int) -> float:
    """Returns `S_j / tau - R_j`: the smallest attack rate on channel `j` (0-based) that
    fails the delay test when the previous bandwidth is zero.
    """
    if not 0 <= j < cfg.n:
        raise InvalidInputError(f"Channel index {j} out of range")
    return float(cfg.buffer_size[j] / cfg.delay - cfg.normal_flow[j])

def admissible(cfg: NetworkConfig, attack: ArrayLike) -> bool:
    """Returns True when attack flow is non-negative, within per-channel caps and within
    the total budget.
    """
    attack = np.asarray(attack, dtype=float).ravel()
    if attack.shape != (cfg.n,) or not np.all(np.isfinite(attack)):
        return False
    return bool(np.all(attack >= 0.0) and np.all(attack <= cfg.attack_cap)
                and attack.sum() <= cfg.attack_budget)

def equal_split(cfg: NetworkConfig) -> np.ndarray:
    """Returns allocation `W_sum / n` for every channel.
    """
    return np.full(cfg.n, cfg.total_bandwidth / cfg.n)

def enabling_allocation(cfg: NetworkConfig, attack: ArrayLike, channel_state: ChannelState) -> np.ndarray:
    """Returns allocation that implements `channel_state`: enabled channels get their input
    flow plus an equal share of the surplus, disabled channels get zero.

    Raises:
        InvalidInputError: When enabled channels need more than the total bandwidth.
    """
    attack = _vector(attack, 'attack', cfg.n)
    need = cfg.normal_flow + attack
    result = np.zeros(cfg.n)
    if channel_state.is_zero:
        return result
    idx = list(channel_state.enabled)
    surplus = cfg.total_bandwidth - need[idx].sum()
    if surplus < 0.0:
        raise InvalidInputError(f"Channel state {channel_state} needs more than total bandwidth")
    result[idx] = need[idx] + surplus / len(idx)
    # keep entries at or above need despite rounding
    result[idx] = np.maximum(result[idx], need[idx])
    return result

# Big-M encoding of the enabling condition

#: Binary variables of the encoding, per channel.
BINARY_VARIABLES = ('z1', 'z2', 'l')

@dataclass(frozen=True)
class BigMRow:
    """Linear row `sum(coeffs[v] * v) + constant (sense) 0` for one channel. Variables are
    'w_prev', 'w', 'attack', 'z1', 'z2' and 'l'. Strict rows ('<') are evaluated as
    `<= -eps`.
    """
    channel: int
    name: str
    coeffs: tuple[tuple[str, float], ...]
    constant: float
    sense: str
    @property
    def strict(self) -> bool:
        return self.sense == '<'
    def evaluate(self, values: dict[str, float]) -> float:
        return sum(c * values[v] for v, c in self.coeffs) + self.constant
    def holds(self, values: dict[str, float], eps: float) -> bool:
        value = self.evaluate(values)
        if self.sense == '<':
            return value <= -eps
        if self.sense == '<=':
            return value <= 0.0
        return value >= 0.0

@dataclass(frozen=True)
class BigMEncoding:
    """Mixed-integer linear encoding of the enabling condition.
    """
    #: Big-M constant.
    m: float
    #: Components `(M1, M2, M3, M4)`; `m` is their maximum.
    terms: tuple[float, float, float, float]
    #: Epsilon used for strict rows.
    eps: float
    rows: tuple[BigMRow, ...] = field(repr=False)
    #: Binary variable names per channel.
    binaries: tuple[tuple[str, int], ...] = field(repr=False, default=())
    def satisfiable(self, assignment: Sequence[tuple[int, int, int]], w_prev: ArrayLike,
                    w: ArrayLike, attack: ArrayLike) -> bool:
        """Returns True when every row holds for binary `assignment` (one `(z1, z2, l)` per
        channel) and continuous values.
        """
        w_prev = np.asarray(w_prev, dtype=float).ravel()
        w = np.asarray(w, dtype=float).ravel()
        attack = np.asarray(attack, dtype=float).ravel()
        for row in self.rows:
            z1, z2, l = assignment[row.channel]
            values = {'w_prev': w_prev[row.channel], 'w': w[row.channel], 'attack': attack[row.channel],
                      'z1': z1, 'z2': z2, 'l': l}
            if not row.holds(values, self.eps):
                return False
        return True

def indicators(cfg: NetworkConfig, w_prev: ArrayLike, w: ArrayLike,
               attack: ArrayLike) -> list[tuple[int, int, int]]:
    """Returns truth values `(z1, z2, l)` per channel: delay test, allocation test and
    their conjunction.
    """
    z1 = delay_test(cfg, w_prev, attack)
    z2 = allocation_test(cfg, w, attack)
    return [(int(a), int(b), int(a and b)) for a, b in zip(z1, z2, strict=True)]

def encode_big_m(cfg: NetworkConfig, *, use_caps: bool=True) -> BigMEncoding:
    """Returns big-M encoding of the enabling condition.

    Arguments:
        cfg:      Network configuration.
        use_caps: When True, attack flow on channel `j` is bounded by its cap `Rbar_j`,
                  otherwise by the total budget.
    """
    bound = cfg.attack_cap if use_caps else np.full(cfg.n, cfg.attack_budget)
    r, s, tau, w_sum = cfg.normal_flow, cfg.buffer_size, cfg.delay, cfg.total_bandwidth
    terms = (float(np.max((r + bound) * tau - s)), float(np.max((w_sum - r) * tau + s)),
             float(np.max(r + bound)), float(np.max(w_sum - r)))
    m = max(terms)
    eps = 1e-9 * max(m, 1.0)
    rows = []
    binaries = []
    for j in range(cfg.n):
        rj, sj = float(r[j]), float(s[j])
        rows.extend([
            # delay test indicator
            BigMRow(j, 'delay-upper', (('attack', tau), ('w_prev', -tau), ('z1', m)), rj * tau - sj - m, '<'),
            BigMRow(j, 'delay-lower', (('attack', tau), ('w_prev', -tau), ('z1', m)), rj * tau - sj, '>='),
            # allocation test indicator
            BigMRow(j, 'allocation-lower', (('w', 1.0), ('attack', -1.0), ('z2', -m)), m - rj, '>='),
            BigMRow(j, 'allocation-upper', (('w', 1.0), ('attack', -1.0), ('z2', -m)), -rj, '<'),
            # l = z1 and z2
            BigMRow(j, 'and-1', (('l', 1.0), ('z1', -1.0)), 0.0, '<='),
            BigMRow(j, 'and-2', (('l', 1.0), ('z2', -1.0)), 0.0, '<='),
            BigMRow(j, 'and-3', (('l', 1.0), ('z1', -1.0), ('z2', -1.0)), 1.0, '>='),
        ])
        binaries.extend((name, j) for name in BINARY_VARIABLES)
    return BigMEncoding(m, terms, eps, tuple(rows), tuple(binaries))
