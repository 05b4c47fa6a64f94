# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/defense.py
# DESCRIPTION:    Online cross-layered defense
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Online cross-layered defense

At every attacked step the defender picks bandwidth allocation `W(k)`, the channel state
`L` it realizes and the gain `K` jointly, minimizing the rate `beta` with
`V(k+1) <= beta * V(k)`. The mixed-integer problem is solved exactly by enumeration of
realizable channel states: for fixed `L` the problem is a semidefinite program in
`(beta, K)` whose solution does not depend on the attack flow, so it's cached per
`(mode, L)`.

Reported rates are always certified for the returned gain (generalized eigenvalue
computation), so `V(k+1) <= beta * V(k)` holds exactly up to round-off.
"""

from __future__ import annotations

import threading
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .conic import solve_lmi
from .design import LyapunovDesign
from .lmi import build_online, certified_rate
from .logging import BraceMessage, get_logger
from .network import (
    ChannelState,
    NetworkConfig,
    delay_test,
    enabling_allocation,
    enabling_state,
    equal_split,
)
from .plant import PplsSystem
from .types import InfeasibleError, SolverError, SolveStatus, Strategy

#: Relative tolerance under which two rates are considered equal.
TIE_TOLERANCE = 1e-6

@dataclass(frozen=True, eq=False)
class StateSolution:
    """Optimal gain for fixed mode and channel state.
    """
    channel_state: ChannelState
    #: Rate certified for `gain`.
    beta: float
    gain: np.ndarray
    #: Optimal value reported by the semidefinite program (None for fixed gains).
    sdp_beta: float | None = None

@dataclass(frozen=True, eq=False)
class DefenseDecision:
    """Decision for one step.
    """
    mode: int
    #: Bandwidth allocation `W(k)`.
    w: np.ndarray
    channel_state: ChannelState
    gain: np.ndarray
    #: Certified rate for the step (`alpha_i` for unattacked steps with all channels on).
    beta_star: float
    attacked: bool
    strategy: Strategy = Strategy.CROSS

class BetaCache:
    """Thread-safe cache of `StateSolution` keyed by `(kind, mode, channel_state)`.
    """
    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[tuple, StateSolution] = {}
    def __len__(self):
        with self._lock:
            return len(self._data)
    def __contains__(self, key: tuple) -> bool:
        with self._lock:
            return key in self._data
    def get_or_compute(self, key: tuple, compute: Callable[[], StateSolution]) -> StateSolution:
        """Returns cached value or computes, stores and returns it. Computation runs outside
        the lock; when two threads compute the same key, the first stored value wins.
        """
        with self._lock:
            if (value := self._data.get(key)) is not None:
                return value
        value = compute()
        with self._lock:
            return self._data.setdefault(key, value)
    def clear(self) -> None:
        with self._lock:
            self._data.clear()

def feasible_states(cfg: NetworkConfig, w_prev: ArrayLike, attack: ArrayLike) -> list[ChannelState]:
    """Returns all non-zero channel states the defender can realize, in lexicographic order.

    A state is realizable iff every enabled channel passes the delay test and the enabled
    channels' input flows fit into total bandwidth. Disabled channels get zero bandwidth, so
    a channel with zero input flow that passes the delay test cannot be disabled.
    """
    attack = np.asarray(attack, dtype=float).ravel()
    delay_ok = delay_test(cfg, w_prev, attack)
    need = cfg.normal_flow + attack
    result = []
    for state in ChannelState.all_states(cfg.n):
        if state.is_zero:
            continue
        idx = list(state.enabled)
        if not np.all(delay_ok[idx]):
            continue
        if need[idx].sum() > cfg.total_bandwidth:
            continue
        if any(not state[j] and delay_ok[j] and need[j] <= 0.0 for j in range(cfg.n)):
            continue
        result.append(state)
    return result

def select_state(rates: dict[ChannelState, float], tolerance: float=TIE_TOLERANCE) -> ChannelState:
    """Returns state with minimal rate. States within `tolerance` (relative) of the minimum
    are ranked by more enabled channels first, then lexicographically smallest bits.
    """
    best = min(rates.values())
    limit = best + tolerance * max(1.0, abs(best))
    return min((state for state, rate in rates.items() if rate <= limit),
               key=lambda state: (-state.count, state.bits))

class Defender:
    """Online defense for fixed system, design and network.

    Arguments:
        sys:     The system.
        design:  Attack-free design (Lyapunov matrices, default gains).
        cfg:     Network configuration.
        kbar:    Bound on gain entries, or None for unbounded gains.
        solver:  Conic engine name (default engine when None).
    """
    _agent_name_ = 'defender'
    def __init__(self, sys: PplsSystem, design: LyapunovDesign, cfg: NetworkConfig, *,
                 kbar: float | None=None, solver: str | None=None):
        self.sys: PplsSystem = sys
        self.design: LyapunovDesign = design
        self.cfg: NetworkConfig = cfg
        self.kbar: float | None = kbar
        self.solver: str | None = solver
        self.cache: BetaCache = BetaCache()
        self.log_context: str | None = None
        self._log = get_logger(self, 'defense')
    def _solve(self, i: int, state: ChannelState) -> StateSolution:
        p_prev, p_cur = self.design.pair(i)
        sub, dwell = self.sys.subsystem(i), self.sys.dwell_time(i)
        problem = build_online(sub, dwell, p_prev, p_cur, state, self.kbar)
        result = solve_lmi(problem, solver=self.solver)
        if result.status is SolveStatus.INFEASIBLE:
            raise InfeasibleError(f"Rate problem for mode {i}, channel state {state} is infeasible",
                                  problem='online', mode=i, channel_state=state,
                                  hint="check that the design satisfies the interpolation condition")
        if not result.solved:
            raise SolverError(f"Rate problem for mode {i}, channel state {state} failed: {result.detail}",
                              detail=result.detail, mode=i, channel_state=state)
        gain = result.values['K']
        beta = certified_rate(sub, dwell, p_prev, p_cur, gain, state)
        self._log.debug(BraceMessage("mode {} state {} beta {:.6f} (sdp {:.6f})", i, state, beta,
                                     result.objective))
        return StateSolution(state, beta, gain, result.objective)
    def solve_state(self, i: int, state: ChannelState) -> StateSolution:
        """Returns optimal (cached) gain and certified rate for mode `i` and channel state.
        """
        return self.cache.get_or_compute(('optimal', i, state), lambda: self._solve(i, state))
    def default_state(self, i: int, state: ChannelState) -> StateSolution:
        """Returns (cached) certified rate of the default gain for mode `i` and channel state.
        """
        def compute() -> StateSolution:
            p_prev, p_cur = self.design.pair(i)
            gain = self.design.gain(i)
            beta = certified_rate(self.sys.subsystem(i), self.sys.dwell_time(i), p_prev, p_cur, gain, state)
            return StateSolution(state, beta, gain)
        return self.cache.get_or_compute(('default', i, state), compute)
    def beta_table(self, i: int) -> dict[ChannelState, float]:
        """Returns optimal rates of all 2^n channel states of mode `i`.
        """
        return {state: self.solve_state(i, state).beta for state in ChannelState.all_states(self.sys.n)}
    def _unattacked(self, i: int, w_prev: np.ndarray, attack: np.ndarray, strategy: Strategy) -> DefenseDecision:
        w = self.cfg.normal_flow.copy() if strategy is Strategy.A else equal_split(self.cfg)
        state = enabling_state(self.cfg, w_prev, w, attack)
        if all(state):
            beta = self.design.alpha[i - 1]
        else:
            beta = self.default_state(i, state).beta
        return DefenseDecision(i, w, state, self.design.gain(i), beta, False, strategy)
    def _enumerate(self, i: int, w_prev: np.ndarray, attack: np.ndarray,
                   solution: Callable[[int, ChannelState], StateSolution], strategy: Strategy) -> DefenseDecision:
        states = feasible_states(self.cfg, w_prev, attack)
        if not states:
            raise InfeasibleError(f"No channel can be enabled at mode {i} under attack {attack.tolist()}",
                                  problem='online', mode=i,
                                  hint="total bandwidth must exceed normal flow plus attack cap")
        solutions = {state: solution(i, state) for state in states}
        state = select_state({s: sol.beta for s, sol in solutions.items()})
        chosen = solutions[state]
        w = enabling_allocation(self.cfg, attack, state)
        realized = enabling_state(self.cfg, w_prev, w, attack)
        assert realized == state, f"allocation realizes {realized}, not {state}" # noqa: S101
        self._log.info(BraceMessage("mode {} attack {} -> state {} beta {:.6f}", i, attack.tolist(),
                                    state, chosen.beta))
        return DefenseDecision(i, w, state, chosen.gain, chosen.beta, True, strategy)
    def defend(self, i: int, w_prev: ArrayLike, attack: ArrayLike, *, attacked: bool | None=None) -> DefenseDecision:
        """Returns joint bandwidth/gain decision for mode `i`.

        Arguments:
            i:        1-based mode.
            w_prev:   Previous bandwidth allocation.
            attack:   Detected attack flow.
            attacked: Whether the step is attacked; by default any positive attack entry.

        Raises:
            InfeasibleError: When no channel can be enabled.
            SolverError: When a rate problem fails (the offending channel state is attached).
        """
        w_prev, attack = self._vectors(w_prev, attack)
        if not (np.any(attack > 0.0) if attacked is None else attacked):
            return self._unattacked(i, w_prev, attack, Strategy.CROSS)
        return self._enumerate(i, w_prev, attack, self.solve_state, Strategy.CROSS)
    def strategy_a_defend(self, i: int, w_prev: ArrayLike, attack: ArrayLike, *,
                          attacked: bool | None=None) -> DefenseDecision:
        """Fixed allocation `W = R`, optimized gain. When all channels are jammed the plant
        coasts open-loop (masked default gain).
        """
        w_prev, attack = self._vectors(w_prev, attack)
        if not (np.any(attack > 0.0) if attacked is None else attacked):
            return self._unattacked(i, w_prev, attack, Strategy.A)
        w = self.cfg.normal_flow.copy()
        state = enabling_state(self.cfg, w_prev, w, attack)
        if state.is_zero:
            beta = self.default_state(i, state).beta
            return DefenseDecision(i, w, state, self.design.gain(i), beta, True, Strategy.A)
        chosen = self.solve_state(i, state)
        return DefenseDecision(i, w, state, chosen.gain, chosen.beta, True, Strategy.A)
    def strategy_b_defend(self, i: int, w_prev: ArrayLike, attack: ArrayLike, *,
                          attacked: bool | None=None) -> DefenseDecision:
        """Default gain, optimized allocation.
        """
        w_prev, attack = self._vectors(w_prev, attack)
        if not (np.any(attack > 0.0) if attacked is None else attacked):
            return self._unattacked(i, w_prev, attack, Strategy.B)
        return self._enumerate(i, w_prev, attack, self.default_state, Strategy.B)
    def open_loop(self, i: int, w_prev: ArrayLike, attack: ArrayLike, *,
                  attacked: bool | None=None) -> DefenseDecision:
        """No control input: zero gain, allocation `W = R`. The rate is not certified and is
        reported as `inf`.
        """
        w_prev, attack = self._vectors(w_prev, attack)
        w = self.cfg.normal_flow.copy()
        state = enabling_state(self.cfg, w_prev, w, attack)
        is_attacked = bool(np.any(attack > 0.0)) if attacked is None else attacked
        return DefenseDecision(i, w, state, np.zeros((self.sys.n_u, self.sys.n)), np.inf, is_attacked,
                               Strategy.OPEN_LOOP)
    def decide(self, strategy: Strategy, i: int, w_prev: ArrayLike, attack: ArrayLike, *,
               attacked: bool | None=None) -> DefenseDecision:
        """Dispatches to the method implementing `strategy`.
        """
        method = {Strategy.CROSS: self.defend, Strategy.A: self.strategy_a_defend,
                  Strategy.B: self.strategy_b_defend, Strategy.OPEN_LOOP: self.open_loop}[strategy]
        return method(i, w_prev, attack, attacked=attacked)
    def _vectors(self, w_prev: ArrayLike, attack: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        return (np.asarray(w_prev, dtype=float).ravel(), np.asarray(attack, dtype=float).ravel())
