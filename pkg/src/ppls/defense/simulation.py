# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/simulation.py
# DESCRIPTION:    Closed-loop simulation under attack traces
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Closed-loop simulation under attack traces

Attack traces respect the per-step attack flow caps and budget, and the number of attacked
steps per dwell interval. Attack flows are detected exactly at the start of each step.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from .defense import DefenseDecision, Defender
from .logging import BraceMessage, get_logger
from .network import NetworkConfig, admissible, enabling_state, equal_split, force_jam_threshold
from .plant import PplsSystem, SystemState, lyapunov_value, mode_at, step
from .stability import AttackBudget, attack_counts, budget_violations
from .types import InvalidInputError, Strategy, TracePolicy, ValidationError

#: Relative slack of per-step Lyapunov checks.
CONTRACT_TOLERANCE = 1e-6
#: Fraction of the initial norm that counts as settled.
SETTLE_FRACTION = 0.02

@dataclass(frozen=True, eq=False)
class AttackTrace:
    """Attack flow per step.
    """
    #: Attack flows, one row per step.
    flows: np.ndarray
    policy: TracePolicy = TracePolicy.EXPLICIT
    seed: int | None = None
    @property
    def horizon(self) -> int:
        return self.flows.shape[0]
    @property
    def attacked(self) -> np.ndarray:
        """Boolean flag per step.
        """
        return np.any(self.flows > 0.0, axis=1)
    @classmethod
    def explicit(cls, horizon: int, n: int, attacks: Mapping[int, ArrayLike]) -> AttackTrace:
        """Returns trace with given attack flows at given steps and no attack elsewhere.

        Raises:
            InvalidInputError: For steps outside the horizon or flows of wrong size.
        """
        flows = np.zeros((horizon, n))
        for k, flow in attacks.items():
            if not 0 <= k < horizon:
                raise InvalidInputError(f"Attacked step {k} outside horizon {horizon}", field='attacked_steps')
            flow = np.asarray(flow, dtype=float).ravel()
            if flow.shape != (n,):
                raise InvalidInputError(f"Attack flow must have {n} entries", field='attack_flow')
            flows[k] = flow
        return cls(flows)
    def validate(self, cfg: NetworkConfig, sys: PplsSystem, budget: AttackBudget) -> None:
        """Checks admissibility of every step and attacked step counts per dwell interval.

        Raises:
            ValidationError: With `assumption` 'attack-budget' or 'attack-duration'.
        """
        if self.flows.ndim != 2 or self.flows.shape[1] != cfg.n: # noqa: PLR2004
            raise InvalidInputError(f"Attack flows must have {cfg.n} columns", field='attack_flow')
        for k, flow in enumerate(self.flows):
            if not admissible(cfg, flow):
                raise ValidationError(f"Attack flow {flow.tolist()} at step {k} is not admissible",
                                      assumption='attack-budget', field='attack_flow')
        violations = budget_violations(sys, budget, self.attacked)
        if violations:
            period, i, count = violations[0]
            raise ValidationError(f"{count} attacked steps in period {period}, subsystem {i} exceed "
                                  f"the duration cap {budget.durations[i - 1]}",
                                  assumption='attack-duration', field=f'subsystem-{i}.attack_duration')

def _attacked_steps(sys: PplsSystem, budget: AttackBudget, horizon: int, rng: np.random.Generator,
                    exact: bool) -> list[int]:
    result = []
    for start in range(0, horizon, sys.period):
        for i in range(1, sys.s + 1):
            first = start + sys.offsets[i - 1]
            steps = [k for k in range(first, first + sys.dwell_time(i)) if k < horizon]
            cap = min(budget.durations[i - 1], len(steps))
            count = cap if exact else int(rng.integers(0, cap + 1))
            if count:
                result.extend(int(k) for k in rng.choice(steps, size=count, replace=False))
    return sorted(result)

def _random_flow(cfg: NetworkConfig, rng: np.random.Generator) -> np.ndarray:
    flow = rng.uniform(0.0, 1.0, cfg.n) * cfg.attack_cap
    total = flow.sum()
    if total > cfg.attack_budget:
        # rounding must not push the sum over the budget
        flow *= cfg.attack_budget / total * (1.0 - 1e-12)
    return np.minimum(flow, cfg.attack_cap)

def generate_trace(cfg: NetworkConfig, budget: AttackBudget, sys: PplsSystem, policy: TracePolicy, seed: int,
                   horizon: int) -> AttackTrace:
    """Returns attack trace respecting the caps, budget and attack duration limits.

    Policies:
        UNIFORM_SPLIT: The budget is split equally among channels (within caps) on the
            maximal number of attacked steps per dwell interval.
        FORCE_ONE: One random channel per attacked step receives its jam threshold (or its
            cap when lower).
        RANDOM: Random admissible flows on a random number of steps per dwell interval.

    The same seed always gives the same trace.

    Raises:
        InvalidInputError: For the EXPLICIT policy (use `AttackTrace.explicit`) or negative
            horizon.
    """
    if horizon < 0:
        raise InvalidInputError("Horizon must be non-negative", field='horizon')
    if policy is TracePolicy.EXPLICIT:
        raise InvalidInputError("Explicit traces are built from attacked steps", field='policy')
    rng = np.random.default_rng(seed)
    flows = np.zeros((horizon, cfg.n))
    steps = _attacked_steps(sys, budget, horizon, rng, policy is not TracePolicy.RANDOM)
    share = np.minimum(np.full(cfg.n, cfg.attack_budget / cfg.n), cfg.attack_cap)
    for k in steps:
        if policy is TracePolicy.UNIFORM_SPLIT:
            flows[k] = share
        elif policy is TracePolicy.FORCE_ONE:
            j = int(rng.integers(0, cfg.n))
            flows[k, j] = min(max(force_jam_threshold(cfg, j), 0.0), cfg.attack_cap[j], cfg.attack_budget)
        else:
            flows[k] = _random_flow(cfg, rng)
    get_logger('trace', 'simulation').debug(BraceMessage("{} trace, seed {}: {} attacked steps", policy.value,
                                                          seed, len(steps)))
    return AttackTrace(flows, policy, seed)

@dataclass
class SimResult:
    """Trajectory and decision log of one simulation run.
    """
    strategy: Strategy
    #: States `x(0) .. x(horizon)`.
    trajectory: list[SystemState] = field(default_factory=list)
    decisions: list[DefenseDecision] = field(default_factory=list)
    #: Lyapunov values `V(0) .. V(horizon)`.
    lyapunov: list[float] = field(default_factory=list)
    #: `(period, mode, count)` of attacked steps.
    attack_counts: list[tuple[int, int, int]] = field(default_factory=list)
    @property
    def norms(self) -> np.ndarray:
        return np.array([st.norm for st in self.trajectory])
    @property
    def metrics(self) -> dict[str, float]:
        return metrics(self)

def run(defender: Defender, trace: AttackTrace, x0: ArrayLike, strategy: Strategy=Strategy.CROSS, *,
        w_prev: ArrayLike | None=None) -> SimResult:
    """Simulates the closed loop over the trace horizon.

    The initial allocation `w_prev` defaults to the equal split of total bandwidth.

    Raises:
        InvalidInputError: When the initial state or trace does not fit the system.
        InfeasibleError: When no channel can be enabled at some attacked step.
        AssertionError: When the allocation does not realize the chosen channel state, or
            all channels are jammed under a strategy that allocates bandwidth.
    """
    sys, cfg = defender.sys, defender.cfg
    log = get_logger('simulation', 'simulation')
    st = SystemState.initial(x0)
    if st.x.shape != (sys.n,):
        raise InvalidInputError(f"Initial state must have {sys.n} entries", field='x0')
    if trace.flows.shape[1:] != (cfg.n,):
        raise InvalidInputError(f"Attack flows must have {cfg.n} columns", field='attack_flow')
    result = SimResult(strategy, [st], [], [lyapunov_value(sys, defender.design, st)])
    w_prev = equal_split(cfg) if w_prev is None else np.asarray(w_prev, dtype=float).ravel()
    if w_prev.shape != (cfg.n,):
        raise InvalidInputError(f"Initial allocation must have {cfg.n} entries", field='w_prev')
    attacked = trace.attacked
    for k in range(trace.horizon):
        i, _ = mode_at(sys, k)
        attack = trace.flows[k]
        decision = defender.decide(strategy, i, w_prev, attack, attacked=bool(attacked[k]))
        realized = enabling_state(cfg, w_prev, decision.w, attack)
        assert realized == decision.channel_state, f"step {k}: allocation realizes {realized}" # noqa: S101
        if strategy in (Strategy.CROSS, Strategy.B):
            assert not realized.is_zero, f"step {k}: all channels jammed" # noqa: S101
        st = step(sys, st, decision.gain, realized.bits)
        result.decisions.append(decision)
        result.trajectory.append(st)
        result.lyapunov.append(lyapunov_value(sys, defender.design, st))
        w_prev = decision.w
    result.attack_counts = attack_counts(sys, attacked)
    log.info(BraceMessage("{} run over {} steps: final norm {:.3e}", strategy.value, trace.horizon,
                          result.trajectory[-1].norm))
    return result

def compare(defender: Defender, trace: AttackTrace, x0: ArrayLike,
            strategies: Iterable[Strategy]=(Strategy.CROSS, Strategy.A, Strategy.B), *,
            w_prev: ArrayLike | None=None) -> dict[Strategy, SimResult]:
    """Runs the same trace under several strategies.
    """
    return {strategy: run(defender, trace, x0, strategy, w_prev=w_prev) for strategy in strategies}

def metrics(result: SimResult) -> dict[str, float]:
    """Returns summary metrics: peak norm ratio `max ||x(k)|| / ||x(0)||`, oscillation
    `sum ||x(k+1) - x(k)||`, settling step (first step after which the norm stays within
    `SETTLE_FRACTION` of the initial norm, -1 if never), final norm, largest Lyapunov
    ratio and number of attacked steps.
    """
    norms = result.norms
    x0 = norms[0] if norms.size else 0.0
    states = np.array([st.x for st in result.trajectory])
    oscillation = float(np.sum(np.linalg.norm(np.diff(states, axis=0), axis=1))) if len(states) > 1 else 0.0
    settle = -1
    if x0 > 0.0:
        outside = np.nonzero(norms > SETTLE_FRACTION * x0)[0]
        if not outside.size:
            settle = 0
        elif outside[-1] + 1 < norms.size:
            settle = int(outside[-1] + 1)
    values = np.array(result.lyapunov)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = values[1:] / values[:-1]
    ratios = ratios[np.isfinite(ratios)]
    return {'peak_ratio': float(norms.max() / x0) if x0 > 0.0 else 0.0,
            'oscillation': oscillation,
            'settling_step': float(settle),
            'final_norm': float(norms[-1]) if norms.size else 0.0,
            'max_lyapunov_ratio': float(ratios.max()) if ratios.size else 0.0,
            'attacked_steps': float(sum(d.attacked for d in result.decisions))}

def contract_violations(result: SimResult, tolerance: float=CONTRACT_TOLERANCE) -> list[int]:
    """Returns steps where `V(k+1) <= beta_star(k) V(k)` fails beyond relative `tolerance`.
    """
    return [k for k, decision in enumerate(result.decisions)
            if result.lyapunov[k + 1] > decision.beta_star * result.lyapunov[k] * (1.0 + tolerance)]

def worst_case_violations(result: SimResult, beta_bar: Sequence[float],
                          tolerance: float=CONTRACT_TOLERANCE) -> list[int]:
    """Returns attacked steps whose rate exceeds the worst-case rate of their mode.
    """
    return [k for k, decision in enumerate(result.decisions)
            if decision.attacked and decision.beta_star > beta_bar[decision.mode - 1] * (1.0 + tolerance)]

def dominance_violations(defender: Defender, result: SimResult, trace: AttackTrace, *,
                         w_prev: ArrayLike | None=None,
                         tolerance: float=CONTRACT_TOLERANCE) -> list[tuple[int, Strategy]]:
    """Replays attacked steps of a cross-layered run under Strategy A (on its own fixed
    allocation) and Strategy B (on the run's previous allocation), and returns steps where
    the cross-layered rate is worse.
    """
    cfg = defender.cfg
    failures = []
    w_prev = equal_split(cfg) if w_prev is None else np.asarray(w_prev, dtype=float).ravel()
    for k, decision in enumerate(result.decisions):
        if decision.attacked:
            attack = trace.flows[k]
            limit = decision.beta_star - tolerance * max(1.0, abs(decision.beta_star))
            rival_a = defender.strategy_a_defend(decision.mode, cfg.normal_flow, attack, attacked=True)
            if rival_a.beta_star < limit:
                failures.append((k, Strategy.A))
            rival_b = defender.strategy_b_defend(decision.mode, w_prev, attack, attacked=True)
            if rival_b.beta_star < limit:
                failures.append((k, Strategy.B))
        w_prev = decision.w
    return failures
