# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/worst_case.py
# DESCRIPTION:    Worst-case rate under the online defense
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Worst-case rate under the online defense

The attacker chooses an admissible attack flow to maximize the rate the defender can
achieve, the defender answers with the best realizable channel state. The bi-level problem
is solved exactly by enumeration:

1. The rate table over all `2^n` channel states is computed (see `Defender.beta_table`).
2. Force patterns are all sets of channels the attacker can jam by the delay test alone
   (previous bandwidth is taken as zero, the worst case for the defender).
3. `beta_tilde` is the largest rate of a pattern's completion (undetermined channels on),
   a lower bound of the worst case.
4. Per pattern, the states the defender can reach for sure bound the worst case from above
   (`beta_hat`). States with rates between both bounds are candidates.
5. Candidates are tested in ascending rate order by a linear feasibility program: can the
   attacker make the candidate and every better state unaffordable? The first candidate
   where it cannot is the worst case of the pattern.
6. The worst case is the maximum over patterns.

`brute_force_worst_case` solves the same problem by exhaustive case analysis and is used
to cross-check the enumeration on small instances.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .conic import LpProblem, lp_feasible
from .defense import Defender, feasible_states
from .logging import BraceMessage, get_logger
from .network import ChannelState, NetworkConfig, admissible, force_jam_threshold
from .types import EXCLUDED, UNBOUNDED, BoundaryMode, InvalidInputError, Sentinel

#: Relative tolerance under which two rates are considered equal in candidate filtering.
TIE_TOLERANCE = 1e-6

class StateBetaTable(Mapping[ChannelState, float]):
    """Optimal rates of all `2^n` channel states of one mode.

    Raises:
        InvalidInputError: When the table is incomplete or holds negative rates.
    """
    def __init__(self, rates: Mapping[ChannelState, float] | Iterable[tuple[ChannelState, float]], *,
                 mode: int | None=None):
        data = dict(rates.items() if isinstance(rates, Mapping) else rates)
        if not data:
            raise InvalidInputError("Rate table is empty")
        n = len(next(iter(data)))
        states = ChannelState.all_states(n)
        missing = [state for state in states if state not in data]
        if missing:
            raise InvalidInputError(f"Rate table misses {len(missing)} states, e.g. {missing[0]}")
        if len(data) != len(states):
            raise InvalidInputError("Rate table holds states of different sizes")
        for state, value in data.items():
            if not value >= 0.0:
                raise InvalidInputError(f"Rate of state {state} must be non-negative, not {value}")
        #: 1-based mode the table belongs to, or None.
        self.mode: int | None = mode
        self._data: dict[ChannelState, float] = {state: float(data[state]) for state in states}
    def __getitem__(self, state: ChannelState) -> float:
        return self._data[state]
    def __iter__(self):
        return iter(self._data)
    def __len__(self):
        return len(self._data)
    @classmethod
    def from_defender(cls, defender: Defender, i: int) -> StateBetaTable:
        """Builds table from optimal rates of `defender` for mode `i`.
        """
        return cls(defender.beta_table(i), mode=i)
    @classmethod
    def from_strings(cls, rates: Mapping[str, float]) -> StateBetaTable:
        """Builds table from mapping with channel states written as text (e.g. '1101').
        """
        return cls({ChannelState.parse(text): value for text, value in rates.items()})
    @property
    def n(self) -> int:
        """Number of channels.
        """
        return len(next(iter(self._data)))
    def ascending(self) -> list[tuple[ChannelState, float]]:
        """Returns `(state, rate)` pairs sorted by rate, then by more enabled channels.
        """
        return sorted(self._data.items(), key=lambda item: (item[1], -item[0].count, item[0].bits))

@dataclass(frozen=True, order=True)
class ForcePattern:
    """Set of channels (0-based) the attacker jams through the delay test. Other channels
    are undetermined ('?').
    """
    n: int
    jammed: tuple[int, ...] = ()
    def __post_init__(self):
        if any(not 0 <= j < self.n for j in self.jammed):
            raise InvalidInputError(f"Jammed channel out of range in {self.jammed}")
        object.__setattr__(self, 'jammed', tuple(sorted(set(self.jammed))))
    def __str__(self):
        return f"[{' '.join('0' if j in self.jammed else '?' for j in range(self.n))}]"
    @classmethod
    def parse(cls, text: str) -> ForcePattern:
        """Parses '[? ? ? 0]' or '???0'.

        Raises:
            ValueError: For invalid text.
        """
        marks = [c for c in text if not c.isspace() and c not in '[],']
        if not marks or any(c not in '?0' for c in marks):
            raise ValueError(f"Invalid force pattern '{text}'")
        return cls(len(marks), tuple(j for j, c in enumerate(marks) if c == '0'))
    @property
    def free(self) -> tuple[int, ...]:
        """Undetermined channels.
        """
        return tuple(j for j in range(self.n) if j not in self.jammed)
    def completion(self) -> ChannelState:
        """Returns channel state with undetermined channels enabled.
        """
        return ChannelState(tuple(0 if j in self.jammed else 1 for j in range(self.n)))
    def allows(self, state: ChannelState) -> bool:
        """True when `state` enables no jammed channel.
        """
        return state.disjoint(self.jammed)
    def cost(self, cfg: NetworkConfig) -> float:
        """Returns attack flow needed to jam all channels of the pattern.
        """
        return sum(force_cost(cfg, j) for j in self.jammed)

def force_cost(cfg: NetworkConfig, j: int) -> float:
    """Returns attack flow spent on jamming channel `j` (0-based). Channels that jam without
    attack cost nothing.
    """
    return max(force_jam_threshold(cfg, j), 0.0)

@dataclass
class CandidateCheck:
    """One step of the candidate loop: can the attacker make `candidate` and all better
    `competitors` unaffordable?
    """
    candidate: ChannelState
    rate: float
    competitors: tuple[ChannelState, ...]
    feasible: bool
    #: Attack flow achieving it when feasible.
    witness: np.ndarray | None = None

@dataclass
class PatternResult:
    """Worst-case analysis of one force pattern.
    """
    pattern: ForcePattern
    #: Rate of pattern's completion.
    completion_rate: float
    #: States with no jammed channel enabled.
    states: list[ChannelState] = field(default_factory=list)
    #: States the defender can reach for sure.
    safe: list[ChannelState] = field(default_factory=list)
    #: Upper bound from safe states, or UNBOUNDED.
    beta_hat: float | Sentinel = UNBOUNDED
    #: Candidate states in ascending rate order.
    candidates: list[ChannelState] = field(default_factory=list)
    checks: list[CandidateCheck] = field(default_factory=list)
    #: Worst-case rate of the pattern, or EXCLUDED.
    value: float | Sentinel = EXCLUDED
    #: Attack flow realizing `value`, or None.
    witness: np.ndarray | None = None
    @property
    def excluded(self) -> bool:
        return self.value is EXCLUDED
    def filtered_out(self) -> list[ChannelState]:
        """Returns states dropped by candidate filtering.
        """
        return [state for state in self.states if state not in self.candidates]

@dataclass
class WorstCaseResult:
    """Worst-case rate of one mode.
    """
    #: Worst-case rate `beta_bar`.
    beta_bar: float
    #: Lower bound from force pattern completions.
    beta_tilde: float
    patterns: list[PatternResult]
    boundary: BoundaryMode = BoundaryMode.PAPER_TABLE
    #: 1-based mode, or None.
    mode: int | None = None
    @property
    def worst(self) -> PatternResult:
        """Pattern result attaining `beta_bar`. Ties go to the pattern with more jammed
        channels.
        """
        return max((p for p in self.patterns if not p.excluded), key=lambda p: (p.value, len(p.pattern.jammed)))
    @property
    def witness(self) -> np.ndarray | None:
        """Attack flow realizing `beta_bar`.
        """
        return self.worst.witness
    def pattern(self, text: str) -> PatternResult:
        """Returns result of pattern given as text (e.g. '[? ? ? 0]').

        Raises:
            KeyError: When the pattern was not enumerated.
        """
        wanted = ForcePattern.parse(text)
        for item in self.patterns:
            if item.pattern == wanted:
                return item
        raise KeyError(text)

def enumerate_force(cfg: NetworkConfig) -> list[ForcePattern]:
    """Returns all force patterns affordable within per-channel caps and total budget,
    ordered by number of jammed channels. The empty pattern is always included.
    """
    result = []
    for size in range(cfg.n + 1):
        for jammed in itertools.combinations(range(cfg.n), size):
            costs = [force_cost(cfg, j) for j in jammed]
            if any(c > cfg.attack_cap[j] for c, j in zip(costs, jammed, strict=True)):
                continue
            if sum(costs) > cfg.attack_budget:
                continue
            result.append(ForcePattern(cfg.n, jammed))
    return result

def is_safe(cfg: NetworkConfig, pattern: ForcePattern, state: ChannelState,
            boundary: BoundaryMode=BoundaryMode.PAPER_TABLE) -> bool:
    """Returns True when the defender reaches `state` whatever the attack consistent with
    `pattern`: the enabled channels' flows fit the bandwidth even if the attacker spends the
    rest of its budget (or the enabled channels' caps) on them.
    """
    if not pattern.allows(state):
        return False
    idx = list(state.enabled)
    normal = float(cfg.normal_flow[idx].sum())
    budget_term = cfg.attack_budget - pattern.cost(cfg) + normal
    cap_term = normal + float(cfg.attack_cap[idx].sum())
    if boundary is BoundaryMode.FORMULA:
        return cfg.total_bandwidth >= min(budget_term, cap_term)
    return cfg.total_bandwidth >= budget_term or cfg.total_bandwidth > cap_term

def enumerate_safe(cfg: NetworkConfig, pattern: ForcePattern,
                   boundary: BoundaryMode=BoundaryMode.PAPER_TABLE) -> list[ChannelState]:
    """Returns safe states of `pattern` in lexicographic order (the zero state always
    qualifies).
    """
    return [state for state in ChannelState.all_states(cfg.n) if is_safe(cfg, pattern, state, boundary)]

def _attack_program(cfg: NetworkConfig, name: str) -> LpProblem:
    problem = LpProblem(name)
    for j in range(cfg.n):
        problem.add_variables(1, 0.0, float(cfg.attack_cap[j]))
    problem.add_row([1.0] * cfg.n, '<=', cfg.attack_budget, 'budget')
    return problem

def _unaffordable_row(cfg: NetworkConfig, problem: LpProblem, state: ChannelState) -> None:
    idx = list(state.enabled)
    coeffs = [1.0 if state[j] else 0.0 for j in range(cfg.n)]
    problem.add_row(coeffs, '>', cfg.total_bandwidth - float(cfg.normal_flow[idx].sum()), f'unaffordable-{state}')

def _check_candidate(cfg: NetworkConfig, pattern: ForcePattern, candidate: ChannelState, rate: float,
                     competitors: Sequence[ChannelState], strict_eps: float) -> CandidateCheck:
    problem = _attack_program(cfg, f'candidate-{pattern}-{candidate}')
    for j in pattern.jammed:
        coeffs = [0.0] * cfg.n
        coeffs[j] = 1.0
        problem.add_row(coeffs, '>=', force_cost(cfg, j), f'jam-{j + 1}')
    remaining = cfg.attack_budget - pattern.cost(cfg)
    problem.add_row([1.0 if candidate[j] else 0.0 for j in range(cfg.n)], '<=', remaining, 'remaining')
    _unaffordable_row(cfg, problem, candidate)
    for state in competitors:
        _unaffordable_row(cfg, problem, state)
    result = lp_feasible(problem, strict_eps)
    return CandidateCheck(candidate, rate, tuple(competitors), result.feasible, result.witness)

def _forcing_attack(cfg: NetworkConfig, pattern: ForcePattern) -> np.ndarray:
    attack = np.zeros(cfg.n)
    for j in pattern.jammed:
        attack[j] = force_cost(cfg, j)
    return attack

def analyze_pattern(table: StateBetaTable, cfg: NetworkConfig, pattern: ForcePattern, beta_tilde: float, *,
                    boundary: BoundaryMode=BoundaryMode.PAPER_TABLE, tie_tolerance: float=TIE_TOLERANCE,
                    strict_eps: float | None=None) -> PatternResult:
    """Returns worst-case analysis of one force pattern given lower bound `beta_tilde`.
    """
    log = get_logger('sea', 'sea')
    eps = cfg.default_strict_eps if strict_eps is None else strict_eps
    result = PatternResult(pattern, table[pattern.completion()])
    result.states = [state for state in ChannelState.all_states(cfg.n) if pattern.allows(state)]
    result.safe = enumerate_safe(cfg, pattern, boundary)
    if result.safe:
        result.beta_hat = min(table[state] for state in result.safe)
    upper = np.inf if result.beta_hat is UNBOUNDED else result.beta_hat
    lower_tol = tie_tolerance * max(1.0, abs(beta_tilde))
    upper_tol = tie_tolerance * max(1.0, abs(upper)) if np.isfinite(upper) else 0.0
    result.candidates = [state for state, rate in table.ascending()
                         if pattern.allows(state) and beta_tilde - lower_tol <= rate <= upper + upper_tol]
    if not result.candidates:
        log.debug(BraceMessage("pattern {} excluded", pattern))
        return result
    witness = _forcing_attack(cfg, pattern)
    for candidate in result.candidates:
        rate = table[candidate]
        limit = rate + tie_tolerance * max(1.0, abs(rate))
        competitors = [state for state in result.states
                       if not state.is_zero and state != candidate and table[state] < limit]
        check = _check_candidate(cfg, pattern, candidate, rate, competitors, eps)
        result.checks.append(check)
        if not check.feasible:
            result.value = rate
            result.witness = witness
            break
        witness = check.witness
    else:
        # attacker can push past every candidate
        result.value = result.beta_hat if result.beta_hat is not UNBOUNDED else table[result.candidates[-1]]
        result.witness = witness
    log.debug(BraceMessage("pattern {}: beta_hat {}, value {}", pattern, result.beta_hat, result.value))
    return result

def sea_from_table(table: StateBetaTable, cfg: NetworkConfig, *, boundary: BoundaryMode=BoundaryMode.PAPER_TABLE,
                   tie_tolerance: float=TIE_TOLERANCE, strict_eps: float | None=None) -> WorstCaseResult:
    """Returns worst-case rate for given rate table and network.

    Raises:
        InvalidInputError: When table and network disagree on the number of channels.
        SolverError: When a feasibility program fails.
    """
    if table.n != cfg.n:
        raise InvalidInputError(f"Rate table has {table.n} channels, network has {cfg.n}")
    log = get_logger('sea', 'sea')
    patterns = enumerate_force(cfg)
    beta_tilde = max(table[pattern.completion()] for pattern in patterns)
    results = [analyze_pattern(table, cfg, pattern, beta_tilde, boundary=boundary, tie_tolerance=tie_tolerance,
                               strict_eps=strict_eps)
               for pattern in patterns]
    values = [r.value for r in results if not r.excluded]
    # the pattern attaining beta_tilde always survives filtering
    beta_bar = max(values) if values else beta_tilde
    log.info(BraceMessage("mode {}: beta_tilde {:.6f}, beta_bar {:.6f} over {} patterns", table.mode,
                          beta_tilde, beta_bar, len(patterns)))
    return WorstCaseResult(beta_bar, beta_tilde, results, boundary, table.mode)

def sea(defender: Defender, i: int, *, boundary: BoundaryMode=BoundaryMode.PAPER_TABLE,
        tie_tolerance: float=TIE_TOLERANCE, strict_eps: float | None=None) -> WorstCaseResult:
    """Returns worst-case rate of mode `i` (1-based) for the defender's system, design and
    network.

    Raises:
        InfeasibleError: When a rate problem of the table is infeasible.
        SolverError: When the conic engine or a feasibility program fails.
    """
    table = StateBetaTable.from_defender(defender, i)
    return sea_from_table(table, defender.cfg, boundary=boundary, tie_tolerance=tie_tolerance,
                          strict_eps=strict_eps)

# Oracle

def _defender_value(table: StateBetaTable, cfg: NetworkConfig, attack: np.ndarray) -> float:
    states = feasible_states(cfg, np.zeros(cfg.n), attack)
    if not states:
        return table[ChannelState.zeros(cfg.n)]
    return min(table[state] for state in states)

def _exact_value(table: StateBetaTable, cfg: NetworkConfig, strict_eps: float) -> float:
    best = -np.inf
    zero = ChannelState.zeros(cfg.n)
    for size in range(cfg.n + 1):
        for jammed in itertools.combinations(range(cfg.n), size):
            open_states = [state for state in ChannelState.all_states(cfg.n)
                           if not state.is_zero and state.disjoint(jammed)]
            targets = [(state, table[state]) for state in open_states] + [(zero, table[zero])]
            for target, rate in targets:
                if rate <= best:
                    continue
                problem = _attack_program(cfg, f'oracle-{target}')
                for j in range(cfg.n):
                    coeffs = [0.0] * cfg.n
                    coeffs[j] = 1.0
                    threshold = force_jam_threshold(cfg, j)
                    problem.add_row(coeffs, '>=' if j in jammed else '<', threshold, f'delay-{j + 1}')
                if target.is_zero:
                    blocked = open_states
                else:
                    idx = list(target.enabled)
                    coeffs = [1.0 if target[j] else 0.0 for j in range(cfg.n)]
                    problem.add_row(coeffs, '<=', cfg.total_bandwidth - float(cfg.normal_flow[idx].sum()),
                                    'affordable')
                    blocked = [state for state in open_states if table[state] < rate]
                for state in blocked:
                    _unaffordable_row(cfg, problem, state)
                if lp_feasible(problem, strict_eps).feasible:
                    best = rate
    return best

def _grid_value(table: StateBetaTable, cfg: NetworkConfig, grid_density: int) -> float:
    axes = []
    for j in range(cfg.n):
        cap = float(cfg.attack_cap[j])
        values = set(np.linspace(0.0, cap, grid_density).tolist())
        threshold = force_jam_threshold(cfg, j)
        values.update(v for v in (threshold, np.nextafter(threshold, -np.inf)) if 0.0 <= v <= cap)
        axes.append(sorted(values))
    best = -np.inf
    for point in itertools.product(*axes):
        attack = np.array(point)
        if not admissible(cfg, attack):
            continue
        best = max(best, _defender_value(table, cfg, attack))
    return best

def brute_force_worst_case(table: StateBetaTable, cfg: NetworkConfig, grid_density: int=11, *,
                           strict_eps: float | None=None) -> float:
    """Returns worst-case rate by exhaustive case analysis: for every exact set of jammed
    channels and every target state, a feasibility program decides whether the attacker can
    leave the target as the defender's best choice. A grid of admissible attack flows
    (including jam thresholds) is evaluated as well and the larger value is returned.

    Intended for up to three channels.

    Raises:
        InvalidInputError: When `grid_density` is less than 2 or channel counts disagree.
    """
    if grid_density < 2: # noqa: PLR2004
        raise InvalidInputError("Grid density must be at least 2", field='grid_density')
    if table.n != cfg.n:
        raise InvalidInputError(f"Rate table has {table.n} channels, network has {cfg.n}")
    eps = cfg.default_strict_eps if strict_eps is None else strict_eps
    return float(max(_exact_value(table, cfg, eps), _grid_value(table, cfg, grid_density)))
