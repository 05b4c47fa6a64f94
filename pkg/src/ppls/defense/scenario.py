# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/scenario.py
# DESCRIPTION:    Scenario files
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Scenario files

A scenario holds everything needed to reproduce a study: subsystems, network and attacker
parameters, attack trace, design source and analysis options. Scenarios are stored in
`configparser` format::

    [scenario]
    subsystems = subsystem-1, subsystem-2
    x0 = 2.0, 3.2

    [subsystem-1]
    a =
       1.0526, -0.0066
       -0.05, 1.1
    ...
"""

from __future__ import annotations

import hashlib
from configparser import ConfigParser
from configparser import Error as ParserError
from importlib import resources
from pathlib import Path

import numpy as np

from .config import (
    BoolOption,
    Config,
    ConfigListOption,
    EnumOption,
    FloatOption,
    IntOption,
    ListOption,
    MatrixOption,
    StrOption,
    get_option_value,
)
from .defense import Defender
from .design import LyapunovDesign, design, from_matrices
from .logging import BraceMessage, get_logger
from .network import NetworkConfig
from .plant import PplsSystem
from .simulation import AttackTrace, generate_trace
from .stability import AttackBudget
from .types import BoundaryMode, DesignSource, Error, InvalidInputError, ScenarioError, Strategy, TracePolicy

#: Name of the scenario bundled with the package.
BUNDLED_SCENARIO = 'paper_example'

class SubsystemConfig(Config):
    """Linear mode `x(k+1) = A x(k) + B u(k)` with its dwell time, attack-free rate and
    attack duration cap.
    """
    def __init__(self, name: str):
        super().__init__(name)
        #: State matrix
        self.a: MatrixOption = MatrixOption('a', "State matrix A", required=True)
        #: Input matrix
        self.b: MatrixOption = MatrixOption('b', "Input matrix B", required=True)
        #: Dwell time
        self.dwell_time: IntOption = IntOption('dwell_time', "Number of steps the mode is active",
                                               required=True)
        #: Attack-free rate
        self.alpha: FloatOption = FloatOption('alpha', "Attack-free decay rate of the Lyapunov function",
                                              required=True)
        #: Attack duration cap
        self.attack_duration: IntOption = IntOption('attack_duration',
                                                    "Maximal number of attacked steps within one dwell interval",
                                                    default=0)
        #: Printed Lyapunov matrix
        self.lyapunov: MatrixOption = MatrixOption('lyapunov', "Lyapunov matrix P at the end of the mode "
                                                   "(used by 'printed' design source)")
        #: Printed default gain
        self.gain: MatrixOption = MatrixOption('gain', "Default controller gain K (used by 'printed' design source)")

class NetworkSection(Config):
    """Sampling channels and bandwidth allocation.
    """
    def __init__(self):
        super().__init__('network')
        #: Normal flow
        self.normal_flow: ListOption = ListOption('normal_flow', float, "Normal flow R per channel", required=True)
        #: Buffer size
        self.buffer_size: ListOption = ListOption('buffer_size', float, "Router buffer size S per channel",
                                                  required=True)
        #: Allocation delay
        self.delay: FloatOption = FloatOption('delay', "Bandwidth allocation delay tau", required=True)
        #: Total bandwidth
        self.total_bandwidth: FloatOption = FloatOption('total_bandwidth', "Total available bandwidth",
                                                        required=True)

class AttackSection(Config):
    """Attacker capacity and attack trace.
    """
    def __init__(self):
        super().__init__('attack')
        #: Attack budget
        self.budget: FloatOption = FloatOption('budget', "Total available attack flow", required=True)
        #: Per-channel cap
        self.cap: ListOption = ListOption('cap', float, "Upper bound of attack flow per channel", required=True)
        #: Trace policy
        self.policy: EnumOption = EnumOption('policy', TracePolicy, "Attack trace generator",
                                             default=TracePolicy.EXPLICIT)
        #: Attacked steps for explicit traces
        self.attacked_steps: ListOption = ListOption('attacked_steps', int, "Attacked steps of explicit trace")
        #: Attack flow for explicit traces
        self.flow: ListOption = ListOption('flow', float, "Attack flow applied at every attacked step of "
                                           "explicit trace")
        #: Seed
        self.seed: IntOption = IntOption('seed', "Random seed of trace generators", default=0)

class DesignSection(Config):
    """Attack-free design.
    """
    def __init__(self):
        super().__init__('design')
        #: Source
        self.source: EnumOption = EnumOption('source', DesignSource, "Whether to solve the attack-free design "
                                             "or to use matrices given in subsystem sections",
                                             default=DesignSource.SOLVE)
        #: Gain bound
        self.kbar: FloatOption = FloatOption('kbar', "Bound on absolute value of gain entries in online "
                                             "optimization (unbounded when not set)")
        #: Conic engine
        self.solver: StrOption = StrOption('solver', "Conic engine name (default engine when not set)")

class SettingsSection(Config):
    """Analysis and simulation options.
    """
    def __init__(self):
        super().__init__('options', optional=True)
        #: Boundary mode
        self.boundary: EnumOption = EnumOption('boundary', BoundaryMode, "Comparison used for safe states",
                                               default=BoundaryMode.PAPER_TABLE)
        #: Tie tolerance
        self.tie_tolerance: FloatOption = FloatOption('tie_tolerance', "Relative tolerance under which two "
                                                      "rates are equal", default=1e-6)
        #: Strategy
        self.strategy: EnumOption = EnumOption('strategy', Strategy, "Defense strategy used by 'simulate'",
                                               default=Strategy.CROSS)
        #: Oracle grid density
        self.grid_density: IntOption = IntOption('grid_density', "Grid points per channel of worst-case "
                                                 "cross-check", default=11)
        #: Oracle cross-check
        self.cross_check: BoolOption = BoolOption('cross_check', "Whether 'analyze' cross-checks worst "
                                                  "cases by exhaustive search", default=False)
        #: Initial allocation
        self.w_prev: ListOption = ListOption('w_prev', float, "Bandwidth allocation before the first step "
                                             "(equal split when not set)")

class Scenario(Config):
    """Complete study: system, network, attacker, design and options.
    """
    def __init__(self, name: str='scenario'):
        super().__init__(name)
        #: Title
        self.title: StrOption = StrOption('title', "Scenario title")
        #: Subsystems
        self.subsystems: ConfigListOption = ConfigListOption('subsystems', SubsystemConfig,
                                                             "Sections of subsystems in switching order",
                                                             required=True)
        #: Initial state
        self.x0: ListOption = ListOption('x0', float, "Initial state", required=True)
        #: Horizon
        self.horizon: IntOption = IntOption('horizon', "Number of simulated steps", default=150)
        #: Network
        self.network: NetworkSection = NetworkSection()
        #: Attack
        self.attack: AttackSection = AttackSection()
        #: Design
        self.design: DesignSection = DesignSection()
        #: Options
        self.settings: SettingsSection = SettingsSection()
    @property
    def alpha(self) -> tuple[float, ...]:
        """Attack-free rates.
        """
        return tuple(get_option_value(sub.alpha) for sub in self.subsystems.value)
    def build_system(self) -> PplsSystem:
        """Returns the plant.
        """
        subs = self.subsystems.value
        return PplsSystem.from_matrices([get_option_value(sub.a) for sub in subs],
                                        [get_option_value(sub.b) for sub in subs],
                                        [get_option_value(sub.dwell_time) for sub in subs])
    def build_network(self) -> NetworkConfig:
        """Returns network and attacker parameters.

        Raises:
            ValidationError: When bandwidth does not dominate normal flow plus attack cap.
        """
        net = self.network
        return NetworkConfig(np.array(get_option_value(net.normal_flow)), np.array(get_option_value(net.buffer_size)),
                             get_option_value(net.delay), get_option_value(net.total_bandwidth),
                             get_option_value(self.attack.budget), np.array(get_option_value(self.attack.cap)))
    def build_budget(self) -> AttackBudget:
        """Returns attack duration caps.
        """
        subs = self.subsystems.value
        return AttackBudget(tuple(sub.attack_duration.value or 0 for sub in subs),
                            tuple(get_option_value(sub.dwell_time) for sub in subs))
    def build_design(self, sys: PplsSystem | None=None) -> LyapunovDesign:
        """Returns attack-free design from given matrices or solved.

        Raises:
            ScenarioError: When printed matrices are missing.
            InfeasibleError: When the design problem has no solution.
        """
        sys = self.build_system() if sys is None else sys
        if self.design.source.value is DesignSource.PRINTED:
            subs = self.subsystems.value
            for sub in subs:
                if sub.lyapunov.value is None or sub.gain.value is None:
                    raise ScenarioError(f"Section '{sub.name}' needs 'lyapunov' and 'gain' for printed design",
                                        field=f'{sub.name}.lyapunov')
            return from_matrices(sys, self.alpha, [sub.lyapunov.value for sub in subs],
                                 [sub.gain.value for sub in subs])
        return design(sys, self.alpha, solver=self.design.solver.value)
    def build_defender(self, sys: PplsSystem | None=None, lyapunov_design: LyapunovDesign | None=None) -> Defender:
        """Returns online defender for the scenario.
        """
        sys = self.build_system() if sys is None else sys
        lyapunov_design = self.build_design(sys) if lyapunov_design is None else lyapunov_design
        return Defender(sys, lyapunov_design, self.build_network(), kbar=self.design.kbar.value,
                        solver=self.design.solver.value)
    def build_trace(self, *, seed: int | None=None) -> AttackTrace:
        """Returns attack trace: the explicit one, or generated with scenario (or given) seed.

        Raises:
            ScenarioError: When an explicit trace has attacked steps but no flow.
        """
        sys = self.build_system()
        cfg = self.build_network()
        horizon = self.horizon.value
        policy = self.attack.policy.value
        if policy is TracePolicy.EXPLICIT:
            steps = self.attack.attacked_steps.value or []
            if steps and self.attack.flow.value is None:
                raise ScenarioError("Explicit trace needs attack flow", field='attack.flow')
            flow = self.attack.flow.value
            return AttackTrace.explicit(horizon, cfg.n, {k: flow for k in steps})
        return generate_trace(cfg, self.build_budget(), sys, policy, self.attack.seed.value if seed is None else seed,
                              horizon)
    def check(self) -> None:
        """Validates required options and cross-field consistency.

        Raises:
            ScenarioError: When options are missing or dimensions disagree.
            ValidationError: When a modelling assumption is violated.
        """
        try:
            self.validate()
        except ScenarioError:
            raise
        except Error as exc:
            raise ScenarioError(f"Configuration error: {exc.args[0]}") from exc
        sys = self.build_system()
        cfg = self.build_network()
        if cfg.n != sys.n:
            raise ScenarioError(f"Network has {cfg.n} channels, state has {sys.n} entries",
                                field='network.normal_flow')
        if len(self.x0.value) != sys.n:
            raise ScenarioError(f"Initial state must have {sys.n} entries", field='scenario.x0')
        if self.settings.w_prev.value is not None and len(self.settings.w_prev.value) != sys.n:
            raise ScenarioError(f"Initial allocation must have {sys.n} entries", field='options.w_prev')
        budget = self.build_budget()
        try:
            trace = self.build_trace()
        except InvalidInputError as exc:
            raise ScenarioError(exc.args[0], field=f'attack.{exc.field}' if exc.field else 'attack') from exc
        trace.validate(cfg, sys, budget)

def load_scenario(source: str | Path) -> Scenario:
    """Loads and validates scenario from file, or the bundled scenario by its name.

    Raises:
        ScenarioError: On parse errors (`line` is set when known), missing options or
            inconsistent dimensions.
        ValidationError: When a modelling assumption is violated.
    """
    log = get_logger('scenario', 'scenario')
    path = Path(source)
    if not path.exists() and str(source) == BUNDLED_SCENARIO:
        path = bundled_scenario_path()
    if not path.is_file():
        raise ScenarioError(f"Scenario file '{source}' not found", field='path')
    scenario = parse_scenario(path.read_text(encoding='utf8'))
    log.info(BraceMessage("loaded scenario '{}' ({})", scenario.title.value or path.stem, path))
    return scenario

def parse_scenario(text: str) -> Scenario:
    """Parses and validates scenario text.

    Raises:
        ScenarioError: On parse errors, missing options or inconsistent dimensions.
        ValidationError: When a modelling assumption is violated.
    """
    parser = ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except ParserError as exc:
        raise ScenarioError(f"Scenario parse error: {exc}", line=getattr(exc, 'lineno', None)) from exc
    scenario = Scenario()
    scenario.load_config(parser)
    scenario.check()
    return scenario

def save_scenario(scenario: Scenario, path: str | Path) -> None:
    """Writes scenario (with option descriptions) to file.
    """
    Path(path).write_text(scenario.get_config(), encoding='utf8')

def scenario_hash(scenario: Scenario) -> str:
    """Returns SHA-256 of plain scenario text (hex).
    """
    return hashlib.sha256(scenario.get_config(plain=True).encode('utf8')).hexdigest()

def bundled_scenario_path() -> Path:
    """Returns path of the bundled numerical example scenario.
    """
    return Path(str(resources.files('ppls.defense') / 'scenarios' / f'{BUNDLED_SCENARIO}.cfg'))
