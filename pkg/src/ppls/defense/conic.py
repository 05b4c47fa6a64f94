# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/conic.py
# DESCRIPTION:    Semidefinite and linear program backend
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Semidefinite and linear program backend

This is the only module that talks to numerical optimization engines: `cvxpy` for
semidefinite programs and `scipy.optimize.linprog` (HiGHS) for linear feasibility.

Matrix inequalities are described by callables `expr(variables, bmat)` that build the
block matrix from a mapping of variable values and a block-assembly function. The same
callable is evaluated with `cvxpy` variables and `cvxpy.bmat` when solving, and with numpy
values and `numpy.block` when the returned solution is verified::

    def lyapunov(v, bmat):
        return bmat([[A.T @ v['P'] @ A - v['P']]])

Every result reported as optimal or feasible was checked against all constraints by
independent numpy evaluation.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import cvxpy as cp
import numpy as np
from scipy.optimize import linprog

from .linalg import is_nsd, max_abs
from .logging import BraceMessage, get_logger
from .types import InvalidInputError, SolverError, SolveStatus

#: Relative margin used for strict matrix inequalities.
STRICT_MARGIN = 1e-6
#: Relative PSD slack accepted when solution is verified.
LMI_SLACK = 1e-6
#: Relative slack accepted for linear constraints when solution is verified.
LINEAR_SLACK = 1e-7
#: Preferred conic engines, first installed one is used.
PREFERRED_SOLVERS = ('CLARABEL', 'SCS')

#: Matrix expression builder: `expr(variables, bmat)`.
TMatrixExpr = Callable[[Mapping[str, Any], Callable], Any]
#: Scalar (or entrywise) expression builder: `expr(variables)`.
TScalarExpr = Callable[[Mapping[str, Any]], Any]

@dataclass(frozen=True)
class Variable:
    """Decision variable of `LmiProblem`. Shape `()` declares a scalar.
    """
    name: str
    shape: tuple[int, ...] = ()
    symmetric: bool = False
    lower: float | None = None
    upper: float | None = None
    def create(self) -> cp.Variable:
        """Returns new `cvxpy.Variable` for this declaration.
        """
        return cp.Variable(self.shape, name=self.name, symmetric=self.symmetric)

@dataclass(frozen=True)
class MatrixInequality:
    """Matrix inequality `expr ⪯ 0` (or `expr ≺ 0` when `strict`). The expression is
    symmetrized before use. Strict inequalities are imposed as `expr ⪯ -margin * scale * I`.
    """
    name: str
    expr: TMatrixExpr
    strict: bool = False
    scale: float = 1.0

@dataclass(frozen=True)
class LinearConstraint:
    """Affine constraint `expr <= 0` (sense `'<='`) or `expr == 0` (sense `'=='`).
    """
    name: str
    expr: TScalarExpr
    sense: str = '<='

@dataclass
class LmiProblem:
    """Semidefinite program over named matrix and scalar variables.
    """
    _agent_name_ = 'lmi'
    #: Problem name used in log records and error messages.
    name: str
    variables: list[Variable] = field(default_factory=list)
    inequalities: list[MatrixInequality] = field(default_factory=list)
    linear: list[LinearConstraint] = field(default_factory=list)
    #: Objective to minimize, or `None` for feasibility problem.
    objective: TScalarExpr | None = None
    @property
    def log_context(self) -> str:
        return self.name
    def add_variable(self, name: str, shape: tuple[int, ...]=(), *, symmetric: bool=False,
                     lower: float | None=None, upper: float | None=None) -> Variable:
        """Declares new variable.

        Raises:
            InvalidInputError: When variable with the same name already exists.
        """
        if any(v.name == name for v in self.variables):
            raise InvalidInputError(f"Variable '{name}' already declared")
        var = Variable(name, tuple(shape), symmetric, lower, upper)
        self.variables.append(var)
        return var
    def add_inequality(self, name: str, expr: TMatrixExpr, *, strict: bool=False,
                       scale: float=1.0) -> None:
        """Adds matrix inequality `expr ⪯ 0` (`expr ≺ 0` when `strict`).
        """
        self.inequalities.append(MatrixInequality(name, expr, strict, scale))
    def add_linear(self, name: str, expr: TScalarExpr, sense: str='<=') -> None:
        """Adds affine constraint `expr <= 0` or `expr == 0`.
        """
        if sense not in ('<=', '=='):
            raise InvalidInputError(f"Unsupported constraint sense '{sense}'")
        self.linear.append(LinearConstraint(name, expr, sense))
    def minimize(self, objective: TScalarExpr) -> None:
        """Sets affine objective to minimize.
        """
        self.objective = objective

@dataclass
class LmiResult:
    """Outcome of `solve_lmi`.
    """
    status: SolveStatus
    #: Variable values (numpy arrays, floats for scalars). Empty unless solved.
    values: dict[str, Any] = field(default_factory=dict)
    objective: float | None = None
    #: Engine status or verification failure description.
    detail: str = ''
    #: Strict-inequality margin actually used.
    margin: float = STRICT_MARGIN
    @property
    def solved(self) -> bool:
        """True for OPTIMAL and FEASIBLE status.
        """
        return self.status in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE)

def installed_solver() -> str:
    """Returns name of the conic engine that will be used.

    Raises:
        SolverError: When no supported engine is installed.
    """
    installed = cp.installed_solvers()
    for name in PREFERRED_SOLVERS:
        if name in installed:
            return name
    raise SolverError("No semidefinite solver installed", detail=', '.join(installed))

def _symmetric(expr: Any) -> Any:
    return (expr + expr.T) / 2

def _eye(n: int) -> np.ndarray:
    return np.eye(n)

def _value_of(var: cp.Variable) -> Any:
    if var.value is None:
        return None
    return float(var.value) if var.shape == () else np.array(var.value, dtype=float)

def _verify(problem: LmiProblem, values: Mapping[str, Any]) -> str | None:
    """Returns description of first violated constraint, or None.
    """
    for var in problem.variables:
        value = np.asarray(values[var.name], dtype=float)
        tol = LINEAR_SLACK * max(1.0, max_abs(value))
        if var.lower is not None and np.min(value) < var.lower - tol:
            return f"variable '{var.name}' below lower bound"
        if var.upper is not None and np.max(value) > var.upper + tol:
            return f"variable '{var.name}' above upper bound"
    for ineq in problem.inequalities:
        matrix = _symmetric(np.atleast_2d(np.asarray(ineq.expr(values, np.block), dtype=float)))
        if not is_nsd(matrix, LMI_SLACK * max(1.0, max_abs(matrix), ineq.scale)):
            return f"matrix inequality '{ineq.name}' violated"
    for lin in problem.linear:
        value = np.asarray(lin.expr(values), dtype=float)
        tol = LINEAR_SLACK * max(1.0, max_abs(value))
        if lin.sense == '<=' and np.max(value) > tol:
            return f"constraint '{lin.name}' violated"
        if lin.sense == '==' and max_abs(value) > tol:
            return f"constraint '{lin.name}' violated"
    return None

def _solve_once(problem: LmiProblem, margin: float, solver: str) -> LmiResult:
    cvars = {var.name: var.create() for var in problem.variables}
    constraints = []
    for var in problem.variables:
        if var.lower is not None:
            constraints.append(cvars[var.name] >= var.lower)
        if var.upper is not None:
            constraints.append(cvars[var.name] <= var.upper)
    for ineq in problem.inequalities:
        expr = _symmetric(ineq.expr(cvars, cp.bmat))
        eps = margin * ineq.scale if ineq.strict else 0.0
        constraints.append(expr << -eps * _eye(expr.shape[0]))
    for lin in problem.linear:
        expr = lin.expr(cvars)
        constraints.append(expr <= 0 if lin.sense == '<=' else expr == 0)
    objective = cp.Minimize(0 if problem.objective is None else problem.objective(cvars))
    prob = cp.Problem(objective, constraints)
    try:
        prob.solve(solver=solver)
    except cp.error.SolverError as exc:
        return LmiResult(SolveStatus.NUMERICAL_FAILURE, detail=str(exc), margin=margin)
    status = prob.status
    if status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return LmiResult(SolveStatus.INFEASIBLE, detail=status, margin=margin)
    if status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        return LmiResult(SolveStatus.NUMERICAL_FAILURE, detail=status, margin=margin)
    values = {name: _value_of(var) for name, var in cvars.items()}
    if any(value is None for value in values.values()):
        return LmiResult(SolveStatus.NUMERICAL_FAILURE, detail='missing variable values', margin=margin)
    if (violation := _verify(problem, values)) is not None:
        return LmiResult(SolveStatus.NUMERICAL_FAILURE, detail=f"{status}: {violation}", margin=margin)
    result_status = SolveStatus.OPTIMAL if status == cp.OPTIMAL else SolveStatus.FEASIBLE
    obj = None if problem.objective is None else float(prob.value)
    return LmiResult(result_status, values, obj, status, margin)

def solve_lmi(problem: LmiProblem, *, margin: float=STRICT_MARGIN, retry: bool=True,
              solver: str | None=None) -> LmiResult:
    """Solves semidefinite program.

    Arguments:
        problem: Problem to solve.
        margin:  Relative margin for strict matrix inequalities.
        retry:   When True, numerical failure is retried once with 10x smaller margin.
        solver:  Engine name, first installed from `PREFERRED_SOLVERS` by default.

    Returns:
        Result with OPTIMAL/FEASIBLE status (values verified by independent evaluation),
        INFEASIBLE, or NUMERICAL_FAILURE (engine stall or failed verification). The caller
        decides what to do with failures.
    """
    log = get_logger(problem, 'solver')
    if solver is None:
        solver = installed_solver()
    result = _solve_once(problem, margin, solver)
    if result.status is SolveStatus.NUMERICAL_FAILURE and retry:
        log.info(BraceMessage("numerical failure ({}), retrying with margin {:.1e}",
                              result.detail, margin / 10))
        result = _solve_once(problem, margin / 10, solver)
    log.debug(BraceMessage("{} -> {} objective {}", solver, result.status.name, result.objective))
    return result

# Linear programs

_SENSES = ('<=', '<', '>=', '>', '==')

@dataclass(frozen=True)
class LinearRow:
    """Affine inequality `coeffs · x (sense) rhs`. Senses `'<'` and `'>'` are strict.
    """
    coeffs: tuple[float, ...]
    sense: str
    rhs: float
    name: str = ''
    @property
    def strict(self) -> bool:
        return self.sense in ('<', '>')
    def slack(self, x: np.ndarray) -> float:
        """Returns how much the row is satisfied by (non-negative) or violated by (negative)
        point `x`, ignoring strictness.
        """
        value = float(np.dot(self.coeffs, x))
        if self.sense in ('<=', '<'):
            return self.rhs - value
        if self.sense in ('>=', '>'):
            return value - self.rhs
        return -abs(value - self.rhs)

@dataclass
class LpProblem:
    """Linear feasibility problem over box-bounded variables.
    """
    _agent_name_ = 'lp'
    #: Problem name used in log records.
    name: str = 'lp'
    bounds: list[tuple[float, float]] = field(default_factory=list)
    rows: list[LinearRow] = field(default_factory=list)
    #: Optional objective coefficients to minimize among feasible points.
    objective: tuple[float, ...] | None = None
    @property
    def log_context(self) -> str:
        return self.name
    @property
    def size(self) -> int:
        """Number of variables.
        """
        return len(self.bounds)
    def add_variables(self, count: int, lower: float, upper: float) -> None:
        """Appends `count` variables with box bounds.

        Raises:
            InvalidInputError: When bounds are not finite or lower > upper.
        """
        if not (np.isfinite(lower) and np.isfinite(upper)) or lower > upper:
            raise InvalidInputError(f"Invalid variable bounds [{lower}, {upper}]")
        self.bounds.extend([(float(lower), float(upper))] * count)
    def add_row(self, coeffs: Sequence[float], sense: str, rhs: float, name: str='') -> None:
        """Appends affine inequality `coeffs · x (sense) rhs`.

        Raises:
            InvalidInputError: For unknown sense or wrong number of coefficients.
        """
        if sense not in _SENSES:
            raise InvalidInputError(f"Unsupported constraint sense '{sense}'")
        if len(coeffs) != self.size:
            raise InvalidInputError(f"Row has {len(coeffs)} coefficients, problem has {self.size} variables")
        self.rows.append(LinearRow(tuple(float(c) for c in coeffs), sense, float(rhs), name))

@dataclass
class LpResult:
    """Outcome of `lp_feasible`.
    """
    status: SolveStatus
    #: Feasible point, or None.
    witness: np.ndarray | None = None
    #: Largest uniform slack achievable on strict rows (None without strict rows).
    margin: float | None = None
    @property
    def feasible(self) -> bool:
        return self.status is SolveStatus.FEASIBLE

def _run_linprog(c: np.ndarray, a_ub: list, b_ub: list, a_eq: list, b_eq: list,
                 bounds: list[tuple[float, float]]) -> Any:
    return linprog(c, A_ub=np.array(a_ub) if a_ub else None, b_ub=np.array(b_ub) if b_ub else None,
                   A_eq=np.array(a_eq) if a_eq else None, b_eq=np.array(b_eq) if b_eq else None,
                   bounds=bounds, method='highs')

def lp_feasible(problem: LpProblem, strict_eps: float) -> LpResult:
    """Decides feasibility of linear system where strict rows `a·x > b` are read as
    `a·x ≥ b + strict_eps`.

    The largest uniform margin `t` on strict rows is maximized first, and the system is
    feasible iff the non-strict rows are satisfiable and `t ≥ strict_eps`. This keeps the
    decision exact on boundary instances, where the margin is zero up to round-off.

    Raises:
        InvalidInputError: When `strict_eps` is not positive.
        SolverError: When the engine fails.
    """
    if strict_eps <= 0.0:
        raise InvalidInputError("strict_eps must be positive")
    log = get_logger(problem, 'solver')
    n = problem.size
    has_strict = any(row.strict for row in problem.rows)
    width = n + 1 if has_strict else n
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row in problem.rows:
        coeffs = list(row.coeffs) + ([0.0] if has_strict else [])
        if row.sense == '==':
            a_eq.append(coeffs)
            b_eq.append(row.rhs)
            continue
        sign = 1.0 if row.sense in ('<=', '<') else -1.0
        coeffs = [sign * c for c in coeffs]
        if row.strict:
            coeffs[-1] = 1.0
        a_ub.append(coeffs)
        b_ub.append(sign * row.rhs)
    bounds = list(problem.bounds)
    c = np.zeros(width)
    if has_strict:
        scale = max([1.0, *(abs(row.rhs) for row in problem.rows)])
        bounds.append((None, scale))
        c[-1] = -1.0
    res = _run_linprog(c, a_ub, b_ub, a_eq, b_eq, bounds)
    if res.status == 2: # noqa: PLR2004
        log.debug(BraceMessage("infeasible"))
        return LpResult(SolveStatus.INFEASIBLE)
    if res.status != 0:
        raise SolverError(f"Linear program '{problem.name}' failed: {res.message}", detail=res.message)
    margin = float(res.x[-1]) if has_strict else None
    if margin is not None and margin < strict_eps:
        log.debug(BraceMessage("infeasible, strict margin {:.3e} < {:.3e}", margin, strict_eps))
        return LpResult(SolveStatus.INFEASIBLE, margin=margin)
    witness = np.array(res.x[:n], dtype=float)
    if problem.objective is not None:
        # Second phase: optimize among points keeping the strict rows at strict_eps.
        if has_strict:
            bounds[-1] = (strict_eps, strict_eps)
        c = np.zeros(width)
        c[:n] = problem.objective
        res = _run_linprog(c, a_ub, b_ub, a_eq, b_eq, bounds)
        if res.status != 0:
            raise SolverError(f"Linear program '{problem.name}' failed: {res.message}", detail=res.message)
        witness = np.array(res.x[:n], dtype=float)
    for row in problem.rows:
        if row.slack(witness) < -LINEAR_SLACK * max(1.0, abs(row.rhs)):
            raise SolverError(f"Linear program '{problem.name}' witness violates row '{row.name}'",
                              detail='verification failed')
    log.debug(BraceMessage("feasible, strict margin {}", margin))
    return LpResult(SolveStatus.FEASIBLE, witness, margin)
