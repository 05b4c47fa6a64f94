# SPDX-FileCopyrightText: 2026-present The ppls-defense Authors
#
# SPDX-License-Identifier: MIT
#
# PROGRAM/MODULE: ppls-defense
# FILE:           ppls/defense/linalg.py
# DESCRIPTION:    Dense symmetric-matrix utilities
# CREATED:        18.10.2026
#
# The contents of this file are subject to the MIT License
#
# See the LICENSE file distributed with this package for details.
#
# Contributor(s): ______________________________________

"""ppls-defense - Dense symmetric-matrix utilities

Eigenvalue and inversion helpers shared by all modules. All functions symmetrize their
input as `(M + M.T) / 2` first, so matrices returned by conic solvers (that carry small
asymmetric round-off) can be passed directly.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from .types import ConditioningError, InvalidInputError

#: Relative tolerance for `invert` (scaled by max. absolute entry).
INVERT_TOLERANCE = 1e-9
#: Relative residual accepted by `invert`.
RESIDUAL_TOLERANCE = 1e-8
#: Default PSD slack (scaled by max. absolute entry).
PSD_SLACK = 1e-8

def as_matrix(value: ArrayLike, name: str='matrix', *, shape: tuple[int, int] | None=None) -> np.ndarray:
    """Returns `value` as two-dimensional float array (a copy).

    Arguments:
        value: Array-like value.
        name:  Name used in error messages.
        shape: Required shape.

    Raises:
        InvalidInputError: When value is not a finite matrix of required shape.
    """
    result = np.array(value, dtype=float)
    if result.ndim != 2: # noqa: PLR2004
        raise InvalidInputError(f"'{name}' must be a matrix, got {result.ndim} dimension(s)", field=name)
    if shape is not None and result.shape != shape:
        raise InvalidInputError(f"'{name}' must have shape {shape}, not {result.shape}", field=name)
    if not np.all(np.isfinite(result)):
        raise InvalidInputError(f"'{name}' has non-finite entries", field=name)
    return result

def symmetrize(m: ArrayLike) -> np.ndarray:
    """Returns `(M + M.T) / 2`.
    """
    m = np.asarray(m, dtype=float)
    return (m + m.T) / 2.0

def max_abs(m: ArrayLike) -> float:
    """Returns largest absolute entry (0 for empty matrix).
    """
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m))) if m.size else 0.0

def eig_extrema(m: ArrayLike) -> tuple[float, float]:
    """Returns `(min_eig, max_eig)` of symmetric matrix.

    Raises:
        InvalidInputError: When matrix has non-finite entries or is not square.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]: # noqa: PLR2004
        raise InvalidInputError(f"Square matrix expected, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("Matrix has non-finite entries")
    eigs = linalg.eigvalsh(symmetrize(m))
    return float(eigs[0]), float(eigs[-1])

def invert(m: ArrayLike) -> np.ndarray:
    """Returns inverse of symmetric positive definite matrix (symmetrized).

    Raises:
        InvalidInputError: When matrix has non-finite entries.
        ConditioningError: When the smallest eigenvalue is not above `INVERT_TOLERANCE`
            times the largest absolute entry, or the residual `M @ inv - I` is too big.
    """
    m = symmetrize(m)
    min_eig, max_eig = eig_extrema(m)
    scale = max_abs(m)
    if scale == 0.0 or min_eig <= INVERT_TOLERANCE * scale:
        condition = np.inf if min_eig <= 0.0 else max_eig / min_eig
        raise ConditioningError(f"Matrix is too close to singular (min. eigenvalue {min_eig:.3e})",
                                condition=condition)
    result = symmetrize(linalg.inv(m))
    residual = linalg.norm(m @ result - np.eye(m.shape[0]), 2)
    if residual > RESIDUAL_TOLERANCE * max(1.0, max_eig / min_eig):
        raise ConditioningError(f"Inversion residual {residual:.3e} too big", condition=max_eig / min_eig)
    return result

def condition_number(m: ArrayLike) -> float:
    """Returns 2-norm condition number of general square matrix (`inf` for singular).
    """
    m = np.asarray(m, dtype=float)
    values = linalg.svdvals(m)
    return np.inf if values[-1] == 0.0 else float(values[0] / values[-1])

def default_slack(m: ArrayLike) -> float:
    """Returns default PSD slack for matrix: `PSD_SLACK` times its largest absolute entry.
    """
    return PSD_SLACK * max(max_abs(m), 1.0)

def is_psd(m: ArrayLike, slack: float | None=None) -> bool:
    """Returns True when the smallest eigenvalue of `m` is not below `-slack`.

    Arguments:
        m:     Symmetric matrix.
        slack: Non-negative slack, `default_slack(m)` when not specified.
    """
    if slack is None:
        slack = default_slack(m)
    assert slack >= 0.0 # noqa: S101
    return eig_extrema(m)[0] >= -slack

def is_nsd(m: ArrayLike, slack: float | None=None) -> bool:
    """Returns True when `-m` is positive semidefinite within `slack`.
    """
    return is_psd(-np.asarray(m, dtype=float), slack)

def max_generalized_eig(a: ArrayLike, b: ArrayLike) -> float:
    """Returns largest `lambda` with `a v = lambda b v`, for symmetric `a` and symmetric
    positive definite `b`. It's the smallest `t` with `a - t * b` negative semidefinite.

    Raises:
        ConditioningError: When `b` is not positive definite.
    """
    b = symmetrize(b)
    if eig_extrema(b)[0] <= INVERT_TOLERANCE * max(max_abs(b), 1.0):
        raise ConditioningError("Right-hand matrix is not positive definite", condition=np.inf)
    return float(linalg.eigh(symmetrize(a), b, eigvals_only=True)[-1])
