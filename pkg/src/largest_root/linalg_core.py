"""Dense linear algebra shared by every test statistic.

Matrices follow the numpy convention. Data matrices handed to the public
test functions are observations-in-rows; the unified statistic itself uses
the variables-in-rows layout ``Z`` (``M1 x N``).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg

from .errors import (
    DefinitenessError,
    InvalidDimensionError,
    OrthogonalityError,
    RankDeficiencyError,
)

ORTHO_TOL = 1e-8


class Orientation(Enum):
    OBSERVATIONS_IN_ROWS = "observations_in_rows"
    VARIABLES_IN_ROWS = "variables_in_rows"


@dataclass(frozen=True)
class DataMatrix:
    """A finite real matrix together with its layout."""

    values: np.ndarray
    orientation: Orientation = Orientation.OBSERVATIONS_IN_ROWS

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvalidDimensionError(f"data matrix must be 2-d and non-empty, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("data matrix contains NaN or infinite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    def observations(self):
        """Return the data as an ``(n_obs, n_vars)`` array."""
        if self.orientation is Orientation.OBSERVATIONS_IN_ROWS:
            return self.values
        return self.values.T

    def variables(self):
        """Return the data as an ``(n_vars, n_obs)`` array."""
        return self.observations().T


def as_observations(x):
    """Coerce an array or DataMatrix to an ``(n_obs, n_vars)`` float array."""
    if isinstance(x, DataMatrix):
        return x.observations()
    return DataMatrix(x).observations()


def symmetrize(m):
    m = np.asarray(m, dtype=float)
    return (m + m.T) / 2.0


@dataclass(frozen=True)
class SymmetricPair:
    """Matrices ``(w, b)`` whose relative eigenvalues ``eig(w^-1 b)`` are wanted.

    Both inputs are symmetrised on construction. Positive definiteness of
    ``w`` is checked when it is factorised, not here, so degenerate pairs
    can still be built and inspected.
    """

    w: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.w, dtype=float))
        b = np.atleast_2d(np.asarray(self.b, dtype=float))
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape != b.shape:
            raise InvalidDimensionError(f"w and b must be square of equal size, got {w.shape} and {b.shape}")
        for name, m in (("w", w), ("b", b)):
            if not np.all(np.isfinite(m)):
                raise ValueError(f"{name} contains NaN or infinite entries")
            scale = max(np.abs(m).max(), 1.0)
            if np.abs(m - m.T).max() > 1e-10 * scale:
                raise ValueError(f"{name} is not symmetric")
        object.__setattr__(self, "w", symmetrize(w))
        object.__setattr__(self, "b", symmetrize(b))

    @property
    def size(self):
        return self.w.shape[0]


def centering_matrix(n):
    """``I_n - 11^T / n``."""
    if n < 1:
        raise InvalidDimensionError("centering matrix needs n >= 1")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def numerical_rank(a):
    """Rank of ``a`` from column-pivoted QR, threshold ``max(n, k) * eps * ||a||_2``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    r = linalg.qr(a, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(r))
    tol = max(a.shape) * np.finfo(float).eps * np.linalg.norm(a, 2)
    return int(np.sum(diag > tol))


def column_space_basis(a):
    """Orthonormal basis ``Q`` of ``col(a)``; raises if ``a`` lacks full column rank.

    ``Q Q^T`` equals ``a (a^T a)^-1 a^T``; callers that only need to apply the
    projection should use ``Q`` directly instead of forming the ``n x n`` matrix.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n, k = a.shape
    if k == 0:
        return np.zeros((n, 0))
    rank = numerical_rank(a)
    if rank < k:
        raise RankDeficiencyError(f"matrix of shape {a.shape} has numerical rank {rank} < {k}", rank=rank)
    q, _ = np.linalg.qr(a)
    return q


def column_space_projection(a):
    """Orthogonal projector onto the column space of ``a`` (``n x n``)."""
    q = column_space_basis(a)
    return q @ q.T


def _whitened(pair):
    w, b = pair.w, pair.b
    try:
        chol = linalg.cholesky(w, lower=True)
    except linalg.LinAlgError as exc:
        raise DefinitenessError(f"w is not positive definite: {exc}") from None
    d = np.diag(chol) ** 2
    if d.min() <= w.shape[0] * np.finfo(float).eps * d.max():
        raise DefinitenessError("w is numerically singular")
    tmp = linalg.solve_triangular(chol, b, lower=True)
    return symmetrize(linalg.solve_triangular(chol, tmp.T, lower=True))


def relative_eigenvalues(pair, k=None):
    """Eigenvalues of ``w^-1 b`` in non-increasing order (the ``k`` largest if given).

    Computed as the spectrum of ``L^-1 b L^-T`` with ``w = L L^T``, which is
    symmetric, so the result is real. Tiny negative round-off is clipped to 0.
    """
    if pair.size == 0:
        return np.zeros(0)
    vals = np.linalg.eigvalsh(_whitened(pair))[::-1]
    vals = np.clip(vals, 0.0, None)
    return vals if k is None else vals[:k]


def largest_relative_eigenvalue(pair):
    return float(relative_eigenvalues(pair, 1)[0])


def check_isometries(u1, u2, tol=ORTHO_TOL):
    failed = []
    n1, n2 = u1.shape[1], u2.shape[1]
    if n1 and np.abs(u1.T @ u1 - np.eye(n1)).max() > tol:
        failed.append("u1^T u1 = I")
    if n2 and np.abs(u2.T @ u2 - np.eye(n2)).max() > tol:
        failed.append("u2^T u2 = I")
    if n1 and n2 and np.abs(u1.T @ u2).max() > tol:
        failed.append("u1^T u2 = 0")
    if failed:
        raise OrthogonalityError("isometry conditions violated: " + ", ".join(failed), failed)


def unified_omega_lambda1(z, u1, u2):
    """Largest eigenvalue of ``(Z U2 U2^T Z^T)^-1 Z U1 U1^T Z^T``.

    Parameters
    ----------
    z : (M1, N) array
        Data with variables in rows.
    u1 : (N, N1) array
        Column-orthonormal; ``N1 = 0`` gives 0.
    u2 : (N, N - N2) array
        Column-orthonormal and orthogonal to ``u1``.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    u1 = np.asarray(u1, dtype=float).reshape(z.shape[1], -1)
    u2 = np.asarray(u2, dtype=float).reshape(z.shape[1], -1)
    check_isometries(u1, u2)
    zu2 = z @ u2
    zu1 = z @ u1
    return largest_relative_eigenvalue(SymmetricPair(zu2 @ zu2.T, zu1 @ zu1.T))
