"""Largest-root tests of ``C B = Gamma`` and ``C B D = Gamma`` in ``Y = X B + Z``."""

import numpy as np
from scipy import linalg

from .calibration import DimensionQuad
from .errors import DefinitenessError, InvalidDimensionError, RankDeficiencyError
from .linalg_core import SymmetricPair, as_observations, largest_relative_eigenvalue, numerical_rank
from .report import Method, build_report, check_alpha


def _design_factor(x):
    x = as_observations(x)
    rank = numerical_rank(x)
    if rank < x.shape[1]:
        raise RankDeficiencyError(f"design matrix has rank {rank} < {x.shape[1]} columns", rank=rank)
    q, r = np.linalg.qr(x)
    return q, r


def least_squares(y, x):
    """``(X^T X)^-1 X^T Y`` via a QR factorisation of ``X``."""
    y = as_observations(y)
    q, r = _design_factor(x)
    if y.shape[0] != q.shape[0]:
        raise InvalidDimensionError(f"Y has {y.shape[0]} rows, X has {q.shape[0]}")
    return linalg.solve_triangular(r, q.T @ y)


def _as_matrix(a, name):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return a


def linear_hypothesis_sscp(y, x, c, gamma=None):
    """Error and hypothesis SSCPs for ``H0: C B = Gamma`` as ``SymmetricPair(w=E, b=H)``.

    ``E = Y^T (I - P_X) Y`` and
    ``H = (C B_hat - Gamma)^T [C (X^T X)^-1 C^T]^-1 (C B_hat - Gamma)``.
    ``Gamma`` defaults to zero. A single QR of ``X`` serves every inverse.
    """
    y = as_observations(y)
    x = as_observations(x)
    c = _as_matrix(c, "C")
    n, p2 = y.shape
    if x.shape[0] != n:
        raise InvalidDimensionError(f"Y has {n} rows, X has {x.shape[0]}")
    p1 = x.shape[1]
    if c.shape[1] != p1:
        raise InvalidDimensionError(f"C must have {p1} columns, got shape {c.shape}")
    g1 = c.shape[0]
    if numerical_rank(c) < g1:
        raise RankDeficiencyError(f"C must have full row rank {g1}", rank=numerical_rank(c))
    gamma = np.zeros((g1, p2)) if gamma is None else _as_matrix(gamma, "Gamma")
    if gamma.shape != (g1, p2):
        raise InvalidDimensionError(f"Gamma must have shape {(g1, p2)}, got {gamma.shape}")

    q, r = _design_factor(x)
    b_hat = linalg.solve_triangular(r, q.T @ y)
    resid = y - x @ b_hat
    e = resid.T @ resid
    # C (X^T X)^-1 C^T = G^T G with G = R^-T C^T
    g = linalg.solve_triangular(r, c.T, trans="T")
    rg = np.linalg.qr(g, mode="r")
    if np.abs(np.diag(rg)).min() <= g1 * np.finfo(float).eps * np.abs(np.diag(rg)).max():
        raise DefinitenessError("C (X^T X)^-1 C^T is singular")
    half = linalg.solve_triangular(rg, c @ b_hat - gamma, trans="T")
    return SymmetricPair(e, half.T @ half)


def _check_n(n, p1, p2):
    if n <= p1 + p2:
        raise InvalidDimensionError(f"need N > {p1} + {p2}, got N = {n}")


def linear_hypothesis_test(y, x, c, gamma=None, alpha=0.05):
    """Test ``H0: C B = Gamma``; calibrated with dimensions ``(p2, g1, p1, N)``."""
    alpha = check_alpha(alpha)
    y = as_observations(y)
    x = as_observations(x)
    n, p2 = y.shape
    p1 = x.shape[1]
    _check_n(n, p1, p2)
    pair = linear_hypothesis_sscp(y, x, c, gamma)
    try:
        lam = largest_relative_eigenvalue(pair)
    except DefinitenessError as exc:
        raise DefinitenessError(f"error SSCP is not positive definite: {exc}") from None
    g1 = np.atleast_2d(c).shape[0]
    return build_report(lam, DimensionQuad(p2, g1, p1, n), alpha, Method.LIN_MODEL_LINEAR)


def intra_subject_test(y, x, c, d, gamma=None, alpha=0.05):
    """Test ``H0: C B D = Gamma`` by running the linear test on ``Y D``.

    Calibrated with dimensions ``(g2, g1, p1, N)`` where ``g2`` is the number
    of columns of ``D``.
    """
    alpha = check_alpha(alpha)
    y = as_observations(y)
    x = as_observations(x)
    d = _as_matrix(d, "D")
    if d.shape[0] != y.shape[1]:
        raise InvalidDimensionError(f"D must have {y.shape[1]} rows, got shape {d.shape}")
    g2 = d.shape[1]
    if numerical_rank(d) < g2:
        raise RankDeficiencyError(f"D must have full column rank {g2}", rank=numerical_rank(d))
    n = y.shape[0]
    p1 = x.shape[1]
    _check_n(n, p1, g2)
    pair = linear_hypothesis_sscp(y @ d, x, c, gamma)
    try:
        lam = largest_relative_eigenvalue(pair)
    except DefinitenessError as exc:
        raise DefinitenessError(f"error SSCP is not positive definite: {exc}") from None
    g1 = np.atleast_2d(c).shape[0]
    return build_report(lam, DimensionQuad(g2, g1, p1, n), alpha, Method.LIN_MODEL_INTRA_SUBJECT)
