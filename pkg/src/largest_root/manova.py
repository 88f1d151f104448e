"""Equality of g group mean vectors via the largest root of ``W^-1 B``."""

import numpy as np
from scipy.linalg import block_diag

from .calibration import DimensionQuad
from .errors import DefinitenessError, InvalidDimensionError
from .linalg_core import SymmetricPair, as_observations, largest_relative_eigenvalue
from .report import Method, build_report, check_alpha


def _check_groups(groups):
    groups = [as_observations(g) for g in groups]
    if len(groups) < 2:
        raise InvalidDimensionError(f"need at least 2 groups, got {len(groups)}")
    p = groups[0].shape[1]
    if any(g.shape[1] != p for g in groups):
        raise InvalidDimensionError("all groups must have the same number of variables")
    if any(g.shape[0] < 2 for g in groups):
        raise InvalidDimensionError("every group needs at least 2 observations")
    n = sum(g.shape[0] for g in groups)
    if n <= p + len(groups):
        raise InvalidDimensionError(f"need total n > p + g, got n={n}, p={p}, g={len(groups)}")
    return groups


def manova_sscp(groups):
    """Within and between SSCP matrices as ``SymmetricPair(w=W, b=B)``.

    ``groups`` is a sequence of ``(n_i, p)`` arrays. No definiteness check is
    made here; a singular ``W`` surfaces when the pair is factorised.
    """
    groups = _check_groups(groups)
    means = [g.mean(axis=0) for g in groups]
    sizes = np.array([g.shape[0] for g in groups], dtype=float)
    grand = np.sum([m * s for m, s in zip(means, sizes)], axis=0) / sizes.sum()
    dev = np.array(means) - grand
    b = (dev * sizes[:, None]).T @ dev
    resid = np.vstack([g - m for g, m in zip(groups, means)])
    w = resid.T @ resid
    return SymmetricPair(w, b)


def householder_with_first_column(n):
    """Symmetric orthogonal ``H`` (``n x n``) whose first column is ``1/sqrt(n)``."""
    u = np.full(n, 1.0 / np.sqrt(n))
    v = -u
    v[0] += 1.0
    vv = v @ v
    if vv == 0.0:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


def manova_isometries(sizes):
    """Block-diagonal ``(U1, U2)``, the size weights ``a_g`` and ``U1 P_g``."""
    sizes = [int(s) for s in sizes]
    u1 = block_diag(*[np.eye(s)[:, :1] for s in sizes])
    u2 = block_diag(*[np.eye(s)[:, 1:] for s in sizes])
    a_g = np.sqrt(np.array(sizes, dtype=float) / sum(sizes))
    p_g = np.eye(len(sizes)) - np.outer(a_g, a_g)
    return u1, u2, a_g, u1 @ p_g


def manova_block_oracle(groups):
    """``(W, B)`` rebuilt through orthogonal rotations and block isometries.

    Each group is rotated by a Householder matrix ``H_i`` so its first row is
    ``sqrt(n_i)`` times the group mean; ``W = Z U2 U2^T Z^T`` and
    ``B = Z U1 P_g P_g^T U1^T Z^T``. Intended as an independent check of
    :func:`manova_sscp`.
    """
    groups = _check_groups(groups)
    z = np.hstack([(householder_with_first_column(g.shape[0]).T @ g).T for g in groups])
    u1, u2, _, u1_tilde = manova_isometries([g.shape[0] for g in groups])
    zu2 = z @ u2
    zu1 = z @ u1_tilde
    return SymmetricPair(zu2 @ zu2.T, zu1 @ zu1.T)


def manova_test(groups, alpha=0.05):
    """Largest-root MANOVA test, calibrated with dimensions ``(p, g-1, g, n)``."""
    alpha = check_alpha(alpha)
    groups = _check_groups(groups)
    pair = manova_sscp(groups)
    try:
        lam = largest_relative_eigenvalue(pair)
    except DefinitenessError as exc:
        raise DefinitenessError(f"within-group SSCP is not positive definite: {exc}") from None
    g = len(groups)
    n = sum(x.shape[0] for x in groups)
    p = groups[0].shape[1]
    return build_report(lam, DimensionQuad(p, g - 1, g, n), alpha, Method.MANOVA)
