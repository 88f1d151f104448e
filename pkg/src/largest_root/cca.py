"""Independence test between two random vectors via the largest sample canonical correlation."""

import math

import numpy as np

from .calibration import DimensionQuad
from .errors import DefinitenessError, InvalidDimensionError
from .linalg_core import as_observations, numerical_rank
from .report import Method, TestReport, build_report, check_alpha

SATURATION_TOL = 1e-12


def _centered(a):
    return a - a.mean(axis=0)


def cca_gamma1(z, y):
    """Squared largest sample canonical correlation of ``z`` and ``y``.

    Both inputs are observations-in-rows (``N x M1`` and ``N x M2``); each is
    centred by its column means. The value is the largest eigenvalue of
    ``Szz^-1 Szy Syy^-1 Syz``, computed as the squared top singular value of
    ``Qz^T Qy`` for orthonormal bases of the centred data. Returns exactly 1
    when ``N <= M1 + M2`` (the two centred column spaces must intersect).
    """
    z = as_observations(z)
    y = as_observations(y)
    n = z.shape[0]
    if y.shape[0] != n:
        raise InvalidDimensionError(f"observation counts differ: {n} vs {y.shape[0]}")
    zc, yc = _centered(z), _centered(y)
    for name, block in (("z", zc), ("y", yc)):
        if numerical_rank(block) < block.shape[1]:
            raise DefinitenessError(f"centred cross-product matrix of {name} is singular")
    if n <= z.shape[1] + y.shape[1]:
        return 1.0
    qz, _ = np.linalg.qr(zc)
    qy, _ = np.linalg.qr(yc)
    sv = np.linalg.svd(qz.T @ qy, compute_uv=False)
    return float(np.clip(sv[0] ** 2, 0.0, 1.0))


def gamma_to_lambda(gamma1):
    """``gamma / (1 - gamma)``, infinite once ``gamma`` is within ``SATURATION_TOL`` of 1."""
    if gamma1 >= 1.0 - SATURATION_TOL:
        return math.inf
    return gamma1 / (1.0 - gamma1)


def cca_independence_test(z, y, alpha=0.05):
    """Largest-root test of independence between ``z`` (``N x M1``) and ``y`` (``N x M2``).

    Calibrated with dimensions ``(M1, M2, M2, N)``. Only one side needs the
    linear-factor structure; swapping the arguments swaps the roles of M1
    and M2 in the calibration, so the orientation is the caller's choice.
    """
    alpha = check_alpha(alpha)
    z = as_observations(z)
    y = as_observations(y)
    n, m1 = z.shape
    m2 = y.shape[1]
    lam = gamma_to_lambda(cca_gamma1(z, y))
    if n <= m1 + m2:
        return TestReport(math.inf, math.inf, 0.0, alpha, True, DimensionQuad.unchecked(m1, m2, m2, n), Method.CCA, True)
    return build_report(lam, DimensionQuad(m1, m2, m2, n), alpha, Method.CCA)
