"""Centering and scaling of the largest eigenvalue for Tracy-Widom comparison.

Two routes are provided:

* the log-transform route, ``(ln(lambda1) - mu) / sigma`` with closed-form
  angle parameters. Every test in the package uses this one.
* the exact route, which solves an integral equation against the
  Marchenko-Pastur law for ``mu_n`` and ``sigma_n``, and is used as a
  cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import CalibrationDomainError, DomainError, InvalidDimensionError, NoRootError
from .linalg_core import SymmetricPair, centering_matrix, largest_relative_eigenvalue


@dataclass(frozen=True)
class DimensionQuad:
    """``(M1, N1, N2, N)``: rows of Z, rank of U1, N2, and columns of Z.

    U2 has ``N - N2`` columns.
    """

    m1: int
    n1: int
    n2: int
    n: int

    def __post_init__(self):
        vals = (self.m1, self.n1, self.n2, self.n)
        if any(isinstance(v, bool) or int(v) != v for v in vals):
            raise InvalidDimensionError(f"dimensions must be integers, got {vals}")
        m1, n1, n2, n = (int(v) for v in vals)
        if m1 < 1 or not 1 <= n1 <= n2 <= n:
            raise InvalidDimensionError(f"need m1 >= 1 and 1 <= n1 <= n2 <= n, got {vals}")
        if n <= m1 + n2:
            raise InvalidDimensionError(f"need n > m1 + n2, got n={n}, m1 + n2 = {m1 + n2}")
        for name, v in zip(("m1", "n1", "n2", "n"), (m1, n1, n2, n)):
            object.__setattr__(self, name, v)

    @classmethod
    def unchecked(cls, m1, n1, n2, n):
        """Build without validation, for reporting degenerate (saturated) inputs."""
        obj = object.__new__(cls)
        for name, v in zip(("m1", "n1", "n2", "n"), (m1, n1, n2, n)):
            object.__setattr__(obj, name, int(v))
        return obj

    def scaled(self, factor):
        return DimensionQuad(self.m1 * factor, self.n1 * factor, self.n2 * factor, self.n * factor)

    def as_tuple(self):
        return (self.m1, self.n1, self.n2, self.n)


@dataclass(frozen=True)
class LogRescaleParams:
    phi: float
    varphi: float
    mu_tilde: float
    sigma_tilde: float


@dataclass(frozen=True)
class ExactCenterParams:
    """Root ``c_n`` of the edge equation and the centre/scale it implies.

    ``mu_n`` and ``sigma_n`` are on the scale of ``lambda1`` itself, so that
    ``sigma_n * N1**(2/3) * (lambda1 - mu_n)`` is approximately TW1.
    """

    c_n: float
    mu_n: float
    sigma_n: float


def log_rescale_params(d):
    denom = d.n - d.n2 + d.n1 - 1
    lo, hi = min(d.m1, d.n1), max(d.m1, d.n1)
    s_lo = (lo - 0.5) / denom
    s_hi = (hi - 0.5) / denom
    if denom <= 0 or not (0.0 < s_lo <= s_hi < 1.0):
        raise CalibrationDomainError(
            f"angle arguments ({lo} - 1/2)/{denom} and ({hi} - 1/2)/{denom} must lie in (0, 1) for {d.as_tuple()}"
        )
    varphi = 2.0 * math.asin(math.sqrt(s_lo))
    phi = 2.0 * math.asin(math.sqrt(s_hi))
    mu = 2.0 * math.log(math.tan((phi + varphi) / 2.0))
    sigma3 = 16.0 / denom**2 / (math.sin(phi + varphi) ** 2 * math.sin(phi) * math.sin(varphi))
    return LogRescaleParams(phi=phi, varphi=varphi, mu_tilde=mu, sigma_tilde=sigma3 ** (1.0 / 3.0))


def rescale_statistic(lambda1, params):
    if not lambda1 > 0 or math.isinf(lambda1):
        raise DomainError(f"rescaling needs 0 < lambda1 < inf, got {lambda1}")
    return (math.log(lambda1) - params.mu_tilde) / params.sigma_tilde


# -- exact route --------------------------------------------------------------

EXACT_ABS_TOL = 1e-10
BRACKET_MARGIN = 1e-9


def mp_edges(y):
    r = math.sqrt(y)
    return (1.0 - r) ** 2, (1.0 + r) ** 2


def _mp_quad(h, y, gap=None):
    """Integrate ``h(u)`` against the unit-scale Marchenko-Pastur density, ``u = L - a``.

    Substituting ``L = (a+b)/2 - (b-a)/2 cos(t)`` removes the square-root edge
    behaviour of the density and leaves a smooth integrand on ``[0, pi]``.
    The offset from the lower edge is formed as ``(b-a) sin(t/2)**2`` so it
    keeps full relative precision near ``t = 0``. When ``h`` has a pole a
    distance ``gap`` below the edge, the peak it makes near ``t = 0`` gets
    geometrically spaced breakpoints.
    """
    a, b = mp_edges(y)
    half = (b - a) / 2.0

    def integrand(t):
        u = 2.0 * half * math.sin(t / 2.0) ** 2
        return h(u) * half * half * math.sin(t) ** 2 / (2.0 * math.pi * y * (a + u))

    width = 0.05
    if gap is not None and gap > 0.0:
        # near t = 0 the pole distance is gap + half t^2 / 2
        width = min(width, math.sqrt(2.0 * gap / half))
    pts = [0.0]
    t = width
    while t < 0.3:
        pts.append(t)
        t *= 4.0
    pts += [0.3, math.pi]
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        total += integrate.quad(integrand, lo, hi, epsabs=EXACT_ABS_TOL / len(pts), epsrel=1e-11, limit=200)[0]
    return total


def mp_expectation(g, y):
    """``E g(L)`` for ``L`` Marchenko-Pastur with ratio ``0 < y < 1`` and unit scale."""
    a = mp_edges(y)[0]
    return _mp_quad(lambda u: g(a + u), y)


def _edge_moment(c, y, power):
    """``E[(c / (L - c))**power]`` for ``c`` below the lower edge."""
    gap = mp_edges(y)[0] - c
    return _mp_quad(lambda u: (c / (gap + u)) ** power, y, gap=gap)


def exact_center_params(d, tol=1e-13):
    """Solve ``E[(c/(L-c))^2] = N1/M1`` for ``c`` by bisection and evaluate the centre and scale.

    ``L`` follows the Marchenko-Pastur law with ratio ``y = M1 / (N - N2)``
    (the spectrum of ``X U2 U2^T X^T / (N - N2)``), so the bracket's right end
    ``(1 - sqrt(y))**2`` is the lower spectral edge. The raw centre
    ``(1 + (M1/N1) E[c/(L-c)]) / c`` lives on the scale of that normalised
    spectrum; multiplying by ``N1 / (N - N2)`` puts it on the scale of lambda1.
    """
    y = d.m1 / (d.n - d.n2)
    if not 0.0 < y < 1.0:
        raise CalibrationDomainError(f"need 0 < M1/(N - N2) < 1, got {y}")
    target = d.n1 / d.m1
    right = mp_edges(y)[0] - BRACKET_MARGIN
    lo, hi = 0.0, right
    f_lo, f_hi = -target, _edge_moment(hi, y, 2) - target
    if f_hi <= 0.0:
        raise NoRootError(f"no sign change on [0, {right}]: integral minus target is {f_lo} and {f_hi}", f_lo, f_hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _edge_moment(mid, y, 2) - target > 0.0:
            hi = mid
        else:
            lo = mid
    c = 0.5 * (lo + hi)
    ratio = d.m1 / d.n1
    mu_raw = (1.0 + ratio * _edge_moment(c, y, 1)) / c
    inv_sigma3_raw = (1.0 + ratio * _edge_moment(c, y, 3)) / c**3
    scale = d.n1 / (d.n - d.n2)
    return ExactCenterParams(c_n=c, mu_n=mu_raw * scale, sigma_n=inv_sigma3_raw ** (-1.0 / 3.0) / scale)


def rescale_exact(lambda1, params, d):
    """``sigma_n * N1**(2/3) * (lambda1 - mu_n)``."""
    return params.sigma_n * d.n1 ** (2.0 / 3.0) * (lambda1 - params.mu_n)


# -- centered F matrix ----------------------------------------------------------


def centered_f_lambda1(y, w):
    """Largest eigenvalue of ``[W P W^T]^-1 Y P Y^T`` with each block centred by its own mean.

    ``y`` is ``(M1, n1)`` and ``w`` is ``(M1, n2)``, variables in rows.
    """
    y = np.atleast_2d(np.asarray(y, dtype=float))
    w = np.atleast_2d(np.asarray(w, dtype=float))
    if y.shape[0] != w.shape[0]:
        raise InvalidDimensionError(f"row counts differ: {y.shape[0]} vs {w.shape[0]}")
    yc = y - y.mean(axis=1, keepdims=True)
    wc = w - w.mean(axis=1, keepdims=True)
    return largest_relative_eigenvalue(SymmetricPair(wc @ wc.T, yc @ yc.T))


def centering_isometry(n):
    """``(n, n-1)`` column-orthonormal ``P`` with ``P P^T = I - 11^T/n``."""
    u, _, _ = np.linalg.svd(centering_matrix(n))
    return u[:, : n - 1]


def centered_f_isometries(n1, n2):
    """``(U1, U2)`` turning ``Z = [Y, W]`` into the centred F matrix."""
    p1, p2 = centering_isometry(n1), centering_isometry(n2)
    u1 = np.vstack([p1, np.zeros((n2, n1 - 1))])
    u2 = np.vstack([np.zeros((n1, n2 - 1)), p2])
    return u1, u2
