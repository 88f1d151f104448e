"""Seeded Monte-Carlo experiments for the size, power and quantile tables.

Every replication ``r`` draws from its own counter-based stream,
``Philox(SeedSequence(seed, spawn_key=(r,)))``, so results depend only on
the configuration and the master seed, never on how replications are
split across worker processes.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .calibration import DimensionQuad, log_rescale_params, rescale_statistic
from .cca import cca_gamma1, gamma_to_lambda
from .errors import DefinitenessError, InvalidDimensionError, RankDeficiencyError
from .linalg_core import largest_relative_eigenvalue, numerical_rank, unified_omega_lambda1
from .linmodel import linear_hypothesis_sscp
from .manova import manova_sscp
from .tw import tw1_quantile

SQRT3 = math.sqrt(3.0)

# (percentile, nominal F1 value) pairs reported for the quantile experiment
TABLE1_PERCENTILES = (
    (-3.90, 0.01),
    (-3.18, 0.05),
    (-2.78, 0.10),
    (-1.91, 0.30),
    (-1.27, 0.50),
    (-0.59, 0.70),
    (0.45, 0.90),
    (0.98, 0.95),
    (2.02, 0.99),
)


class Distribution(Enum):
    NORMAL = "normal"
    DISCRETE = "discrete"
    GAMMA = "gamma"
    UNIFORM_DESIGN = "uniform"


def sample_matrix(kind, rows, cols, rng):
    """``rows x cols`` matrix of independent draws.

    NORMAL, DISCRETE (``{-sqrt3, 0, sqrt3}`` w.p. ``1/6, 2/3, 1/6``) and GAMMA
    (shape 4, scale 0.5, minus 2) all have mean 0 and variance 1.
    UNIFORM_DESIGN is ``U(-2, 2)`` and is only meant for regression designs.
    """
    kind = Distribution(kind)
    size = (rows, cols)
    if kind is Distribution.NORMAL:
        return rng.standard_normal(size)
    if kind is Distribution.DISCRETE:
        u = rng.random(size)
        return np.where(u < 1.0 / 6.0, -SQRT3, np.where(u < 5.0 / 6.0, 0.0, SQRT3))
    if kind is Distribution.GAMMA:
        return rng.gamma(4.0, 0.5, size) - 2.0
    return rng.uniform(-2.0, 2.0, size)


# -- covariance models -----------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    def matrix(self, p):
        return np.eye(p)


@dataclass(frozen=True)
class MA1:
    """MA(1) autocovariance with unit innovation variance: ``1 + theta^2`` on the diagonal."""

    theta: float

    def matrix(self, p):
        return (
            np.diag(np.full(p, 1.0 + self.theta**2))
            + np.diag(np.full(p - 1, self.theta), 1)
            + np.diag(np.full(p - 1, self.theta), -1)
        )


@dataclass(frozen=True)
class AR1Toeplitz:
    rho: float

    def matrix(self, p):
        idx = np.arange(p)
        return self.rho ** np.abs(idx[:, None] - idx[None, :])


@dataclass(frozen=True)
class CustomCovariance:
    values: np.ndarray = field(compare=False)

    def matrix(self, p):
        m = np.asarray(self.values, dtype=float)
        if m.shape != (p, p):
            raise InvalidDimensionError(f"custom covariance has shape {m.shape}, expected {(p, p)}")
        return m


def covariance_matrix(kind, p):
    """Symmetric positive definite ``p x p`` covariance for ``kind``."""
    if p < 1:
        raise InvalidDimensionError("covariance dimension must be >= 1")
    m = kind.matrix(p)
    if not np.allclose(m, m.T):
        raise DefinitenessError("covariance matrix is not symmetric")
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise DefinitenessError("covariance matrix is not positive definite") from None
    return m


def random_isometry_pair(n, n1, n2, rng):
    """Random ``U1`` (``n x n1``) and ``U2`` (``n x (n - n2)``) from Gaussian ``L`` and ``D``.

    ``U1`` spans ``col(L D)`` and ``U2`` spans the orthogonal complement of
    ``col(L)``, with ``L`` ``n x n2`` and ``D`` ``n2 x n1``.
    """
    if not 1 <= n1 <= n2 < n:
        raise InvalidDimensionError(f"need 1 <= n1 <= n2 < n, got {(n, n1, n2)}")
    for attempt in range(2):
        big_l = rng.standard_normal((n, n2))
        d = rng.standard_normal((n2, n1))
        ld = big_l @ d
        if numerical_rank(big_l) == n2 and numerical_rank(ld) == n1:
            break
    else:
        raise RankDeficiencyError("random projection lost rank twice in a row")
    u1, _ = np.linalg.qr(ld)
    q, _ = np.linalg.qr(big_l, mode="complete")
    return u1, q[:, n2:]


# -- configuration -----------------------------------------------------------------


class Scenario(Enum):
    TABLE1_QUANTILES = "table1"
    TABLE2_CCA_POWER = "table2"
    TABLE3_MANOVA = "table3"
    TABLE4_LIN_MODEL = "table4"
    CUSTOM_OMEGA = "custom"


MANOVA_PATTERNS = ("H0", "H1_1", "H1_1p", "H1_2")
LINMODEL_COMBINATIONS = {
    # name: (C block, B2 kind, Gamma kind)
    "size_b_d_a": ("b", "d", "a"),
    "size_a_d_b": ("a", "d", "b"),
    "dwa_a_d_a": ("a", "d", "a"),
    "ssa_a_s_a": ("a", "s", "a"),
}


@dataclass(frozen=True)
class SimConfig:
    """One cell (or column of cells) of a simulation table.

    ``dims`` are the base dimensions before ``magnification``:
    ``(M1, N1, N2, N)`` for the quantile and custom scenarios, ``(M1, M2, N)``
    for CCA, ``(p, n0)`` for MANOVA (three groups of ``n0``) and
    ``(p1, p2, N)`` for the linear model. ``params`` holds ``tau`` (CCA),
    ``pattern``/``tau1``/``tau2`` (MANOVA) or ``combination`` (linear model),
    plus an optional ``alpha``.
    """

    scenario: Scenario
    dims: tuple
    magnification: int = 1
    replications: int = 2000
    seed: int = 0
    distribution: Distribution = Distribution.NORMAL
    covariance: object = Identity()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        object.__setattr__(self, "distribution", Distribution(self.distribution))
        object.__setattr__(self, "dims", tuple(int(v) for v in self.dims))
        if self.replications < 1:
            raise InvalidDimensionError("replications must be >= 1")
        if self.magnification < 1:
            raise InvalidDimensionError("magnification must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        expected = {
            Scenario.TABLE1_QUANTILES: 4,
            Scenario.CUSTOM_OMEGA: 4,
            Scenario.TABLE2_CCA_POWER: 3,
            Scenario.TABLE3_MANOVA: 2,
            Scenario.TABLE4_LIN_MODEL: 3,
        }[self.scenario]
        if len(self.dims) != expected:
            raise InvalidDimensionError(f"{self.scenario.value} needs {expected} dimensions, got {self.dims}")
        self.calibration_dims()  # validates the magnified dimensions
        if self.scenario is Scenario.TABLE3_MANOVA:
            manova_means(self.params.get("pattern", "H0"), 1)
        if self.scenario is Scenario.TABLE4_LIN_MODEL and self.params.get("combination", "size_b_d_a") not in LINMODEL_COMBINATIONS:
            raise ValueError(f"unknown combination {self.params['combination']!r}; choose from {sorted(LINMODEL_COMBINATIONS)}")
        tau = float(self.params.get("tau", 0.0))
        if not 0.0 <= tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {tau}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def alpha(self):
        return float(self.params.get("alpha", 0.05))

    @property
    def scaled_dims(self):
        return tuple(v * self.magnification for v in self.dims)

    def calibration_dims(self):
        d = self.scaled_dims
        s = self.scenario
        if s in (Scenario.TABLE1_QUANTILES, Scenario.CUSTOM_OMEGA):
            return DimensionQuad(*d)
        if s is Scenario.TABLE2_CCA_POWER:
            m1, m2, n = d
            if m1 != m2:
                raise InvalidDimensionError("the dependence construction needs M1 == M2")
            return DimensionQuad(m1, m2, m2, n)
        if s is Scenario.TABLE3_MANOVA:
            p, n0 = d
            return DimensionQuad(p, 2, 3, 3 * n0)
        p1, p2, n = d
        if p1 % 2:
            raise InvalidDimensionError("the linear-model design splits p1 in half; p1 must be even")
        return DimensionQuad(p2, p1 // 2, p1, n)

    def param_label(self):
        s = self.scenario
        if s is Scenario.TABLE2_CCA_POWER:
            return f"tau={self.params.get('tau', 0.0):g}"
        if s is Scenario.TABLE3_MANOVA:
            return self.params.get("pattern", "H0")
        if s is Scenario.TABLE4_LIN_MODEL:
            return self.params.get("combination", "size_b_d_a")
        return ""


def replication_rng(seed, r):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(r,))))


# -- one replication per scenario -------------------------------------------------


def _chol(config, p):
    if isinstance(config.covariance, Identity):
        return None
    return np.linalg.cholesky(covariance_matrix(config.covariance, p))


def _lambda_omega(config, rng):
    m1, n1, n2, n = config.scaled_dims
    x = sample_matrix(config.distribution, m1, n, rng)
    chol = _chol(config, m1)
    z = x if chol is None else chol @ x
    u1, u2 = random_isometry_pair(n, n1, n2, rng)
    return unified_omega_lambda1(z, u1, u2)


def _lambda_cca(config, rng):
    m1, m2, n = config.scaled_dims
    tau = float(config.params.get("tau", 0.0))
    x = sample_matrix(config.distribution, n, m1, rng)
    y = sample_matrix(config.distribution, n, m2, rng)
    z = math.sqrt(1.0 - tau) * x + math.sqrt(tau) * y
    return gamma_to_lambda(cca_gamma1(z, y))


def manova_means(pattern, p, tau1=None, tau2=1.0):
    """Group means ``(mu1, mu2, mu3)`` for the MANOVA alternatives."""
    if pattern == "H0":
        step = np.zeros(p)
    elif pattern in ("H1_1", "H1_1p"):
        t = tau1 if tau1 is not None else (0.2 if pattern == "H1_1" else 0.5)
        step = np.full(p, t)
    elif pattern == "H1_2":
        step = np.zeros(p)
        step[0] = tau2
    else:
        raise ValueError(f"unknown MANOVA pattern {pattern!r}; choose from {MANOVA_PATTERNS}")
    return [0.0 * step, step, 2.0 * step]


def _lambda_manova(config, rng):
    p, n0 = config.scaled_dims
    chol = _chol(config, p)
    means = manova_means(
        config.params.get("pattern", "H0"), p, config.params.get("tau1"), config.params.get("tau2", 1.0)
    )
    groups = []
    for mu in means:
        e = sample_matrix(config.distribution, n0, p, rng)
        groups.append((e if chol is None else e @ chol.T) + mu)
    return largest_relative_eigenvalue(manova_sscp(groups))


def linmodel_design(combination, p1, p2, rng):
    """``(C, B, Gamma)`` for a named combination; draws ``B2`` from ``rng`` when dense."""
    try:
        c_kind, b_kind, g_kind = LINMODEL_COMBINATIONS[combination]
    except KeyError:
        raise ValueError(f"unknown combination {combination!r}; choose from {sorted(LINMODEL_COMBINATIONS)}") from None
    g1 = p1 // 2
    if b_kind == "d":
        b2 = rng.choice(np.array([0.1, 0.2, 0.3]), size=(p1 - g1, p2))
    else:
        b2 = np.zeros((p1 - g1, p2))
        k = min(2, p1 - g1, p2)
        b2[np.arange(k), np.arange(k)] = 1.0
    b = np.vstack([np.zeros((g1, p2)), b2])
    eye, zero = np.eye(g1), np.zeros((g1, p1 - g1))
    c = np.hstack([zero, eye]) if c_kind == "a" else np.hstack([eye, zero])
    gamma = np.zeros((g1, p2)) if g_kind == "a" else b2
    return c, b, gamma


def _lambda_linmodel(config, rng):
    p1, p2, n = config.scaled_dims
    c, b, gamma = linmodel_design(config.params.get("combination", "size_b_d_a"), p1, p2, rng)
    x = sample_matrix(Distribution.UNIFORM_DESIGN, n, p1, rng)
    w = sample_matrix(config.distribution, n, p2, rng)
    chol = _chol(config, p2)
    z = w if chol is None else w @ chol.T
    y = x @ b + z
    return largest_relative_eigenvalue(linear_hypothesis_sscp(y, x, c, gamma))


_LAMBDA = {
    Scenario.TABLE1_QUANTILES: _lambda_omega,
    Scenario.CUSTOM_OMEGA: _lambda_omega,
    Scenario.TABLE2_CCA_POWER: _lambda_cca,
    Scenario.TABLE3_MANOVA: _lambda_manova,
    Scenario.TABLE4_LIN_MODEL: _lambda_linmodel,
}

_MATH_ERRORS = (np.linalg.LinAlgError, ArithmeticError, ValueError)


def replicate(config, r, params=None):
    """Rescaled statistic for replication ``r`` (NaN if the replication failed)."""
    params = params or log_rescale_params(config.calibration_dims())
    rng = replication_rng(config.seed, r)
    try:
        lam = _LAMBDA[config.scenario](config, rng)
    except _MATH_ERRORS:
        return math.nan
    if math.isinf(lam):
        return math.inf
    if lam <= 0.0:
        return -math.inf
    return rescale_statistic(lam, params)


def _run_chunk(config, start, stop):
    params = log_rescale_params(config.calibration_dims())
    return [replicate(config, r, params) for r in range(start, stop)]


def simulate_statistics(config, workers=1):
    """Array of rescaled statistics, one per replication, in replication order."""
    reps = config.replications
    workers = max(1, min(int(workers or 1), reps))
    if workers == 1:
        return np.array(_run_chunk(config, 0, reps))
    bounds = np.linspace(0, reps, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_chunk, config, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
        parts = [f.result() for f in futures]
    return np.array([v for part in parts for v in part])


# -- aggregation ----------------------------------------------------------------


@dataclass(frozen=True)
class SimRow:
    scenario: str
    dims: str
    magnification: int
    distribution: str
    tau_or_pattern: str
    estimate: float
    se: float
    replications: int
    failures: int
    nominal: float = None


@dataclass
class SimTable:
    rows: list
    metadata: dict

    CSV_FIELDS = tuple(SimRow.__dataclass_fields__)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("seed",) + self.CSV_FIELDS)
        for row in self.rows:
            values = [getattr(row, f) for f in self.CSV_FIELDS]
            writer.writerow([self.metadata["seed"]] + ["" if v is None else _fmt(v) for v in values])
        return buf.getvalue()

    def to_json(self):
        return json.dumps({"metadata": self.metadata, "rows": [asdict(r) for r in self.rows]}, indent=2) + "\n"


def _fmt(v):
    return f"{v:.6f}" if isinstance(v, float) else str(v)


def _binomial_se(p, n):
    return math.sqrt(p * (1.0 - p) / n) if n else math.nan


def summarize(config, stats):
    """Turn rescaled statistics into table rows.

    The quantile scenario yields the empirical CDF at each reported
    percentile; every other scenario yields the rejection proportion at
    ``c_alpha = tw1_quantile(1 - alpha)``. Failed replications are excluded
    from the estimate and counted separately.
    """
    ok = stats[~np.isnan(stats)]
    n_ok = ok.size
    failures = int(stats.size - n_ok)
    common = dict(
        scenario=config.scenario.value,
        dims="x".join(str(v) for v in config.dims),
        magnification=config.magnification,
        distribution=config.distribution.value,
        replications=config.replications,
        failures=failures,
    )
    if config.scenario is Scenario.TABLE1_QUANTILES:
        rows = []
        for pct, nominal in TABLE1_PERCENTILES:
            est = float(np.mean(ok <= pct)) if n_ok else math.nan
            rows.append(
                SimRow(tau_or_pattern=f"{pct:.2f}", estimate=est, se=_binomial_se(est, n_ok), nominal=nominal, **common)
            )
        return rows
    crit = tw1_quantile(1.0 - config.alpha)
    est = float(np.mean(ok > crit)) if n_ok else math.nan
    return [
        SimRow(
            tau_or_pattern=config.param_label(),
            estimate=est,
            se=_binomial_se(est, n_ok),
            nominal=config.alpha,
            **common,
        )
    ]


def run_scenario(config, workers=1):
    """Simulate one configuration and return its :class:`SimTable`."""
    return run_scenarios([config], workers=workers)


def run_scenarios(configs, workers=1):
    rows = []
    for config in configs:
        rows.extend(summarize(config, simulate_statistics(config, workers)))
    first = configs[0]
    metadata = {
        "seed": first.seed,
        "replications": first.replications,
        "configs": [_config_summary(c) for c in configs],
    }
    return SimTable(rows=rows, metadata=metadata)


def _config_summary(config):
    cov = config.covariance
    return {
        "scenario": config.scenario.value,
        "dims": list(config.dims),
        "magnification": config.magnification,
        "replications": config.replications,
        "seed": config.seed,
        "distribution": config.distribution.value,
        "covariance": type(cov).__name__ if isinstance(cov, CustomCovariance) else repr(cov),
        "params": {k: config.params[k] for k in sorted(config.params)},
    }


# -- presets ----------------------------------------------------------------------

PRESET_DIMS = {
    "table1": [(5, 8, 10, 30), (15, 8, 10, 50)],
    "table2": [(10, 10, 40)],
    "table3": [(5, 8), (8, 5)],
    "table4": [(10, 6, 25)],
}
PRESET_DISTRIBUTION = {"table1": "normal", "table2": "discrete", "table3": "gamma", "table4": "gamma"}
TABLE2_TAUS = (0.0, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4)


def preset_configs(name, magnification=1, replications=2000, seed=0, distribution=None, dims=None, taus=None):
    """Configurations reproducing one of the four tables at a given magnification."""
    if name not in PRESET_DIMS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESET_DIMS)}")
    dist = Distribution(distribution or PRESET_DISTRIBUTION[name])
    dims_list = [tuple(dims)] if dims else PRESET_DIMS[name]
    base = dict(magnification=magnification, replications=replications, seed=seed, distribution=dist)
    configs = []
    for d in dims_list:
        if name == "table1":
            configs.append(SimConfig(Scenario.TABLE1_QUANTILES, d, **base))
        elif name == "table2":
            for tau in taus or TABLE2_TAUS:
                configs.append(SimConfig(Scenario.TABLE2_CCA_POWER, d, params={"tau": float(tau)}, **base))
        elif name == "table3":
            for pattern in MANOVA_PATTERNS:
                configs.append(SimConfig(Scenario.TABLE3_MANOVA, d, covariance=MA1(0.2), params={"pattern": pattern}, **base))
        else:
            for combo in LINMODEL_COMBINATIONS:
                configs.append(
                    SimConfig(Scenario.TABLE4_LIN_MODEL, d, covariance=AR1Toeplitz(0.5), params={"combination": combo}, **base)
                )
    return configs


def default_workers():
    return os.cpu_count() or 1
