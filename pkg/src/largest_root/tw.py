"""Tracy-Widom distribution for real symmetric ensembles (``beta = 1``).

Values come from an embedded table of ``F1`` on ``[-10, 6]`` with step
0.01, generated by ``scripts/generate_tw1_table.py``. Between grid points
the CDF is a monotone (PCHIP) cubic; the quantile function is the PCHIP
interpolant of the swapped table, so both are strictly increasing.
"""

import csv
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

TAIL_FLOOR = 1e-12


@dataclass(frozen=True)
class TW1Table:
    abscissae: np.ndarray
    cdf: np.ndarray
    _cdf_interp: PchipInterpolator = field(init=False, repr=False, compare=False)
    _quantile_interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = np.asarray(self.abscissae, dtype=float)
        f = np.asarray(self.cdf, dtype=float)
        if s.ndim != 1 or s.shape != f.shape or s.size < 4:
            raise ValueError("table needs two equal-length columns with at least 4 rows")
        if not (np.all(np.diff(s) > 0) and np.all(np.diff(f) > 0)):
            raise ValueError("table abscissae and cdf must be strictly increasing")
        if f[0] <= 0.0 or f[-1] >= 1.0:
            raise ValueError("table cdf values must lie strictly inside (0, 1)")
        s.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "abscissae", s)
        object.__setattr__(self, "cdf", f)
        object.__setattr__(self, "_cdf_interp", PchipInterpolator(s, f, extrapolate=False))
        object.__setattr__(self, "_quantile_interp", PchipInterpolator(f, s, extrapolate=False))

    @classmethod
    def from_csv(cls, path):
        """Load a two-column (abscissa, cdf) CSV; a non-numeric first row is a header."""
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or not "".join(row).strip():
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if i == 0:
                        continue
                    raise ValueError(f"{path}: malformed row {i + 1}: {row!r}") from None
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1])

    def cdf_at(self, s):
        s = _finite_arg(s)
        lo, hi = self.abscissae[0], self.abscissae[-1]
        if s <= lo:
            return max(float(self.cdf[0]), TAIL_FLOOR)
        if s >= hi:
            return 1.0 - TAIL_FLOOR
        # the same floor and ceiling apply inside the grid so the CDF stays monotone
        return float(np.clip(self._cdf_interp(s), TAIL_FLOOR, 1.0 - TAIL_FLOOR))

    def quantile(self, p):
        if isinstance(p, bool) or not isinstance(p, (int, float, np.floating, np.integer)) or not 0.0 < p < 1.0:
            raise DomainError(f"probability must lie in (0, 1), got {p!r}")
        if p <= self.cdf[0]:
            return float(self.abscissae[0])
        if p >= self.cdf[-1]:
            return float(self.abscissae[-1])
        return float(self._quantile_interp(p))


def _finite_arg(s):
    s = float(s)
    if math.isnan(s):
        raise DomainError("Tracy-Widom argument is NaN")
    return s


def load_default_table():
    with resources.as_file(resources.files(__package__) / "data" / "tw1_table.csv") as path:
        return TW1Table.from_csv(path)


_default = None
_active = None


def default_table():
    global _default
    if _default is None:
        _default = load_default_table()
    return _default


def active_table():
    return _active if _active is not None else default_table()


def use_table(table):
    """Replace the table used by the module-level functions (``None`` restores the default)."""
    global _active
    _active = table


def tw1_cdf(s, table=None):
    """``P(TW1 <= s)``; ``+-inf`` map to 0 and 1 exactly."""
    s = _finite_arg(s)
    if math.isinf(s):
        return 0.0 if s < 0 else 1.0
    return (table or active_table()).cdf_at(s)


def tw1_quantile(p, table=None):
    return (table or active_table()).quantile(p)


def tw1_pvalue(s, table=None):
    """Upper-tail probability ``1 - F1(s)``."""
    return 1.0 - tw1_cdf(s, table)
