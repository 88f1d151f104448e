"""Result record shared by the hypothesis tests."""

import math
from dataclasses import dataclass
from enum import Enum

from .calibration import log_rescale_params, rescale_statistic
from .errors import DomainError
from .tw import tw1_pvalue, tw1_quantile


class Method(Enum):
    CCA = "CCA"
    MANOVA = "MANOVA"
    LIN_MODEL_LINEAR = "LinModelLinear"
    LIN_MODEL_INTRA_SUBJECT = "LinModelIntraSubject"
    UNIFIED_OMEGA = "UnifiedOmega"


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # keep pytest from collecting this class

    lambda1: float
    rescaled: float
    p_value: float
    alpha: float
    reject: bool
    dims: object
    method: Method
    saturated: bool = False

    def to_dict(self):
        """JSON-ready dict; non-finite floats become ``None``."""
        return {
            "method": self.method.value,
            "lambda1": _finite_or_none(self.lambda1),
            "rescaled": _finite_or_none(self.rescaled),
            "p_value": self.p_value,
            "alpha": self.alpha,
            "reject": self.reject,
            "saturated": self.saturated,
            "dims": dict(zip(("m1", "n1", "n2", "n"), self.dims.as_tuple())),
        }


def _finite_or_none(x):
    return x if math.isfinite(x) else None


def check_alpha(alpha):
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return float(alpha)


def critical_value(alpha):
    return tw1_quantile(1.0 - alpha)


def build_report(lambda1, dims, alpha, method):
    """Calibrate ``lambda1`` with the log-transform route and apply the decision rule.

    ``lambda1 = 0`` maps to a ``-inf`` rescaled value (p-value 1);
    ``lambda1 = inf`` is a saturated statistic (p-value 0, reject).
    """
    alpha = check_alpha(alpha)
    params = log_rescale_params(dims)
    if math.isinf(lambda1):
        return TestReport(math.inf, math.inf, 0.0, alpha, True, dims, method, saturated=True)
    if lambda1 <= 0.0:
        return TestReport(0.0, -math.inf, 1.0, alpha, False, dims, method)
    rescaled = rescale_statistic(lambda1, params)
    return TestReport(
        lambda1=lambda1,
        rescaled=rescaled,
        p_value=tw1_pvalue(rescaled),
        alpha=alpha,
        reject=rescaled > critical_value(alpha),
        dims=dims,
        method=method,
    )
