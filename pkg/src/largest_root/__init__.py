"""Largest-eigenvalue statistics calibrated by the Tracy-Widom law."""

from .calibration import (
    DimensionQuad,
    ExactCenterParams,
    LogRescaleParams,
    centered_f_lambda1,
    exact_center_params,
    log_rescale_params,
    rescale_exact,
    rescale_statistic,
)
from .cca import cca_gamma1, cca_independence_test
from .linalg_core import (
    DataMatrix,
    Orientation,
    SymmetricPair,
    centering_matrix,
    column_space_projection,
    largest_relative_eigenvalue,
    relative_eigenvalues,
    unified_omega_lambda1,
)
from .linmodel import intra_subject_test, least_squares, linear_hypothesis_sscp, linear_hypothesis_test
from .manova import manova_block_oracle, manova_sscp, manova_test
from .report import Method, TestReport
from .tw import TW1Table, tw1_cdf, tw1_pvalue, tw1_quantile, use_table

__version__ = "0.1.0"
