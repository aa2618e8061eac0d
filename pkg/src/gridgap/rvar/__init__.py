"""Restricted vector-autoregression engine."""

from .adf import AdfResult, adf_stat_fixed_lag, adf_test, default_max_lag, mackinnon_pvalue
from .analysis import CumulativeIrf, FevdResult, IrfResult, fevd, irf, irf_cumulative
from .cointegration import CointegrationPair, CointegrationResult, engle_granger
from .diagnostics import (
    DiagnosticsReport,
    InfoCriteria,
    LjungBoxResult,
    StabilityResult,
    VariableDiagnostics,
    durbin_watson,
    information_criteria,
    ljung_box,
    ljung_box_statistic,
    run_diagnostics,
    sample_autocorr,
    stability_test,
)
from .granger import GrangerResult, granger_wald
from .model import (
    RVarModel,
    fit_restricted_var,
    load_model,
    residuals,
    save_model,
    simulate_var,
    zero_mask,
)

__all__ = [
    "AdfResult",
    "CointegrationPair",
    "CointegrationResult",
    "CumulativeIrf",
    "DiagnosticsReport",
    "FevdResult",
    "GrangerResult",
    "InfoCriteria",
    "IrfResult",
    "LjungBoxResult",
    "RVarModel",
    "StabilityResult",
    "VariableDiagnostics",
    "adf_stat_fixed_lag",
    "adf_test",
    "default_max_lag",
    "durbin_watson",
    "engle_granger",
    "fevd",
    "fit_restricted_var",
    "granger_wald",
    "information_criteria",
    "irf",
    "irf_cumulative",
    "ljung_box",
    "ljung_box_statistic",
    "load_model",
    "mackinnon_pvalue",
    "residuals",
    "run_diagnostics",
    "sample_autocorr",
    "save_model",
    "simulate_var",
    "stability_test",
    "zero_mask",
]
