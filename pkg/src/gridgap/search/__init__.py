"""Restriction-rule construction and model-space search."""

from .masks import GRANGER_THRESHOLDS, build_restriction_mask, explainable_rate
from .sweep import (
    CandidateRecord,
    ScoringConfig,
    SearchResult,
    SearchSpace,
    parse_search_space,
    run_search,
    search_log_csv,
)

__all__ = [
    "GRANGER_THRESHOLDS",
    "CandidateRecord",
    "ScoringConfig",
    "SearchResult",
    "SearchSpace",
    "build_restriction_mask",
    "explainable_rate",
    "parse_search_space",
    "run_search",
    "search_log_csv",
]
