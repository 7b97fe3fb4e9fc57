"""Zipf sampling, expected vocabulary size and Heaps-law fitting."""
from .corpus import RankFrequency, analyze_stream, tokenize
from .expectation import (
    ExpectationResult,
    Lower,
    Method,
    alternating_identity,
    asymptotic_expected_distinct,
    closed_form_expected_distinct,
    closed_form_tail_integral,
    exact_expected_distinct,
    integral_expected_distinct,
    integral_gap,
)
from .fit import FitResult, ReciprocityReport, fit_heaps, fit_zipf_alpha, reciprocity_report
from .numerics import (
    DomainError,
    NumericalFailure,
    QuadratureResult,
    RandomStream,
    integrate_interval,
    integrate_semi_infinite,
    lgamma,
    uniform01,
    zeta,
)
from .simulate import GrowthCurve, MCEstimate, monte_carlo_distinct, simulate_growth_curve
from .zipf import ZipfParams, pmf, sample_rank, sample_text, tail_mass_bounds

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ExpectationResult",
    "FitResult",
    "GrowthCurve",
    "Lower",
    "MCEstimate",
    "Method",
    "NumericalFailure",
    "QuadratureResult",
    "RandomStream",
    "RankFrequency",
    "ReciprocityReport",
    "ZipfParams",
    "alternating_identity",
    "analyze_stream",
    "asymptotic_expected_distinct",
    "closed_form_expected_distinct",
    "closed_form_tail_integral",
    "exact_expected_distinct",
    "fit_heaps",
    "fit_zipf_alpha",
    "integral_expected_distinct",
    "integral_gap",
    "integrate_interval",
    "integrate_semi_infinite",
    "lgamma",
    "monte_carlo_distinct",
    "pmf",
    "reciprocity_report",
    "sample_rank",
    "sample_text",
    "simulate_growth_curve",
    "tail_mass_bounds",
    "tokenize",
    "uniform01",
    "zeta",
]
