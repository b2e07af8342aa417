"""Two-piece normal distribution toolkit.

Evaluation, moments, sampling and fitting of the two-piece normal, its
Fechner-family and split (skewed symmetric) generalizations, and
density-forecast fan charts.
"""
from .core import MomentSummary, TwoPieceNormal
from .errors import (
    DegenerateData,
    DomainError,
    InfeasibleSkewness,
    InvalidParameters,
    NoPositiveScales,
    TwoPieceError,
)
from .estimation import (
    FitResult,
    SampleStats,
    SymmetryTest,
    fit_ml,
    fit_moments,
    log_likelihood,
    symmetry_test,
)
from .families import FechnerFamily, SplitDistribution, SymmetricBase, split_normal, split_t
from .fanchart import BandTable, FanChart, HorizonForecast, band, build_bandtable, interval_probability, render

__version__ = "0.1.0"
