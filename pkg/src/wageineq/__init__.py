"""Wage-inequality decomposition and shock-response analysis toolkit."""

from .theil import (
    DecompositionResult,
    DomainError,
    GroupTerm,
    Partition,
    decompose,
    smoothed_distribution,
    theil_index,
)
from .panel import (
    AlignedData,
    GrowthSeries,
    InequalitySeries,
    PanelError,
    QuarterlyPanel,
    ShockSeries,
    align,
    build_distribution,
    compute_series,
    growth_rates,
    parse_shock_csv,
    parse_wage_csv,
    standardize,
)
from .varx import (
    Design,
    ImpulseResponse,
    RankError,
    TimeSeriesData,
    VarxError,
    VarxModel,
    VarxSpec,
    bootstrap_bands,
    build_design,
    dynamic_multipliers,
    estimate,
    simulate_varx,
    subsample,
)

__version__ = "0.1.0"
