"""Quarterly wage-quantile panel ingestion and inequality series construction.

A panel holds, for every quarter, a complete 3x3 grid of weekly wages keyed
by race (Asian, Black, White) and by point in the wage distribution (first
decile D1, third quartile Q3, ninth decile D9). Each quarter's nine wages
form one distribution; partitioning it by quantile point makes the within
term of the Theil decomposition the racial gap inside each wage group and
the between term the gap across wage groups.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .theil import DomainError, Partition, decompose

RACES = ("Asian", "Black", "White")
QUANTILES = ("D1", "Q3", "D9")
# canonical 9-cell order: quantile-major, race alphabetical
CELLS = tuple((q, r) for q in QUANTILES for r in RACES)

SERIES_HEADER = (
    "quarter",
    "total",
    "within_d1",
    "within_q3",
    "within_d9",
    "between",
    "within_share",
    "between_share",
)

__all__ = [
    "RACES",
    "QUANTILES",
    "CELLS",
    "PanelError",
    "QuarterlyPanel",
    "ShockSeries",
    "AlignedData",
    "InequalitySeries",
    "GrowthSeries",
    "parse_quarter",
    "format_quarter",
    "parse_wage_csv",
    "parse_shock_csv",
    "align",
    "build_distribution",
    "compute_series",
    "growth_rates",
    "standardize",
    "write_wage_csv",
    "write_shock_csv",
    "write_series_csv",
    "read_series_csv",
    "write_growth_csv",
    "read_growth_csv",
]


class PanelError(ValueError):
    """Raised for malformed or incomplete panel/shock input."""


def parse_quarter(label: str) -> int:
    """Turn a 'YYYYQn' label into a sortable integer index (year*4 + n-1)."""
    text = label.strip()
    if len(text) != 6 or text[4] not in "Qq":
        raise PanelError(f"malformed quarter label {label!r} (expected YYYYQn)")
    try:
        year = int(text[:4])
        q = int(text[5])
    except ValueError:
        raise PanelError(f"malformed quarter label {label!r} (expected YYYYQn)") from None
    if not 1 <= q <= 4:
        raise PanelError(f"quarter number out of range in {label!r}")
    return year * 4 + (q - 1)


def format_quarter(index: int) -> str:
    return f"{index // 4}Q{index % 4 + 1}"


@dataclass(frozen=True)
class QuarterlyPanel:
    """Validated wage panel: contiguous quarters, complete positive 3x3 grids.

    ``wages`` has shape (T, 9) with columns in canonical CELLS order.
    """

    quarters: tuple  # of 'YYYYQn' labels, strictly increasing, contiguous
    wages: np.ndarray = field(repr=False)

    def __post_init__(self):
        idx = [parse_quarter(q) for q in self.quarters]
        if len(idx) == 0:
            raise PanelError("panel has no quarters")
        for a, b, qa in zip(idx, idx[1:], self.quarters):
            if b != a + 1:
                raise PanelError(f"gap or disorder in quarters after {qa}")
        if self.wages.shape != (len(idx), 9):
            raise PanelError(f"wage grid shape {self.wages.shape} does not match {len(idx)} quarters")
        if not np.all(np.isfinite(self.wages)) or np.any(self.wages <= 0):
            raise PanelError("panel wages must be positive and finite")
        # monotone D1 <= Q3 <= D9 per race
        for r, race in enumerate(RACES):
            d1, q3, d9 = self.wages[:, r], self.wages[:, 3 + r], self.wages[:, 6 + r]
            if np.any(d1 > q3) or np.any(q3 > d9):
                t = int(np.argmax((d1 > q3) | (q3 > d9)))
                raise PanelError(f"quantile wages out of order for {race} in {self.quarters[t]}")

    @property
    def n_quarters(self) -> int:
        return len(self.quarters)

    def wage(self, quarter: str, race: str, quantile: str) -> float:
        t = self.quarters.index(quarter)
        return float(self.wages[t, CELLS.index((quantile, race))])

    def restrict(self, quarters) -> "QuarterlyPanel":
        """Contiguous sub-panel for the given quarter labels."""
        pos = [self.quarters.index(q) for q in quarters]
        return QuarterlyPanel(tuple(quarters), self.wages[pos])


@dataclass(frozen=True)
class ShockSeries:
    """Exogenous shock values, one per quarter (negative = accommodative)."""

    quarters: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        idx = [parse_quarter(q) for q in self.quarters]
        for a, b, qa in zip(idx, idx[1:], self.quarters):
            if b != a + 1:
                raise PanelError(f"gap or disorder in quarters after {qa}")
        if self.values.shape != (len(idx),):
            raise PanelError("shock values do not match quarters")
        if not np.all(np.isfinite(self.values)):
            raise PanelError("shock values must be finite")

    def restrict(self, quarters) -> "ShockSeries":
        pos = [self.quarters.index(q) for q in quarters]
        return ShockSeries(tuple(quarters), self.values[pos])


def _open_text(source):
    """Accept a path, bytes, str, or file-like object and yield text lines."""
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str) and "\n" not in source and "," not in source:
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, str):
        return io.StringIO(source)
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data)
    return open(source, "r", encoding="utf-8", newline="")


def parse_wage_csv(source) -> QuarterlyPanel:
    """Parse and validate a wage CSV (header: quarter,race,quantile,wage).

    Rows may arrive in any order. Raises PanelError with the offending row
    number for duplicates, missing cells, gaps, or non-positive wages.
    """
    cells = {}
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["quarter", "race", "quantile", "wage"]:
            raise PanelError(f"bad wage CSV header: {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise PanelError(f"row {lineno}: expected 4 fields, got {len(row)}")
            quarter, race, quantile, wage_text = (f.strip() for f in row)
            qidx = parse_quarter(quarter)
            if race not in RACES:
                raise PanelError(f"row {lineno}: unknown race {race!r}")
            if quantile not in QUANTILES:
                raise PanelError(f"row {lineno}: unknown quantile {quantile!r}")
            try:
                wage = float(wage_text)
            except ValueError:
                raise PanelError(f"row {lineno}: non-numeric wage {wage_text!r}") from None
            if not np.isfinite(wage) or wage <= 0:
                raise PanelError(f"row {lineno}: wage must be positive and finite, got {wage_text}")
            key = (qidx, quantile, race)
            if key in cells:
                raise PanelError(f"row {lineno}: duplicate cell ({quarter}, {race}, {quantile})")
            cells[key] = wage
    if not cells:
        raise PanelError("wage CSV contains no data rows")
    qindices = sorted({k[0] for k in cells})
    for a, b in zip(qindices, qindices[1:]):
        if b != a + 1:
            raise PanelError(f"gap in quarters between {format_quarter(a)} and {format_quarter(b)}")
    wages = np.empty((len(qindices), 9))
    for t, qidx in enumerate(qindices):
        for c, (quantile, race) in enumerate(CELLS):
            key = (qidx, quantile, race)
            if key not in cells:
                raise PanelError(f"missing cell ({format_quarter(qidx)}, {race}, {quantile})")
            wages[t, c] = cells[key]
    return QuarterlyPanel(tuple(format_quarter(i) for i in qindices), wages)


def parse_shock_csv(source) -> ShockSeries:
    """Parse a shock CSV (header: quarter,shock), one value per quarter."""
    seen = {}
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["quarter", "shock"]:
            raise PanelError(f"bad shock CSV header: {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise PanelError(f"row {lineno}: expected 2 fields, got {len(row)}")
            quarter, value_text = (f.strip() for f in row)
            qidx = parse_quarter(quarter)
            if qidx in seen:
                raise PanelError(f"row {lineno}: duplicate quarter {quarter}")
            try:
                value = float(value_text)
            except ValueError:
                raise PanelError(f"row {lineno}: non-numeric shock {value_text!r}") from None
            if not np.isfinite(value):
                raise PanelError(f"row {lineno}: shock must be finite")
            seen[qidx] = value
    if not seen:
        raise PanelError("shock CSV contains no data rows")
    qindices = sorted(seen)
    for a, b in zip(qindices, qindices[1:]):
        if b != a + 1:
            raise PanelError(f"gap in quarters between {format_quarter(a)} and {format_quarter(b)}")
    values = np.array([seen[i] for i in qindices])
    return ShockSeries(tuple(format_quarter(i) for i in qindices), values)


@dataclass(frozen=True)
class AlignedData:
    """Panel and shock series restricted to their common quarter range."""

    panel: QuarterlyPanel
    shocks: ShockSeries

    @property
    def quarters(self) -> tuple:
        return self.panel.quarters


def align(panel: QuarterlyPanel, shocks: ShockSeries, min_quarters: int = 20) -> AlignedData:
    """Restrict both inputs to their intersection of quarters.

    The default lag structure needs slack beyond the lags themselves, so an
    intersection shorter than ``min_quarters`` is rejected.
    """
    common = [q for q in panel.quarters if q in set(shocks.quarters)]
    if len(common) < min_quarters:
        raise PanelError(
            f"panel and shock series share only {len(common)} quarters; need at least {min_quarters}"
        )
    return AlignedData(panel.restrict(common), shocks.restrict(common))


def build_distribution(panel: QuarterlyPanel, quarter: str):
    """One quarter's 9-wage distribution and its partition by quantile point.

    Canonical order is quantile-major (D1, Q3, D9) with races alphabetical
    inside each group, so the partition groups are the three quantile points.
    """
    if quarter not in panel.quarters:
        raise PanelError(f"quarter {quarter} not in panel")
    t = panel.quarters.index(quarter)
    part = Partition([q for q, _ in CELLS])
    return panel.wages[t].copy(), part


@dataclass(frozen=True)
class InequalitySeries:
    """Per-quarter Theil decomposition of the panel's 9-wage distributions.

    ``within`` has one column per quantile point (D1, Q3, D9) holding the
    weighted contribution of racial inequality inside that group. Quarters
    with a degenerate total of 0 report within_share 0, between_share 1.
    """

    quarters: tuple
    total: np.ndarray = field(repr=False)
    within: np.ndarray = field(repr=False)  # (T, 3) columns D1, Q3, D9
    between: np.ndarray = field(repr=False)
    within_share: np.ndarray = field(repr=False)
    between_share: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)  # True where total == 0


def compute_series(panel: QuarterlyPanel) -> InequalitySeries:
    """Decompose every quarter of the panel into within/between components."""
    T = panel.n_quarters
    total = np.empty(T)
    within = np.empty((T, 3))
    between = np.empty(T)
    within_share = np.empty(T)
    between_share = np.empty(T)
    degenerate = np.zeros(T, dtype=bool)
    for t, quarter in enumerate(panel.quarters):
        dist, part = build_distribution(panel, quarter)
        res = decompose(dist, part)
        total[t] = res.total
        contrib = {g.group: g.contribution for g in res.groups}
        within[t] = [contrib[q] for q in QUANTILES]
        between[t] = res.between
        if res.total == 0.0:
            degenerate[t] = True
            within_share[t] = 0.0
            between_share[t] = 1.0
        else:
            within_share[t] = within[t].sum() / res.total
            between_share[t] = res.between / res.total
    return InequalitySeries(
        panel.quarters, total, within, between, within_share, between_share, degenerate
    )


@dataclass(frozen=True)
class GrowthSeries:
    """Wage growth per (race, quantile) cell.

    ``growth`` has shape (len(quarters), 9) in canonical CELLS order;
    quarters start once the lag window is available.
    """

    quarters: tuple
    growth: np.ndarray = field(repr=False)
    method: str = "yoy"


def growth_rates(panel: QuarterlyPanel, method: str = "yoy") -> GrowthSeries:
    """Per-cell wage growth rates.

    'yoy' (default) is the year-over-year percent change
    100*(w_t - w_{t-4})/w_{t-4}, first defined at the fifth quarter; it
    suppresses quarterly seasonality. 'log_qoq' is the quarter-over-quarter
    log difference in percent, first defined at the second quarter.
    """
    if method == "yoy":
        lag = 4
    elif method == "log_qoq":
        lag = 1
    else:
        raise ValueError(f"unknown growth method {method!r}")
    if panel.n_quarters <= lag:
        raise PanelError(f"panel spans {panel.n_quarters} quarters; need more than {lag}")
    w = panel.wages
    if method == "yoy":
        growth = 100.0 * (w[lag:] - w[:-lag]) / w[:-lag]
    else:
        growth = 100.0 * np.log(w[lag:] / w[:-lag])
    return GrowthSeries(panel.quarters[lag:], growth, method)


def standardize(series) -> np.ndarray:
    """Scale a series to mean 0 and sample (ddof=1) standard deviation 1."""
    arr = np.asarray(series, dtype=float)
    if arr.size < 2:
        raise DomainError("standardize needs at least 2 observations")
    sd = arr.std(ddof=1)
    if sd == 0.0:
        raise DomainError("cannot standardize a zero-variance series")
    return (arr - arr.mean()) / sd


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def write_wage_csv(panel: QuarterlyPanel, path) -> None:
    """Write a panel in the documented wage CSV input format."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", "race", "quantile", "wage"])
        for t, quarter in enumerate(panel.quarters):
            for c, (quantile, race) in enumerate(CELLS):
                writer.writerow([quarter, race, quantile, _fmt(panel.wages[t, c])])


def write_shock_csv(shocks: ShockSeries, path) -> None:
    """Write a shock series in the documented shock CSV input format."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", "shock"])
        for t, quarter in enumerate(shocks.quarters):
            writer.writerow([quarter, _fmt(shocks.values[t])])


def write_series_csv(series: InequalitySeries, path) -> None:
    """Write the decomposition series in the documented output format."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SERIES_HEADER)
        for t, quarter in enumerate(series.quarters):
            writer.writerow(
                [quarter]
                + [
                    _fmt(v)
                    for v in (
                        series.total[t],
                        series.within[t, 0],
                        series.within[t, 1],
                        series.within[t, 2],
                        series.between[t],
                        series.within_share[t],
                        series.between_share[t],
                    )
                ]
            )


def read_series_csv(source) -> InequalitySeries:
    """Read a decomposition series written by write_series_csv."""
    rows = []
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != SERIES_HEADER:
            raise PanelError(f"bad series CSV header: {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(SERIES_HEADER):
                raise PanelError(f"row {lineno}: expected {len(SERIES_HEADER)} fields")
            parse_quarter(row[0])
            try:
                rows.append((row[0].strip(), [float(v) for v in row[1:]]))
            except ValueError:
                raise PanelError(f"row {lineno}: non-numeric value") from None
    if not rows:
        raise PanelError("series CSV contains no data rows")
    quarters = tuple(q for q, _ in rows)
    vals = np.array([v for _, v in rows])
    total = vals[:, 0]
    return InequalitySeries(
        quarters=quarters,
        total=total,
        within=vals[:, 1:4],
        between=vals[:, 4],
        within_share=vals[:, 5],
        between_share=vals[:, 6],
        degenerate=total == 0.0,
    )


def write_growth_csv(series: GrowthSeries, path) -> None:
    """Write growth rates as quarter,race,quantile,growth_pct rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", "race", "quantile", "growth_pct"])
        for t, quarter in enumerate(series.quarters):
            for c, (quantile, race) in enumerate(CELLS):
                writer.writerow([quarter, race, quantile, _fmt(series.growth[t, c])])


def read_growth_csv(source) -> GrowthSeries:
    """Read a growth CSV written by write_growth_csv."""
    cells = {}
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["quarter", "race", "quantile", "growth_pct"]:
            raise PanelError(f"bad growth CSV header: {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise PanelError(f"row {lineno}: expected 4 fields")
            quarter, race, quantile, value = (f.strip() for f in row)
            qidx = parse_quarter(quarter)
            if race not in RACES or quantile not in QUANTILES:
                raise PanelError(f"row {lineno}: unknown cell ({race}, {quantile})")
            try:
                cells[(qidx, quantile, race)] = float(value)
            except ValueError:
                raise PanelError(f"row {lineno}: non-numeric growth") from None
    qindices = sorted({k[0] for k in cells})
    growth = np.empty((len(qindices), 9))
    for t, qidx in enumerate(qindices):
        for c, (quantile, race) in enumerate(CELLS):
            key = (qidx, quantile, race)
            if key not in cells:
                raise PanelError(f"missing growth cell ({format_quarter(qidx)}, {race}, {quantile})")
            growth[t, c] = cells[key]
    return GrowthSeries(tuple(format_quarter(i) for i in qindices), growth)
