"""VARX estimation and impulse responses to an exogenous shock series.

The model for a k-vector X_t driven by a scalar exogenous series d_t is

    X_t = A0 + B_1 X_{t-1} + ... + B_p X_{t-p}
             + C_0 d_t + C_1 d_{t-1} + ... + C_q d_{t-q} + e_t

estimated equation by equation with ordinary least squares (exact for
multivariate least squares since every equation shares the regressors).
Impulse responses trace the effect of a one-time impulse in d_t with
future shocks held at zero; bands come from a recursive residual
bootstrap that keeps the exogenous path fixed at its observed values.
"""

from dataclasses import dataclass, field

import numpy as np

from .panel import parse_quarter

__all__ = [
    "VarxError",
    "RankError",
    "VarxSpec",
    "TimeSeriesData",
    "Design",
    "VarxModel",
    "ImpulseResponse",
    "build_design",
    "estimate",
    "dynamic_multipliers",
    "bootstrap_bands",
    "subsample",
    "simulate_varx",
    "companion_spectral_radius",
    "write_irf_csv",
    "read_irf_csv",
]


class VarxError(ValueError):
    """Raised for invalid model specifications or insufficient data."""


class RankError(VarxError):
    """Raised when the design matrix is numerically rank deficient."""


@dataclass(frozen=True)
class VarxSpec:
    """Lag structure, horizon, shock scaling, and bootstrap settings.

    ``shock_size`` defaults to -0.25: a 25 basis point rate cut under the
    convention that negative shocks are accommodative.
    """

    endogenous_lags: int = 1
    exogenous_lags: int = 4
    contemporaneous_shock: bool = True
    horizon: int = 10
    shock_size: float = -0.25
    bootstrap_reps: int = 2000
    seed: int = 0
    band_method: str = "sd"  # "sd" (+/- 1 bootstrap SD) or "percentile"

    def __post_init__(self):
        if self.endogenous_lags < 1:
            raise VarxError("endogenous_lags must be >= 1")
        if self.exogenous_lags < 0:
            raise VarxError("exogenous_lags must be >= 0")
        if self.horizon < 1:
            raise VarxError("horizon must be >= 1")
        if self.bootstrap_reps < 100:
            raise VarxError("bootstrap_reps must be >= 100")
        if self.band_method not in ("sd", "percentile"):
            raise VarxError(f"unknown band_method {self.band_method!r}")


@dataclass(frozen=True)
class TimeSeriesData:
    """Aligned endogenous series X (T, k) and exogenous series d (T,)."""

    quarters: tuple
    X: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    names: tuple = ()

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        if X.shape[0] == 1 and len(self.quarters) > 1:
            X = X.T
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float))
        if self.X.shape[0] != len(self.quarters) or self.d.shape != (len(self.quarters),):
            raise VarxError("quarters, X, and d lengths disagree")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(self.X.shape[1])))
        elif len(self.names) != self.X.shape[1]:
            raise VarxError("one name per endogenous variable required")

    @property
    def k(self) -> int:
        return self.X.shape[1]

    @property
    def T(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True)
class Design:
    """Stacked regression dataset for equation-by-equation least squares.

    Row t of ``Z`` holds [1, X_{t-1..t-p}, d_t (if contemporaneous),
    d_{t-1..t-q}]; ``offset`` rows were dropped from the start of the data
    to make all lags available.
    """

    data: TimeSeriesData
    spec: VarxSpec
    Z: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    columns: tuple
    offset: int

    @property
    def T_eff(self) -> int:
        return self.Z.shape[0]

    @property
    def m(self) -> int:
        return self.Z.shape[1]


def build_design(data: TimeSeriesData, spec: VarxSpec) -> Design:
    """Build the lagged regressor matrix and response block.

    Rows whose lags reach before the sample start are dropped, so the
    effective sample has T - max(p, q) rows (one fewer exogenous lag is
    needed when the contemporaneous term is excluded, but the trim is kept
    at max(p, q) so both variants share the same estimation sample).
    """
    p, q = spec.endogenous_lags, spec.exogenous_lags
    k, T = data.k, data.T
    offset = max(p, q)
    T_eff = T - offset
    if T_eff < k * p + q + 2:
        raise VarxError(
            f"insufficient observations: {T} quarters leave {T_eff} usable rows, "
            f"need at least {k * p + q + 2}"
        )
    columns = ["const"]
    blocks = [np.ones((T_eff, 1))]
    for j in range(1, p + 1):
        blocks.append(data.X[offset - j : T - j])
        columns.extend(f"{name}.lag{j}" for name in data.names)
    if spec.contemporaneous_shock:
        blocks.append(data.d[offset:T, None])
        columns.append("shock.lag0")
    for j in range(1, q + 1):
        blocks.append(data.d[offset - j : T - j, None])
        columns.append(f"shock.lag{j}")
    return Design(
        data=data,
        spec=spec,
        Z=np.hstack(blocks),
        Y=data.X[offset:].copy(),
        columns=tuple(columns),
        offset=offset,
    )


@dataclass(frozen=True)
class VarxModel:
    """Estimated coefficients, residuals, and residual covariance.

    ``endo_coefs[j-1]`` is the (k, k) matrix on X_{t-j}; ``exog_coefs``
    has q+1 rows, row j the k-vector on d_{t-j} (row 0 is zero when the
    contemporaneous term is excluded).
    """

    names: tuple
    endogenous_lags: int
    exogenous_lags: int
    contemporaneous_shock: bool
    intercept: np.ndarray = field(repr=False)
    endo_coefs: np.ndarray = field(repr=False)  # (p, k, k)
    exog_coefs: np.ndarray = field(repr=False)  # (q+1, k)
    residuals: np.ndarray = field(repr=False)  # (T_eff, k)
    sigma: np.ndarray = field(repr=False)  # (k, k)
    stderr: np.ndarray = field(repr=False)  # (m, k), per-equation OLS SEs

    @property
    def k(self) -> int:
        return len(self.names)


def estimate(design: Design) -> VarxModel:
    """Least-squares fit of every equation on the shared regressor matrix.

    Solves through a QR factorization rather than the normal equations;
    near-collinear inequality series make the design ill-conditioned. Rank
    deficiency is detected from the R diagonal and reported with the first
    dependent column.
    """
    Z, Y = design.Z, design.Y
    T_eff, m = Z.shape
    if T_eff < m + 10:
        raise VarxError(
            f"effective sample of {T_eff} rows is below the floor of {m + 10} "
            f"for {m} regressors"
        )
    Q, R = np.linalg.qr(Z)
    col_norms = np.linalg.norm(Z, axis=0)
    tol = np.finfo(float).eps * col_norms.max() * T_eff
    rdiag = np.abs(np.diag(R))
    if np.any(rdiag < tol):
        bad = int(np.argmax(rdiag < tol))
        raise RankError(
            f"design matrix is rank deficient at column {design.columns[bad]!r}"
        )
    coefs = np.linalg.solve(R, Q.T @ Y)  # (m, k)
    fitted = Z @ coefs
    resid = Y - fitted
    sigma = resid.T @ resid / (T_eff - m)
    Rinv = np.linalg.inv(R)
    ztz_inv_diag = np.sum(Rinv**2, axis=1)
    stderr = np.sqrt(np.outer(ztz_inv_diag, np.diag(sigma)))

    spec = design.spec
    p, q, k = spec.endogenous_lags, spec.exogenous_lags, design.data.k
    intercept = coefs[0]
    endo = np.empty((p, k, k))
    for j in range(p):
        # column i of the block is equation i; transpose to row-equation form
        endo[j] = coefs[1 + j * k : 1 + (j + 1) * k].T
    exog = np.zeros((q + 1, k))
    pos = 1 + p * k
    if spec.contemporaneous_shock:
        exog[0] = coefs[pos]
        pos += 1
    for j in range(1, q + 1):
        exog[j] = coefs[pos]
        pos += 1
    return VarxModel(
        names=design.data.names,
        endogenous_lags=p,
        exogenous_lags=q,
        contemporaneous_shock=spec.contemporaneous_shock,
        intercept=intercept,
        endo_coefs=endo,
        exog_coefs=exog,
        residuals=resid,
        sigma=sigma,
        stderr=stderr,
    )


@dataclass(frozen=True)
class ImpulseResponse:
    """Responses at horizons 0..H per variable, with lower/upper bands.

    When inputs were standardized the units are standard deviations. For a
    points-only response the bands coincide with the point estimates.
    """

    names: tuple
    point: np.ndarray = field(repr=False)  # (H+1, k)
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    @property
    def horizon(self) -> int:
        return self.point.shape[0] - 1


def dynamic_multipliers(model: VarxModel, spec: VarxSpec) -> ImpulseResponse:
    """Response to a one-time shock of size spec.shock_size, future shocks 0.

    The recursion feeds the shock through the exogenous coefficients and
    propagates it with the autoregressive matrices:
    psi_0 = C_0 s, psi_h = sum_j B_j psi_{h-j} + C_h s (C_h = 0 past q).
    """
    p, q = model.endogenous_lags, model.exogenous_lags
    H, s = spec.horizon, spec.shock_size
    psi = np.zeros((H + 1, model.k))
    psi[0] = model.exog_coefs[0] * s
    for h in range(1, H + 1):
        acc = np.zeros(model.k)
        for j in range(1, min(h, p) + 1):
            acc += model.endo_coefs[j - 1] @ psi[h - j]
        if h <= q:
            acc += model.exog_coefs[h] * s
        psi[h] = acc
    return ImpulseResponse(model.names, psi, psi.copy(), psi.copy())


def _regenerate(model: VarxModel, design: Design, resid_rows: np.ndarray) -> TimeSeriesData:
    """Rebuild the endogenous series recursively from resampled residuals.

    Initial lags and the whole exogenous path stay at their observed
    values; d is exogenous by assumption and is not resampled.
    """
    data, spec = design.data, design.spec
    p, q = spec.endogenous_lags, spec.exogenous_lags
    Xb = data.X.copy()
    d = data.d
    for i, t in enumerate(range(design.offset, data.T)):
        x = model.intercept + model.residuals[resid_rows[i]]
        for j in range(1, p + 1):
            x = x + model.endo_coefs[j - 1] @ Xb[t - j]
        if spec.contemporaneous_shock:
            x = x + model.exog_coefs[0] * d[t]
        for j in range(1, q + 1):
            x = x + model.exog_coefs[j] * d[t - j]
        Xb[t] = x
    return TimeSeriesData(data.quarters, Xb, d, data.names)


def bootstrap_bands(model: VarxModel, design: Design, spec: VarxSpec) -> ImpulseResponse:
    """Recursive residual bootstrap bands around the point multipliers.

    Each replication resamples residual rows i.i.d. with replacement,
    regenerates the sample, re-estimates, and recomputes the multipliers.
    Replication r draws from a stream derived from (seed, r), so results
    are identical regardless of evaluation order. The default bands are
    the point estimate +/- 1 bootstrap standard deviation; the percentile
    method uses the 15.87/84.13 percentiles (clipped to contain the
    point). Replications whose re-estimation fails are dropped; more than
    5% failures aborts.
    """
    point = dynamic_multipliers(model, spec).point
    T_eff = design.T_eff
    draws = []
    failures = 0
    for rep in range(spec.bootstrap_reps):
        rng = np.random.default_rng((spec.seed, rep))
        rows = rng.integers(0, T_eff, size=T_eff)
        try:
            boot_data = _regenerate(model, design, rows)
            boot_model = estimate(build_design(boot_data, spec))
            draws.append(dynamic_multipliers(boot_model, spec).point)
        except (VarxError, np.linalg.LinAlgError):
            failures += 1
    if failures > 0.05 * spec.bootstrap_reps:
        raise VarxError(
            f"bootstrap aborted: {failures} of {spec.bootstrap_reps} replications "
            f"failed re-estimation"
        )
    stack = np.array(draws)
    if spec.band_method == "sd":
        sd = stack.std(axis=0, ddof=1)
        lower, upper = point - sd, point + sd
    else:
        lower = np.minimum(np.percentile(stack, 15.87, axis=0), point)
        upper = np.maximum(np.percentile(stack, 84.13, axis=0), point)
    return ImpulseResponse(model.names, point, lower, upper)


def subsample(data: TimeSeriesData, start: str, end: str) -> TimeSeriesData:
    """Contiguous restriction of the data to [start, end] by quarter label.

    Lag windows are recomputed inside the subsample by the subsequent
    build_design, so no observations leak across the boundary.
    """
    lo, hi = parse_quarter(start), parse_quarter(end)
    if lo > hi:
        raise VarxError(f"subsample start {start} is after end {end}")
    keep = [t for t, quarter in enumerate(data.quarters) if lo <= parse_quarter(quarter) <= hi]
    if not keep:
        raise VarxError(f"subsample [{start}, {end}] does not intersect the data")
    sl = slice(keep[0], keep[-1] + 1)
    return TimeSeriesData(data.quarters[sl], data.X[sl], data.d[sl], data.names)


def simulate_varx(
    intercept,
    endo_coefs,
    exog_coefs,
    d,
    noise_sd,
    rng,
    burn_in: int = 50,
    contemporaneous_shock: bool = True,
):
    """Simulate a VARX sample driven by the given exogenous path.

    ``endo_coefs`` is (p, k, k), ``exog_coefs`` (q+1, k) with row 0 the
    contemporaneous coefficient (ignored unless the flag is set).
    Burn-in periods use zero exogenous input and are discarded.
    """
    intercept = np.asarray(intercept, dtype=float)
    endo_coefs = np.asarray(endo_coefs, dtype=float)
    exog_coefs = np.asarray(exog_coefs, dtype=float)
    d = np.asarray(d, dtype=float)
    k = intercept.shape[0]
    p = endo_coefs.shape[0]
    q = exog_coefs.shape[0] - 1
    T = d.shape[0]
    d_full = np.concatenate([np.zeros(burn_in), d])
    X = np.zeros((burn_in + T, k))
    for t in range(burn_in + T):
        x = intercept + rng.normal(0.0, noise_sd, size=k)
        for j in range(1, p + 1):
            if t - j >= 0:
                x = x + endo_coefs[j - 1] @ X[t - j]
        if contemporaneous_shock:
            x = x + exog_coefs[0] * d_full[t]
        for j in range(1, q + 1):
            if t - j >= 0:
                x = x + exog_coefs[j] * d_full[t - j]
        X[t] = x
    return X[burn_in:]


def companion_spectral_radius(model: VarxModel) -> float:
    """Largest eigenvalue modulus of the autoregressive companion matrix."""
    p, k = model.endogenous_lags, model.k
    comp = np.zeros((p * k, p * k))
    for j in range(p):
        comp[:k, j * k : (j + 1) * k] = model.endo_coefs[j]
    if p > 1:
        comp[k:, :-k] = np.eye((p - 1) * k)
    return float(np.abs(np.linalg.eigvals(comp)).max())


def write_irf_csv(irf: ImpulseResponse, path) -> None:
    """Write responses as horizon,variable,point,lower,upper rows."""
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["horizon", "variable", "point", "lower", "upper"])
        for h in range(irf.horizon + 1):
            for i, name in enumerate(irf.names):
                writer.writerow(
                    [h, name]
                    + [f"{v:.10g}" for v in (irf.point[h, i], irf.lower[h, i], irf.upper[h, i])]
                )


def read_irf_csv(source) -> ImpulseResponse:
    """Read a response table written by write_irf_csv."""
    import csv

    from .panel import _open_text

    entries = {}
    names = []
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["horizon", "variable", "point", "lower", "upper"]:
            raise VarxError(f"bad IRF CSV header: {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise VarxError(f"row {lineno}: expected 5 fields")
            try:
                h = int(row[0])
                vals = tuple(float(v) for v in row[2:])
            except ValueError:
                raise VarxError(f"row {lineno}: non-numeric value") from None
            name = row[1].strip()
            if name not in names:
                names.append(name)
            entries[(h, name)] = vals
    if not entries:
        raise VarxError("IRF CSV contains no data rows")
    H = max(h for h, _ in entries)
    point = np.empty((H + 1, len(names)))
    lower = np.empty_like(point)
    upper = np.empty_like(point)
    for h in range(H + 1):
        for i, name in enumerate(names):
            if (h, name) not in entries:
                raise VarxError(f"missing IRF entry for horizon {h}, variable {name}")
            point[h, i], lower[h, i], upper[h, i] = entries[(h, name)]
    return ImpulseResponse(tuple(names), point, lower, upper)
