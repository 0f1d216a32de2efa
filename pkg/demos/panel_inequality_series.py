"""Walkthrough: from a quarterly wage panel to inequality and growth series.

Run with: python demos/panel_inequality_series.py
"""

from wageineq import build_distribution, compute_series, growth_rates
from wageineq.fixtures import synthetic_wage_panel
from wageineq.panel import CELLS, QUANTILES

panel = synthetic_wage_panel()  # 81 synthetic quarters, 2000Q1..2020Q1
print(f"panel: {panel.quarters[0]} .. {panel.quarters[-1]} ({panel.n_quarters} quarters)")

# One quarter's 9-wage distribution, partitioned by quantile point.
dist, part = build_distribution(panel, "2010Q1")
for value, (quantile, race) in zip(dist, CELLS):
    print(f"  {quantile} {race:6s} {value:8.2f}")
print("partition groups:", part.groups)

series = compute_series(panel)
print("\nquarter   total     within(D1,Q3,D9)              between   within_share")
for t in range(0, panel.n_quarters, 20):
    w = ", ".join(f"{x:.5f}" for x in series.within[t])
    print(
        f"{series.quarters[t]}  {series.total[t]:.5f}  ({w})  "
        f"{series.between[t]:.5f}  {series.within_share[t]:.3f}"
    )
print(f"\nmean within share:  {series.within_share.mean():.3f}")
print(f"mean between share: {series.between_share.mean():.3f}")

# Year-over-year growth is fastest at the top of the distribution.
growth = growth_rates(panel)
print("\nmean annual wage growth (%):")
for quantile in QUANTILES:
    cols = [c for c, (q, _) in enumerate(CELLS) if q == quantile]
    print(f"  {quantile}: {growth.growth[:, cols].mean():5.2f}")
