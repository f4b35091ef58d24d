"""
Searching FIR multipliers for an asymmetric saturation
======================================================

The discrete plant ``G(z) = (2z + 0.92) / (z (z - 0.5))`` is in feedback
with a unit-slope saturation whose two levels differ.  The odd envelopes of
such a saturation differ by a ratio ``B``; the larger ``B``, the harder it
is to find a multiplier.  This script finds the largest ``B`` for which an
FIR multiplier with lags ``{-1, 1, 2, 3}`` still certifies the loop.

Run with ``python3 demos/saturation_multiplier_search.py``.
"""

# %%
# Checking a given certificate
# ----------------------------
# ``M(z) = 0.596 z + 1 + 0.022 z^-2 - 0.093 z^-3`` has ``||h+|| = 0.093``
# and ``||h-|| = 0.618``, so the class condition
# ``||h+|| + B ||h-|| < 1`` holds up to ``B`` a little above 1.467.
from lurye import (FirMultiplier, RationalPlant, Domain, SearchConfig, certify, max_feasible_B,
                   norm_margin, search_multiplier)

plant = RationalPlant(Domain.DISCRETE, [2.0, 0.92], [1.0, -0.5, 0.0])
m = FirMultiplier.from_m_coeffs({-1: 0.596, 2: 0.022, 3: -0.093})
print(f"||h+|| = {m.norm_plus:.3f}, ||h-|| = {m.norm_minus:.3f}")
for B in (1.2, 1.467, 436 / 275):
    cert = certify(m, plant, 1.0, 1.0, B)
    print(f"B = {B:.4f}: norm margin {norm_margin(m, 1.0, B):+.5f}, verdict {cert.verdict}")

# %%
# Linear-programming search at a fixed ratio
# ------------------------------------------
# On a frequency grid the margin ``min Re[M (1 + G)]`` is linear in the
# multiplier weights, so the best multiplier at each ``B`` solves an LP.
cfg = SearchConfig(lags=(-1, 1, 2, 3))
res = search_multiplier(plant, 1.0, 1.0, 1.3, cfg)
print("B = 1.3:", {k: round(v, 4) for k, v in res.multiplier.m_coeffs.items()},
      f"margin {res.margin:.4g}")

# %%
# Bisection on B
# --------------
# Feasibility can only be lost as ``B`` grows, so bisection brackets the
# largest certifiable ratio.
bs = max_feasible_B(plant, 1.0, 1.0, cfg)
print(f"largest certified B in [{bs.lower:.4f}, {bs.upper:.4f}]")
print("witness:", {k: round(v, 4) for k, v in bs.witness.multiplier.m_coeffs.items()})

# %%
# The bracket sits just above 1.467, where the multiplier above stops
# fitting the class, and below ``436/275 = 1.5855``, a ratio at which an
# offset saturation in this loop admits a period-3 oscillation.  Simulated
# cycles at larger ratios appear in ``switching_limit_cycle.py``.
