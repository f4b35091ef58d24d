"""
Deadzone behind a delayed resonant plant
========================================

A deadzone whose slopes wander between 0.5 and 0.6 sits in feedback with
``G(s) = exp(-s/5) / (s^2 + 0.3 s + 1)``.  The circle criterion cannot
handle this loop, but a single-delay multiplier can, after a loop transform
with ``k = 1``.

Run with ``python3 demos/deadzone_delay_certificate.py``.
"""

# %%
# Envelopes and their ratios
# --------------------------
# The deadzone is not monotone, but it sits between two monotone deadzones
# (slopes 0.5 and 0.6).  Their ratio is ``A = 1.2``; after the loop
# transform ``phi -> u - y/k`` with ``k = 1`` it grows to ``A_k = 1.5``.
from lurye import (DelayMultiplier, RationalPlant, Domain, certify, circle_criterion,
                   continuous_grid, deadzone_bounds, refine, search_delay_multiplier,
                   transformed_sector)

q = deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1.0, 1.0)
sector = transformed_sector(q, 1.0)
print(f"A = {q.A:.4g}, B = {q.B:.4g}, slope max = {q.slope_max:.4g}, A_k = {sector.A_k:.4g}")

# %%
# The circle criterion fails
# --------------------------
# With slopes up to 0.6 the circle test needs ``Re G(jw) > -1/0.6``.
plant = RationalPlant(Domain.CONTINUOUS, [1.0], [1.0, 0.3, 1.0], delay=0.2)
ok, re_min = circle_criterion(plant, 0.6, refine(continuous_grid()))
print(f"min Re G = {re_min:.4f}  vs  -1/0.6 = {-1 / 0.6:.4f}  ->  circle test passes: {ok}")

# %%
# A delay multiplier
# ------------------
# ``M = 1 - (2/3) exp(-0.7 s)`` keeps ``Re[M (1 + G)]`` positive at every
# grid frequency.  Its weighted norm is exactly ``A_k * 2/3 = 1``, on the
# edge of the class, so the certificate reports a boundary verdict.
m0 = DelayMultiplier(((2 / 3, 0.7),))
cert = certify(m0, plant, 1.0, sector.A_k, sector.A_k)
print(f"verdict {cert.verdict!r}, margin {cert.margin:.4f}, refined {cert.refined_margin:.4f}")
for note in cert.notes:
    print("  note:", note)

# %%
# Shrinking the gain slightly moves the multiplier strictly inside the
# class while the frequency condition keeps its slack.
m_eps = DelayMultiplier(((2 / 3 - 0.01, 0.7),))
print("shrunk multiplier:", certify(m_eps, plant, 1.0, sector.A_k, sector.A_k).verdict)

# %%
# Finding the multiplier by scanning
# ----------------------------------
# A coarse scan over gains ``c <= 1/A_k`` and delays ``T`` finds the same
# neighbourhood without being told where to look.
margin, found = search_delay_multiplier(plant, 1.0, sector.A_k)
(c, T), = found.terms
print(f"best single delay: c = {c:.4f}, T = {T:.3f}, grid margin {margin:.4f}")
