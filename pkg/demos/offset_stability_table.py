"""
Stability against a constant offset
===================================

A constant input ``r2`` moves the saturated loop to an operating point
``u_s = r2 / (1 + G(1))``.  Seen from there, the symmetric unit saturation
looks asymmetric, with odd-envelope ratio ``B_k = (1 + |u_s|)/(1 - |u_s|)``.
Each row below pairs the multiplier verdict at ``B_k`` with what a
simulation of the actual loop does.

Run with ``python3 demos/offset_stability_table.py``.
"""

# %%
from lurye import Domain, RationalPlant, SearchConfig, dc_gain, offset_sweep

plant = RationalPlant(Domain.DISCRETE, [2.0, 0.92], [1.0, -0.5, 0.0])
print(f"G(1) = {dc_gain(plant):.4f}")

# %%
# The sweep
# ---------
# Each simulation starts at rest at the operating point of ``r2 = -1`` and
# then steps to the row's level, which is how a switching experiment kicks
# the loop.  The last level puts the operating point on the saturation
# corner, where the ratio is undefined.
rows = offset_sweep(plant, [0.0, -1.0, 1.295, 1.55, 2.1, 6.84], cfg=SearchConfig(lags=(-1, 1, 2, 3)))

print(f"{'|r2|':>6} {'|u_s|':>7} {'B_k':>7}  stable   comment")
for r in rows:
    if r.error:
        print(f"{abs(r.r2):6.3f} {'':>7} {'':>7}  -        {r.error}")
        continue
    print(f"{abs(r.r2):6.3f} {abs(r.u_s):7.4f} {r.B_k:7.4f}  {r.stable:<8} {r.comment}")

# %%
# Rows certified by a multiplier never show a cycle.  Between the largest
# certified ratio (about 1.467) and the oscillating level (``B_k = 1.886``)
# the verdict is ``unknown``: no certificate, and this particular kick
# does not excite a cycle either.
