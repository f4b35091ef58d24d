"""Offset sweeps: stability of a saturated loop as a function of a constant input.

A constant ``r2`` moves the loop to an operating point ``u_s``.  Re-centring
a symmetric saturation ``sat_{1,-m,m}`` on ``u_s`` leaves an asymmetric
saturation whose odd envelopes differ by ``B_k = (m + |u_s|)/(m - |u_s|)``.
Each row pairs the multiplier verdict at that ``B_k`` with what a
simulation of the actual loop does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bounds import PwlMonotone, bk_for_offset_saturation
from .errors import Infeasible, LuryeError
from .lti import RationalPlant, dc_gain
from .search import SearchConfig, search_multiplier
from .sim import LimitCycle, LuryeLoop, equilibrium_state, simulate

__all__ = ["SweepRow", "offset_sweep", "b_sweep"]


@dataclass
class SweepRow:
    r2: float
    u_s: Optional[float] = None
    B_k: Optional[float] = None
    certified: Optional[bool] = None
    margin: Optional[float] = None
    sim_verdict: Optional[dict] = None
    stable: str = "unknown"
    comment: str = ""
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "r2": self.r2, "abs_r2": abs(self.r2),
            "u_s": self.u_s, "abs_u2": None if self.u_s is None else abs(self.u_s),
            "B_k": self.B_k, "certified": self.certified, "margin": self.margin,
            "sim_verdict": self.sim_verdict, "stable": self.stable,
            "comment": self.comment, "error": self.error,
        }


def offset_sweep(plant: RationalPlant, levels: Sequence[float], *, m: float = 1.0,
                 k: float = 1.0, cfg: Optional[SearchConfig] = None,
                 n_steps: int = 2000, start_level: Optional[float] = -1.0) -> list[SweepRow]:
    """One row per ``r2`` level for the loop with ``sat_{1,-m,m}``.

    Parameters
    ----------
    plant : RationalPlant
        Discrete, strictly proper, stable plant with nonnegative dc gain.
    levels : sequence of float
        Constant ``r2`` values; rows come back in the same order.
    m : float
        Saturation level.
    k : float
        Loop-transform gain for the multiplier search.
    cfg : SearchConfig, optional
    n_steps : int
        Simulation length per level.
    start_level : float or None
        The simulation starts at rest at the operating point of this level,
        then ``r2`` steps to the row's level (as in a switching experiment).
        ``None`` starts from the zero state.

    Notes
    -----
    A row whose ``|u_s| >= m`` records an error and the sweep continues.
    ``stable`` is ``"yes"`` when a multiplier certifies ``B_k``, ``"no"``
    when the simulation locks onto a limit cycle, else ``"unknown"``.
    """
    cfg = cfg or SearchConfig()
    sat = PwlMonotone.saturation(1.0, m, m)
    g1 = dc_gain(plant)
    init = None
    if start_level is not None:
        init = equilibrium_state(LuryeLoop(plant, sat), 0.0, float(start_level))
    rows = []
    for r2 in levels:
        row = SweepRow(float(r2))
        rows.append(row)
        try:
            # linear prediction: the saturation is the identity at the operating point
            row.u_s = float(r2) / (1.0 + g1)
            row.B_k = bk_for_offset_saturation(m, row.u_s)
        except LuryeError as exc:
            row.error = f"{type(exc).__name__}: {exc}"
            row.comment = "operating point outside the linear range"
            continue
        try:
            res = search_multiplier(plant, k, 1.0, row.B_k, cfg)
            row.certified, row.margin = True, res.margin
        except Infeasible as exc:
            row.certified, row.margin = False, exc.margin
        trace = simulate(LuryeLoop(plant, sat, 0.0, float(r2)), n_steps, init)
        row.sim_verdict = trace.verdict.to_dict()
        cycle = isinstance(trace.verdict, LimitCycle)
        if row.certified:
            row.stable = "yes"
            row.comment = "multiplier certificate" + ("; CONFLICT: simulation cycles" if cycle else "")
        elif cycle:
            row.stable = "no"
            row.comment = f"period-{trace.verdict.period} limit cycle in simulation"
        else:
            row.comment = "no certificate and no cycle observed"
    return rows


@dataclass
class BRow:
    B: float
    feasible: bool
    margin: float
    multiplier: Optional[dict] = field(default=None)

    def to_dict(self) -> dict:
        return {"B": self.B, "feasible": self.feasible, "margin": self.margin,
                "multiplier": self.multiplier}


def b_sweep(plant: RationalPlant, Bs: Sequence[float], *, k: float = 1.0, A: float = 1.0,
            cfg: Optional[SearchConfig] = None) -> list[BRow]:
    """Search verdict at each ratio ``B`` in ``Bs``, in input order."""
    cfg = cfg or SearchConfig()
    out = []
    for B in Bs:
        try:
            res = search_multiplier(plant, k, A, float(B), cfg)
            out.append(BRow(float(B), True, res.margin, res.multiplier.to_dict()))
        except Infeasible as exc:
            out.append(BRow(float(B), False, math.nan if exc.margin is None else exc.margin))
    return out
