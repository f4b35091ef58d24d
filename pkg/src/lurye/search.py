"""Linear-programming search for FIR multipliers and bisection over ``B``.

Each nonzero lag ``l`` gets two nonnegative weights, ``lam_plus[l]`` (into
``h+``) and ``lam_minus[l]`` (into ``h-``).  On a frequency grid

    Re[M P] = Re P + sum_l (lam_minus[l] - lam_plus[l]) Re[exp(-jwl) P]

is linear in the weights, with ``P = 1 + kG`` (or ``G`` when ``k = 0``), so
maximizing the worst-case margin subject to
``A*sum(lam_plus) + B*sum(lam_minus) <= 1 - delta`` is an LP.  The LP has
one row per grid point and only a handful of columns; it is solved through
its dual, whose tableau is a few rows tall.

Frequency gridding stands in for the exact (KYP/LMI) formulation, so every
multiplier the search returns is re-checked on a finer grid before it is
accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, Infeasible, NoMultiplierFound
from .lp import lp_maximize
from .lti import (Domain, FrequencyGrid, RationalPlant, continuous_grid, discrete_grid,
                  freq_response, is_stable, refine)
from .multiplier import DelayMultiplier, FirMultiplier
from .verify import EPS_CERT, positivity_margin

__all__ = [
    "SearchConfig", "SearchResult", "BStar", "search_multiplier", "optimal_margin",
    "max_feasible_B", "search_delay_multiplier", "parse_lags",
]


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the FIR search.

    Lags ``-n_anticausal .. -1`` and ``1 .. n_causal`` are available to the
    multiplier.  ``lags`` overrides that range with an explicit set.
    """

    n_anticausal: int = 1
    n_causal: int = 3
    grid: Optional[FrequencyGrid] = None
    norm_slack: float = 1e-3
    eps_cert: float = EPS_CERT
    bisect_tol: float = 1e-3
    B_cap: float = 64.0
    lags: Optional[tuple[int, ...]] = None
    refine_factor: int = 3

    def __post_init__(self):
        if self.lags is None and self.n_anticausal + self.n_causal < 1:
            raise ValueError("need at least one lag")
        if not 0 < self.norm_slack <= 0.1:
            raise ValueError("norm_slack must lie in (0, 0.1]")
        if self.bisect_tol <= 0 or self.eps_cert <= 0:
            raise ValueError("tolerances must be positive")
        if self.lags is not None:
            lags = tuple(sorted({int(l) for l in self.lags} - {0}))
            if not lags:
                raise ValueError("need at least one nonzero lag")
            object.__setattr__(self, "lags", lags)

    @property
    def lag_set(self) -> tuple[int, ...]:
        if self.lags is not None:
            return self.lags
        return tuple(range(-self.n_anticausal, 0)) + tuple(range(1, self.n_causal + 1))

    def grid_or_default(self) -> FrequencyGrid:
        return self.grid if self.grid is not None else discrete_grid(4096)


@dataclass
class SearchResult:
    multiplier: FirMultiplier
    margin: float
    norm_used: float
    B_certified: float
    refined_margin: float = math.nan
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "multiplier": self.multiplier.to_dict(), "margin": self.margin,
            "refined_margin": self.refined_margin, "norm_used": self.norm_used,
            "B_certified": self.B_certified, "diagnostics": list(self.diagnostics),
            "method": "frequency-gridded LP (grid-certified, not an exact LMI certificate)",
        }


def parse_lags(text: str) -> tuple[int, ...]:
    """Parse ``"-1:3"`` (a range, 0 dropped) or ``"-1,1,2,3"``."""
    text = text.strip()
    if ":" in text:
        lo, hi = (int(x) for x in text.split(":"))
        return tuple(l for l in range(lo, hi + 1) if l != 0)
    return tuple(int(x) for x in text.split(",") if x.strip() and int(x) != 0)


def _loop_values(plant, k, w):
    g = freq_response(plant, w)
    return g if k == 0 else 1.0 + k * g


def optimal_margin(plant: RationalPlant, k: float, A: float, B: float, cfg: SearchConfig):
    """Best grid margin over the multiplier class, and the maximizer.

    Returns ``(eps, multiplier)`` where ``eps`` may be negative.
    """
    if plant.domain is not Domain.DISCRETE:
        raise DomainError("FIR search needs a discrete plant; use search_delay_multiplier")
    if not is_stable(plant):
        raise DomainError("multiplier search needs a stable plant")
    if A < 1 or B < A:
        raise ValueError("need 1 <= A <= B")
    lags = np.array(cfg.lag_set)
    w = cfg.grid_or_default().points
    P = _loop_values(plant, k, w)
    C = (np.exp(-1j * np.outer(w, lags)) * P[:, None]).real  # (N, L)
    use_minus = math.isfinite(B)
    L = lags.size
    # primal: x = (lam_plus, lam_minus, eps_pos, eps_neg) >= 0, maximize eps_pos - eps_neg
    #   eps - (lam_minus - lam_plus) . C[w] <= Re P(w)   for every w
    #   A sum(lam_plus) + B sum(lam_minus) <= 1 - delta
    blocks = [C] + ([-C] if use_minus else []) + [np.ones((w.size, 1)), -np.ones((w.size, 1))]
    G = np.hstack(blocks)
    norm_row = np.concatenate([np.full(L, A)] + ([np.full(L, B)] if use_minus else []) + [[0.0, 0.0]])
    A_ub = np.vstack([G, norm_row])
    b_ub = np.concatenate([P.real, [1.0 - cfg.norm_slack]])
    c = np.zeros(A_ub.shape[1])
    c[-2], c[-1] = 1.0, -1.0
    # dual: max -b.y  s.t.  -A_ub^T y <= -c, y >= 0; primal values are its duals
    sol = lp_maximize(-b_ub, -A_ub.T, -c)
    x = np.clip(sol.duals, 0.0, None)
    lam_plus = x[:L]
    lam_minus = x[L:2 * L] if use_minus else np.zeros(L)
    h = {int(l): float(p - q) for l, p, q in zip(lags, lam_plus, lam_minus)}
    mult = FirMultiplier({l: v for l, v in h.items() if v > 0}, {l: -v for l, v in h.items() if v < 0})
    # rescale in the rare case round-off nudged the norm row past its bound
    used = A * mult.norm_plus + (B * mult.norm_minus if use_minus else 0.0)
    if used > 1.0 - cfg.norm_slack:
        mult = mult.scaled((1.0 - cfg.norm_slack) / used)
    eps = positivity_margin(mult, plant, k, FrequencyGrid(Domain.DISCRETE, w))
    return eps, mult


def search_multiplier(plant: RationalPlant, k: float, A: float, B: float,
                      cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Find an FIR multiplier maximizing the grid margin for ratios ``(A, B)``.

    Raises
    ------
    Infeasible
        If the optimal margin is below ``cfg.eps_cert`` or the optimizer
        fails the refined-grid re-check.
    DomainError
        If the plant is unstable or not discrete.
    """
    cfg = cfg or SearchConfig()
    eps, mult = optimal_margin(plant, k, A, B, cfg)
    diag = [f"lags={list(cfg.lag_set)} grid={len(cfg.grid_or_default())} B={B} eps={eps:.6g}"]
    if eps < cfg.eps_cert:
        raise Infeasible(f"best grid margin {eps:.3g} is below eps_cert={cfg.eps_cert:g}", margin=eps)
    fine = refine(cfg.grid_or_default(), cfg.refine_factor)
    refined = positivity_margin(mult, plant, k, fine)
    diag.append(f"refined margin {refined:.6g} on {len(fine)} points")
    if refined < cfg.eps_cert / 2:
        raise Infeasible(f"refined-grid margin {refined:.3g} fails the re-check", margin=refined)
    used = A * mult.norm_plus + (B * mult.norm_minus if math.isfinite(B) else 0.0)
    return SearchResult(mult, eps, used, B, refined, diag)


@dataclass
class BStar:
    """Bracket ``[lower, upper]`` on the largest certifiable ``B``.

    ``lower`` is the last ratio certified (with ``witness``), ``upper`` the
    first one that failed; ``upper`` is ``inf`` if ``B_cap`` itself passed.
    """

    lower: float
    upper: float
    witness: SearchResult
    log: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"B_star": [self.lower, self.upper], "witness": self.witness.to_dict(),
                "log": list(self.log)}


def max_feasible_B(plant: RationalPlant, k: float, A: float,
                   cfg: Optional[SearchConfig] = None) -> BStar:
    """Bisect on ``B`` over ``[A, B_cap]`` for the largest certified ratio.

    Feasibility is monotone in ``B``: raising ``B`` only tightens the norm
    constraint.
    """
    cfg = cfg or SearchConfig()
    log = []
    try:
        witness = search_multiplier(plant, k, A, A, cfg)
    except DomainError as exc:
        raise NoMultiplierFound(f"no multiplier: {exc}") from exc
    except Infeasible as exc:
        raise NoMultiplierFound(f"no multiplier even at B = A = {A}: {exc}", margin=exc.margin) from exc
    log.append((A, True, witness.margin))
    try:
        top = search_multiplier(plant, k, A, cfg.B_cap, cfg)
        log.append((cfg.B_cap, True, top.margin))
        return BStar(cfg.B_cap, math.inf, top, log)
    except Infeasible as exc:
        log.append((cfg.B_cap, False, exc.margin))
    lo, hi = A, cfg.B_cap
    while hi - lo > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        try:
            res = search_multiplier(plant, k, A, mid, cfg)
        except Infeasible as exc:
            hi = mid
            log.append((mid, False, exc.margin))
        else:
            lo, witness = mid, res
            log.append((mid, True, res.margin))
    return BStar(lo, hi, witness, log)


def search_delay_multiplier(plant: RationalPlant, k: float, A: float,
                            grid: Optional[FrequencyGrid] = None, *,
                            n_gain: int = 21, n_delay: int = 40, T_max: float = 2.0,
                            norm_slack: float = 1e-3, eps_cert: float = EPS_CERT):
    """Scan single-delay multipliers ``1 - c exp(-sT)`` for a continuous plant.

    ``c`` runs over ``[0, (1 - norm_slack)/A]`` and ``T`` over
    ``(0, T_max]``; the candidate with the largest grid margin is returned as
    ``(margin, multiplier)``.

    Raises
    ------
    Infeasible
        If no candidate reaches ``eps_cert``.
    """
    if plant.domain is not Domain.CONTINUOUS:
        raise DomainError("delay-multiplier scan needs a continuous plant")
    grid = grid or continuous_grid()
    gains = np.linspace(0.0, (1.0 - norm_slack) / A, n_gain)
    delays = np.linspace(T_max / n_delay, T_max, n_delay)
    w = grid.points
    P = _loop_values(plant, k, w)
    best = (-math.inf, DelayMultiplier())
    for T in delays:
        E = np.exp(-1j * w * T) * P
        # margins for every gain at this delay, reduced in a fixed order
        vals = (P.real[None, :] - gains[:, None] * E.real[None, :]).min(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best[0]:
            mult = DelayMultiplier(((float(gains[i]), float(T)),)) if gains[i] > 0 else DelayMultiplier()
            best = (float(vals[i]), mult)
    if best[0] < eps_cert:
        raise Infeasible(f"no single-delay multiplier reaches eps_cert (best {best[0]:.3g})", margin=best[0])
    return best
