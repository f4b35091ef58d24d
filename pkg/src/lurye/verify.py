"""Certificate checks in the frequency domain and time-domain oracles.

The frequency conditions quantify over every frequency; here they are
evaluated on finite grids and the result is reported as *grid-certified*.
:func:`certify` guards against dips between grid points by re-evaluating on
a refined grid and requiring the two margins to agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .lti import (Domain, FrequencyGrid, RationalPlant, continuous_grid, discrete_grid,
                  freq_response, is_stable, refine)
from .multiplier import (DelayMultiplier, FirMultiplier, Multiplier, NormStatus,
                         mult_freq_response, norm_margin, norm_status)

__all__ = [
    "positivity_margin", "positivity_profile", "circle_criterion", "lemma1_oracle",
    "positivity_oracle", "certify", "Certificate", "default_grid", "EPS_CERT",
]

EPS_CERT = 1e-6
AGREEMENT = 0.10


def default_grid(plant: RationalPlant, n: int = 4096) -> FrequencyGrid:
    if plant.domain is Domain.DISCRETE:
        return discrete_grid(n)
    return continuous_grid(n)


def _loop_response(plant, k, w):
    g = freq_response(plant, w)
    return g if k == 0 else 1.0 + k * g


def positivity_profile(m: Multiplier, plant: RationalPlant, k: float, grid: FrequencyGrid):
    """Values of ``M*(1 + k*G)`` (or ``M*G`` for ``k = 0``) on the grid."""
    if not is_stable(plant):
        raise DomainError("positivity certificates need a stable plant")
    if (plant.domain is Domain.DISCRETE) != isinstance(m, FirMultiplier):
        raise DomainError("multiplier and plant live in different time domains")
    w = grid.points
    return mult_freq_response(m, w) * _loop_response(plant, k, w)


def positivity_margin(m: Multiplier, plant: RationalPlant, k: float, grid: FrequencyGrid) -> float:
    """Minimum of ``Re[M (1 + kG)]`` over the grid (``Re[M G]`` when ``k = 0``)."""
    return float(np.min(positivity_profile(m, plant, k, grid).real))


def circle_criterion(plant: RationalPlant, s_max: float, grid: FrequencyGrid):
    """Circle test ``Re G > -1/s_max`` for nonlinearities in the sector ``[0, s_max]``.

    Returns ``(passed, min Re G)``.
    """
    if not is_stable(plant):
        raise DomainError("circle criterion needs a stable plant")
    re_min = float(np.min(freq_response(plant, grid.points).real))
    return re_min > -1.0 / s_max, re_min


def _tol(u, y):
    return 1e-9 * (float(np.dot(u, u)) + float(np.dot(y, y)))


def _shift_product(u, y, tau: int) -> float:
    # sum_t u[t + tau] * y[t], zero outside the support
    n = len(u)
    if abs(tau) >= n:
        return 0.0
    if tau >= 0:
        return float(np.dot(u[tau:], y[:n - tau]))
    return float(np.dot(u[:n + tau], y[-tau:]))


def lemma1_oracle(u, y, tau: int, A: float, B: float) -> bool:
    """Check ``-B <u,y> <= sum_t u[t+tau] y[t] <= A <u,y>`` for finite sequences."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    if u.shape != y.shape:
        raise ValueError("u and y must have the same length")
    p0 = float(np.dot(u, y))
    pt = _shift_product(u, y, int(tau))
    tol = _tol(u, y)
    lower_ok = True if math.isinf(B) else (-B * p0 <= pt + tol)
    return bool(lower_ok and pt <= A * p0 + tol)


def _apply_fir(m: FirMultiplier, u: np.ndarray) -> np.ndarray:
    n = len(u)
    mu = u.copy()
    for k, c in m.m_coeffs.items():
        # (z^-k u)[t] = u[t - k]
        if abs(k) >= n:
            continue
        if k > 0:
            mu[k:] += c * u[:n - k]
        else:
            mu[:n + k] += c * u[-k:]
    return mu


def positivity_oracle(m: FirMultiplier, u, y) -> float:
    """``sum_k (M u)_k y_k`` with ``u`` and ``y`` zero outside their support."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.dot(_apply_fir(m, u), y))


@dataclass
class Certificate:
    """Outcome of :func:`certify`.

    ``verdict`` is ``"pass"``, ``"fail"`` or ``"boundary"``.  A boundary
    verdict means the norm condition holds with equality while the frequency
    condition holds with slack.
    """

    margin: float
    refined_margin: float
    grid_points: int
    argmin_omega: float
    norm_margin: float
    norm_status: str
    frequency_ok: bool
    verdict: str
    label: str = "grid-certified"
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "margin": self.margin, "refined_margin": self.refined_margin,
            "grid_points": self.grid_points, "argmin_omega": self.argmin_omega,
            "norm_margin": self.norm_margin, "norm_status": self.norm_status,
            "frequency_ok": self.frequency_ok, "verdict": self.verdict,
            "label": self.label, "notes": list(self.notes),
        }


def _extend_continuous(grid: FrequencyGrid, plant: RationalPlant, k: float, eps: float) -> FrequencyGrid:
    # push w_max out until the plant term is negligible next to eps
    pts = grid.points
    gain = k if k > 0 else 1.0
    w_max = pts[-1]
    per_decade = max(8, int(round((len(pts) - 1) / max(1.0, math.log10(w_max / max(pts[1], 1e-12))))))
    extra = []
    while gain * abs(freq_response(plant, w_max)) >= eps / 10 and w_max < 1e9:
        new = np.logspace(math.log10(w_max), math.log10(w_max) + 1, per_decade + 1)[1:]
        extra.append(new)
        w_max = new[-1]
    if not extra:
        return grid
    return FrequencyGrid(grid.domain, np.concatenate([pts] + extra))


def certify(m: Multiplier, plant: RationalPlant, k: float, A: float, B: float,
            grid: Optional[FrequencyGrid] = None, eps_cert: float = EPS_CERT,
            refine_factor: int = 3) -> Certificate:
    """Run the norm gate and the grid positivity gate for one multiplier.

    The frequency gate passes when the margin is at least ``eps_cert`` on the
    grid and on a ``refine_factor`` times finer grid, and the two margins
    agree to within 10 %.
    """
    grid = grid or default_grid(plant)
    notes = []
    if plant.domain is Domain.CONTINUOUS:
        grid = _extend_continuous(grid, plant, k, eps_cert)
    prof = positivity_profile(m, plant, k, grid).real
    i = int(np.argmin(prof))
    margin = float(prof[i])
    fine = refine(grid, refine_factor)
    refined = positivity_margin(m, plant, k, fine)
    agree = abs(refined - margin) <= AGREEMENT * abs(margin)
    freq_ok = margin >= eps_cert and refined >= eps_cert and agree
    if margin >= eps_cert and refined >= eps_cert and not agree:
        notes.append("refined-grid margin disagrees with the base grid by more than 10%")
    if plant.domain is Domain.CONTINUOUS and isinstance(m, DelayMultiplier):
        tail = 1.0 - (m.norm_plus + m.norm_minus)
        if k > 0:
            notes.append(f"high-frequency tail bound 1 - ||h||_1 = {tail:.6g}"
                         + ("" if tail > 0 else " (not positive; tail not covered)"))
            freq_ok = freq_ok and tail > 0
    nm = norm_margin(m, A, B)
    status = norm_status(m, A, B)
    if status is NormStatus.INSIDE:
        verdict = "pass" if freq_ok else "fail"
    elif status is NormStatus.BOUNDARY:
        verdict = "boundary" if freq_ok else "fail"
        if freq_ok:
            notes.append("weighted norm equals 1: on the class boundary; the frequency "
                         "condition has slack, so a slightly shrunk multiplier certifies "
                         "stability by continuity")
    else:
        verdict = "fail"
        notes.append("norm gate failed")
    if not freq_ok:
        notes.append("positivity gate failed")
    return Certificate(margin, refined, len(grid), float(grid.points[i]), nm, status.value,
                       bool(freq_ok), verdict, notes=notes)
