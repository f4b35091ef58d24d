"""Scalar LTI plants in discrete (z) and continuous (s) time.

Plants are rational transfer functions with coefficients in descending
powers.  Continuous plants may carry an exact input delay, applied as a
phase factor ``exp(-j*w*delay)``; it is never approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, PoleOnBoundary

__all__ = [
    "Domain", "RationalPlant", "FrequencyGrid", "freq_response", "is_stable",
    "dc_gain", "poles", "discrete_grid", "continuous_grid", "refine",
    "TOL_ROOT",
]

#: Poles closer than this to the stability boundary are classed unstable.
TOL_ROOT = 1e-9
_POLE_TOL = 1e-12


class Domain(str, Enum):
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while len(c) > 1 and c[0] == 0.0:
        c.pop(0)
    return tuple(c) if c else (0.0,)


@dataclass(frozen=True)
class RationalPlant:
    """Transfer function ``num(p)/den(p) * exp(-p*delay)``.

    Parameters
    ----------
    domain : Domain or str
        ``"discrete"`` (p = z) or ``"continuous"`` (p = s).
    num, den : sequence of float
        Coefficients in descending powers.  Leading zeros of ``num`` are
        dropped; ``den`` must have a nonzero leading coefficient.
    delay : float
        Input delay in seconds.  Continuous plants only; discrete delays
        belong in ``num``/``den``.

    Examples
    --------
    >>> G = RationalPlant("discrete", [2, 0.92], [1, -0.5, 0])
    >>> round(dc_gain(G), 12)
    5.84
    """

    domain: Domain
    num: tuple[float, ...]
    den: tuple[float, ...]
    delay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        object.__setattr__(self, "num", _trim(self.num))
        den = tuple(float(x) for x in self.den)
        if not den or den[0] == 0.0:
            raise ValueError("den must be nonempty with a nonzero leading coefficient")
        object.__setattr__(self, "den", den)
        delay = float(self.delay)
        if delay < 0 or not math.isfinite(delay):
            raise ValueError("delay must be a finite nonnegative number")
        if self.domain is Domain.DISCRETE and delay != 0.0:
            raise ValueError("discrete plants carry delays in num/den, not in delay")
        object.__setattr__(self, "delay", delay)
        if self.domain is Domain.DISCRETE and self.relative_degree < 0:
            raise ValueError("discrete plant must be proper")

    @property
    def relative_degree(self) -> int:
        if self.is_zero:
            return len(self.den) - 1
        return (len(self.den) - 1) - (len(self.num) - 1)

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.num)

    @property
    def strictly_proper(self) -> bool:
        return self.is_zero or self.relative_degree > 0

    @classmethod
    def from_dict(cls, d: dict) -> "RationalPlant":
        return cls(d["domain"], d["num"], d["den"], d.get("delay", 0.0))

    def to_dict(self) -> dict:
        out = {"domain": self.domain.value, "num": list(self.num), "den": list(self.den)}
        if self.delay:
            out["delay"] = self.delay
        return out


def _boundary_point(domain: Domain, w):
    return np.exp(1j * w) if domain is Domain.DISCRETE else 1j * w


def freq_response(plant: RationalPlant, w):
    """Evaluate the plant on the stability boundary.

    Returns ``G(exp(jw))`` for discrete plants and ``G(jw)`` for continuous
    ones.  ``w`` may be a scalar or an array; the result has the same shape.

    Raises
    ------
    PoleOnBoundary
        If ``|den(p)|`` is numerically zero at some requested frequency.
    """
    w_arr = np.asarray(w, dtype=float)
    p = _boundary_point(plant.domain, w_arr)
    den = np.polyval(plant.den, p)
    scale = float(np.sum(np.abs(plant.den)))
    if np.any(np.abs(den) <= _POLE_TOL * scale):
        bad = np.atleast_1d(w_arr)[np.atleast_1d(np.abs(den) <= _POLE_TOL * scale)]
        raise PoleOnBoundary(f"plant has a pole on the boundary at w={bad[0]!r}")
    g = np.polyval(plant.num, p) / den
    if plant.delay:
        g = g * np.exp(-1j * w_arr * plant.delay)
    if np.ndim(g) == 0:
        return complex(g)
    return g


def poles(plant: RationalPlant) -> np.ndarray:
    # np.roots uses companion-matrix eigenvalues
    if len(plant.den) <= 1:
        return np.empty(0, dtype=complex)
    return np.roots(plant.den).astype(complex)


def is_stable(plant: RationalPlant) -> bool:
    """True iff every pole lies strictly inside the stability region.

    Poles within ``TOL_ROOT`` of the boundary count as unstable.
    """
    r = poles(plant)
    if r.size == 0:
        return True
    if plant.domain is Domain.DISCRETE:
        return bool(np.all(np.abs(r) < 1.0 - TOL_ROOT))
    return bool(np.all(r.real < -TOL_ROOT))


def dc_gain(plant: RationalPlant) -> float:
    """Steady-state gain ``G(1)`` (discrete) or ``G(0)`` (continuous)."""
    if not is_stable(plant):
        raise DomainError("dc gain of an unstable plant is undefined")
    return float(np.real(freq_response(plant, 0.0)))


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing angular frequencies.

    Discrete grids live in ``[0, pi]`` (rad/sample); continuous grids in
    ``[0, w_max]`` (rad/s).  Conjugate symmetry makes negative frequencies
    redundant.
    """

    domain: Domain
    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("grid must be a nonempty 1-d array")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        if pts[0] < 0 or not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite and nonnegative")
        if self.domain is Domain.DISCRETE and pts[-1] > math.pi + 1e-12:
            raise ValueError("discrete grid points must lie in [0, pi]")
        if self.domain is Domain.CONTINUOUS and pts[-1] <= 0:
            raise ValueError("continuous grid needs w_max > 0")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size


def discrete_grid(n: int = 4096) -> FrequencyGrid:
    return FrequencyGrid(Domain.DISCRETE, np.linspace(0.0, math.pi, n))


def continuous_grid(n: int = 4096, w_min: float = 1e-3, w_max: float = 1e3) -> FrequencyGrid:
    """``n`` log-spaced points on ``[w_min, w_max]`` plus ``w = 0``."""
    pts = np.concatenate(([0.0], np.logspace(math.log10(w_min), math.log10(w_max), n)))
    return FrequencyGrid(Domain.CONTINUOUS, pts)


def refine(grid: FrequencyGrid, factor: int = 3) -> FrequencyGrid:
    """Insert ``factor - 1`` points between neighbours.

    Uniform grids are refined linearly; grids that start at zero followed by
    a log-spaced tail are refined geometrically on the tail.  The original
    points are kept.
    """
    pts = grid.points
    if factor < 1:
        raise ValueError("factor must be >= 1")
    lead = pts[:1] if (pts[0] == 0.0 and grid.domain is Domain.CONTINUOUS) else pts[:0]
    body = pts[lead.size:]
    if body.size < 2:
        return grid
    t = np.arange(factor) / factor
    if lead.size:
        lb = np.log(body)
        inner = np.exp((lb[:-1, None] + np.diff(lb)[:, None] * t).ravel())
    else:
        inner = (body[:-1, None] + np.diff(body)[:, None] * t).ravel()
    new = np.concatenate((lead, inner, body[-1:]))
    return FrequencyGrid(grid.domain, new)
