"""Multipliers ``M = 1 - H+ + H-`` with nonnegative parts ``h+`` and ``h-``.

Two concrete forms are supported:

* :class:`FirMultiplier`, discrete time, finitely many nonzero lags of either
  sign (noncausal);
* :class:`DelayMultiplier`, continuous time, a finite train of delayed
  impulses ``h(t) = sum_i c_i delta(t - t_i)``.

Sign convention: ``M = 1 - h``, so a *positive* coefficient of ``M`` at some
lag is a *negative* value of ``h`` and lands in ``h_minus``.  JSON files
store the coefficients of ``M`` as they are read off ``M(z)``; the M/h flip
happens only in :func:`jordan_split` and :meth:`FirMultiplier.from_m_coeffs`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

import numpy as np

from .errors import InvalidMultiplier

__all__ = [
    "FirMultiplier", "DelayMultiplier", "Multiplier", "jordan_split",
    "norm_margin", "mult_freq_response", "MultiplierClass", "classify",
    "NormStatus", "norm_status", "STRICTNESS_EPS", "multiplier_from_dict",
]

#: Class conditions are strict; a margin must exceed this to count.
STRICTNESS_EPS = 1e-9


@dataclass(frozen=True)
class FirMultiplier:
    """Discrete multiplier stored as two nonnegative lag -> coefficient maps.

    ``M(z) = 1 + sum_k (h_minus[k] - h_plus[k]) z**-k``; lag ``k > 0`` is
    causal, ``k < 0`` anticausal.
    """

    h_plus: Mapping[int, float] = field(default_factory=dict)
    h_minus: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        hp = {int(k): float(v) for k, v in dict(self.h_plus).items() if v != 0.0}
        hm = {int(k): float(v) for k, v in dict(self.h_minus).items() if v != 0.0}
        if 0 in hp or 0 in hm:
            raise InvalidMultiplier("lag 0 is implicit in M = 1 - H and must be absent")
        if any(v < 0 for v in hp.values()) or any(v < 0 for v in hm.values()):
            raise InvalidMultiplier("h_plus and h_minus coefficients must be nonnegative")
        if set(hp) & set(hm):
            raise InvalidMultiplier("a lag may not appear in both h_plus and h_minus")
        object.__setattr__(self, "h_plus", dict(sorted(hp.items())))
        object.__setattr__(self, "h_minus", dict(sorted(hm.items())))

    @property
    def norm_plus(self) -> float:
        return math.fsum(self.h_plus.values())

    @property
    def norm_minus(self) -> float:
        return math.fsum(self.h_minus.values())

    @property
    def h(self) -> dict[int, float]:
        """Signed impulse response ``h = h_plus - h_minus``."""
        out = dict(self.h_plus)
        out.update({k: -v for k, v in self.h_minus.items()})
        return dict(sorted(out.items()))

    @property
    def m_coeffs(self) -> dict[int, float]:
        """Coefficients of ``M`` at each nonzero lag (``-h``)."""
        return {k: -v for k, v in self.h.items()}

    @classmethod
    def from_m_coeffs(cls, coeffs: Mapping) -> "FirMultiplier":
        """Build from the lag -> coefficient map of ``M`` itself (lag-0 term excluded)."""
        return jordan_split({int(k): -float(v) for k, v in coeffs.items()})

    def scaled(self, c: float) -> "FirMultiplier":
        """Multiplier whose ``h`` is ``c`` times this one."""
        if c < 0:
            return FirMultiplier({k: -c * v for k, v in self.h_minus.items()},
                                 {k: -c * v for k, v in self.h_plus.items()})
        return FirMultiplier({k: c * v for k, v in self.h_plus.items()},
                             {k: c * v for k, v in self.h_minus.items()})

    def to_dict(self) -> dict:
        return {"type": "fir", "coeffs": {str(k): v for k, v in self.m_coeffs.items()}}


@dataclass(frozen=True)
class DelayMultiplier:
    """Continuous multiplier ``M(s) = 1 - sum_i c_i exp(-s t_i)``.

    ``terms`` holds ``(gain, delay)`` pairs; delays are nonzero and distinct
    and may be negative (anticausal).
    """

    terms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        terms = tuple((float(c), float(t)) for c, t in self.terms if c != 0.0)
        delays = [t for _, t in terms]
        if any(t == 0.0 for t in delays):
            raise InvalidMultiplier("delays must be nonzero")
        if len(set(delays)) != len(delays):
            raise InvalidMultiplier("delays must be distinct")
        object.__setattr__(self, "terms", terms)

    @property
    def norm_plus(self) -> float:
        return math.fsum(max(c, 0.0) for c, _ in self.terms)

    @property
    def norm_minus(self) -> float:
        return math.fsum(max(-c, 0.0) for c, _ in self.terms)

    def scaled(self, c: float) -> "DelayMultiplier":
        return DelayMultiplier(tuple((c * g, t) for g, t in self.terms))

    def to_dict(self) -> dict:
        return {"type": "delay", "terms": [{"gain": c, "delay": t} for c, t in self.terms]}


Multiplier = Union[FirMultiplier, DelayMultiplier]


def jordan_split(h: Mapping[int, float]) -> FirMultiplier:
    """Split a signed impulse response into ``h_plus`` and ``h_minus``.

    >>> m = jordan_split({1: 0.5, -2: -0.25})
    >>> m.h_plus, m.h_minus
    ({1: 0.5}, {-2: 0.25})
    """
    h = {int(k): float(v) for k, v in h.items()}
    if h.get(0, 0.0) != 0.0:
        raise InvalidMultiplier("h must vanish at lag 0")
    h.pop(0, None)
    return FirMultiplier({k: v for k, v in h.items() if v > 0},
                         {k: -v for k, v in h.items() if v < 0})


def norm_margin(m: Multiplier, A: float, B: float) -> float:
    """Slack ``1 - (A*||h+||_1 + B*||h-||_1)`` of the class condition.

    ``B`` may be infinite, in which case any nonzero ``h-`` gives ``-inf``.
    The multiplier is in the class iff the result is positive.
    """
    npl, nmi = m.norm_plus, m.norm_minus
    if math.isinf(B):
        return -math.inf if nmi > 0 else 1.0 - A * npl
    return 1.0 - (A * npl + B * nmi)


def mult_freq_response(m: Multiplier, w):
    """``M(exp(jw))`` for FIR multipliers, ``M(jw)`` for delay multipliers."""
    w = np.asarray(w, dtype=float)
    out = np.ones(w.shape, dtype=complex)
    if isinstance(m, FirMultiplier):
        for k, v in m.m_coeffs.items():
            out += v * np.exp(-1j * w * k)
    else:
        for c, t in m.terms:
            out -= c * np.exp(-1j * w * t)
    return complex(out) if out.ndim == 0 else out


class NormStatus(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def norm_status(m: Multiplier, A: float, B: float, eps: float = STRICTNESS_EPS) -> NormStatus:
    """Where the multiplier sits relative to the (strict) class condition.

    ``BOUNDARY`` means the weighted norm equals one to within ``eps``: the
    strict inequality fails, but any slightly shrunk multiplier satisfies it,
    so a frequency condition with slack still certifies stability by
    continuity.
    """
    r = norm_margin(m, A, B)
    if r > eps:
        return NormStatus.INSIDE
    if r >= -eps:
        return NormStatus.BOUNDARY
    return NormStatus.OUTSIDE


class MultiplierClass(str, Enum):
    """Most specific named multiplier class a multiplier satisfies.

    ``GENERAL`` weights ``h+`` by ``A`` and ``h-`` by ``B`` (with
    ``A = B = 1`` it is the classical Zames-Falb class); ``QUASI_ODD`` is
    the ``A = 1`` case; ``ODD_BOUNDS`` the ``A = B`` case, where only
    ``||h||`` matters; ``TRANSFORMED_MONOTONE`` applies after a loop
    transform of a monotone nonlinearity (``A_k = 1``);
    ``ASYMMETRIC_SATURATION`` is that case for saturation, where ``k`` may
    equal the slope.
    """

    GENERAL = "general"
    QUASI_ODD = "quasi_odd"
    ODD_BOUNDS = "odd_bounds"
    TRANSFORMED_MONOTONE = "transformed_monotone"
    ASYMMETRIC_SATURATION = "asymmetric_saturation"
    OUTSIDE = "outside"


def classify(m: Multiplier, sector, eps: float = STRICTNESS_EPS) -> MultiplierClass:
    """Name the class condition that ``m`` satisfies for ``sector``.

    ``sector`` is a :class:`~lurye.bounds.SectorSummary`; the transformed
    ratios ``A_k``, ``B_k`` are used when present.
    """
    A, B = sector.weights
    if norm_margin(m, A, B) <= eps:
        return MultiplierClass.OUTSIDE
    if sector.A_k is not None and A == 1.0:
        if sector.kind == "asym_sat":
            return MultiplierClass.ASYMMETRIC_SATURATION
        return MultiplierClass.TRANSFORMED_MONOTONE
    if sector.A_k is None and A == 1.0 and B > 1.0:
        return MultiplierClass.QUASI_ODD
    if sector.A_k is None and A == B and A > 1.0:
        return MultiplierClass.ODD_BOUNDS
    return MultiplierClass.GENERAL


def multiplier_from_dict(d: dict) -> Multiplier:
    kind = d.get("type")
    if kind == "fir":
        return FirMultiplier.from_m_coeffs(d.get("coeffs", {}))
    if kind == "delay":
        return DelayMultiplier(tuple((t["gain"], t["delay"]) for t in d.get("terms", [])))
    raise InvalidMultiplier(f"unknown multiplier type {kind!r}")
