"""Monotone envelope functions and the ratios that weight multiplier norms.

A nonlinearity ``y = phi(u)`` is described by four piecewise-linear
envelopes: a monotone pair ``alpha_lo <= alpha_hi`` and an odd monotone pair
``beta_lo <= beta_hi`` (ordering in the sector sense, i.e. of ``f(u)/u``).
The least constants ``A`` and ``B`` with ``alpha_hi <= A*alpha_lo`` and
``beta_hi <= B*beta_lo`` decide which multipliers are admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidEnvelope, OffsetExceedsSaturation, SlopeExceedsK

__all__ = [
    "PwlMonotone", "BoundQuartet", "SectorSummary", "ratio_bound",
    "deadzone_bounds", "asym_saturation_bounds", "quartet_from_envelopes",
    "loop_transform", "transformed_sector", "summarize",
    "bk_for_offset_saturation", "sample_admissible", "odd_lower", "odd_upper",
    "deadzone_ak_closed_form", "bounds_from_dict",
]

_EPS = 1e-12


@dataclass(frozen=True)
class PwlMonotone:
    """Continuous, nondecreasing, piecewise-linear ``f`` with ``f(0) = 0``.

    Parameters
    ----------
    breakpoints : sequence of float
        Strictly increasing, must contain 0.
    values : sequence of float
        ``f`` at each breakpoint.
    left_slope, right_slope : float
        Slopes of the linear extensions beyond the outermost breakpoints.

    The function is callable on scalars and arrays.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    left_slope: float = 0.0
    right_slope: float = 0.0

    def __post_init__(self):
        b = tuple(float(x) for x in self.breakpoints)
        v = tuple(float(x) for x in self.values)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "left_slope", float(self.left_slope))
        object.__setattr__(self, "right_slope", float(self.right_slope))
        if len(b) != len(v) or not b:
            raise InvalidEnvelope("breakpoints and values must be nonempty and of equal length")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise InvalidEnvelope("breakpoints must be strictly increasing")
        if 0.0 not in b:
            raise InvalidEnvelope("breakpoints must contain 0")
        if v[b.index(0.0)] != 0.0:
            raise InvalidEnvelope("envelope must vanish at 0")
        if min(self.slopes) < 0 or not all(math.isfinite(s) for s in self.slopes):
            raise InvalidEnvelope("envelope must be monotone with finite slopes")

    @property
    def segment_slopes(self) -> tuple[float, ...]:
        b, v = self.breakpoints, self.values
        return tuple((v[i + 1] - v[i]) / (b[i + 1] - b[i]) for i in range(len(b) - 1))

    @property
    def slopes(self) -> tuple[float, ...]:
        """All slopes, left tail first, right tail last."""
        return (self.left_slope,) + self.segment_slopes + (self.right_slope,)

    @property
    def max_slope(self) -> float:
        return max(self.slopes)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        b, v = self.breakpoints, self.values
        y = np.interp(x, b, v)
        y = np.where(x < b[0], v[0] + self.left_slope * (x - b[0]), y)
        y = np.where(x > b[-1], v[-1] + self.right_slope * (x - b[-1]), y)
        return float(y) if y.ndim == 0 else y

    def reflect(self) -> "PwlMonotone":
        """``x -> -f(-x)``; equals ``self`` iff ``f`` is odd."""
        return PwlMonotone(
            tuple(-x for x in reversed(self.breakpoints)),
            tuple(-y for y in reversed(self.values)),
            self.right_slope, self.left_slope,
        )

    def is_odd(self, tol: float = 1e-12) -> bool:
        pts = np.array(sorted(set(self.breakpoints) | {-x for x in self.breakpoints}))
        pts = np.concatenate((pts, [pts[0] - 1.0, pts[-1] + 1.0]))
        return bool(np.allclose(self(-pts), -self(pts), rtol=0, atol=tol * (1 + np.abs(pts).max())))

    @classmethod
    def linear(cls, slope: float) -> "PwlMonotone":
        return cls((0.0,), (0.0,), slope, slope)

    @classmethod
    def saturation(cls, s: float, m: float, n: float) -> "PwlMonotone":
        """``sat_{s,-m,n}``: slope ``s`` between the levels ``-m`` and ``n``."""
        if min(s, m, n) <= 0:
            raise InvalidEnvelope("saturation needs s, m, n > 0")
        return cls((-m / s, 0.0, n / s), (-m, 0.0, n), 0.0, 0.0)

    @classmethod
    def deadzone(cls, d_n: float, d_p: float, s_n: float, s_p: float) -> "PwlMonotone":
        """Zero on ``[-d_n, d_p]``, slope ``s_n`` to the left and ``s_p`` to the right."""
        if d_n <= 0 or d_p <= 0:
            raise InvalidEnvelope("deadzone widths must be positive")
        return cls((-d_n, 0.0, d_p), (0.0, 0.0, 0.0), s_n, s_p)

    def to_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values),
                "left_slope": self.left_slope, "right_slope": self.right_slope}


def _simplify(b: list[float], v: list[float], left: float, right: float) -> PwlMonotone:
    keep_b, keep_v = [b[0]], [v[0]]
    for i in range(1, len(b) - 1):
        s0 = (v[i] - keep_v[-1]) / (b[i] - keep_b[-1])
        s1 = (v[i + 1] - v[i]) / (b[i + 1] - b[i])
        if b[i] == 0.0 or abs(s0 - s1) > _EPS * max(1.0, abs(s0), abs(s1)):
            keep_b.append(b[i])
            keep_v.append(v[i])
    if len(b) > 1:
        keep_b.append(b[-1])
        keep_v.append(v[-1])
    return PwlMonotone(tuple(keep_b), tuple(keep_v), left, right)


def _pointwise(f: PwlMonotone, g: PwlMonotone, pos_pick, neg_pick) -> PwlMonotone:
    """Splice ``pos_pick(f, g)`` on x >= 0 with ``neg_pick(f, g)`` on x <= 0.

    ``pos_pick``/``neg_pick`` are ``min`` or ``max``.  Crossing points of
    ``f - g`` are inserted so the result is exactly piecewise linear.
    """
    xs = sorted(set(f.breakpoints) | set(g.breakpoints))
    extra = []
    for a, b in zip(xs, xs[1:]):
        da, db = f(a) - g(a), f(b) - g(b)
        if da * db < 0:
            extra.append(a + (b - a) * da / (da - db))
    d, ds = f(xs[-1]) - g(xs[-1]), f.right_slope - g.right_slope
    if d * ds < 0:
        extra.append(xs[-1] - d / ds)
    d, ds = f(xs[0]) - g(xs[0]), f.left_slope - g.left_slope
    if d * ds > 0:
        extra.append(xs[0] - d / ds)
    xs = sorted(set(xs) | set(extra))

    def pick(x):
        return (pos_pick if x >= 0 else neg_pick)(f(x), g(x))

    vals = [pick(x) for x in xs]
    vals[xs.index(0.0)] = 0.0
    # no crossings beyond the outermost points, so one far sample decides each tail
    far_r = xs[-1] + max(1.0, abs(xs[-1]))
    far_l = xs[0] - max(1.0, abs(xs[0]))
    right = f.right_slope if pick(far_r) == f(far_r) else g.right_slope
    left = f.left_slope if pick(far_l) == f(far_l) else g.left_slope
    return _simplify(xs, vals, left, right)


def odd_lower(f: PwlMonotone) -> PwlMonotone:
    """Largest odd monotone function lying below ``f`` in the sector sense."""
    return _pointwise(f, f.reflect(), min, max)


def odd_upper(f: PwlMonotone) -> PwlMonotone:
    """Smallest odd monotone function lying above ``f`` in the sector sense."""
    return _pointwise(f, f.reflect(), max, min)


def _check_sector_order(lower: PwlMonotone, upper: PwlMonotone) -> None:
    xs = sorted(set(lower.breakpoints) | set(upper.breakpoints))
    mids = [(a + b) / 2 for a, b in zip(xs, xs[1:])]
    pts = np.array([x for x in xs + mids if x != 0.0] + [xs[0] - 1.0, xs[-1] + 1.0])
    lo, hi = lower(pts), upper(pts)
    scale = 1e-12 * (1.0 + np.abs(pts))
    if np.any(lo * np.sign(pts) < -scale) or np.any((hi - lo) * np.sign(pts) < -scale):
        raise InvalidEnvelope("envelopes violate the sector ordering 0 <= lower/u <= upper/u")
    if upper.right_slope < lower.right_slope - _EPS or upper.left_slope < lower.left_slope - _EPS:
        raise InvalidEnvelope("envelopes cross in the tails")


def _limit_ratio(lo_val, hi_val, lo_slope, hi_slope):
    """Limit of hi/lo approaching a point where both are linear."""
    if abs(lo_val) > _EPS:
        return hi_val / lo_val
    if abs(hi_val) > _EPS:
        return math.inf
    return hi_slope / lo_slope


def ratio_bound(lower: PwlMonotone, upper: PwlMonotone) -> float:
    """Least ``R >= 1`` with ``upper(x)/x <= R * lower(x)/x`` for all ``x != 0``.

    Exact for piecewise-linear envelopes: on every linear piece the ratio is
    a Moebius function of ``x`` and so attains its supremum at an end of the
    piece (or as a limit there).  Returns ``inf`` when ``lower`` vanishes on
    a piece where ``upper`` does not.

    Raises
    ------
    InvalidEnvelope
        If the pair is not sector ordered.
    """
    _check_sector_order(lower, upper)
    xs = sorted(set(lower.breakpoints) | set(upper.breakpoints))
    pieces = [(-math.inf, xs[0])] + list(zip(xs, xs[1:])) + [(xs[-1], math.inf)]
    best = 1.0
    for a, b in pieces:
        if a == -math.inf:
            sl, su, ref = lower.left_slope, upper.left_slope, b
        elif b == math.inf:
            sl, su, ref = lower.right_slope, upper.right_slope, a
        else:
            sl = (lower(b) - lower(a)) / (b - a)
            su = (upper(b) - upper(a)) / (b - a)
            ref = a
        lr, ur = lower(ref), upper(ref)
        if su == 0 and abs(ur) <= _EPS:
            continue
        if sl == 0 and abs(lr) <= _EPS:
            return math.inf
        for end in (a, b):
            if math.isinf(end):
                if sl > 0:
                    r = su / sl
                elif su > 0:
                    r = math.inf
                else:
                    r = ur / lr
            else:
                r = _limit_ratio(lower(end), upper(end), sl, su)
            best = max(best, r)
    return best


@dataclass(frozen=True)
class BoundQuartet:
    """Envelopes of a nonlinearity plus the ratios ``A`` and ``B``.

    ``kind`` records the constructor (``"deadzone"``, ``"asym_sat"`` or
    ``"pwl"``) and ``params`` its arguments; the saturation family gets an
    analytic treatment when the loop-transformation gain equals the slope.
    """

    alpha_lo: PwlMonotone
    alpha_hi: PwlMonotone
    beta_lo: PwlMonotone
    beta_hi: PwlMonotone
    A: float
    B: float
    kind: str = "pwl"
    params: dict = field(default_factory=dict, compare=False)

    @property
    def slope_max(self) -> float:
        return max(e.max_slope for e in (self.alpha_lo, self.alpha_hi, self.beta_lo, self.beta_hi))

    def to_dict(self) -> dict:
        if self.kind in ("deadzone", "asym_sat"):
            return {"kind": self.kind, **self.params}
        return {"kind": "pwl", "alpha_lo": self.alpha_lo.to_dict(), "alpha_hi": self.alpha_hi.to_dict(),
                "beta_lo": self.beta_lo.to_dict(), "beta_hi": self.beta_hi.to_dict()}


def quartet_from_envelopes(alpha_lo, alpha_hi, beta_lo=None, beta_hi=None, *, kind="pwl", params=None) -> BoundQuartet:
    """Validate four envelopes and compute ``A`` and ``B``.

    Missing odd envelopes are built from the monotone pair by odd
    symmetrization.  ``B`` is never reported below ``A``: any ``B >= A``
    that bounds the odd pair is admissible, so the larger value is used.
    """
    if beta_lo is None:
        beta_lo = odd_lower(alpha_lo)
    if beta_hi is None:
        beta_hi = odd_upper(alpha_hi)
    for name, f in (("beta_lo", beta_lo), ("beta_hi", beta_hi)):
        if not f.is_odd():
            raise InvalidEnvelope(f"{name} must be odd")
    A = ratio_bound(alpha_lo, alpha_hi)
    if not math.isfinite(A):
        raise InvalidEnvelope("monotone envelopes need a finite ratio A")
    B = max(ratio_bound(beta_lo, beta_hi), A)
    return BoundQuartet(alpha_lo, alpha_hi, beta_lo, beta_hi, A, B, kind, dict(params or {}))


def deadzone_bounds(s_n1, s_n2, s_p1, s_p2, d_n, d_p) -> BoundQuartet:
    """Envelopes for a nonlinearity with a (possibly asymmetric) deadzone.

    Below the deadzone the slope lies between ``s_n1`` and ``s_n2``; above
    it between ``s_p1`` and ``s_p2``.  ``B`` is finite only for ``d_n == d_p``.

    >>> q = deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 1)
    >>> round(q.A, 12), round(q.B, 12)
    (1.2, 1.2)
    """
    if not (0 < s_n1 < s_n2 and 0 < s_p1 < s_p2):
        raise InvalidEnvelope("need 0 < s_n1 < s_n2 and 0 < s_p1 < s_p2")
    if d_n <= 0 or d_p <= 0:
        raise InvalidEnvelope("deadzone widths must be positive")
    lo = PwlMonotone.deadzone(d_n, d_p, s_n1, s_p1)
    hi = PwlMonotone.deadzone(d_n, d_p, s_n2, s_p2)
    params = dict(sn1=s_n1, sn2=s_n2, sp1=s_p1, sp2=s_p2, dn=d_n, dp=d_p)
    return quartet_from_envelopes(lo, hi, kind="deadzone", params=params)


def asym_saturation_bounds(s, m, n) -> BoundQuartet:
    """Envelopes of ``sat_{s,-m,n}``: monotone (``A = 1``), quasi-odd with ``B = max/min``."""
    if min(s, m, n) <= 0:
        raise InvalidEnvelope("saturation needs s, m, n > 0")
    f = PwlMonotone.saturation(s, m, n)
    b_lo, b_hi = min(m, n), max(m, n)
    return BoundQuartet(
        f, f, PwlMonotone.saturation(s, b_lo, b_lo), PwlMonotone.saturation(s, b_hi, b_hi),
        1.0, b_hi / b_lo, "asym_sat", dict(s=s, m=m, n=n),
    )


def loop_transform(f: PwlMonotone, k: float) -> PwlMonotone:
    """Graph of ``x - f(x)/k  ->  f(x)``.

    Breakpoints ``b`` move to ``b - f(b)/k``; every slope ``s`` becomes
    ``k*s/(k - s)``.

    Raises
    ------
    SlopeExceedsK
        If some slope of ``f`` is ``>= k``; the transformed graph would then
        contain vertical or backwards pieces.
    """
    if k <= 0:
        raise SlopeExceedsK("k must be positive")
    if f.max_slope >= k:
        raise SlopeExceedsK(f"k={k} does not exceed the envelope slope {f.max_slope}")
    b = tuple(x - y / k for x, y in zip(f.breakpoints, f.values))
    return PwlMonotone(b, f.values, k * f.left_slope / (k - f.left_slope),
                       k * f.right_slope / (k - f.right_slope))


@dataclass(frozen=True)
class SectorSummary:
    A: float
    B: float
    slope_max: float
    k: Optional[float] = None
    A_k: Optional[float] = None
    B_k: Optional[float] = None
    kind: str = "pwl"

    @property
    def weights(self) -> tuple[float, float]:
        """``(A_k, B_k)`` after a loop transform, else ``(A, B)``."""
        if self.A_k is not None:
            return self.A_k, self.B_k
        return self.A, self.B

    def to_dict(self) -> dict:
        d = {"A": self.A, "B": self.B, "slope_max": self.slope_max, "kind": self.kind}
        if self.k is not None:
            d.update(k=self.k, A_k=self.A_k, B_k=self.B_k)
        return d


def summarize(q: BoundQuartet) -> SectorSummary:
    return SectorSummary(q.A, q.B, q.slope_max, kind=q.kind)


def transformed_sector(q: BoundQuartet, k: float) -> SectorSummary:
    """Ratios ``A_k``, ``B_k`` of the loop-transformed envelopes.

    Needs ``k`` strictly above every envelope slope, except for asymmetric
    saturation where ``k`` equal to the saturation slope is allowed and the
    ratios are ``A_k = 1``, ``B_k = max(m, n)/min(m, n)``.
    """
    s = q.slope_max
    if q.kind == "asym_sat" and math.isclose(k, s, rel_tol=1e-12):
        p = q.params
        return SectorSummary(q.A, q.B, s, k, 1.0, max(p["m"], p["n"]) / min(p["m"], p["n"]), q.kind)
    if k <= s:
        raise SlopeExceedsK(f"k={k} must exceed the envelope slope bound s={s}")
    a_lo, a_hi = loop_transform(q.alpha_lo, k), loop_transform(q.alpha_hi, k)
    A_k = 1.0 if q.alpha_lo == q.alpha_hi else ratio_bound(a_lo, a_hi)
    B_k = ratio_bound(loop_transform(q.beta_lo, k), loop_transform(q.beta_hi, k))
    return SectorSummary(q.A, q.B, s, k, A_k, max(B_k, A_k), q.kind)


def deadzone_ak_closed_form(s_n1, s_n2, s_p1, s_p2, k) -> float:
    return max(s_n2 / s_n1 * (k - s_n1) / (k - s_n2), s_p2 / s_p1 * (k - s_p1) / (k - s_p2))


def bk_for_offset_saturation(m: float, u_s: float) -> float:
    """Ratio for a unit-slope symmetric saturation at level ``m`` re-centred on ``u_s``.

    Shifting the operating point to ``u_s`` turns ``sat_{1,-m,m}`` into
    ``sat_{1,-m-u_s,m-u_s}`` whose odd envelopes differ by
    ``(m + |u_s|)/(m - |u_s|)``.
    """
    if abs(u_s) >= m:
        raise OffsetExceedsSaturation(f"|u_s|={abs(u_s)} must be below the saturation level m={m}")
    return (m + abs(u_s)) / (m - abs(u_s))


def sample_admissible(q: BoundQuartet, u, seed=None) -> np.ndarray:
    """Draw an output ``y`` consistent with all four envelopes.

    For each sample the ratio ``y/u`` is uniform between the tightest lower
    and upper envelope ratios; ``y = 0`` where ``u = 0``.
    """
    rng = np.random.default_rng(seed)
    u = np.asarray(u, dtype=float)
    lo_pos = np.maximum(q.alpha_lo(u), q.beta_lo(u))
    hi_pos = np.minimum(q.alpha_hi(u), q.beta_hi(u))
    # negative inputs: smaller ratio means larger value
    lo_neg = np.maximum(q.alpha_hi(u), q.beta_hi(u))
    hi_neg = np.minimum(q.alpha_lo(u), q.beta_lo(u))
    lo = np.where(u > 0, lo_pos, lo_neg)
    hi = np.where(u > 0, hi_pos, hi_neg)
    hi = np.maximum(hi, lo)
    y = lo + rng.random(u.shape) * (hi - lo)
    return np.where(u == 0, 0.0, y)


def _pwl_from_dict(d: dict) -> PwlMonotone:
    return PwlMonotone(d["breakpoints"], d["values"], d.get("left_slope", 0.0), d.get("right_slope", 0.0))


def bounds_from_dict(d: dict) -> BoundQuartet:
    """Build a quartet from its JSON description (``kind`` = deadzone, asym_sat or pwl)."""
    kind = d.get("kind")
    if kind == "deadzone":
        return deadzone_bounds(d["sn1"], d["sn2"], d["sp1"], d["sp2"], d["dn"], d["dp"])
    if kind == "asym_sat":
        return asym_saturation_bounds(d.get("s", 1.0), d["m"], d["n"])
    if kind == "pwl":
        if "alpha_lo" in d:
            env = {key: _pwl_from_dict(d[key]) if key in d else None
                   for key in ("alpha_lo", "alpha_hi", "beta_lo", "beta_hi")}
            return quartet_from_envelopes(env["alpha_lo"], env["alpha_hi"], env["beta_lo"], env["beta_hi"])
        f = _pwl_from_dict(d)
        return quartet_from_envelopes(f, f)
    raise InvalidEnvelope(f"unknown bounds kind {kind!r}")
