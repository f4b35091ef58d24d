"""Time-domain simulation of the discrete Lurye loop.

The loop is

    y1 = G u1,   y2 = phi(u2),   u1 = r1 - y2,   u2 = y1 + r2

with ``G`` strictly proper, so ``y1[t]`` depends only on past ``u1`` and
every step is explicit.  ``G`` is run as a direct-form II transposed
recursion.

Verdicts are heuristics on finite traces: a detected limit cycle is
evidence of instability, not a proof, and a steady state is only the
observed behaviour of one trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import AlgebraicLoop, DomainError
from .lti import Domain, RationalPlant, dc_gain

__all__ = [
    "LuryeLoop", "SimTrace", "ConvergedTo", "LimitCycle", "Undetermined", "Verdict",
    "simulate", "detect_steady_state", "detect_limit_cycle", "classify_trace",
    "run_schedule", "equilibrium", "equilibrium_state", "SS_TOL", "CYCLE_TOL",
]

SS_TOL = 1e-8
CYCLE_TOL = 1e-6
TRANSIENT = 0.25

Signal = Union[float, Sequence[float], Callable[[int], float]]


@dataclass(frozen=True)
class ConvergedTo:
    """Trace settles at ``value``.

    ``residual`` measures how far the verdict window is from constant.  It
    is below the steady-state tolerance for a settled trace; a larger
    residual means the trace was still contracting toward ``value`` when it
    ended.
    """

    value: float
    residual: float = 0.0

    @property
    def settled(self) -> bool:
        return self.residual < SS_TOL

    def to_dict(self) -> dict:
        return {"kind": "converged", "value": self.value, "residual": self.residual}


@dataclass(frozen=True)
class LimitCycle:
    """Trace repeats with ``period``; ``samples`` is one period of ``u2``.

    ``residual`` is the largest ``|u2[t+p] - u2[t]|`` at the end of the
    window; above the cycle tolerance it means the orbit was still
    contracting onto the cycle.
    """

    period: int
    samples: tuple = ()
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {"kind": "limit_cycle", "period": self.period, "samples": list(self.samples),
                "residual": self.residual}


@dataclass(frozen=True)
class Undetermined:
    reason: str = ""

    def to_dict(self) -> dict:
        return {"kind": "undetermined", "reason": self.reason}


Verdict = Union[ConvergedTo, LimitCycle, Undetermined]


@dataclass(frozen=True)
class LuryeLoop:
    """Discrete Lurye loop with a static nonlinearity.

    ``nonlinearity`` is any callable on floats with ``f(0) = 0``, for
    example a :class:`~lurye.bounds.PwlMonotone` saturation.  ``r1`` and
    ``r2`` are constants, sequences (indexed by step) or callables of the
    step index.
    """

    plant: RationalPlant
    nonlinearity: Callable[[float], float]
    r1: Signal = 0.0
    r2: Signal = 0.0

    def __post_init__(self):
        if self.plant.domain is not Domain.DISCRETE:
            raise DomainError("only discrete plants can be simulated")
        if not self.plant.strictly_proper:
            raise AlgebraicLoop("plant must be strictly proper to avoid an algebraic loop")
        if abs(float(self.nonlinearity(0.0))) > 1e-12:
            raise ValueError("nonlinearity must vanish at 0")

    @property
    def order(self) -> int:
        return len(self.plant.den) - 1


def _signal(sig: Signal, n: int) -> np.ndarray:
    if callable(sig):
        return np.array([float(sig(t)) for t in range(n)])
    arr = np.asarray(sig, dtype=float)
    if arr.ndim == 0:
        return np.full(n, float(arr))
    if arr.size < n:
        raise ValueError(f"signal has {arr.size} samples, need {n}")
    return arr[:n].copy()


def _coeffs(plant: RationalPlant):
    a = np.asarray(plant.den, dtype=float)
    b = np.zeros_like(a)
    num = np.asarray(plant.num, dtype=float)
    b[a.size - num.size:] = num
    return b / a[0], a / a[0]


@dataclass
class SimTrace:
    """Sampled loop signals.  ``state`` is the plant state after the last step."""

    r1: np.ndarray
    r2: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    state: np.ndarray
    verdict: Verdict = field(default_factory=Undetermined)
    segments: list = field(default_factory=list)

    def __len__(self) -> int:
        return self.u2.size

    def rows(self):
        """``(t, r2, u2, y1, y2)`` tuples, the CSV layout."""
        for t in range(len(self)):
            yield t, float(self.r2[t]), float(self.u2[t]), float(self.y1[t]), float(self.y2[t])


def simulate(loop: LuryeLoop, n_steps: int, init=None, *, classify: bool = True) -> SimTrace:
    """Run the loop for ``n_steps`` samples.

    Parameters
    ----------
    loop : LuryeLoop
    n_steps : int
    init : array_like, optional
        Plant state (length = plant order) in direct-form II transposed
        coordinates; zero by default.  :func:`equilibrium_state` gives the
        state of a constant operating point.
    classify : bool
        Attach a verdict from :func:`classify_trace`.

    Raises
    ------
    AlgebraicLoop
        If the plant is not strictly proper (checked by :class:`LuryeLoop`).

    Examples
    --------
    >>> from lurye.lti import RationalPlant
    >>> g = RationalPlant("discrete", [0.5], [1.0, -0.5])
    >>> tr = simulate(LuryeLoop(g, lambda u: u, r2=1.0), 200)
    >>> round(float(tr.u2[-1]), 9)
    0.5
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    b, a = _coeffs(loop.plant)
    n = loop.order
    z = np.zeros(n) if init is None else np.array(init, dtype=float)
    if z.shape != (n,):
        raise ValueError(f"initial state must have length {n}")
    r1 = _signal(loop.r1, n_steps)
    r2 = _signal(loop.r2, n_steps)
    u1, u2, y1, y2 = (np.empty(n_steps) for _ in range(4))
    phi = loop.nonlinearity
    for t in range(n_steps):
        y = z[0] if n else 0.0
        u = y + r2[t]
        v = float(phi(u))
        e = r1[t] - v
        y1[t], u2[t], y2[t], u1[t] = y, u, v, e
        if n:
            z[:-1] = b[1:-1] * e + z[1:] - a[1:-1] * y
            z[-1] = b[-1] * e - a[-1] * y
    tr = SimTrace(r1, r2, u1, u2, y1, y2, z)
    if classify and n_steps:
        tr.verdict = classify_trace(tr.u2)
    return tr


def _u2(trace) -> np.ndarray:
    return np.asarray(trace.u2 if isinstance(trace, SimTrace) else trace, dtype=float)


def detect_steady_state(trace, window: int, tol: float = SS_TOL) -> Optional[float]:
    """Mean of the last ``window`` samples of ``u2`` if they spread less than ``tol``.

    ``trace`` may be a :class:`SimTrace` or a plain sequence.
    """
    u = _u2(trace)
    if not 0 < window <= u.size:
        raise ValueError("window must be positive and no longer than the trace")
    tail = u[-window:]
    if np.max(np.abs(tail - tail.mean())) < tol:
        return float(tail.mean())
    return None


def detect_limit_cycle(trace, max_period: int = 20, tol: float = CYCLE_TOL,
                       transient: float = TRANSIENT) -> Optional[int]:
    """Smallest period ``p <= max_period`` of the post-transient tail of ``u2``.

    The first ``transient`` fraction of the trace is discarded.  Period 1
    (a constant tail) is a steady state and returns ``None``.
    """
    u = _u2(trace)
    tail = u[int(math.floor(transient * u.size)):]
    for p in range(1, max_period + 1):
        if tail.size < 3 * p or tail.size <= p:
            break
        if np.max(np.abs(tail[p:] - tail[:-p])) < tol:
            return None if p == 1 else p
    return None


def _contracting(d: np.ndarray) -> bool:
    # the differences shrink by at least half from the first to the second half
    if d.size < 8:
        return False
    h = d.size // 2
    return float(d[h:].max()) <= 0.5 * float(d[:h].max())


def classify_trace(u2, *, max_period: int = 20, ss_tol: float = SS_TOL,
                   cycle_tol: float = CYCLE_TOL, transient: float = TRANSIENT) -> Verdict:
    """Steady state, limit cycle, or undetermined.

    Strict checks come first: spread below ``ss_tol``, then a period found
    by :func:`detect_limit_cycle`.  Failing those, the smallest ``p`` whose
    differences ``|u2[t+p] - u2[t]|`` keep shrinking across the window is
    reported with its (larger) residual: slowly damped linear modes can
    outlast a short window, and the verdict then says where the orbit is
    heading rather than claiming it got there.
    """
    u = _u2(u2)
    tail = u[int(math.floor(transient * u.size)):]
    if tail.size == 0:
        return Undetermined("empty trace")
    spread = float(np.max(np.abs(tail - tail[-1])))
    if spread < ss_tol:
        return ConvergedTo(float(tail.mean()), spread)
    p = detect_limit_cycle(u, max_period, cycle_tol, transient)
    if p is not None:
        d = np.abs(tail[p:] - tail[:-p])
        return LimitCycle(p, tuple(float(x) for x in tail[-p:]), float(d.max()))
    for p in range(1, max_period + 1):
        if tail.size < 3 * p:
            break
        d = np.abs(tail[p:] - tail[:-p])
        if not _contracting(d):
            continue
        res = float(d[-max(p, d.size // 10):].max())
        if res > 1e-2 * max(1.0, spread):
            continue
        if p == 1:
            return ConvergedTo(float(tail[-1]), res)
        return LimitCycle(p, tuple(float(x) for x in tail[-p:]), res)
    return Undetermined(f"no period <= {max_period} and no contraction; spread {spread:.3g}")


def run_schedule(loop: LuryeLoop, schedule: Sequence[tuple[int, float]],
                 n_total: Optional[int] = None, init=None, **verdict_kw) -> SimTrace:
    """Apply piecewise-constant ``r2`` levels, carrying the state across switches.

    ``schedule`` is a list of ``(duration, r2 level)`` pairs; it is repeated
    cyclically until ``n_total`` samples have been produced (default: one
    pass).  ``loop.r2`` is ignored.  Each segment gets its own verdict from
    :func:`classify_trace`, stored in ``trace.segments`` as
    ``(start, stop, level, verdict)``.
    """
    if not schedule:
        raise ValueError("empty schedule")
    if any(int(d) <= 0 for d, _ in schedule):
        raise ValueError("durations must be positive")
    total = sum(int(d) for d, _ in schedule) if n_total is None else int(n_total)
    levels, bounds = [], []
    t = 0
    i = 0
    while t < total:
        d, lvl = schedule[i % len(schedule)]
        d = min(int(d), total - t)
        levels.append(np.full(d, float(lvl)))
        bounds.append((t, t + d, float(lvl)))
        t += d
        i += 1
    r2 = np.concatenate(levels) if levels else np.zeros(0)
    run = LuryeLoop(loop.plant, loop.nonlinearity, loop.r1, r2)
    tr = simulate(run, total, init, classify=False)
    tr.segments = [(s, e, lvl, classify_trace(tr.u2[s:e], **verdict_kw)) for s, e, lvl in bounds]
    if total:
        tr.verdict = tr.segments[-1][3]
    return tr


def equilibrium(loop: LuryeLoop, r1: float = 0.0, r2: float = 0.0,
                tol: float = 1e-14) -> float:
    """Constant ``u2`` with ``u2 = G(1) (r1 - phi(u2)) + r2``.

    Solved by bisection, which needs ``G(1) >= 0`` and a nondecreasing
    nonlinearity so that the residual is monotone.
    """
    g1 = dc_gain(loop.plant)
    if g1 < 0:
        raise DomainError("equilibrium search needs a nonnegative dc gain")
    phi = loop.nonlinearity

    def res(u):
        return u + g1 * (float(phi(u)) - r1) - r2

    lo, hi = -1.0, 1.0
    while res(lo) > 0:
        lo *= 2.0
    while res(hi) < 0:
        hi *= 2.0
    while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if res(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def equilibrium_state(loop: LuryeLoop, r1: float = 0.0, r2: float = 0.0) -> np.ndarray:
    """Plant state at which the loop sits at its constant operating point.

    Passing it as ``init`` to :func:`simulate` starts the loop at rest there,
    for example at the low level of a switching experiment.
    """
    u = equilibrium(loop, r1, r2)
    e = r1 - float(loop.nonlinearity(u))
    b, a = _coeffs(loop.plant)
    n = loop.order
    # fixed point of z <- S z + b[1:] e - a[1:] z[0]
    S = np.eye(n, k=1)
    S[:, 0] -= a[1:]
    return np.linalg.solve(np.eye(n) - S, b[1:] * e)
