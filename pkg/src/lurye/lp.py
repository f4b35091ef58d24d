"""Dense two-phase tableau simplex for ``max c'x  s.t.  A x <= b, x >= 0``.

Pricing is Dantzig's largest-coefficient rule; after a run of degenerate
pivots it falls back to Bland's smallest-index rule, which cannot cycle.
Ratio-test ties always go to the smallest basic index, so results are
deterministic for a fixed input.

The dual values of the constraints are returned with the primal solution.
They are read off the reduced costs of the slack columns in the final
tableau, which lets callers solve a tall problem through its (small) dual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, Unbounded

__all__ = ["LPSolution", "lp_maximize"]

_DEGENERATE_RUN = 25


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    objective: float
    duals: np.ndarray
    iterations: int


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])
    basis[row - 1] = col


def _run(T, basis, ncols, tol, piv_tol, max_iter):
    """Optimize the tableau in place over the first ``ncols`` columns."""
    it = 0
    degenerate = 0
    while True:
        red = T[0, :ncols]
        if degenerate >= _DEGENERATE_RUN:
            cand = np.flatnonzero(red < -tol)
            if cand.size == 0:
                return it
            col = int(cand[0])
        else:
            col = int(np.argmin(red))
            if red[col] >= -tol:
                return it
        colv = T[1:, col]
        rows = np.flatnonzero(colv > piv_tol)
        if rows.size == 0:
            raise Unbounded("objective is unbounded")
        ratios = T[1 + rows, -1] / colv[rows]
        best = ratios.min()
        tie = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(tie[np.argmin(np.asarray(basis)[tie])]) + 1
        degenerate = degenerate + 1 if T[row, -1] <= tol else 0
        _pivot(T, basis, row, col)
        it += 1
        if it > max_iter:
            raise RuntimeError("simplex iteration limit reached")


def lp_maximize(c, A_le, b_le, *, tol: float = 1e-9, max_iter: int = 50_000) -> LPSolution:
    """Maximize ``c @ x`` subject to ``A_le @ x <= b_le`` and ``x >= 0``.

    Parameters
    ----------
    c : array_like, shape (n,)
    A_le : array_like, shape (m, n)
    b_le : array_like, shape (m,)

    Returns
    -------
    LPSolution
        ``x`` an optimal vertex, ``objective`` its value and ``duals`` the
        optimal multipliers of the ``m`` constraints (nonnegative).

    Raises
    ------
    Infeasible
        No ``x >= 0`` satisfies the constraints.
    Unbounded
        The objective grows without bound on the feasible set.

    Examples
    --------
    >>> sol = lp_maximize([1.0], [[1.0]], [1.0])
    >>> float(sol.x[0]), float(sol.objective)
    (1.0, 1.0)
    """
    c = np.asarray(c, dtype=float).ravel()
    A = np.atleast_2d(np.asarray(A_le, dtype=float))
    b = np.asarray(b_le, dtype=float).ravel()
    m, n = A.shape
    if c.size != n or b.size != m:
        raise ValueError("inconsistent LP dimensions")
    neg = b < 0
    n_art = int(neg.sum())
    ncols = n + m + n_art
    T = np.zeros((m + 1, ncols + 1))
    T[1:, :n] = A
    T[1:, n:n + m] = np.eye(m)
    T[1:, -1] = b
    T[1:][neg] *= -1.0
    basis = list(range(n, n + m))
    art_rows = np.flatnonzero(neg)
    for j, r in enumerate(art_rows):
        T[1 + r, n + m + j] = 1.0
        basis[r] = n + m + j
    scale = max(1.0, float(np.abs(A).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    piv_tol = 1e-11 * scale
    it = 0
    if n_art:
        # phase 1: maximize -sum(artificials)
        T[0, :] = -T[1 + art_rows].sum(axis=0)
        T[0, n + m:ncols] = 0.0
        it += _run(T, basis, ncols, tol, piv_tol, max_iter)
        if T[0, -1] < -tol * scale:
            raise Infeasible("no x >= 0 satisfies the constraints")
        # drive artificials still basic (at level zero) out of the basis
        for r in range(m):
            if basis[r] >= n + m:
                cand = np.flatnonzero(np.abs(T[1 + r, :n + m]) > piv_tol)
                if cand.size:
                    _pivot(T, basis, r + 1, int(cand[0]))
        T[:, n + m:ncols] = 0.0
    cfull = np.concatenate((c, np.zeros(m + n_art)))
    cb = cfull[basis]
    T[0, :] = cb @ T[1:, :]
    T[0, :ncols] -= cfull
    T[0, n + m:ncols] = 0.0
    it += _run(T, basis, n + m, tol, piv_tol, max_iter)
    x = np.zeros(n + m + n_art)
    x[basis] = T[1:, -1]
    duals = T[0, n:n + m].copy()
    return LPSolution(x[:n].copy(), float(c @ x[:n]), duals, it)
