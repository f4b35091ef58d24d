"""Reference computations that share no code with the package.

Each helper re-derives a quantity by a different route (scipy routines,
dense sampling, direct-form I recursion) so the package can be checked
against it.
"""

import numpy as np
from scipy import optimize, signal


def freq_response(domain, num, den, w, delay=0.0):
    w = np.atleast_1d(np.asarray(w, dtype=float))
    if domain == "discrete":
        # scipy's freqz takes coefficients in powers of z^-1
        n = len(den) - 1
        b = np.concatenate([np.zeros(n + 1 - len(num)), num])
        _, h = signal.freqz(b, den, worN=w)
        return h
    _, h = signal.freqs(num, den, worN=w)
    return h * np.exp(-1j * w * delay)


def dense_ratio(lower, upper, lo=-50.0, hi=50.0, n=200_001):
    """max over x != 0 of upper(x)/lower(x), by sampling."""
    far = np.logspace(2, 9, 200)
    x = np.concatenate([np.linspace(lo, hi, n), far, -far])
    x = x[np.abs(x) > 1e-9]
    fl, fu = lower(x), upper(x)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = np.where(np.abs(fl) > 1e-14, fu / fl, np.where(np.abs(fu) > 1e-14, np.inf, 1.0))
    return float(np.max(r))


def lp_margin(num, den, k, lags, A, B, w, delta):
    """Optimal grid margin of the multiplier LP, solved by HiGHS on the primal."""
    z = np.exp(1j * w)
    G = np.polyval(num, z) / np.polyval(den, z)
    P = 1 + k * G if k else G
    C = np.real(np.exp(-1j * np.outer(w, lags)) * P[:, None])
    L = len(lags)
    # variables: lam_plus (L), lam_minus (L), eps (free)
    A_ub = np.hstack([C, -C, np.ones((w.size, 1))])
    b_ub = P.real
    norm = np.concatenate([np.full(L, A), np.full(L, B), [0.0]])
    A_ub = np.vstack([A_ub, norm])
    b_ub = np.concatenate([b_ub, [1 - delta]])
    c = np.zeros(2 * L + 1)
    c[-1] = -1
    bounds = [(0, None)] * (2 * L) + [(None, None)]
    res = optimize.linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    assert res.status == 0
    return -res.fun


def simulate_df1(num, den, phi, r2, r1=0.0):
    """Loop simulation with a direct-form I recursion on stored input/output histories."""
    num = np.asarray(num, float)
    den = np.asarray(den, float)
    n = len(den) - 1
    b = np.concatenate([np.zeros(n + 1 - len(num)), num]) / den[0]
    a = den / den[0]
    T = len(r2)
    u1 = np.zeros(T)
    y1 = np.zeros(T)
    u2 = np.zeros(T)
    for t in range(T):
        acc = 0.0
        for i in range(1, n + 1):
            if t - i >= 0:
                acc += b[i] * u1[t - i] - a[i] * y1[t - i]
        y1[t] = acc
        u2[t] = y1[t] + r2[t]
        u1[t] = r1 - phi(u2[t])
    return u2
