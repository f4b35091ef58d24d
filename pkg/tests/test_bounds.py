import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lurye.bounds import (PwlMonotone, asym_saturation_bounds, bk_for_offset_saturation,
                          bounds_from_dict, deadzone_ak_closed_form, deadzone_bounds,
                          loop_transform, odd_lower, odd_upper, quartet_from_envelopes,
                          ratio_bound, sample_admissible, summarize, transformed_sector)
from lurye.errors import InvalidEnvelope, OffsetExceedsSaturation, SlopeExceedsK

import oracles


@st.composite
def pwl(draw, max_pieces=4):
    """Random monotone PWL function through the origin."""
    n_neg = draw(st.integers(0, max_pieces))
    n_pos = draw(st.integers(0, max_pieces))
    gaps = st.floats(0.1, 3.0)
    slope = st.one_of(st.just(0.0), st.floats(0.01, 3.0))
    neg = np.cumsum([draw(gaps) for _ in range(n_neg)])
    pos = np.cumsum([draw(gaps) for _ in range(n_pos)])
    b = list(-neg[::-1]) + [0.0] + list(pos)
    v = [0.0] * len(b)
    i0 = n_neg
    for i in range(i0 + 1, len(b)):
        v[i] = v[i - 1] + draw(slope) * (b[i] - b[i - 1])
    for i in range(i0 - 1, -1, -1):
        v[i] = v[i + 1] - draw(slope) * (b[i + 1] - b[i])
    return PwlMonotone(b, v, draw(slope), draw(slope))


def test_pwl_evaluation():
    f = PwlMonotone.saturation(1.0, 1.0, 2.0)
    np.testing.assert_allclose(f([-5, -1, -0.5, 0, 1.5, 2, 7]), [-1, -1, -0.5, 0, 1.5, 2, 2])
    d = PwlMonotone.deadzone(1.0, 2.0, 0.5, 0.6)
    np.testing.assert_allclose(d([-3, -1, 0, 2, 4]), [-1.0, 0, 0, 0, 1.2])


@pytest.mark.parametrize("args", [
    ((0.0, 1.0), (0.0, -1.0), 0, 0),        # decreasing
    ((-1.0, 1.0), (-1.0, 1.0), 0, 0),       # no breakpoint at 0
    ((0.0, 1.0), (0.0, 1.0), -1, 0),        # negative tail slope
    ((-1.0, 0.0), (-1.0, 0.5), 0, 0),       # nonzero at origin
    ((0.0, 0.0), (0.0, 0.0), 0, 0),         # repeated breakpoint
])
def test_invalid_pwl(args):
    with pytest.raises(InvalidEnvelope):
        PwlMonotone(*args)


@pytest.mark.parametrize("d", [0.5, 1.0, 3.0])
def test_deadzone_ratio_symmetric_slopes(d):
    q = deadzone_bounds(0.5, 0.6, 0.5, 0.6, d, d)
    assert q.A == pytest.approx(1.2, rel=1e-12)
    assert q.B == pytest.approx(1.2, rel=1e-12)


def test_deadzone_unequal_widths_has_infinite_B():
    q = deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 2)
    assert q.A == pytest.approx(1.2)
    assert q.B == math.inf


def test_symmetric_monotone_deadzone_is_trivial():
    lo = PwlMonotone.deadzone(1.0, 1.0, 0.5, 0.5)
    q = quartet_from_envelopes(lo, lo)
    assert (q.A, q.B) == (1.0, 1.0)


def test_deadzone_slope_order_checked():
    with pytest.raises(InvalidEnvelope):
        deadzone_bounds(0.6, 0.5, 0.5, 0.6, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(1.01, 3.0), st.floats(0.05, 1.0), st.floats(1.01, 3.0),
       st.floats(0.1, 3.0))
def test_deadzone_B_formula_equal_widths(sn1, rn, sp1, rp, d):
    # equal widths: B = max(sn2, sp2) / min(sn1, sp1); A = max of the per-side ratios
    sn2, sp2 = sn1 * rn, sp1 * rp
    q = deadzone_bounds(sn1, sn2, sp1, sp2, d, d)
    assert q.A == pytest.approx(max(rn, rp), rel=1e-10)
    assert q.B == pytest.approx(max(max(sn2, sp2) / min(sn1, sp1), q.A), rel=1e-10)


@pytest.mark.parametrize("s, m, n, B", [
    (1, 1, 1, 1.0),
    (1, 1 - 25 / 171, 1 + 25 / 171, 98 / 73),
    (1, 1 - 35 / 114, 1 + 35 / 114, 149 / 79),
    (2, 3, 1, 3.0),
])
def test_asym_saturation_ratios(s, m, n, B):
    q = asym_saturation_bounds(s, m, n)
    assert q.A == 1.0
    assert q.B == pytest.approx(B, rel=1e-12)
    assert q.beta_lo.is_odd() and q.beta_hi.is_odd()


def test_ratio_bound_identity():
    f = PwlMonotone.saturation(1, 2, 3)
    assert ratio_bound(f, f) == 1.0


@settings(max_examples=80, deadline=None)
@given(pwl())
def test_ratio_bound_self_is_one(f):
    assert ratio_bound(f, f) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(pwl(), pwl())
def test_ratio_bound_matches_dense_sampling(f, g):
    # make an ordered pair: upper = f + g (g adds nonnegative ratio)
    lower = f
    upper = PwlMonotone(*_sum(f, g))
    exact = ratio_bound(lower, upper)
    sampled = oracles.dense_ratio(lower, upper, n=40_001)
    if math.isinf(exact):
        assert sampled > 1e3 or math.isinf(sampled)
    else:
        assert sampled <= exact * (1 + 1e-9)
        assert exact == pytest.approx(sampled, rel=2e-2)


def _sum(f, g):
    b = sorted(set(f.breakpoints) | set(g.breakpoints))
    return b, [f(x) + g(x) for x in b], f.left_slope + g.left_slope, f.right_slope + g.right_slope


def test_ratio_bound_rejects_unordered():
    with pytest.raises(InvalidEnvelope):
        ratio_bound(PwlMonotone.linear(2.0), PwlMonotone.linear(1.0))


def test_odd_symmetrization_of_asymmetric_saturation():
    f = PwlMonotone.saturation(1, 0.5, 1.5)
    np.testing.assert_allclose(odd_lower(f)([-3, -0.2, 0.2, 3]), PwlMonotone.saturation(1, 0.5, 0.5)([-3, -0.2, 0.2, 3]))
    np.testing.assert_allclose(odd_upper(f)([-3, -0.2, 0.2, 3]), PwlMonotone.saturation(1, 1.5, 1.5)([-3, -0.2, 0.2, 3]))


@settings(max_examples=60, deadline=None)
@given(pwl())
def test_odd_envelopes_sandwich(f):
    lo, hi = odd_lower(f), odd_upper(f)
    assert lo.is_odd() and hi.is_odd()
    x = np.linspace(-15, 15, 3001)
    s = np.sign(x)
    assert np.all(s * (f(x) - lo(x)) >= -1e-9)
    assert np.all(s * (hi(x) - f(x)) >= -1e-9)


def test_loop_transform_slopes():
    f = PwlMonotone.deadzone(1.0, 1.0, 0.5, 0.6)
    g = loop_transform(f, 1.0)
    assert g.left_slope == pytest.approx(1.0)
    assert g.right_slope == pytest.approx(1.5)
    assert g.breakpoints == (-1.0, 0.0, 1.0)


def test_loop_transform_identity_limit():
    f = PwlMonotone.deadzone(1.0, 2.0, 0.5, 0.6)
    g = loop_transform(f, 1e6)
    np.testing.assert_allclose(g.slopes, f.slopes, rtol=1e-5)


def test_loop_transform_of_saturation():
    g = loop_transform(PwlMonotone.saturation(0.5, 1, 1), 1.0)
    # slope 0.5 -> 1; breakpoints +-2 move to +-(2 - 1) = +-1
    assert g.breakpoints == (-1.0, 0.0, 1.0)
    assert g.segment_slopes == pytest.approx((1.0, 1.0))
    assert g.left_slope == g.right_slope == 0.0


def test_loop_transform_slope_exceeds_k():
    with pytest.raises(SlopeExceedsK):
        loop_transform(PwlMonotone.linear(1.0), 1.0)


@settings(max_examples=60, deadline=None)
@given(pwl(), st.floats(0.1, 10))
def test_loop_transform_preserves_monotone_and_odd(f, extra):
    k = f.max_slope + extra
    g = loop_transform(f, k)
    assert min(g.slopes) >= 0
    h = odd_lower(f)
    assert loop_transform(h, k).is_odd(tol=1e-9)
    # graph property: g(x - f(x)/k) = f(x)
    x = np.linspace(-10, 10, 101)
    np.testing.assert_allclose(g(x - f(x) / k), f(x), atol=1e-9)


def test_transformed_deadzone_ratio():
    q = deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 1)
    t = transformed_sector(q, 1.0)
    assert t.A_k == pytest.approx(1.5, rel=1e-12)
    assert deadzone_ak_closed_form(0.5, 0.6, 0.5, 0.6, 1.0) == pytest.approx(1.5, rel=1e-12)
    assert t.B_k >= t.A_k


def test_transformed_saturation_at_slope():
    q = asym_saturation_bounds(1, 0.5, 1.5)
    t = transformed_sector(q, 1.0)
    assert (t.A_k, t.B_k) == (1.0, 3.0)
    with pytest.raises(SlopeExceedsK):
        transformed_sector(q, 0.9)


def test_transformed_requires_k_above_slope():
    q = deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 1)
    with pytest.raises(SlopeExceedsK):
        transformed_sector(q, 0.6)
    with pytest.raises(SlopeExceedsK):
        transformed_sector(q, 0.3)


def test_monotone_quartet_keeps_unit_Ak():
    f = PwlMonotone.deadzone(1.0, 2.0, 0.3, 0.7)
    q = quartet_from_envelopes(f, f)
    assert q.A == 1.0
    assert transformed_sector(q, 2.0).A_k == 1.0


def test_closed_form_sweep(rng):
    for _ in range(100):
        sn1, sn2 = np.sort(rng.uniform(0.01, 0.9, 2))
        sp1, sp2 = np.sort(rng.uniform(0.01, 0.9, 2))
        k = rng.uniform(max(sn2, sp2) + 1e-3, 10)
        d = rng.uniform(0.1, 3)
        q = deadzone_bounds(sn1, sn2, sp1, sp2, d, d)
        got = transformed_sector(q, k).A_k
        assert got == pytest.approx(deadzone_ak_closed_form(sn1, sn2, sp1, sp2, k), rel=1e-10)


@pytest.mark.parametrize("u_s, expected", [(25 / 171, 98 / 73), (0.0, 1.0), (35 / 114, 149 / 79),
                                           (-25 / 171, 98 / 73)])
def test_offset_ratio(u_s, expected):
    assert bk_for_offset_saturation(1.0, u_s) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("u_s", [1.0, -1.5])
def test_offset_beyond_saturation(u_s):
    with pytest.raises(OffsetExceedsSaturation):
        bk_for_offset_saturation(1.0, u_s)


def test_sample_admissible_examples():
    q = asym_saturation_bounds(1, 1, 1)
    assert np.all(sample_admissible(q, np.zeros(10), seed=1) == 0)
    assert sample_admissible(q, np.array([10.0]), seed=1)[0] == 1.0
    f = PwlMonotone.deadzone(1, 1, 0.5, 0.7)
    mono = quartet_from_envelopes(f, f)
    u = np.linspace(-5, 5, 41)
    np.testing.assert_array_equal(sample_admissible(mono, u, seed=3), f(u))


def test_sample_admissible_deterministic(rng):
    q = deadzone_bounds(0.5, 0.6, 0.4, 0.7, 1, 1)
    u = rng.normal(size=100) * 3
    np.testing.assert_array_equal(sample_admissible(q, u, seed=9), sample_admissible(q, u, seed=9))


@pytest.mark.parametrize("q", [deadzone_bounds(0.5, 0.6, 0.4, 0.7, 1, 1),
                               deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 2),
                               asym_saturation_bounds(1, 0.5, 1.5)])
def test_sample_admissible_in_sector(q, rng):
    u = rng.normal(size=2000) * 4
    y = sample_admissible(q, u, seed=5)
    s = np.sign(u)
    for env_lo, env_hi in ((q.alpha_lo, q.alpha_hi), (q.beta_lo, q.beta_hi)):
        assert np.all(s * (y - env_lo(u)) >= -1e-12)
        assert np.all(s * (env_hi(u) - y) >= -1e-12)


def test_bounds_from_dict_round_trip():
    for q in (deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 1), asym_saturation_bounds(1, 0.5, 1.5)):
        r = bounds_from_dict(q.to_dict())
        assert (r.A, r.B, r.kind) == (q.A, q.B, q.kind)
    f = PwlMonotone.saturation(1, 0.5, 1.5)
    r = bounds_from_dict({"kind": "pwl", **f.to_dict()})
    assert (r.A, r.B) == (1.0, 3.0)
    with pytest.raises(InvalidEnvelope):
        bounds_from_dict({"kind": "cubic"})


def test_summary_fields():
    s = summarize(deadzone_bounds(0.5, 0.6, 0.5, 0.6, 1, 1))
    assert s.slope_max == 0.6 and s.weights == (s.A, s.B)
