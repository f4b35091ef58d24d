import math

import numpy as np
import pytest

from lurye.errors import DomainError, Infeasible, NoMultiplierFound
from lurye.lti import Domain, RationalPlant, continuous_grid, discrete_grid, refine
from lurye.multiplier import norm_margin
from lurye.search import (SearchConfig, max_feasible_B, optimal_margin, parse_lags,
                          search_delay_multiplier, search_multiplier)
from lurye.verify import positivity_margin

import oracles

LAGS = (-1, 1, 2, 3)


@pytest.fixture
def cfg():
    return SearchConfig(lags=LAGS)


@pytest.mark.parametrize("B", [1.0, 1.2, 1.4, 1.467, 1.6, 2.0])
def test_optimal_margin_matches_highs(sat_plant, cfg, B):
    w = discrete_grid(4096).points
    ref = oracles.lp_margin([2, 0.92], [1, -0.5, 0], 1.0, list(LAGS), 1.0, B, w, 1e-3)
    eps, _ = optimal_margin(sat_plant, 1.0, 1.0, B, cfg)
    assert eps == pytest.approx(ref, abs=1e-6)


def test_feasible_at_published_threshold(sat_plant, cfg):
    res = search_multiplier(sat_plant, 1.0, 1.0, 1.467, cfg)
    assert res.margin > 0
    assert set(res.multiplier.h) <= set(LAGS)
    assert positivity_margin(res.multiplier, sat_plant, 1.0, discrete_grid(4096)) == pytest.approx(res.margin)


def test_feasible_at_1_4(sat_plant, cfg):
    assert search_multiplier(sat_plant, 1.0, 1.0, 1.4, cfg).margin > 0


def test_infeasible_at_2(sat_plant, cfg):
    with pytest.raises(Infeasible) as exc:
        search_multiplier(sat_plant, 1.0, 1.0, 2.0, cfg)
    assert exc.value.margin < 0


def test_soundness_round_trip(sat_plant, cfg):
    for B in (1.0, 1.2, 1.4):
        res = search_multiplier(sat_plant, 1.0, 1.0, B, cfg)
        fine = refine(cfg.grid_or_default(), 3)
        assert positivity_margin(res.multiplier, sat_plant, 1.0, fine) >= cfg.eps_cert / 2
        assert norm_margin(res.multiplier, 1.0, B) >= cfg.norm_slack / 2


def test_monotone_in_B(sat_plant, cfg):
    eps = [optimal_margin(sat_plant, 1.0, 1.0, B, cfg)[0] for B in (1.0, 1.2, 1.467, 1.6)]
    assert all(a >= b - 1e-12 for a, b in zip(eps, eps[1:]))


def test_more_lags_never_hurt(sat_plant):
    small = optimal_margin(sat_plant, 1.0, 1.0, 1.5, SearchConfig(lags=(-1, 3)))[0]
    mid = optimal_margin(sat_plant, 1.0, 1.0, 1.5, SearchConfig(lags=LAGS))[0]
    big = optimal_margin(sat_plant, 1.0, 1.0, 1.5, SearchConfig(n_anticausal=3, n_causal=6))[0]
    assert small <= mid + 1e-12 <= big + 2e-12


def test_deterministic(sat_plant, cfg):
    a = search_multiplier(sat_plant, 1.0, 1.0, 1.3, cfg)
    b = search_multiplier(sat_plant, 1.0, 1.0, 1.3, cfg)
    assert a.multiplier == b.multiplier and a.margin == b.margin


def test_passive_plant_keeps_unit_multiplier():
    g = RationalPlant(Domain.DISCRETE, [0.3, 0.04], [1.0, -0.2])  # 0.3 + 0.1/(z - 0.2)
    re_min = min(np.real(0.3 + 0.1 / (np.exp(1j * w) - 0.2)) for w in discrete_grid(4096).points)
    assert re_min > 0.2
    res = search_multiplier(g, 0.0, 1.0, 1.0)
    assert res.margin >= re_min - 1e-9


def test_passive_bisection_hits_cap():
    g = RationalPlant(Domain.DISCRETE, [0.3, 0.0], [1.0, 0.0])  # G = 0.3, 1 + G = 1.3
    bs = max_feasible_B(g, 1.0, 1.0, SearchConfig(B_cap=64.0))
    assert bs.lower == 64.0 and bs.upper == math.inf


def test_max_feasible_B_interval(sat_plant, cfg):
    bs = max_feasible_B(sat_plant, 1.0, 1.0, cfg)
    assert 1.40 <= bs.lower < bs.upper <= 1.586
    assert bs.upper - bs.lower <= cfg.bisect_tol
    assert norm_margin(bs.witness.multiplier, 1.0, bs.lower) > 0


def test_unstable_plant():
    g = RationalPlant(Domain.DISCRETE, [1.0], [1.0, -1.5])
    with pytest.raises(DomainError):
        search_multiplier(g, 1.0, 1.0, 1.0)
    with pytest.raises(NoMultiplierFound):
        max_feasible_B(g, 1.0, 1.0)


def test_infeasible_at_A_raises_no_multiplier():
    g = RationalPlant(Domain.DISCRETE, [-3.0], [1.0, 0.0])  # 1 + G = 1 - 3/z
    with pytest.raises(NoMultiplierFound):
        max_feasible_B(g, 1.0, 1.0, SearchConfig(lags=(1,)))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n_anticausal=0, n_causal=0)
    with pytest.raises(ValueError):
        SearchConfig(norm_slack=0.5)
    with pytest.raises(ValueError):
        SearchConfig(bisect_tol=0)
    assert SearchConfig().lag_set == LAGS


@pytest.mark.parametrize("text, lags", [("-1:3", (-1, 1, 2, 3)), ("-2,1,4", (-2, 1, 4)), ("0:2", (1, 2))])
def test_parse_lags(text, lags):
    assert parse_lags(text) == lags


def test_delay_scan_recovers_published_form(delay_plant):
    margin, m = search_delay_multiplier(delay_plant, 1.0, 1.5, continuous_grid())
    assert margin > 0
    (c, T), = m.terms
    assert c < 1 / 1.5
    assert positivity_margin(m, delay_plant, 1.0, refine(continuous_grid())) > 0


def test_delay_scan_needs_continuous(sat_plant):
    with pytest.raises(DomainError):
        search_delay_multiplier(sat_plant, 1.0, 1.0)
