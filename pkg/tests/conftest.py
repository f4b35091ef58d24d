import numpy as np
import pytest

from lurye.lti import Domain, RationalPlant
from lurye.multiplier import FirMultiplier, DelayMultiplier


@pytest.fixture
def sat_plant():
    """(2z + 0.92) / (z (z - 0.5))."""
    return RationalPlant(Domain.DISCRETE, [2.0, 0.92], [1.0, -0.5, 0.0])


@pytest.fixture
def delay_plant():
    """exp(-s/5) / (s^2 + 0.3 s + 1)."""
    return RationalPlant(Domain.CONTINUOUS, [1.0], [1.0, 0.3, 1.0], delay=0.2)


@pytest.fixture
def published_fir():
    """M(z) = 0.596 z + 1 + 0.022 z^-2 - 0.093 z^-3."""
    return FirMultiplier.from_m_coeffs({-1: 0.596, 2: 0.022, 3: -0.093})


@pytest.fixture
def delay_m0():
    return DelayMultiplier(((2.0 / 3.0, 0.7),))


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def record(request):
    """Record ``(criterion, part, ok, detail)`` for the end-of-run summary."""
    table = request.config.stash.setdefault(_ACCEPTANCE, {})

    def _record(criterion: int, part: str, ok: bool, detail: str = "") -> bool:
        table.setdefault(criterion, []).append((part, bool(ok), detail))
        return bool(ok)

    return _record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash.get(_ACCEPTANCE, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(table):
        parts = table[crit]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{p}: {'ok' if ok else 'FAILED'} ({d})" if d else f"{p}: {'ok' if ok else 'FAILED'}"
                           for p, ok, d in parts)
        terminalreporter.write_line(f"criterion {crit:2d} {status}  {detail}")
