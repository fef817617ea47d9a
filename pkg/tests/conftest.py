import numpy as np
import pytest

from pssk import _backend

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run the test once per available inner-loop backend."""
    prev = _backend.NAME
    _backend.use(request.param)
    yield request.param
    _backend.use(prev)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, k, lo=0.0, hi=1.0):
    return np.sort(rng.uniform(lo, hi, (k, 2)), axis=1)


@pytest.fixture
def record():
    def _record(n: int, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[n] = (bool(ok), detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
