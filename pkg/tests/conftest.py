import numpy as np
import pytest

from dephase.spectral import ReservoirSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def spec1d():
    return ReservoirSpec.from_eta(1, 100.0)


@pytest.fixture
def spec3d():
    return ReservoirSpec.from_eta(3, 1.0)


# acceptance outcomes, filled in by test_acceptance.py and printed once per run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
