from __future__ import annotations

import numpy as np
import pytest

from nolhd.recipes import load_fixture

#: (criterion, passed, message) lines collected by the acceptance suite
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "invariant: module invariant or property test")
    config.addinivalue_line("markers", "acceptance: acceptance criterion (slow)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, msg in sorted(ACCEPTANCE_LINES, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}  {msg}")


@pytest.fixture(scope="session")
def example1_B() -> np.ndarray:
    return load_fixture("example1_B_7x12.csv")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def brute_force_delta(rho, t) -> np.ndarray:
    """Ordered-pair double loop over a correlation matrix."""
    rho = np.asarray(rho, dtype=float)
    p = rho.shape[0]
    out = []
    for tk in t:
        hits = 0
        for i in range(p):
            for j in range(p):
                if i != j and abs(rho[i, j]) <= tk:
                    hits += 1
        out.append(hits / (p * (p - 1)))
    return np.array(out)
