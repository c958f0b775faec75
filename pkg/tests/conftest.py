import math

import pytest

from gasbound.potentials import ThermoState, hard_sphere, kac_exponential, square_well


@pytest.fixture
def hard_rod():
    return hard_sphere(1, 1.0)


@pytest.fixture
def sq_well():
    # depth ln 2 at beta = 1, so exp(beta*eps) = 2
    return square_well(1, 1.0, 1.5, math.log(2))


@pytest.fixture
def kac():
    return kac_exponential(1.0, 1.0, 1.0)


@pytest.fixture
def unit_beta():
    return ThermoState(1.0)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record and print one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        request.config._acceptance_lines.append(line)
        assert ok, line

    return record
