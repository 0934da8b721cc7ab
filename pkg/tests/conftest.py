import pytest

from leomr.constellation import ConstellationConfig


@pytest.fixture
def shell_50x20():
    return ConstellationConfig(num_planes=50, sats_per_plane=20, altitude_km=530.0, inclination_deg=87.0)


@pytest.fixture
def small_shell():
    return ConstellationConfig(num_planes=10, sats_per_plane=10, altitude_km=530.0, inclination_deg=87.0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
