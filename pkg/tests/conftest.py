import numpy as np
import pytest

from esfme.pixel_io import Plane


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_plane(rng):
    def make(w, h):
        return Plane(rng.integers(0, 256, size=(h, w), dtype=np.uint8))
    return make


@pytest.fixture
def acceptance_report(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def report(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        lines.append(line)
        print(line)
        return ok
    return report


_ACCEPTANCE = pytest.StashKey()


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
