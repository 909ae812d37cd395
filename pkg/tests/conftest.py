import numpy as np
import pytest

from eraser_sim import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    monkeypatch.setenv("ERASER_SIM_BACKEND", request.param)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20231108)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        passed, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'} - {detail}")
