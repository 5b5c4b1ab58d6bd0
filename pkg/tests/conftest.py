import numpy as np
import pytest

from spinalg import _kernels

BACKENDS = [_kernels.numpy_backend]
if _kernels.numba_backend is not None:
    BACKENDS.append(_kernels.numba_backend)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=BACKENDS, ids=lambda b: b.name)
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    monkeypatch.setattr(_kernels, "backend", lambda: request.param)
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.report_lines():
            terminalreporter.write_line(line)
