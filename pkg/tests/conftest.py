import pytest

from qspeedup.kernels import COMPILED_AVAILABLE

BACKENDS = ["python"] + (["cython"] if COMPILED_AVAILABLE else [])


@pytest.fixture(params=BACKENDS)
def kernel(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number].line())
