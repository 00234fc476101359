import pytest

import helpers


@pytest.fixture
def K3():
    return helpers.k3()


@pytest.fixture
def K3lm():
    return helpers.k3lm(2, 3)


@pytest.fixture
def N2():
    return helpers.n2()


@pytest.fixture
def Z():
    return helpers.fix0()


@pytest.fixture(params=["K3", "K3lm", "N2"])
def any_fixture(request):
    return {"K3": helpers.k3, "K3lm": helpers.k3lm, "N2": helpers.n2}[request.param]()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
