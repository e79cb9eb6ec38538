import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; marked FAIL unless the test finishes."""
    name = request.node.get_closest_marker("criterion").args[0]
    _ACCEPTANCE[name] = "FAIL"
    detail = {}
    yield detail
    _ACCEPTANCE[name] = "PASS " + detail.get("note", "")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion this test checks")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{name}: {_ACCEPTANCE[name]}".rstrip())
