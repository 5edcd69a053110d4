import pytest

ACCEPTANCE = {}


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False,
                     help="run the heavier cross-check oracles")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: heavier oracle runs, enabled with --slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def record():
    """Store a one-line verdict for the acceptance summary."""
    def _record(criterion: int, passed: bool, detail: str = ""):
        ACCEPTANCE.setdefault(criterion, []).append((passed, detail))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        results = ACCEPTANCE[k]
        ok = all(p for p, _ in results)
        detail = "; ".join(d for _, d in results if d)
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
