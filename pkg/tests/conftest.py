import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks on rank-two types with m = 6")


CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Context manager recording one part of a numbered acceptance criterion."""
    results = request.config.stash.setdefault(CRITERIA, {})

    @contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            entry = results.setdefault(number, {"title": title, "parts": [], "seconds": 0.0})
            entry["parts"].append(ok)
            entry["seconds"] += time.perf_counter() - start
            print(f"{'PASS' if ok else 'FAIL'} criterion {number} part: {request.node.name}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(CRITERIA, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        entry = results[number]
        status = "PASS" if all(entry["parts"]) else "FAIL"
        passed = sum(entry["parts"])
        terminalreporter.write_line(
            f"{status} {number:2d}. {entry['title']} ({passed}/{len(entry['parts'])} parts, {entry['seconds']:.1f} s)"
        )
