import contextlib

import numpy as np
import pytest

# criterion number -> list of (passed, detail)
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}

CRITERIA = {
    1: "m=2 golden suite + direct Werner",
    2: "higher-m golden suite under GHZ calibration",
    3: "property suites",
    4: "concurrence cross-check",
    5: "convex roof",
    6: "partition enumerator counts",
    7: "qudit smoke test",
}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def record(number, detail=""):
        try:
            yield
        except BaseException as exc:
            ACCEPTANCE.setdefault(number, []).append((False, f"{detail}: {exc}".strip()))
            raise
        ACCEPTANCE.setdefault(number, []).append((True, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        results = ACCEPTANCE.get(number)
        if results is None:
            terminalreporter.write_line(f"[{number}] NOT RUN  {title}")
            continue
        failed = [d for ok, d in results if not ok]
        status = "PASS" if not failed else "FAIL"
        terminalreporter.write_line(f"[{number}] {status}  {title} ({len(results)} checks)")
        for d in failed:
            terminalreporter.write_line(f"      failed: {d.splitlines()[0]}")
