from __future__ import annotations

import time
from contextlib import contextmanager

ACCEPTANCE: list[tuple[int, str, bool, float, float, str]] = []


@contextmanager
def acceptance(number: int, title: str, limit: float):
    """Time a block and record one pass/fail line; failures still propagate."""
    start = time.perf_counter()
    note = {"text": ""}
    try:
        yield note
    except BaseException as exc:
        ACCEPTANCE.append((number, title, False, time.perf_counter() - start, limit, f"{type(exc).__name__}: {exc}"[:160]))
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    ACCEPTANCE.append((number, title, ok, elapsed, limit, note["text"] if ok else "runtime limit exceeded"))
    assert ok, f"{title} took {elapsed:.2f} s, limit {limit} s"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for number, title, ok, elapsed, limit, note in sorted(ACCEPTANCE):
        verdict = "PASS" if ok else "FAIL"
        extra = f" ({note})" if note else ""
        terminalreporter.write_line(f"[{verdict}] {number}. {title}: {elapsed:.2f} s of {limit:g} s{extra}")
