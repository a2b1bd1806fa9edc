from contextlib import contextmanager

_acceptance_lines = []


def record(line: str) -> None:
    _acceptance_lines.append(line)


@contextmanager
def criterion(num: int, title: str):
    """Collects one PASS/FAIL line per acceptance criterion; the lines are
    echoed after the run summary so they survive output capturing."""
    info = {}
    try:
        yield info
    except BaseException:
        detail = f" ({info['detail']})" if "detail" in info else ""
        record(f"criterion {num:02d} FAIL - {title}{detail}")
        raise
    detail = f" ({info['detail']})" if "detail" in info else ""
    record(f"criterion {num:02d} PASS - {title}{detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
