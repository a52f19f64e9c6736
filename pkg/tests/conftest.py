"""Shared test configuration: the acceptance-criteria summary reporter."""

ACCEPTANCE_RESULTS: list[tuple[str, bool, float, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, ok, elapsed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        suffix = f"  {detail}" if detail else ""
        terminalreporter.write_line(f"[{status}] {name} ({elapsed:.1f}s){suffix}")
