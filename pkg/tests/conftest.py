import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, results) -> str:
    failed = [r for r in results if not r[1]]
    status = "PASS" if not failed else "FAIL"
    detail = f"{len(results) - len(failed)}/{len(results)} checks"
    if len(results) == 1:
        detail += f": {results[0][0]}"
    if failed:
        detail += "; failing: " + "; ".join(f"{name} (got {info})" for name, _, info in failed)
    line = f"criterion {number} {status}: {title} [{detail}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
