import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import support  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if support.CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in support.CRITERIA:
            terminalreporter.write_line(line)
