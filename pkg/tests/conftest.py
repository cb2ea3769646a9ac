import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, elapsed, limit, title in results:
        terminalreporter.write_line(f"criterion {label:>3}: {verdict}  {elapsed:6.1f}s / {limit:>4.0f}s  {title}")
