from pathlib import Path

import pytest

from ixgd.cli import ingest

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
PROSTATE = DATA_DIR / "collett_prostate_cancer.txt"
REPAIR = DATA_DIR / "chhikara_folks_repair_times.txt"


def _load_or_skip(path):
    if not path.exists():
        pytest.skip(f"fixture {path.name} not present")
    return ingest(path)


@pytest.fixture(scope="session")
def data_set_1():
    """Prostate cancer survival times, n = 38."""
    return _load_or_skip(PROSTATE)


@pytest.fixture(scope="session")
def data_set_2():
    """Transceiver repair times, n = 46."""
    return _load_or_skip(REPAIR)


# one line per acceptance check, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria checks")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
