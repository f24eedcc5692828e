import sys
from pathlib import Path

import numpy as np
import pytest

import mrsys

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def pytest_terminal_summary(terminalreporter):
    # one verdict line per acceptance criterion, collected by the
    # decorator in test_acceptance.py; silent when that module did not run
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria", sep="-")
    for number, verdict in sorted(results):
        terminalreporter.write_line(f"ACCEPTANCE {number}: {verdict}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ex41() -> mrsys.MultirateSystem:
    # slow fixture: rates 2:2, scalar ports, one real pole pair
    return mrsys.load_system(FIXTURES / "ex41.json")


@pytest.fixture(scope="session")
def ex42() -> mrsys.MultirateSystem:
    # modulated fixture: rates 2:4, unitary state rotation, unstable norm
    return mrsys.load_system(FIXTURES / "ex42.json")


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
