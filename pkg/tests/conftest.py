import json
import re
from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def oracle_spectra() -> dict:
    """50-digit open-chain spectra keyed ``"<case>/<N>"`` (see data/make_oracles.py)."""
    with open(DATA / "oracle_spectra.json", encoding="utf-8") as fh:
        raw = json.load(fh)
    for case in raw.values():
        case["energies"] = np.array([complex(re_, im_) for re_, im_ in case["energies"]])
    return raw


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[k] = (m.group(2).replace("_", " "), report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        name, outcome = _ACCEPTANCE[k]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {verdict}  {name}")
