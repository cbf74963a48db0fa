from __future__ import annotations

from pathlib import Path

import pytest

from scribeview.ingest import build_transcript, parse_vendor_json

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
STUB_DIR = FIXTURES / "stub"
GOLDEN = Path(__file__).resolve().parent / "golden"

NIXON_JSON = FIXTURES / "nixon_mini.json"
NIXON_WAV = FIXTURES / "nixon_mini.wav"


@pytest.fixture(scope="session")
def nixon_bytes() -> bytes:
    return NIXON_JSON.read_bytes()


@pytest.fixture(scope="session")
def nixon_raw(nixon_bytes):
    return parse_vendor_json(nixon_bytes)


@pytest.fixture(scope="session")
def nixon(nixon_raw):
    return build_transcript(nixon_raw)


def pytest_configure(config):
    config._acceptance_index = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker:
            config._acceptance_index[item.nodeid] = (marker.args[0], marker.args[1])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    index = getattr(config, "_acceptance_index", {})
    if not index:
        return
    precedence = {"FAIL": 3, "SKIP": 2, "PASS": 1}
    outcomes: dict[str, str] = {}
    for status, label in (("passed", "PASS"), ("skipped", "SKIP"),
                          ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, ()):
            nodeid = getattr(report, "nodeid", None)
            if nodeid in index:
                prior = outcomes.get(nodeid)
                if prior is None or precedence[label] > precedence[prior]:
                    outcomes[nodeid] = label
    def numeric_id(entry):
        cid = entry[1][0]
        digits = "".join(ch for ch in cid if ch.isdigit())
        return (int(digits) if digits else 0, cid)

    terminalreporter.section("acceptance criteria")
    for nodeid, (cid, title) in sorted(index.items(), key=numeric_id):
        terminalreporter.write_line(
            f"{cid} {title}: {outcomes.get(nodeid, 'NOT RUN')}"
        )
