from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from signpipe.gloss import GlossSequence, Provenance, normalize
from signpipe.manifest import SynonymTable, VideoManifest
from signpipe.tasks import load_task_dir

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "signpipe" / "data"
FIXTURE_DIR = Path(__file__).parent / "fixtures"

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and (report.when == "call" or report.failed):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE_RESULTS.setdefault(name, "FAIL" if report.failed else "PASS")
        if report.failed:
            _ACCEPTANCE_RESULTS[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{_ACCEPTANCE_RESULTS[name]}  {name}")


def make_manifest(*keys: str, source: str = "primary") -> VideoManifest:
    return VideoManifest.from_mapping(
        {k: {"uri": f"signs/{k}.mp4", "source": source} for k in keys})


def seq(text: str, step_index: int = 0, provenance=Provenance.MANUAL) -> GlossSequence:
    return GlossSequence(step_index, tuple(normalize(text)), provenance)


@pytest.fixture(scope="session")
def bundled_tasks():
    return load_task_dir(DATA_DIR / "tasks")


@pytest.fixture(scope="session")
def bundled_manifest():
    return VideoManifest.load(DATA_DIR / "manifest.json")


@pytest.fixture(scope="session")
def bundled_synonyms():
    return SynonymTable.load(DATA_DIR / "synonyms.tsv")


@pytest.fixture()
def worked_example():
    """The gloss/manifest/synonym trio behind the 0.5 and 3/4 metric values."""
    sequences = [seq("CHOCOLATE CHOP ADD DOUGH MIX STIR")]
    manifest = make_manifest("CHOP", "ADD", "COMBINE", "STIR")
    synonyms = SynonymTable.from_pairs([("MIX", "COMBINE")])
    return sequences, manifest, synonyms
