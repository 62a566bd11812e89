import io
from pathlib import Path

import pytest

import corpex

DATA = Path(__file__).parent / "data"
FIXTURE_VERT = DATA / "fixture" / "corpus.vert"
GOLDEN = DATA / "golden"

PRESET_QUERY = '("virtual reality" OR "VR") AND ("anxiety")'


def parse_fixture():
    with open(FIXTURE_VERT, encoding="utf-8") as fh:
        return list(corpex.parse_vertical(fh))


def parse_text(text: str):
    return list(corpex.parse_vertical(io.StringIO(text)))


@pytest.fixture(scope="session")
def fixture_docs():
    return parse_fixture()


@pytest.fixture(scope="session")
def fixture_index(fixture_docs):
    return corpex.build_index(iter(fixture_docs))


@pytest.fixture(scope="session")
def focus_scope(fixture_index):
    return corpex.select_scope(fixture_index, PRESET_QUERY)
