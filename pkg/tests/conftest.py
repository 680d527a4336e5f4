import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"

if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

from repotrend.schema import read_corpus  # noqa: E402
from repotrend.textprep import load_stopwords  # noqa: E402


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return FIXTURES / "synthetic_corpus.jsonl"


@pytest.fixture(scope="session")
def corpus_records(corpus_path):
    result = read_corpus(corpus_path)
    assert not result.skips, result.skips
    return result.records


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture
def write_config(tmp_path):
    """Write a TOML config into tmp_path and return its path."""

    def _write(text: str, name: str = "repotrend.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
