from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from poetone.phonology import load_default_lexicon
from poetone.registry import default_data_path, load_corpus, load_templates

from support import CharPools


@pytest.fixture(scope="session")
def lexicon():
    return load_default_lexicon()


@pytest.fixture(scope="session")
def templates():
    return load_templates(default_data_path("templates.json"))


@pytest.fixture(scope="session")
def corpus(templates):
    return load_corpus(default_data_path("corpus.jsonl"), templates)


@pytest.fixture(scope="session")
def pools(lexicon):
    return CharPools(lexicon)
