from pathlib import Path

import pytest

from hopf_forge.plan import load, word_in

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
CORPUS_FILES = sorted(CORPUS.glob("*.plan"))


def corpus_env(stem):
    return load((CORPUS / f"{stem}.plan").read_text())


@pytest.fixture(scope="session")
def first_plan():
    return corpus_env("prop4_1")


@pytest.fixture(scope="session")
def second_plan():
    return corpus_env("prop4_2")


@pytest.fixture(scope="session")
def tower_plan():
    return corpus_env("thm1_1")


@pytest.fixture
def w():
    """Parse a word over a node: w(node, "a b^-1")."""
    return word_in
