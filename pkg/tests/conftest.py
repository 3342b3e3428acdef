"""Shared fixtures.

Several acceptance criteria quantify over "the same corpus", so the
seeded random decompositions are built once per session and reused.
Every item still goes through every check that claims it.
"""

import random

import pytest

from twkit.corpus import item_seeds, random_decomposition

CORPUS_SEED = 109
CORPUS_SIZE = 200


@pytest.fixture(scope="session")
def corpus_seeds():
    return item_seeds(CORPUS_SEED, CORPUS_SIZE)


@pytest.fixture(scope="session")
def corpus(corpus_seeds):
    return [random_decomposition(random.Random(s)) for s in corpus_seeds]
