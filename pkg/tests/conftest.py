import random

import pytest
from hypothesis import settings

from ionkit.ordinals import Ordinal, from_int

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

CORPUS_SEED = 20260825


def random_ordinal(rng: random.Random, max_depth: int) -> Ordinal:
    """Random CNF ordinal: <= 3 terms per level, coefficients 1..5."""
    if max_depth == 0 or rng.random() < 0.25:
        return from_int(rng.randint(0, 5))
    exps = {random_ordinal(rng, max_depth - 1) for _ in range(rng.randint(1, 3))}
    terms = tuple((e, rng.randint(1, 5)) for e in sorted(exps, reverse=True))
    return Ordinal(terms)


@pytest.fixture(scope="session")
def corpus200() -> list[Ordinal]:
    rng = random.Random(CORPUS_SEED)
    return [random_ordinal(rng, 3) for _ in range(200)]
