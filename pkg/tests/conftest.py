from __future__ import annotations

import pytest

from puzzlejudge.lexicon import bundled_knowledge, bundled_lexicon


@pytest.fixture(scope="session")
def lexicon():
    return bundled_lexicon()


@pytest.fixture(scope="session")
def knowledge():
    return bundled_knowledge()
