"""Shared corpus fixtures.

The corpus spans every generator family at sizes where exhaustive
checking stays fast; tests that need full-length traces in the universe
or a hypothesis count bound filter the corpus themselves.
"""

import pytest

from cotverify import families


def _build_corpus():
    river_revealed = families.river_edges()[:16]
    return {
        "singleton-2": families.singleton_bitstring_class(2),
        "singleton-3": families.singleton_bitstring_class(3),
        "complement-3-2": families.complement_class(3, 2),
        "complement-4-2": families.complement_class(4, 2),
        "complement-5-3": families.complement_class(5, 3),
        "indicator-2": families.indicator_class(2),
        "indicator-3": families.indicator_class(3),
        "indicator-4": families.indicator_class(4),
        "conjunction-2": families.conjunction_class(2),
        "river-16-4": families.river_crossing_class(river_revealed, 4),
    }


_CORPUS = _build_corpus()


@pytest.fixture(scope="session")
def corpus():
    return _CORPUS


@pytest.fixture(scope="session")
def small_corpus():
    """Corpus classes with at most 6 verifiers (exhaustive-run budget)."""
    return {k: v for k, v in _CORPUS.items() if len(v) <= 6}


@pytest.fixture(scope="session", params=sorted(_CORPUS))
def corpus_class(request):
    return _CORPUS[request.param]
