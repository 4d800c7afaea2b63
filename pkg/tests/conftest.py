"""Shared fixtures: synthetic corpora sized for unit tests and acceptance."""

from dataclasses import dataclass

import pytest

from blogextract import synth
from blogextract.corpus import Corpus, PageCache


@dataclass
class CorpusHandle:
    corpus: Corpus
    cache: PageCache

    @property
    def root(self):
        return self.corpus.root


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory) -> CorpusHandle:
    """Two sites, a handful of pages: enough for API-level tests."""
    out = tmp_path_factory.mktemp("corpus-small")
    cache = PageCache()
    corpus = synth.generate_synthetic_corpus(
        out, seed=3, n_sites=2, pages_per_site=14, cache=cache
    )
    return CorpusHandle(corpus=corpus, cache=cache)


@pytest.fixture(scope="session")
def full_corpus(tmp_path_factory) -> CorpusHandle:
    """The evaluation-grade corpus: nine sites, 250 pages each."""
    out = tmp_path_factory.mktemp("corpus-full")
    cache = PageCache()
    corpus = synth.generate_synthetic_corpus(
        out, seed=7, n_sites=9, pages_per_site=250, cache=cache
    )
    return CorpusHandle(corpus=corpus, cache=cache)
