"""
Shared fixture helpers for the hyperwander test suite.

The bundled desk fixtures live in fixtures/ at the project root; they are
parsed once per test process.
"""

import functools
import shutil
import tempfile
from pathlib import Path

from django.conf import settings

from hyperwander.embed.store import EmbeddingStore, load_embeddings
from hyperwander.engine.tableau import Limits
from hyperwander.kb.store import KnowledgeBase, Triple, ingest_triples
from hyperwander.logic.parser import parse_formula
from hyperwander.selection.params import SelectionParams
from hyperwander.wander.params import WanderParams


def fixture_path(name):
    return Path(settings.FIXTURES_DIR) / name


def read_fixture(name):
    return fixture_path(name).read_text(encoding="utf-8")


def make_kb(*triples):
    """KnowledgeBase from (subject, relation, object) tuples, ids in argument order."""
    return ingest_triples(Triple(*t) for t in triples)


def make_store(vectors):
    return EmbeddingStore.from_vectors(vectors)


@functools.lru_cache(maxsize=None)
def desk_kb() -> KnowledgeBase:
    return ingest_triples(fixture_path("desk_corpus.csv"))


@functools.lru_cache(maxsize=None)
def desk_store() -> EmbeddingStore:
    return load_embeddings(fixture_path("desk_embeddings.txt"))


def chew_formula():
    return parse_formula(read_fixture("chew.fof"))


def quick_wander_params(**overrides):
    """Wander parameters with a deterministic, small saturation budget."""
    defaults = dict(
        limits=Limits(max_term_depth=3, max_steps=2_000),
        max_rounds=4,
        selection=SelectionParams(),
    )
    defaults.update(overrides)
    return WanderParams(**defaults)


class TempDirMixin:
    """Per-test scratch directory at `self.tmp`, removed afterwards."""

    def setUp(self):
        super().setUp()
        self.tmp = Path(tempfile.mkdtemp(prefix="hyperwander-test-"))
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)
