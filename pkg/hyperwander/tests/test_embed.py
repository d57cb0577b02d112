"""
Tests for the embedding store.

Covers hyperwander/embed/store.py: loading and rejection counts, the
underscore fallback, cosine and nearest-symbol queries.

Run with:
python manage.py test hyperwander.tests.test_embed --verbosity=2

"""
import math

import numpy as np
from django.test import SimpleTestCase

from hyperwander.embed.store import (
    cosine,
    embed_symbols,
    has_vector,
    load_embeddings,
    lookup_vector,
    similar_symbols,
)
from hyperwander.exceptions import (
    DimensionMismatchError,
    EmbeddingFormatError,
    EmptyEmbeddingFileError,
    UnknownSymbolError,
)
from hyperwander.tests.helpers import TempDirMixin, desk_store, make_store


class LoadTests(TempDirMixin, SimpleTestCase):
    def write(self, text, name="vectors.txt"):
        path = self.tmp / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_desk_fixture(self):
        store = desk_store()
        self.assertEqual(store.dimension, 37)
        self.assertEqual(len(store), 114)
        self.assertTrue(store.report.header)
        self.assertIn("veterinarian", store)
        self.assertNotIn("dog_treat", store)

    def test_rejections_are_counted(self):
        store = load_embeddings(
            self.write(
                "5 3\n"
                "dog 1 0 0\n"
                "cat 0 0 0\n"
                "/c/en/fur 0 1 0\n"
                "/c/fr/chien 1 1 0\n"
                "dog 0 1 0\n"
                "bad x y z\n"
            )
        )
        report = store.report
        self.assertEqual(store.symbols, ("dog", "fur"))
        self.assertEqual(
            (report.records, report.loaded, report.zero_vectors, report.filtered, report.duplicates, report.malformed),
            (6, 2, 1, 1, 1, 1),
        )
        # the first record of a repeated symbol wins
        np.testing.assert_allclose(store.vector("dog"), [1.0, 0.0, 0.0])

    def test_without_header(self):
        store = load_embeddings(self.write("dog 3 4\ncat 0 2\n"))
        self.assertFalse(store.report.header)
        np.testing.assert_allclose(store.vector("dog"), [0.6, 0.8])

    def test_width_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            load_embeddings(self.write("dog 1 0 0\ncat 1 0\n"))

    def test_nothing_usable(self):
        with self.assertRaises(EmptyEmbeddingFileError):
            load_embeddings(self.write("1 2\ndog 0 0\n"))

    def test_header_without_dimension(self):
        for header in ("3 0", "-1 2"):
            with self.subTest(header=header):
                with self.assertRaisesMessage(EmbeddingFormatError, "line 1: header declares"):
                    load_embeddings(self.write(f"{header}\ndog 1 0\n"))

    def test_relation_keys_keep_their_case(self):
        store = load_embeddings(self.write("isA 1 0\n/r/HasA 0 1\nDog 1 1\nall 1 2\n"))
        self.assertEqual(store.symbols, ("isA", "hasA", "dog", "all_"))
        self.assertIn("isA", desk_store())
        self.assertIn("atLocation", desk_store())

    def test_random_files_are_unit_normalised(self):
        rng = np.random.default_rng(7)
        for case in range(10):
            count, dimension = int(rng.integers(1, 40)), int(rng.integers(1, 12))
            vectors = rng.normal(scale=float(rng.uniform(0.01, 50.0)), size=(count, dimension))
            lines = [f"w{i} " + " ".join(repr(float(v)) for v in row) for i, row in enumerate(vectors)]
            store = load_embeddings(self.write("\n".join(lines) + "\n", name=f"random{case}.txt"))

            norms = np.linalg.norm(store.matrix, axis=1)
            np.testing.assert_allclose(norms, np.ones(len(store)), atol=1e-6)

    def test_matrix_is_read_only(self):
        with self.assertRaises(ValueError):
            desk_store().matrix[0, 0] = 2.0


class StoreTests(SimpleTestCase):
    def setUp(self):
        self.store = make_store(
            {
                "dog": [1.0, 0.0, 0.0],
                "treat": [0.0, 1.0, 0.0],
                "puppy": [0.9, 0.1, 0.0],
                "cat": [0.8, 0.0, 0.6],
                "rock": [0.0, 0.0, -1.0],
            }
        )

    def test_from_vectors_checks(self):
        with self.assertRaises(DimensionMismatchError):
            make_store({"dog": [1.0, 0.0], "cat": [1.0]})
        with self.assertRaises(ValueError):
            make_store({"dog": [0.0, 0.0]})

    def test_cosine(self):
        self.assertAlmostEqual(cosine(self.store, "dog", "dog"), 1.0)
        self.assertAlmostEqual(cosine(self.store, "dog", "cat"), 0.8)
        self.assertAlmostEqual(cosine(self.store, "cat", "rock"), -0.6)
        self.assertEqual(cosine(self.store, "dog", "treat"), cosine(self.store, "treat", "dog"))

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbolError) as ctx:
            cosine(self.store, "dog", "wolf")
        self.assertEqual(ctx.exception.symbol, "wolf")
        self.assertIsInstance(ctx.exception, KeyError)

    def test_underscore_fallback(self):
        np.testing.assert_allclose(lookup_vector(self.store, "dog_treat"), np.array([1.0, 1.0, 0.0]) / math.sqrt(2))
        np.testing.assert_allclose(lookup_vector(self.store, "dog_xyz"), [1.0, 0.0, 0.0])
        self.assertIsNone(lookup_vector(self.store, "xyz_abc"))
        self.assertFalse(has_vector(self.store, "wolf"))
        self.assertAlmostEqual(cosine(self.store, "dog_treat", "dog"), 1 / math.sqrt(2))

    def test_similar_symbols_order(self):
        result = similar_symbols(self.store, "dog", 0.5)
        self.assertEqual([s for s, _score in result], ["dog", "puppy", "cat"])
        self.assertEqual([s for s, _score in similar_symbols(self.store, "dog", 0.5, exclude_self=True)], ["puppy", "cat"])

    def test_similar_symbols_restricted(self):
        result = similar_symbols(self.store, "dog", 0.5, restrict_to=["cat", "dog_treat", "wolf"])
        self.assertEqual([s for s, _score in result], ["cat", "dog_treat"])

    def test_similar_symbols_threshold_monotone(self):
        store = desk_store()
        previous = None
        for threshold in np.linspace(-1.0, 1.0, 41):
            found = {s for s, _score in similar_symbols(store, "dog", float(threshold))}
            if previous is not None:
                self.assertLessEqual(found, previous)
            previous = found

    def test_threshold_range(self):
        with self.assertRaises(ValueError):
            similar_symbols(self.store, "dog", 1.5)

    def test_embed_symbols(self):
        present, matrix, missing = embed_symbols(self.store, ["treat", "wolf", "dog", "dog_treat"])
        self.assertEqual(present, ["dog", "dog_treat", "treat"])
        self.assertEqual(missing, ["wolf"])
        self.assertEqual(matrix.shape, (3, 3))
