"""
Tests for the COPA harness.

Covers hyperwander/copa: problem and gold files, chain scoring, the choice
rule, reports, and determinism on the bundled problem.

Run with:
python manage.py test hyperwander.tests.test_copa --verbosity=2

"""
import json
import math

from django.test import SimpleTestCase

from hyperwander.copa.harness import (
    CopaParams,
    ScoringStrategy,
    run_copa,
    score_alternative,
    score_chain,
    score_symbols,
    solve,
    write_report,
)
from hyperwander.copa.problems import Ask, Statement, parse_copa, read_gold, record_to_problem
from hyperwander.exceptions import CopaFormatError, ScoreUndefinedError
from hyperwander.selection.params import SelectionParams
from hyperwander.wander.params import WanderParams
from hyperwander.tests.helpers import (
    TempDirMixin,
    chew_formula,
    desk_kb,
    desk_store,
    fixture_path,
    make_kb,
    make_store,
    quick_wander_params,
    read_fixture,
)

CHEW = read_fixture("chew.fof").strip()


# Shared fixture helpers
def make_problem(problem_id=1, premise=("veterinarian",), alternatives=None, gold=2, asks="cause"):
    record = {
        "id": problem_id,
        "asks": asks,
        "premise": {"symbols": list(premise)},
        "alternatives": alternatives or [{"formula": CHEW}, {"symbols": ["dog", "injure", "paw"]}],
        "gold": gold,
    }
    return record_to_problem(record)


def vet_world():
    """
    Three triples and a store in which wound is close to veterinarian (0.9),
    teeth barely (0.1) and fur not at all.
    """
    kb = make_kb(("injure", "causes", "wound"), ("chew", "hasA", "teeth"), ("dog", "hasA", "fur"))
    store = make_store(
        {
            "veterinarian": [1.0, 0.0, 0.0, 0.0],
            "wound": [0.9, 0.43589, 0.0, 0.0],
            "teeth": [0.1, 0.0, 0.99499, 0.0],
            "fur": [0.0, 0.0, 0.0, 1.0],
            "dog": [0.0, 1.0, 0.0, 0.0],
            "chew": [0.0, 0.0, 1.0, 0.0],
            "injure": [0.0, 0.6, 0.8, 0.0],
            "paw": [0.0, 0.0, 0.6, 0.8],
            "hasA": [0.0, 0.6, 0.0, 0.8],
            "causes": [0.5, 0.5, 0.5, 0.5],
        }
    )
    return kb, store


def one_round(scoring=ScoringStrategy.FINAL, workers=1):
    selection = SelectionParams(sim_low=-1.0, sim_high=1.0, expand_threshold=1.0)
    return CopaParams(wander=WanderParams(selection=selection, max_rounds=1), scoring=scoring, workers=workers)


class ProblemFileTests(TempDirMixin, SimpleTestCase):
    def write(self, *lines):
        path = self.tmp / "problems.jsonl"
        path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
        return path

    def test_bundled_problem(self):
        problems = parse_copa(fixture_path("copa65.jsonl"))

        self.assertEqual(len(problems), 1)
        problem = problems[0]
        self.assertEqual(problem.id, 65)
        self.assertEqual(problem.asks, Ask.CAUSE)
        self.assertEqual(problem.gold, 2)
        self.assertEqual(problem.premise.symbol_set(), {"family", "take", "dog", "veterinarian"})
        self.assertEqual(problem.alternatives[0].to_formula(), chew_formula())
        self.assertEqual(problem.alternatives[1].symbols, ("dog", "injure", "paw"))

    def test_gold_file(self):
        self.assertEqual(read_gold(fixture_path("copa65.gold")), {65: 2})
        bad = self.tmp / "bad.gold"
        bad.write_text("65 3\n", encoding="utf-8")
        with self.assertRaises(CopaFormatError):
            read_gold(bad)

    def test_symbols_canonicalised(self):
        self.assertEqual(Statement(symbols=["Dog Treat", "fur", "fur"]).symbols, ("dog_treat", "fur"))

    def test_statement_needs_exactly_one_form(self):
        with self.assertRaisesMessage(CopaFormatError, "problem 4"):
            make_problem(4, alternatives=[{"formula": CHEW, "symbols": ["dog"]}, {"symbols": ["dog"]}])
        with self.assertRaises(CopaFormatError):
            make_problem(4, alternatives=[{}, {"symbols": ["dog"]}])

    def test_two_alternatives_required(self):
        with self.assertRaisesMessage(CopaFormatError, "problem 7: expected exactly two alternatives, found 1"):
            make_problem(7, alternatives=[{"symbols": ["dog"]}])

    def test_bad_formula_reported_against_problem(self):
        with self.assertRaisesMessage(CopaFormatError, "problem 8"):
            make_problem(8, alternatives=[{"formula": "exists X (dog(X)"}, {"symbols": ["dog"]}])

    def test_bad_gold_and_asks(self):
        with self.assertRaises(CopaFormatError):
            make_problem(gold=3)
        with self.assertRaises(CopaFormatError):
            make_problem(asks="reason")

    def test_duplicate_ids(self):
        line = json.dumps({"id": 1, "asks": "effect", "premise": {"symbols": ["a"]}, "alternatives": [{"symbols": ["b"]}, {"symbols": ["c"]}]})
        with self.assertRaisesMessage(CopaFormatError, "duplicate"):
            parse_copa(self.write(line, line))

    def test_invalid_json(self):
        with self.assertRaisesMessage(CopaFormatError, "line 1"):
            parse_copa(self.write("{not json"))

    def test_empty_file(self):
        self.assertEqual(parse_copa(self.write("")), [])


class ScoringTests(SimpleTestCase):
    def setUp(self):
        self.kb, self.store = vet_world()

    def test_score_symbols(self):
        self.assertAlmostEqual(score_symbols({"veterinarian"}, {"wound", "fur"}, self.store), 0.45, places=4)
        # unembedded symbols are left out of the mean
        self.assertAlmostEqual(score_symbols({"veterinarian", "r1on"}, {"wound", "r1on"}, self.store), 0.9, places=4)

    def test_score_undefined(self):
        with self.assertRaises(ScoreUndefinedError):
            score_symbols({"r1on"}, {"wound"}, self.store)
        with self.assertRaises(ScoreUndefinedError):
            score_symbols({"veterinarian"}, {"r1on"}, self.store)

    def test_chain_strategies(self):
        chain = [{"dog", "injure", "paw"}, {"fur", "wound"}]
        premise = {"veterinarian"}

        self.assertAlmostEqual(score_chain(premise, chain, self.store), 0.45, places=4)
        self.assertAlmostEqual(score_chain(premise, chain, self.store, ScoringStrategy.UNION), 0.18, places=4)
        self.assertAlmostEqual(
            score_chain(premise, chain, self.store, ScoringStrategy.DISCOUNTED, discount=0.5), 0.3, places=4
        )

    def test_final_falls_back_to_union(self):
        chain = [{"wound"}, {"r1on"}]
        self.assertAlmostEqual(score_chain({"veterinarian"}, chain, self.store), 0.9, places=4)

    def test_score_alternative(self):
        problem = make_problem()
        score = score_alternative({"veterinarian"}, problem.alternatives[1].to_formula(), self.kb, self.store, one_round())
        self.assertAlmostEqual(score, 0.45, places=4)


class SolveTests(TempDirMixin, SimpleTestCase):
    def setUp(self):
        super().setUp()
        self.kb, self.store = vet_world()

    def test_injured_paw_wins(self):
        row = solve(make_problem(), self.kb, self.store, one_round())

        self.assertEqual(row.choice, 2)
        self.assertAlmostEqual(row.scores[0], 0.05, places=4)
        self.assertAlmostEqual(row.scores[1], 0.45, places=4)
        self.assertEqual(row.chains[0][1], ["fur", "teeth"])
        self.assertEqual(row.chains[1][1], ["fur", "wound"])
        self.assertFalse(row.tie)
        self.assertTrue(row.correct)

    def test_choice_survives_monotone_rescaling(self):
        problem = make_problem()
        for transform in (lambda s: 2 * s + 1, math.exp, lambda s: s**3, lambda s: math.atan(10 * s)):
            with self.subTest(transform=transform):
                row = solve(problem, self.kb, self.store, one_round(), score_transform=transform)
                self.assertEqual(row.choice, 2)

    def test_other_strategies_agree(self):
        for scoring in (ScoringStrategy.UNION, ScoringStrategy.DISCOUNTED):
            with self.subTest(scoring=scoring):
                self.assertEqual(solve(make_problem(), self.kb, self.store, one_round(scoring)).choice, 2)

    def test_tie_goes_to_first(self):
        same = {"symbols": ["dog", "injure", "paw"]}
        row = solve(make_problem(alternatives=[same, same]), self.kb, self.store, one_round())
        self.assertEqual(row.choice, 1)
        self.assertTrue(row.tie)

    def test_unscored(self):
        row = solve(make_problem(premise=("nothing",)), self.kb, self.store, one_round())
        self.assertTrue(row.unscored)
        self.assertIsNone(row.choice)
        self.assertIsNone(row.correct)
        self.assertTrue(all(row.errors))

    def test_run_copa_orders_and_overrides_gold(self):
        problems = [make_problem(3), make_problem(1, gold=None)]
        report = run_copa(problems, self.kb, self.store, one_round(), gold={1: 1})

        self.assertEqual([r.id for r in report.rows], [1, 3])
        self.assertEqual([r.gold for r in report.rows], [1, 2])
        self.assertEqual([r.correct for r in report.rows], [False, True])
        self.assertEqual(report.accuracy, 0.5)
        self.assertEqual(report.unscored, 0)

    def test_unscored_counts_as_wrong(self):
        problems = [make_problem(1), make_problem(2, premise=("nothing",))]
        report = run_copa(problems, self.kb, self.store, one_round())
        self.assertEqual(report.unscored, 1)
        self.assertEqual(report.accuracy, 0.5)

    def test_no_labels_no_accuracy(self):
        report = run_copa([make_problem(gold=None)], self.kb, self.store, one_round())
        self.assertIsNone(report.accuracy)

    def test_workers_do_not_change_results(self):
        problems = [make_problem(n) for n in range(1, 5)]
        serial = run_copa(problems, self.kb, self.store, one_round())
        parallel = run_copa(problems, self.kb, self.store, one_round(workers=3))
        self.assertEqual(serial, parallel)

    def test_report_file(self):
        report = run_copa([make_problem(1), make_problem(2)], self.kb, self.store, one_round())
        path = self.tmp / "report.jsonl"
        write_report(report, path)

        lines = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
        self.assertEqual([line["id"] for line in lines[:-1]], [1, 2])
        self.assertEqual(lines[-1], {"summary": {"problems": 2, "unscored": 0, "accuracy": 1.0}})


class BundledProblemTests(TempDirMixin, SimpleTestCase):
    RUNS = 5

    def test_deterministic_report(self):
        problems = parse_copa(fixture_path("copa65.jsonl"))
        params = CopaParams(wander=quick_wander_params(max_rounds=3))

        outputs, choices = [], set()
        for run in range(self.RUNS):
            report = run_copa(problems, desk_kb(), desk_store(), params)
            path = self.tmp / f"report{run}.jsonl"
            write_report(report, path)
            outputs.append(path.read_bytes())

            row = report.rows[0]
            choices.add(row.choice)
            self.assertFalse(row.unscored)
            for score in row.scores:
                self.assertGreaterEqual(score, -1.0)
                self.assertLessEqual(score, 1.0)

        self.assertEqual(len(set(outputs)), 1)
        self.assertEqual(len(choices), 1)
