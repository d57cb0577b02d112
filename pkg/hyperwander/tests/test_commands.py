"""
Tests for the hyperwander management commands and the console entry point.

Each verb is driven through call_command on the bundled fixtures; input
problems must surface as CommandError with the usage exit code.

Run with:
python manage.py test hyperwander.tests.test_commands --verbosity=2

"""
import contextlib
import io
import json

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from hyperwander import cli
from hyperwander.kb.store import load_kb, save_kb
from hyperwander.tests.helpers import TempDirMixin, desk_kb, fixture_path, read_fixture

# small deterministic budget for wander and copa runs
QUICK = {"rounds": 2, "max_steps": 3000, "max_depth": 3}


# Shared fixture helpers
def run(name, *args, **options):
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr, **options)
    return stdout.getvalue(), stderr.getvalue()


class CommandTestCase(TempDirMixin, SimpleTestCase):
    def setUp(self):
        super().setUp()
        self.kb_path = self.tmp / "desk.kb"
        save_kb(desk_kb(), self.kb_path)
        self.embeddings = str(fixture_path("desk_embeddings.txt"))

    def assertUsageError(self, name, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            run(name, *args, **options)
        self.assertEqual(ctx.exception.returncode, 2)
        return ctx.exception


class IngestCommandTests(CommandTestCase):
    def test_writes_kb(self):
        out_path = self.tmp / "out.kb"
        stdout, _stderr = run("ingest", triples=str(fixture_path("desk_corpus.csv")), out=str(out_path), check=True)

        self.assertIn(f"400 axioms written to {out_path}", stdout)
        self.assertIn("records 400, added 400", stdout)
        self.assertIn("all axioms are range-restricted", stdout)
        self.assertEqual(len(load_kb(out_path)), 400)

    def test_malformed_record(self):
        triples = self.tmp / "bad.csv"
        triples.write_text("hasA,dog,fur\nhasA,dog\n", encoding="utf-8")

        error = self.assertUsageError("ingest", triples=str(triples), out=str(self.tmp / "x.kb"))
        self.assertIn("record 2", str(error))

        stdout, _stderr = run("ingest", triples=str(triples), out=str(self.tmp / "x.kb"), skip_bad=True)
        self.assertIn("1 axioms written", stdout)
        self.assertIn("malformed 1", stdout)

    def test_missing_file(self):
        error = self.assertUsageError("ingest", triples=str(self.tmp / "nope.csv"), out=str(self.tmp / "x.kb"))
        self.assertIn("no such file", str(error))


class EmbedInfoCommandTests(CommandTestCase):
    def test_summary(self):
        stdout, _stderr = run("embed_info", embeddings=self.embeddings)
        self.assertIn("dimension: 37", stdout)
        self.assertIn("vocabulary: 114", stdout)
        self.assertIn("rejected: 0", stdout)

    def test_neighbours(self):
        stdout, _stderr = run("embed_info", embeddings=self.embeddings, similar="dog", threshold=0.9)
        neighbours = [line.split()[-1] for line in stdout.splitlines() if line.startswith("    ")]
        self.assertIn("puppy", neighbours)
        self.assertNotIn("dog", neighbours)
        self.assertNotIn("rain", neighbours)

    def test_unknown_symbol(self):
        self.assertUsageError("embed_info", embeddings=self.embeddings, similar="wolfhound")


class SelectCommandTests(CommandTestCase):
    def test_semantic(self):
        stdout, stderr = run("select", kb=str(self.kb_path), embeddings=self.embeddings, context="dog,chew,bone")

        ids = [int(line.split("\t")[0]) for line in stdout.splitlines()]
        self.assertIn(1, ids)
        self.assertEqual(len(ids), len(set(ids)))
        self.assertIn(f"{len(ids)} of 400 axioms selected", stderr)

    def test_syntactic_needs_no_embeddings(self):
        stdout, _stderr = run("select", kb=str(self.kb_path), context="poodle", mode="syntactic", depth=1)
        self.assertTrue(stdout.strip())

    def test_semantic_needs_embeddings(self):
        self.assertUsageError("select", kb=str(self.kb_path), context="dog")

    def test_bad_interval(self):
        error = self.assertUsageError(
            "select", kb=str(self.kb_path), embeddings=self.embeddings, context="dog", lo=0.9, hi=0.1
        )
        self.assertIn("invalid parameters", str(error))

    def test_empty_context(self):
        self.assertUsageError("select", kb=str(self.kb_path), embeddings=self.embeddings, context=" , ")


class SaturateCommandTests(CommandTestCase):
    def test_dog_chews_bone(self):
        model_path = self.tmp / "model.txt"
        stdout, _stderr = run("saturate", clauses=str(fixture_path("dog_chews_bone.clauses")), model_out=str(model_path))
        lines = stdout.splitlines()

        self.assertEqual(lines[0], "status: saturated")
        self.assertTrue(lines[1].startswith("model: 11 atoms"))
        self.assertIn("3 branches opened, 1 closed", lines[1])
        self.assertEqual(lines[2:], model_path.read_text(encoding="utf-8").splitlines())
        self.assertIn("carnivore(a)", lines[2:])

    def test_skolem_symbols_need_flag(self):
        clauses = self.tmp / "model.clauses"
        clauses.write_text("dog(sk1).\n", encoding="utf-8")

        self.assertUsageError("saturate", clauses=str(clauses))
        stdout, _stderr = run("saturate", clauses=str(clauses), allow_reserved=True)
        self.assertIn("dog(sk1)", stdout.splitlines())

    def test_parse_error_position(self):
        clauses = self.tmp / "broken.clauses"
        clauses.write_text("dog(a).\nbone(b :- dog(a).\n", encoding="utf-8")
        error = self.assertUsageError("saturate", clauses=str(clauses))
        self.assertIn("line 2", str(error))

    def test_bad_limits(self):
        error = self.assertUsageError("saturate", clauses=str(fixture_path("dog_chews_bone.clauses")), max_depth=0)
        self.assertIn("invalid parameters", str(error))


class WanderCommandTests(CommandTestCase):
    def test_chain_and_trace(self):
        trace_path = self.tmp / "trace.jsonl"
        stdout, _stderr = run(
            "wander",
            formula=str(fixture_path("chew.fof")),
            kb=str(self.kb_path),
            embeddings=self.embeddings,
            trace=str(trace_path),
            **QUICK,
        )
        lines = stdout.splitlines()

        self.assertTrue(lines[0].startswith("round 1: "))
        self.assertTrue(lines[-1].startswith("{bone, chew, dog, r1agent, r1on}"))
        records = [json.loads(line) for line in trace_path.read_text(encoding="utf-8").splitlines()]
        self.assertEqual(records[0]["round"], 1)
        self.assertLessEqual(len(records), QUICK["rounds"])

    def test_open_formula(self):
        formula = self.tmp / "open.fof"
        formula.write_text("dog(X)\n", encoding="utf-8")
        self.assertUsageError("wander", formula=str(formula), kb=str(self.kb_path), embeddings=self.embeddings)

    def test_not_a_kb_file(self):
        self.assertUsageError(
            "wander",
            formula=str(fixture_path("chew.fof")),
            kb=str(fixture_path("desk_corpus.csv")),
            embeddings=self.embeddings,
        )


class CopaCommandTests(CommandTestCase):
    def copa(self, problems, **options):
        return run("copa", problems=str(problems), kb=str(self.kb_path), embeddings=self.embeddings, **QUICK, **options)

    def test_bundled_problem(self):
        report_path = self.tmp / "report.jsonl"
        stdout, _stderr = self.copa(
            fixture_path("copa65.jsonl"), gold=str(fixture_path("copa65.gold")), report=str(report_path)
        )
        lines = stdout.splitlines()

        self.assertTrue(lines[0].startswith("65\tcause\tchoice "))
        self.assertTrue(lines[-1].startswith("accuracy: "))
        self.assertIn("over 1 problems", lines[-1])
        summary = json.loads(report_path.read_text(encoding="utf-8").splitlines()[-1])
        self.assertEqual(summary["summary"]["problems"], 1)

    def test_unscored_problem_exit_code(self):
        problems = self.tmp / "unscored.jsonl"
        record = json.loads(read_fixture("copa65.jsonl"))
        record["premise"] = {"symbols": ["wolfhound"]}
        problems.write_text(json.dumps(record) + "\n", encoding="utf-8")

        with self.assertRaises(CommandError) as ctx:
            self.copa(problems)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_malformed_problem_file(self):
        problems = self.tmp / "bad.jsonl"
        problems.write_text('{"id": 3, "asks": "cause", "premise": {"symbols": ["dog"]}, "alternatives": []}\n')
        error = self.assertUsageError(
            "copa", problems=str(problems), kb=str(self.kb_path), embeddings=self.embeddings
        )
        self.assertIn("problem 3", str(error))


class ConsoleEntryPointTests(TempDirMixin, SimpleTestCase):
    def main(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            cli.main(["hyperwander", *argv])
        return stdout.getvalue(), stderr.getvalue()

    def test_help(self):
        stdout, _stderr = self.main("--help")
        self.assertIn("embed-info", stdout)

    def test_missing_and_unknown_verbs(self):
        with self.assertRaises(SystemExit) as ctx:
            self.main()
        self.assertEqual(ctx.exception.code, 2)

        with self.assertRaises(SystemExit) as ctx:
            self.main("prove")
        self.assertEqual(ctx.exception.code, 2)

    def test_hyphenated_verb(self):
        stdout, _stderr = self.main("embed-info", "--embeddings", str(fixture_path("desk_embeddings.txt")))
        self.assertIn("vocabulary: 114", stdout)
