from django.core.management.base import BaseCommand

from hyperwander.kb.store import ingest_triples, save_kb

from .shared.handlers import input_errors, require_file


class Command(BaseCommand):
    help = "Translate a triple file (relation,subject,object per line) into a knowledge base file."

    def add_arguments(self, parser):
        parser.add_argument("--triples", required=True, help="comma/tab separated triples or ConceptNet rows")
        parser.add_argument("--out", required=True, help="knowledge base file to write")
        parser.add_argument("--skip-bad", action="store_true", dest="skip_bad", default=False)
        parser.add_argument(
            "--check",
            action="store_true",
            default=False,
            help="also verify that every axiom clausifies to range-restricted clauses",
        )

    def handle(self, *args, **options):
        with input_errors():
            kb = ingest_triples(require_file(options["triples"]), skip_bad=options["skip_bad"])
            save_kb(kb, options["out"])

        report = kb.last_ingest
        self.stdout.write(self.style.SUCCESS(f"{len(kb)} axioms written to {options['out']}"))
        self.stdout.write(
            f"    records {report.records}, added {report.added}, duplicates {report.duplicates}, "
            f"malformed {report.malformed}, filtered {report.filtered}"
        )

        if options["check"]:
            violations = kb.check_range_restricted()
            if violations:
                for violation in violations:
                    self.stderr.write(self.style.WARNING(f"    axiom {violation.index + 1}: {violation}"))
            else:
                self.stdout.write("    all axioms are range-restricted")
