from django.core.management.base import BaseCommand, CommandError

from hyperwander.copa.harness import CopaParams, ScoringStrategy, run_copa, write_report
from hyperwander.copa.problems import parse_copa, read_gold

from .shared.handlers import input_errors, read_embeddings, read_kb, require_file
from .shared.options import add_wander_arguments, wander_from

# at least one problem could not be scored
UNSCORED_EXIT = 1


def _score(value):
    return "n/a" if value is None else f"{value:.4f}"


class Command(BaseCommand):
    help = "Answer COPA-style problems by wandering from both alternatives."

    def add_arguments(self, parser):
        parser.add_argument("--problems", required=True, help="JSON Lines problem file")
        parser.add_argument("--kb", required=True)
        parser.add_argument("--embeddings", required=True)
        parser.add_argument("--gold", help="gold labels, '<id> <1|2>' per line")
        parser.add_argument("--report", help="write the report as JSON Lines")
        parser.add_argument("--scoring", choices=ScoringStrategy.values, default=ScoringStrategy.FINAL)
        parser.add_argument("--discount", type=float, default=0.5)
        parser.add_argument("--workers", type=int, default=1)
        add_wander_arguments(parser)

    def handle(self, *args, **options):
        with input_errors():
            problems = parse_copa(require_file(options["problems"]))
            gold = read_gold(require_file(options["gold"])) if options["gold"] else None
            params = CopaParams(
                wander=wander_from(options),
                scoring=options["scoring"],
                discount=options["discount"],
                workers=options["workers"],
            )
        kb = read_kb(options["kb"])
        store = read_embeddings(options["embeddings"])

        with input_errors():
            report = run_copa(problems, kb, store, params, gold)
            if options["report"]:
                write_report(report, options["report"])

        for row in report.rows:
            first, second = row.scores
            choice = row.choice if row.choice is not None else "-"
            flags = " tie" if row.tie else ""
            flags += " unscored" if row.unscored else ""
            self.stdout.write(f"{row.id}\t{row.asks}\tchoice {choice}\tscores {_score(first)} / {_score(second)}{flags}")

        if report.accuracy is not None:
            self.stdout.write(self.style.SUCCESS(f"accuracy: {report.accuracy:.3f} over {report.problems} problems"))

        if report.unscored:
            raise CommandError(f"{report.unscored} problem(s) could not be scored", returncode=UNSCORED_EXIT)
