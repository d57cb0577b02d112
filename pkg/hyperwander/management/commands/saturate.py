from django.core.management.base import BaseCommand

from hyperwander.engine.tableau import model_lines, saturate, write_model
from hyperwander.logic.parser import ParseSession, parse_clauses

from .shared.handlers import input_errors, require_file
from .shared.options import add_limit_arguments, limits_from


class Command(BaseCommand):
    help = "Run the hypertableau engine on a clause file and print the resulting model."

    def add_arguments(self, parser):
        parser.add_argument("--clauses", required=True)
        parser.add_argument("--model-out", dest="model_out", help="write the model, one atom per line")
        parser.add_argument(
            "--allow-reserved",
            action="store_true",
            dest="allow_reserved",
            default=False,
            help="accept Skolem symbols (sk1, ...) in the input, e.g. when re-reading a model",
        )
        add_limit_arguments(parser)

    def handle(self, *args, **options):
        with input_errors():
            text = require_file(options["clauses"]).read_text(encoding="utf-8")
            clauses = parse_clauses(text, ParseSession(allow_reserved=options["allow_reserved"]))
            result = saturate(clauses, limits_from(options))
            if options["model_out"]:
                write_model(result.model, options["model_out"])

        stats = result.stats
        self.stdout.write(self.style.SUCCESS(f"status: {result.status}"))
        self.stdout.write(
            f"model: {len(result.model)} atoms ({stats.extensions} extensions, "
            f"{stats.branches_opened} branches opened, {stats.branches_closed} closed, "
            f"{stats.depth_pruned} pruned by depth, {stats.elapsed_seconds:.3f}s)"
        )
        for line in model_lines(result.model):
            self.stdout.write(line)
