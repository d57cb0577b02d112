from django.core.management.base import BaseCommand

from hyperwander.wander.loop import render_chain, wander
from hyperwander.wander.trace import write_trace

from .shared.handlers import input_errors, read_embeddings, read_formula, read_kb
from .shared.options import add_wander_arguments, wander_from


class Command(BaseCommand):
    help = "Wander from a formula through the knowledge base and print the chain of focus sets."

    def add_arguments(self, parser):
        parser.add_argument("--formula", required=True, help="file holding one closed formula")
        parser.add_argument("--kb", required=True)
        parser.add_argument("--embeddings", required=True)
        parser.add_argument("--trace", help="write the round records as JSON Lines")
        add_wander_arguments(parser)

    def handle(self, *args, **options):
        formula = read_formula(options["formula"])
        kb = read_kb(options["kb"])
        store = read_embeddings(options["embeddings"])

        with input_errors():
            params = wander_from(options)
            result = wander(formula, kb, store, params)
            if options["trace"]:
                write_trace(result.trace, options["trace"])

        for record in result.trace:
            line = (
                f"round {record.round}: {len(record.selected)} axioms, {record.status or '-'}, "
                f"{record.model_size} atoms, {len(record.extracted)} new symbols, {len(record.clusters)} clusters"
            )
            if record.error:
                self.stderr.write(self.style.WARNING(f"{line}; error: {record.error}"))
            else:
                self.stdout.write(line)

        self.stdout.write(self.style.SUCCESS(render_chain(result.chain)))
