from django.core.management.base import BaseCommand, CommandError

from hyperwander.logic.formulas import render_formula
from hyperwander.selection.params import SelectionMode
from hyperwander.selection.select import semantic_select, syntactic_select

from .shared.handlers import USAGE_EXIT, input_errors, parse_context, read_embeddings, read_kb
from .shared.options import add_selection_arguments, selection_from


class Command(BaseCommand):
    help = "Select knowledge base axioms for a context of predicate symbols."

    def add_arguments(self, parser):
        parser.add_argument("--kb", required=True)
        parser.add_argument("--embeddings", help="required for --mode semantic")
        parser.add_argument("--context", required=True, help="comma separated symbols, e.g. dog,chew,bone")
        parser.add_argument("--mode", choices=SelectionMode.values, default=SelectionMode.SEMANTIC)
        add_selection_arguments(parser)

    def handle(self, *args, **options):
        context = parse_context(options["context"])
        kb = read_kb(options["kb"])
        with input_errors():
            params = selection_from(options)

        if options["mode"] == SelectionMode.SEMANTIC:
            if not options["embeddings"]:
                raise CommandError("--embeddings is required for semantic selection", returncode=USAGE_EXIT)
            store = read_embeddings(options["embeddings"])
            selected = semantic_select(context, kb, store, params)
        else:
            selected = syntactic_select(context, kb, params)

        for axiom_id in selected:
            self.stdout.write(f"{axiom_id}\t{render_formula(kb.axiom(axiom_id))}")
        self.stderr.write(self.style.SUCCESS(f"{len(selected)} of {len(kb)} axioms selected"))
