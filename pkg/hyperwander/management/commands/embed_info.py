from django.core.management.base import BaseCommand

from hyperwander.embed.store import similar_symbols

from .shared.handlers import input_errors, read_embeddings


class Command(BaseCommand):
    help = "Summarise an embedding file: dimension, vocabulary size and rejected records."

    def add_arguments(self, parser):
        parser.add_argument("--embeddings", required=True)
        parser.add_argument("--similar", metavar="SYMBOL", help="also list the symbols closest to SYMBOL")
        parser.add_argument("--threshold", type=float, default=0.5)

    def handle(self, *args, **options):
        store = read_embeddings(options["embeddings"])
        report = store.report
        rejected = report.records - report.loaded

        self.stdout.write(f"dimension: {store.dimension}")
        self.stdout.write(f"vocabulary: {len(store)}")
        self.stdout.write(
            f"rejected: {rejected} (zero vectors {report.zero_vectors}, malformed {report.malformed}, "
            f"duplicates {report.duplicates}, non-English {report.filtered})"
        )

        symbol = options["similar"]
        if symbol:
            with input_errors():
                neighbours = similar_symbols(store, symbol, options["threshold"], exclude_self=True)
            for neighbour, score in neighbours:
                self.stdout.write(f"    {score:.4f}  {neighbour}")
