import contextlib
from pathlib import Path

from django.core.management.base import CommandError
from pydantic import ValidationError

from hyperwander.embed.store import EmbeddingStore, load_embeddings
from hyperwander.exceptions import HyperwanderError
from hyperwander.kb.store import KnowledgeBase, load_kb
from hyperwander.logic.formulas import Formula
from hyperwander.logic.parser import parse_formula

# usage and input problems
USAGE_EXIT = 2


@contextlib.contextmanager
def input_errors():
    """Turn library and file errors into a CommandError with the usage exit code."""
    try:
        yield
    except HyperwanderError as err:
        raise CommandError(str(err), returncode=USAGE_EXIT) from err
    except ValidationError as err:
        raise CommandError(f"invalid parameters: {err}", returncode=USAGE_EXIT) from err
    except OSError as err:
        raise CommandError(f"{err.filename or 'file'}: {err.strerror}", returncode=USAGE_EXIT) from err


def require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CommandError(f"no such file: {path}", returncode=USAGE_EXIT)
    return p


def read_kb(path: str) -> KnowledgeBase:
    with input_errors():
        return load_kb(require_file(path))


def read_embeddings(path: str) -> EmbeddingStore:
    with input_errors():
        return load_embeddings(require_file(path))


def read_formula(path: str) -> Formula:
    with input_errors():
        return parse_formula(require_file(path).read_text(encoding="utf-8"))


def parse_context(text: str) -> frozenset[str]:
    """`dog,chew,bone` -> {dog, chew, bone}; symbols are taken verbatim."""
    symbols = frozenset(s.strip() for s in text.split(",") if s.strip())
    if not symbols:
        raise CommandError("--context needs at least one symbol", returncode=USAGE_EXIT)
    return symbols
