"""
`hyperwander <verb> ...` console entry point.

Each verb is a management command of the hyperwander app; the hyphenated
spelling used on the command line maps onto the command module name.
"""

import os
import sys

VERBS = {
    "ingest": "ingest",
    "embed-info": "embed_info",
    "select": "select",
    "saturate": "saturate",
    "wander": "wander",
    "copa": "copa",
}

USAGE = "usage: hyperwander <{}> [options]".format("|".join(VERBS))


def run(argv):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError("Couldn't import Django. Is the hyperwander environment installed and activated?") from exc

    execute_from_command_line(argv)


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2:
        sys.stderr.write(f"{USAGE}\n")
        sys.exit(2)

    verb = argv[1]
    if verb in ("-h", "--help", "help"):
        sys.stdout.write(f"{USAGE}\n\nRun 'hyperwander <verb> --help' for the options of one verb.\n")
        return

    command = VERBS.get(verb)
    if command is None:
        sys.stderr.write(f"hyperwander: unknown verb '{verb}'\n{USAGE}\n")
        sys.exit(2)

    run([argv[0], command, *argv[2:]])


if __name__ == "__main__":
    main()
