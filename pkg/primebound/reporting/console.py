import sys

from primebound.reporting.color import Color

_verbose = False


def set_verbose(verbose):
    global _verbose
    _verbose = bool(verbose)


def _emit(marker, color, message):
    print(Color.paint(marker, color), message, file=sys.stderr)


def info(message):
    if _verbose:
        _emit("[i]", Color.CYAN, message)


def ok(message):
    if _verbose:
        _emit("[✓]", Color.GREEN, message)


def warn(message):
    _emit("[!]", Color.YELLOW, message)


def fail(message):
    _emit("[X]", Color.RED, message)


def print_config(config):
    """Print the effective configuration, one bold value per line."""
    if not _verbose:
        return

    print("Configuration", file=sys.stderr)
    print("", file=sys.stderr)
    for key, value in config.items():
        key_formatted = key.replace("_", " ").capitalize()
        print(
            "{}: {}".format(key_formatted, Color.paint(str(value), Color.BOLD)),
            file=sys.stderr,
        )
    print("", file=sys.stderr)
