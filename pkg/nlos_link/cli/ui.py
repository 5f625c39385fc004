"""
Console helpers for the nlos-link commands

Exit codes, the stdout/stderr consoles, status marks and logging setup.
Values a script may parse go to stdout through emit(); diagnostics and
logs go to stderr.
"""
import logging
import sys
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROTOCOL = 2
EXIT_AUTH = 3

# (unicode, ascii) mark per outcome
_STATUS_MARKS = {True: ('✓', '+'), False: ('✗', 'x')}


def _stderr_encoding() -> str:
    return getattr(sys.stderr, 'encoding', None) or 'utf-8'


def status_mark(ok: bool, encoding: Optional[str] = None) -> str:
    """Success or failure mark, ASCII when the stderr encoding has no check/cross glyphs"""
    fancy, plain = _STATUS_MARKS[ok]
    try:
        fancy.encode(encoding or _stderr_encoding())
    except (UnicodeEncodeError, LookupError):
        return plain
    return fancy


console = Console()
err_console = Console(stderr=True)


def emit(text: str):
    """Print a machine-checked value: no markup, no highlighting, no wrapping"""
    console.print(text, markup=False, highlight=False, soft_wrap=True)


def _report(ok: bool, message: str):
    color = "green" if ok else "red"
    err_console.print(f"[{color}]{status_mark(ok)}[/] {escape(message)}", highlight=False, soft_wrap=True)


def report_error(message: str):
    _report(False, message)


def report_ok(message: str):
    _report(True, message)


def setup_logging(verbosity: int = 0):
    """Route library logging to stderr through rich: WARNING, -v INFO, -vv DEBUG"""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False, markup=False)],
        force=True,
    )
