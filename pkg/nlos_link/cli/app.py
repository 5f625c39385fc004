"""
NLOS Link - Command Line Interface
"""
import argparse
import logging
import sys
from typing import List, Optional

from nlos_link import __version__
from nlos_link.cli.commands import (
    CoverageCommandsMixin,
    KeyAgreementCommandsMixin,
    SimulateCommandsMixin,
    TrilaterateCommandsMixin,
)
from nlos_link.cli.ui import EXIT_CONFIG, report_error, setup_logging

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are configuration errors: exit 1 instead of argparse's 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        report_error(f"{self.prog}: {message}")
        raise SystemExit(EXIT_CONFIG)


class NLOSLinkCLI(SimulateCommandsMixin, CoverageCommandsMixin, TrilaterateCommandsMixin, KeyAgreementCommandsMixin):
    """Composes the command mixins into one argparse application."""

    def __init__(self):
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(
            prog="nlos-link",
            description="Secured indoor non-line-of-sight optical link: coverage, positioning, "
                        "location management and key agreement",
        )
        parser.add_argument("-v", "--verbose", action="count", default=0,
                            help="Log INFO (-v) or DEBUG (-vv) to stderr")
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
        subparsers.required = True

        self.register_simulate(subparsers)
        self.register_coverage(subparsers)
        self.register_trilaterate(subparsers)
        self.register_keyagree(subparsers)
        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Parse argv and dispatch to the selected command.

        Returns:
            Process exit code
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else EXIT_CONFIG
        setup_logging(args.verbose)
        logger.debug(f"dispatching command {args.command}")
        return args.handler(args)


def main():
    """Entry point"""
    sys.exit(NLOSLinkCLI().run())
