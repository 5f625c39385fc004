"""
Trilateration Command Mixin

One-shot radical-center solve from three anchors and three distances.
"""
import argparse

from nlos_link.cli.ui import EXIT_CONFIG, EXIT_OK, emit, report_error
from nlos_link.core.positioning import Point2D, UltrasonicReceiver, trilaterate
from nlos_link.errors import DegenerateGeometryError, DomainError


def parse_anchor(text: str) -> Point2D:
    try:
        x, y = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"anchor must be X,Y, got {text!r}")
    return Point2D(x, y)


def format_point(point: Point2D) -> str:
    # + 0.0 turns a rounded -0.0 into 0.0
    return f"({round(point.x, 6) + 0.0:.6f}, {round(point.y, 6) + 0.0:.6f})"


class TrilaterateCommandsMixin:
    """Mixin for the `trilaterate` command."""

    def register_trilaterate(self, subparsers):
        parser = subparsers.add_parser("trilaterate", help="Solve a position from three anchors and distances")
        parser.add_argument("--anchor", type=parse_anchor, action="append", required=True,
                            help="Anchor position X,Y in meters; give exactly three. "
                                 "Write a negative X as --anchor=-1,0")
        parser.add_argument("--distances", type=float, nargs=3, required=True, metavar="D",
                            help="Distances to the anchors in meters, same order")
        parser.set_defaults(handler=self.cmd_trilaterate)

    def cmd_trilaterate(self, args) -> int:
        if len(args.anchor) != 3:
            report_error(f"exactly three --anchor values are required, got {len(args.anchor)}")
            return EXIT_CONFIG
        receivers = [UltrasonicReceiver(f"p{i + 1}", p) for i, p in enumerate(args.anchor)]
        try:
            point = trilaterate(receivers, args.distances)
        except (DegenerateGeometryError, DomainError) as e:
            report_error(str(e))
            return EXIT_CONFIG
        emit(format_point(point))
        return EXIT_OK
