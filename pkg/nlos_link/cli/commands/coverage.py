"""
Coverage Command Mixin

One-shot Gaussian-beam cell calculator.
"""
from nlos_link.cli.ui import EXIT_CONFIG, EXIT_OK, emit, report_error
from nlos_link.core.coverage import max_cell_radius, required_launch_power
from nlos_link.errors import DomainError


def format_significant(value: float) -> str:
    """10 significant digits, trailing zeros kept"""
    return f"{value:#.10g}"


class CoverageCommandsMixin:
    """Mixin for the `coverage` command."""

    def register_coverage(self, subparsers):
        parser = subparsers.add_parser("coverage", help="Launch power for a cell, or largest cell for a power")
        mode = parser.add_mutually_exclusive_group(required=True)
        mode.add_argument("--power", action="store_true", help="Compute the launch power P for a cell radius")
        mode.add_argument("--radius", action="store_true", help="Compute the maximum cell radius for a power")
        parser.add_argument("--ir", type=float, required=True, help="Receiver sensitivity I_r in W/m²")
        parser.add_argument("--beam-radius", type=float, help="Beam radius W in m (--power)")
        parser.add_argument("--cell-radius", type=float, help="Cell radius r in m (--power)")
        parser.add_argument("--launch-power", type=float, help="Launch power P in W (--radius)")
        parser.set_defaults(handler=self.cmd_coverage)

    def cmd_coverage(self, args) -> int:
        try:
            if args.power:
                if args.beam_radius is None or args.cell_radius is None:
                    report_error("--power needs --beam-radius and --cell-radius")
                    return EXIT_CONFIG
                value = required_launch_power(args.ir, args.beam_radius, args.cell_radius)
            else:
                if args.launch_power is None:
                    report_error("--radius needs --launch-power")
                    return EXIT_CONFIG
                if not args.launch_power > 0:
                    raise DomainError(f"launch power must be > 0, got {args.launch_power}")
                value = max_cell_radius(args.launch_power, args.ir)
        except DomainError as e:
            report_error(str(e))
            return EXIT_CONFIG

        emit(format_significant(value))
        return EXIT_OK
