"""
Simulation Command Mixin

Runs a scenario file for a number of ticks and writes the JSON-lines trace.
"""
import sys

from nlos_link.cli.ui import EXIT_CONFIG, EXIT_OK, EXIT_PROTOCOL, report_error, report_ok
from nlos_link.errors import ConfigError
from nlos_link.simulator import load_config, load_script, run


class SimulateCommandsMixin:
    """Mixin for the `simulate` command."""

    def register_simulate(self, subparsers):
        parser = subparsers.add_parser("simulate", help="Run a room scenario and write its event trace")
        parser.add_argument("config", help="Scenario JSON file")
        parser.add_argument("--ticks", type=int, default=100, help="Number of ticks to run (default: 100)")
        parser.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
        parser.add_argument("--script", default=None, help="JSON list of {tick, src, dst, message?} requests")
        parser.add_argument("--out", default=None, help="Trace output file (default: stdout)")
        parser.set_defaults(handler=self.cmd_simulate)

    def cmd_simulate(self, args) -> int:
        """Exit 0 on success, 1 on configuration errors, 2 on location protocol violations."""
        try:
            config = load_config(args.config).with_seed(args.seed)
            requests = load_script(args.script) if args.script else []
            trace = run(config, args.ticks, requests)
        except ConfigError as e:
            report_error(f"config error at {e.field_path or '<root>'}: {e}")
            return EXIT_CONFIG

        if args.out:
            trace.write(args.out)
            report_ok(f"{len(trace.events)} events written to {args.out}")
        else:
            sys.stdout.write(trace.to_jsonl())
            sys.stdout.flush()

        if trace.protocol_violations:
            report_error(f"{trace.protocol_violations} location protocol violation(s) in the trace")
            return EXIT_PROTOCOL
        return EXIT_OK
