"""
Key Agreement Command Mixin

Runs a scripted two-party handshake and prints the transcript and both keys.
"""
from nlos_link.cli.ui import EXIT_AUTH, EXIT_CONFIG, EXIT_OK, emit, report_error, report_ok
from nlos_link.core.key_agreement import (
    PasswordDigest,
    PublicParams,
    key_fingerprint,
    mod_inverse,
    run_handshake,
    unit_digest,
)
from nlos_link.errors import NLOSLinkError

# Below this modulus size full values are printed; above it only fingerprints
DEMO_LIMIT = 2 ** 64


class KeyAgreementCommandsMixin:
    """Mixin for the `keyagree` command."""

    def register_keyagree(self, subparsers):
        parser = subparsers.add_parser("keyagree", help="Run the password-authenticated key agreement")
        parser.add_argument("--n", type=int, required=True, help="Prime modulus")
        parser.add_argument("--g", type=int, required=True, help="Base, 1 < g < n")
        parser.add_argument("--password-a", required=True, help="Initiator password")
        parser.add_argument("--password-b", required=True, help="Responder password")
        parser.add_argument("--a", type=int, required=True, help="Initiator secret exponent")
        parser.add_argument("--b", type=int, required=True, help="Responder secret exponent")
        forced = parser.add_mutually_exclusive_group()
        forced.add_argument("--digest-m", type=int, default=None,
                            help="Debug: force M on both sides instead of deriving it from the passwords")
        forced.add_argument("--unit-digest", action="store_true",
                            help="Debug: force M = 1 (plain Diffie-Hellman)")
        parser.set_defaults(handler=self.cmd_keyagree)

    def cmd_keyagree(self, args) -> int:
        """Exit 0 when both keys match, 3 when they differ, 1 on invalid input."""
        try:
            params = PublicParams(n=args.n, g=args.g)
            forced = None
            if args.unit_digest:
                forced = unit_digest()
            elif args.digest_m is not None:
                forced = PasswordDigest(M=args.digest_m, M_inv=mod_inverse(args.digest_m, params.order))
            result = run_handshake(
                args.password_a.encode('utf-8'),
                args.password_b.encode('utf-8'),
                params,
                args.a,
                args.b,
                initiator_digest=forced,
                responder_digest=forced,
            )
        except NLOSLinkError as e:
            report_error(str(e))
            return EXIT_CONFIG

        demo = params.n < DEMO_LIMIT
        for message in result.transcript:
            if demo:
                emit(f"{message.label} = {message.value}")
            else:
                emit(f"{message.label} fingerprint = {key_fingerprint(message.value)}")
        if demo:
            emit(f"key_initiator = {result.key_initiator}")
            emit(f"key_responder = {result.key_responder}")
        emit(f"fingerprint_initiator = {key_fingerprint(result.key_initiator)}")
        emit(f"fingerprint_responder = {key_fingerprint(result.key_responder)}")

        if result.keys_match:
            report_ok("keys match")
            return EXIT_OK
        report_error("keys differ: authentication failed")
        return EXIT_AUTH
