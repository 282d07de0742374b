"""matineq: numerical verifier for matrix Fejér and Levin-Stečkin inequalities."""

import logging
import sys

from cli.parser import build_parser, dispatch, log_level


def main() -> None:
    """Application entry point."""
    args = build_parser().parse_args()

    # Logs on stderr, reports on stdout
    logging.basicConfig(
        level=log_level(args),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=[logging.StreamHandler()],
    )
    sys.exit(dispatch(args))


if __name__ == "__main__":
    main()
