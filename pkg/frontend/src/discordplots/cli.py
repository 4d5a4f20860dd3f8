"""Command-line entry point: ``discordplots render <in.csv> <out.svg>``."""

from __future__ import annotations

import sys

from .render import render

USAGE = "usage: discordplots render <in.csv> <out.svg>"


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    if len(args) != 3 or args[0] != "render":
        print(USAGE, file=sys.stderr)
        return 1
    try:
        render(args[1], args[2])
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
