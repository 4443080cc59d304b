"""Command line: render one recipe or every recipe in a directory."""

from __future__ import annotations

import argparse
import sys

from .render import RecipeError, render, render_all


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotview",
        description="batch figure renderer for solver CSV/JSON artifacts")
    parser.add_argument("--data-dir", default=".",
                        help="directory holding the run CSV/JSON files")
    parser.add_argument("--output-dir", default=".",
                        help="directory for the rendered images")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("render").add_argument("recipe")
    sub.add_parser("render-all").add_argument("recipe_dir")

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            written = [render(args.recipe, args.data_dir, args.output_dir)]
        else:
            written = render_all(args.recipe_dir, args.data_dir,
                                 args.output_dir)
    except RecipeError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
