"""Command-line entry point: ``report clt|explicit|cov --in DIR --out DIR``."""

from __future__ import annotations

import argparse
import sys

from . import __version__, figures

_RENDERERS = {
    "clt": figures.render_clt,
    "explicit": figures.render_explicit,
    "cov": figures.render_cov,
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="report",
        description="Render figures from zetalab experiment output directories.",
    )
    p.add_argument("--version", action="version", version=f"report {__version__}")
    sub = p.add_subparsers(dest="verb", metavar="{clt,explicit,cov}")
    for verb, help_text in (
        ("clt", "histogram with Gaussian overlay and QQ plot per cell"),
        ("explicit", "log-log residual scaling plot"),
        ("cov", "covariance heatmaps with Frobenius annotation"),
    ):
        sp = sub.add_parser(verb, help=help_text)
        sp.add_argument("--in", dest="in_dir", required=True,
                        help="experiment output directory")
        sp.add_argument("--out", dest="out_dir", required=True,
                        help="directory for the rendered figures")
        sp.add_argument("--format", choices=("png", "svg"), default="png")
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.verb is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        written = _RENDERERS[args.verb](args.in_dir, args.out_dir, args.format)
    except (OSError, figures.SchemaError, figures.EmptyDataError,
            ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
