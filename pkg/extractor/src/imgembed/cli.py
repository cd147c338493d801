"""Command-line front end for the embedding extractor.

Exit codes: 0 ok, 2 bad arguments, 3 missing input, 4 corpus schema error,
5 no decodable images.
"""

from __future__ import annotations

import argparse
import sys

from .extractor import (
    CANONICAL_INPUT,
    EmptyCorpus,
    MissingColumn,
    NoDecodableImages,
    __version__,
    extract,
)

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_MISSING_INPUT = 3
EXIT_SCHEMA = 4
EXIT_NO_IMAGES = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imgembed",
        description="Extract pooled image-embedding vectors into a MEMB file.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="embed every image a corpus references")
    p.add_argument("--images", required=True, help="directory of image files")
    p.add_argument("--corpus", required=True, help="CSV with id and image columns")
    p.add_argument("--out", required=True, help="embedding file to write")
    p.add_argument("--resize", type=int, default=CANONICAL_INPUT,
                   help=f"square input size (default {CANONICAL_INPUT})")
    p.add_argument("--batch", type=int, default=16, help="inference batch size")
    p.add_argument("--seed", type=int, default=0,
                   help="weight seed for the offline fallback")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        manifest = extract(args.images, args.corpus, args.out,
                           resize=args.resize, batch_size=args.batch, seed=args.seed)
    except (MissingColumn, EmptyCorpus) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except NoDecodableImages as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_IMAGES
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    print(f"wrote {manifest.embedded} embeddings to {args.out} "
          f"({len(manifest.failures)} failures)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
