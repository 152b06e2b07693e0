"""embed-export: prompts file in, embedding container out."""

from __future__ import annotations

import argparse
import json
import sys

from .encoders import EncoderUnavailable
from .exporter import ExportConfig, export


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="embed-export",
        description="Embed a prompt file with a named text encoder and write "
        "the matrix container consumed by the training toolkit.",
    )
    parser.add_argument("--prompts", required=True, help="one prompt per line")
    parser.add_argument(
        "--encoder", required=True,
        help="encoder name: hash[:dim] (builtin, deterministic) or a "
        "sentence-transformers model name",
    )
    parser.add_argument("--out", required=True, help="output container path")
    parser.add_argument(
        "--no-normalize", action="store_true", help="keep raw row norms"
    )
    args = parser.parse_args(argv)

    config = ExportConfig(
        prompts_path=args.prompts,
        encoder_name=args.encoder,
        output_path=args.out,
        normalize=not args.no_normalize,
    )
    try:
        meta = export(config)
    except (EncoderUnavailable, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(meta, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
