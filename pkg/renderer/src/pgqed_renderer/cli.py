"""pgqed-render: draw figures from solver output directories."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .datasets import MissingColumnError
from .render import gallery, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pgqed-render")
    sub = parser.add_subparsers(dest="verb", required=True)

    p_render = sub.add_parser("render", help="render one output directory")
    p_render.add_argument("dataset_dir")
    p_render.add_argument("--out", default=None)

    p_gallery = sub.add_parser("gallery", help="index every rendered run under a root")
    p_gallery.add_argument("root")

    args = parser.parse_args(argv)
    try:
        if args.verb == "render":
            panels = render(args.dataset_dir, args.out)
            for panel in panels:
                print(f"wrote {panel.image}")
        else:
            index = gallery(Path(args.root))
            print(f"wrote {index}")
    except (MissingColumnError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
