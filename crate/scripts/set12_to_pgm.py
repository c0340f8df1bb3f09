#!/usr/bin/env python3
"""Convert a directory of images (e.g. the Set12 PNGs) to 8-bit binary PGM.

    python3 scripts/set12_to_pgm.py path/to/Set12 data/set12

Colour images are converted to luminance. The images are not resized; the
pipeline resizes them to its working grid.
"""

import argparse
from pathlib import Path

from PIL import Image

SUFFIXES = {".png", ".bmp", ".tif", ".tiff", ".jpg", ".jpeg", ".pgm"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("src", type=Path)
    ap.add_argument("dst", type=Path)
    args = ap.parse_args()

    args.dst.mkdir(parents=True, exist_ok=True)
    files = sorted(p for p in args.src.iterdir() if p.suffix.lower() in SUFFIXES)
    if not files:
        raise SystemExit(f"no images found in {args.src}")
    for path in files:
        out = args.dst / (path.stem + ".pgm")
        with Image.open(path) as img:
            img.convert("L").save(out, format="PPM")
        print(out)


if __name__ == "__main__":
    main()
