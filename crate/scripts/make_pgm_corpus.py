#!/usr/bin/env python3
"""Writes the PGM conformance corpus used by the test suite.

Every input file gets a line in manifest.txt:

    <file> ok <rows> <cols>     parses; <file>.expected holds the canonical
                                P5/maxval-255 encoding of the decoded image
    <file> err <Variant>        must fail with that PgmError variant

The canonical encodings are computed here, independently of the Rust reader.
"""

import math
import random
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "crates/core/tests/data/pgm"


def canonical(rows, cols, maxval, samples):
    scale = 255.0 / maxval
    px = bytes(
        v if maxval == 255 else min(255, int(math.floor(v * scale + 0.5)))
        for v in samples
    )
    return f"P5\n{cols} {rows}\n255\n".encode() + px


def main():
    rng = random.Random(20240611)
    OUT.mkdir(parents=True, exist_ok=True)
    manifest = []

    def ok(name, data, rows, cols, maxval, samples):
        (OUT / name).write_bytes(data)
        (OUT / (name + ".expected")).write_bytes(canonical(rows, cols, maxval, samples))
        manifest.append(f"{name} ok {rows} {cols}")

    def err(name, data, variant):
        (OUT / name).write_bytes(data)
        manifest.append(f"{name} err {variant}")

    ok("ascii_1x1.pgm", b"P2\n1 1\n255\n128\n", 1, 1, 255, [128])

    s = [rng.randrange(256) for _ in range(12)]
    body = "\n".join(" ".join(map(str, s[r * 4:(r + 1) * 4])) for r in range(3))
    ok("ascii_comments.pgm",
       f"P2\n# created by hand\n4 # width\n3\n# maxval follows\n255\n{body}\n".encode(),
       3, 4, 255, s)

    s = [rng.randrange(256) for _ in range(5 * 7)]
    ok("binary_7x5.pgm", b"P5\n7 5\n255\n" + bytes(s), 5, 7, 255, s)

    s = [rng.randrange(2) for _ in range(6 * 6)]
    ok("binary_maxval1.pgm", b"P5\n6 6\n1\n" + bytes(s), 6, 6, 1, s)

    s = [rng.randrange(16) for _ in range(4 * 5)]
    ok("ascii_maxval15.pgm", ("P2\n5 4\n15\n" + " ".join(map(str, s)) + "\n").encode(), 4, 5, 15, s)

    s = [0, 255, 255, 0, 1, 254]
    ok("ascii_edges.pgm", b"P2 3 2 255 0 255 255 0 1 254", 2, 3, 255, s)

    s = [rng.randrange(256) for _ in range(9)]
    ok("binary_comment_after_magic.pgm", b"P5 # comment\n3 3\r\n255\n" + bytes(s), 3, 3, 255, s)

    s = [rng.randrange(3) for _ in range(4)]
    ok("binary_maxval2_half.pgm", b"P5\n2 2\n2\n" + bytes(s), 2, 2, 2, s)

    err("empty.pgm", b"", "BadMagic")
    err("bad_magic.pgm", b"GIF89a\x01\x00", "BadMagic")
    err("magic_no_space.pgm", b"P51 1\n255\n\x00", "BadMagic")
    err("color_p3.ppm", b"P3\n1 1\n255\n1 2 3\n", "Unsupported")
    err("color_p6.ppm", b"P6\n1 1\n255\n\x01\x02\x03", "Unsupported")
    err("truncated_binary.pgm", b"P5\n4 4\n255\n" + bytes(range(10)), "Truncated")
    err("truncated_ascii.pgm", b"P2\n3 2\n255\n1 2 3 4\n", "Truncated")
    err("maxval_16bit.pgm", b"P5\n1 1\n65535\n\x00\x00", "MaxvalTooLarge")
    err("zero_width.pgm", b"P2\n0 3\n255\n", "ZeroDimension")
    err("bad_width.pgm", b"P2\nten 3\n255\n", "Header")
    err("missing_maxval.pgm", b"P2\n2 2\n", "Header")
    err("maxval_zero.pgm", b"P2\n1 1\n0\n0\n", "Header")
    err("bad_sample.pgm", b"P2\n2 1\n255\n12 x7\n", "BadSample")
    err("sample_above_maxval.pgm", b"P2\n2 1\n100\n50 101\n", "SampleOutOfRange")

    (OUT / "manifest.txt").write_text("\n".join(manifest) + "\n")


if __name__ == "__main__":
    main()
