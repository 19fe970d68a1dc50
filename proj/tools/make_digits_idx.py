#!/usr/bin/env python3
"""Convert the UCI optical-recognition 8x8 digit set bundled with scikit-learn
into IDX files (images: magic 0x00000803, labels: magic 0x00000801).

Pixel counts 0..16 are stored as round(v * 255 / 16) so that the IDX loader's
byte/255 rescaling yields intensities in [0, 1].
"""
import gzip
import os
import struct
import sys

import sklearn.datasets

src = os.path.join(os.path.dirname(sklearn.datasets.__file__), "data", "digits.csv.gz")
out = sys.argv[1] if len(sys.argv) > 1 else "data"

rows = [list(map(int, line.split(","))) for line in gzip.open(src, "rt") if line.strip()]
images = bytearray()
labels = bytearray()
for r in rows:
    images.extend(round(v * 255 / 16) for v in r[:64])
    labels.append(r[64])

with open(os.path.join(out, "digits8x8-images.idx3-ubyte"), "wb") as f:
    f.write(struct.pack(">IIII", 0x803, len(rows), 8, 8))
    f.write(images)
with open(os.path.join(out, "digits8x8-labels.idx1-ubyte"), "wb") as f:
    f.write(struct.pack(">II", 0x801, len(rows)))
    f.write(labels)
print(f"wrote {len(rows)} digits")
