#!/usr/bin/env python3
# Copyright 2026 The sr-select Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the committed test fixtures.

The golden resample output is produced by a direct (non-separable) 2-D
evaluation of the a=-0.5 cubic convolution kernel written in numpy, which
shares no code with the C++ resampler. SSIM reference values come from
scikit-image and are printed for freezing into the tests.
"""

import json
import math
import pathlib
import struct

import numpy as np
from PIL import Image, ImageDraw, ImageFilter
from skimage.metrics import structural_similarity

HERE = pathlib.Path(__file__).resolve().parent


def cubic(x, a=-0.5):
    x = abs(x)
    if x <= 1.0:
        return (a + 2) * x**3 - (a + 3) * x**2 + 1
    if x < 2.0:
        return a * x**3 - 5 * a * x**2 + 8 * a * x - 4 * a
    return 0.0


def axis_taps(in_len, out_len, antialias):
    """Returns, per output index, a list of (clamped source index, weight)."""
    scale = in_len / out_len
    stretch = scale if (antialias and scale > 1.0) else 1.0
    taps = []
    for i in range(out_len):
        center = (i + 0.5) * scale - 0.5
        lo = math.floor(center - 2.0 * stretch) - 1
        hi = math.ceil(center + 2.0 * stretch) + 1
        row = []
        for j in range(lo, hi + 1):
            w = cubic((center - j) / stretch)
            if w != 0.0:
                row.append((min(max(j, 0), in_len - 1), w))
        taps.append(row)
    return taps


def reference_resize(img, out_h, out_w, antialias=True):
    """Direct 2-D weighted sum; img is (h, w) float64."""
    in_h, in_w = img.shape
    ty = axis_taps(in_h, out_h, antialias)
    tx = axis_taps(in_w, out_w, antialias)
    out = np.zeros((out_h, out_w))
    for i in range(out_h):
        for j in range(out_w):
            acc = 0.0
            norm = 0.0
            for (sy, wy) in ty[i]:
                for (sx, wx) in tx[j]:
                    acc += wy * wx * img[sy, sx]
                    norm += wy * wx
            out[i, j] = acc / norm
    return np.clip(out, 0.0, 1.0)


def write_raw(path, arr):
    """16-byte header (w, h, c, reserved) then planar little-endian f32."""
    if arr.ndim == 2:
        arr = arr[:, :, None]
    h, w, c = arr.shape
    with open(path, "wb") as f:
        f.write(struct.pack("<4I", w, h, c, 0))
        for ch in range(c):
            f.write(arr[:, :, ch].astype("<f4").tobytes())


def make_digit():
    im = Image.new("L", (28, 28), 0)
    d = ImageDraw.Draw(im)
    d.line([(19, 5), (9, 5)], fill=255, width=3)
    d.line([(9, 5), (8, 13)], fill=255, width=3)
    d.arc([(7, 10), (20, 23)], start=-150, end=140, fill=255, width=3)
    return im.filter(ImageFilter.GaussianBlur(0.7))


def make_patch():
    y, x = np.mgrid[0:128, 0:128] / 127.0
    r = 0.5 + 0.25 * np.sin(2.1 * x + 0.7) * np.cos(1.3 * y)
    g = 0.45 + 0.3 * x * (1 - y) + 0.1 * np.sin(3.0 * (x + y))
    b = 0.35 + 0.25 * np.cos(2.5 * y - 0.4) + 0.1 * x
    for (cx, cy, rad, col) in [(0.3, 0.35, 0.12, (0.9, 0.8, 0.3)),
                               (0.7, 0.6, 0.18, (0.2, 0.3, 0.7))]:
        dist = np.sqrt((x - cx) ** 2 + (y - cy) ** 2)
        alpha = np.clip((rad - dist) / 0.04 + 0.5, 0.0, 1.0)
        r = r * (1 - alpha) + col[0] * alpha
        g = g * (1 - alpha) + col[1] * alpha
        b = b * (1 - alpha) + col[2] * alpha
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)


def ssim_ref(a, b):
    return structural_similarity(a, b, data_range=1.0, gaussian_weights=True,
                                 sigma=1.5, use_sample_covariance=False,
                                 K1=0.01, K2=0.03)


def make_digit_ballots():
    # 22 raters perceive "5", 8 perceive "6"; two selections each.
    five = [17] * 9 + [42] * 8 + [103] * 7 + [250] * 6 + [7] * 5 + \
        [3, 60, 111, 140, 199, 222, 281, 300, 318]
    six = [88] * 5 + [201] * 4 + [150] * 3 + [64] * 2 + [305, 12]
    records = []

    def pair_up(pool):
        # Deal counts round-robin into pairs so no ballot repeats an index.
        pool = sorted(pool, key=lambda v: (-pool.count(v), v))
        half = len(pool) // 2
        return [sorted([pool[i], pool[i + half]]) for i in range(half)]

    pairs = [(p, "5") for p in pair_up(five)] + [(p, "6") for p in pair_up(six)]
    for n, (sel, label) in enumerate(pairs):
        assert sel[0] != sel[1]
        records.append({
            "voter_id": f"rater-{n + 1:02d}",
            "set_id": "mnist-5or6",
            "selections": sel,
            "label": label,
            "submitted_at": f"2024-03-01T10:{n:02d}:00Z",
        })
    return records


def main():
    digit = make_digit()
    digit.save(HERE / "digit_28x28.png")
    d = np.asarray(digit, dtype=np.float64) / 255.0
    lr = reference_resize(d, 7, 7, antialias=True)
    write_raw(HERE / "digit_7x7_golden.f32", lr)

    Image.fromarray(make_patch(), "RGB").save(HERE / "patch_128x128.png")

    recs = make_digit_ballots()
    with open(HERE / "digit_ballots.jsonl", "w") as f:
        for r in recs:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")

    const_a = np.full((16, 16), 0.2)
    const_b = np.full((16, 16), 0.7)
    yy, xx = np.mgrid[0:16, 0:16]
    checker = np.where((xx + yy) % 2 == 0, 0.25, 0.75)
    inverted = 1.0 - checker
    print("ssim const 0.2 vs 0.7: %.12f" % ssim_ref(const_a, const_b))
    print("ssim checker vs inverted: %.12f" % ssim_ref(checker, inverted))
    blurred = np.asarray(digit.filter(ImageFilter.GaussianBlur(1.5)),
                         dtype=np.float64) / 255.0
    print("ssim digit vs blurred digit: %.12f" % ssim_ref(d, blurred))
    Image.fromarray(np.round(blurred * 255).astype(np.uint8), "L").save(
        HERE / "digit_blurred_28x28.png")
    Image.new("RGBA", (2, 2), (10, 20, 30, 128)).save(HERE / "rgba_2x2.png")
    Image.fromarray(np.full((2, 2), 40000, dtype=np.uint16)).save(
        HERE / "gray16_2x2.png")
    print("golden 7x7:\n", np.array2string(lr, precision=6))


if __name__ == "__main__":
    main()
