"""The two false-positive filters on hand-made candidates.

Usage: python3 demos/04_rejection_filters.py [out_dir]
"""
# %%
import math

import numpy as np

from overlapseg.filters import apply_filters, coverage, fill_fraction
from overlapseg.geomfit import Ellipse
from overlapseg.shapefit import CIRCLE_LIKE, DetectedObject

yy, xx = np.mgrid[:200, :300]
mask = (xx - 80) ** 2 + (yy - 100) ** 2 <= 40 ** 2


def disc(cx, cy, r):
    return DetectedObject(CIRCLE_LIKE, Ellipse(cx, cy, r, r, 0.0))


candidates = {
    "real disc": disc(80, 100, 40),
    "phantom over background": disc(230, 100, 30),
    "half on the blob": disc(120, 100, 40),
    "small copy inside": disc(85, 100, 15),
}

# %% Masking: at least 75% of the candidate must be foreground.
for name, obj in candidates.items():
    print(f"{name:24s} fill {fill_fraction(obj.ellipse, mask):.2f}")

# %% Overlap: the larger of two ellipses removes the smaller above 50% coverage.
r = 40
lens = (2 * r * r * math.acos(0.5) - (r / 2) * math.sqrt(3 * r * r)) / (math.pi * r * r)
print(f"equal circles one radius apart: rasterized {coverage(Ellipse(0, 0, r, r, 0), Ellipse(r, 0, r, r, 0)):.3f}"
      f", closed form {lens:.3f}")

verdicts = apply_filters(list(candidates.values()), mask)
for name, v in zip(candidates, verdicts):
    print(f"{name:24s} {v.reason}")
