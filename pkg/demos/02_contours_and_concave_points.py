"""Border tracing, corner simplification and concave points on two touching discs.

Usage: python3 demos/02_contours_and_concave_points.py [out_dir]
"""
# %%
import math

import numpy as np

from _common import OUT
from overlapseg.concavity import concave_points, corner_orientations
from overlapseg.pipeline import segment_mask
from overlapseg.render import draw_debug

yy, xx = np.mgrid[:160, :200]
mask = ((xx - 80) ** 2 + (yy - 80) ** 2 <= 30 ** 2) | ((xx - 120) ** 2 + (yy - 80) ** 2 <= 30 ** 2)

# %% One blob, one closed chain of boundary pixels.
res = segment_mask(mask)
trace = res.clusters[0]
pts = trace.cluster.points
print(f"{len(res.clusters)} cluster, {len(pts)} boundary pixels")

# %% Simplification keeps the corners; the two notches turn the "wrong" way.
corners, concave = concave_points(pts, epsilon=2.0)
signs = corner_orientations(pts[corners])
print(f"{len(corners)} corners, turn signs sum to {int(signs.sum()):+d}")
h = math.sqrt(30 ** 2 - 20 ** 2)
print("analytic crossings: (100, %.2f) and (100, %.2f)" % (80 - h, 80 + h))
for i in concave:
    print(f"  concave point at {tuple(pts[i].tolist())}")

# %% Debug overlay: yellow corners, magenta concave points, one colour per group.
gray = np.where(mask, 60, 200).astype(np.uint8)
draw_debug(gray, res).save(OUT / "02_debug.png")
print(f"groups: {[g.members for g in trace.groups]}, accepted objects: {len(res.accepted)}")
