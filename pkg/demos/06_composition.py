"""Polymorph weight fractions from detected rods and round crystals.

Usage: python3 demos/06_composition.py [out_dir]
"""
# %%
from overlapseg.formats import truth_to_detection
from overlapseg.metrics import composition
from overlapseg.pipeline import segment_image
from overlapseg.synthgen import SceneSpec, generate_scene

spec = SceneSpec(count=50, seed=12, target_alpha_weight=30.0, radius=(12, 22), aspect=(1.0, 1.3),
                 rod_length=(50, 90), rod_width=(8, 12), scale=0.8)
img, truth = generate_scene(spec)

# %% What the generator built, measured with perfect detections.
built = composition([truth_to_detection(o) for o in truth.objects], scale=spec.scale)
print(f"built:    alpha {built.weight_pct['alpha']:.2f} wt%  ({built.counts['alpha']} rods, "
      f"{built.counts['beta']} round)")

# %% What the segmentation recovers from the image alone.
found = composition(segment_image(img).accepted, scale=spec.scale)
print(f"detected: alpha {found.weight_pct['alpha']:.2f} wt%  ({found.counts['alpha']} rods, "
      f"{found.counts['beta']} round)")
print(f"absolute error {abs(found.weight_pct['alpha'] - built.weight_pct['alpha']):.2f} points")
