"""Segmentation of overlapping round and rod-shaped objects.

Contours of foreground blobs are split at concave points, the pieces are
regrouped by fitted-ellipse orientation, and each group receives an ellipse
or (for elongated groups) an oriented bounding box.
"""

from .concavity import concave_points, cross_sign, extract_concave_points, rdp_simplify
from .filters import apply_filters, masking_filter, overlap_filter
from .geomfit import Ellipse, aspect_ratio, fit_ellipse_lsq, project_extent
from .grouping import map_segments, split_segments
from .imgproc import median_blur, morph_cleanup, otsu_threshold, to_grayscale
from .metrics import (ajsc_curve, composition, evaluate, evaluate_dataset, jsc,
                      match_detections, precision_recall)
from .pipeline import PipelineConfig, segment_image, segment_mask
from .shapefit import (CIRCLE_LIKE, ROD_LIKE, DetectedObject, RodBox, bounding_box_rod,
                       classify_shape, fit_group, px_to_um)
from .synthgen import SceneSpec, generate_scene
from .tracer import ContourCluster, trace_contours

__version__ = "0.1.0"
