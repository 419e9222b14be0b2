"""Preprocessing: grayscale conversion, denoising, binarization and cleanup.

Images are plain 2-D numpy arrays indexed ``[row, col]`` (``[y, x]``).
Gray images are ``uint8``; binary masks are ``bool`` with ``True`` marking
object (foreground) pixels.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import DegenerateHistogramError, DimensionError, ParameterError

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def to_grayscale(rgb) -> np.ndarray:
    """Convert an RGB image to 8-bit luminance.

    ``rgb`` is either an ``(H, W, 3)`` array or a sequence of three ``(H, W)``
    channel arrays. Values are rounded half-up and clamped to [0, 255].
    """
    if isinstance(rgb, np.ndarray) and rgb.ndim == 3:
        if rgb.shape[2] < 3:
            raise DimensionError(f"expected 3 channels, got {rgb.shape[2]}")
        channels = [rgb[..., k] for k in range(3)]
    else:
        channels = [np.asarray(c) for c in rgb]
        if len(channels) != 3:
            raise DimensionError(f"expected 3 channels, got {len(channels)}")
        if any(c.ndim != 2 for c in channels):
            raise DimensionError("channels must be 2-D")
        if len({c.shape for c in channels}) != 1:
            raise DimensionError(
                "channel shapes differ: " + ", ".join(str(c.shape) for c in channels))
    r, g, b = (c.astype(np.float64) for c in channels)
    wr, wg, wb = LUMA_WEIGHTS
    lum = np.floor(wr * r + wg * g + wb * b + 0.5)
    return np.clip(lum, 0, 255).astype(np.uint8)


def median_blur(img: np.ndarray, radius: int = 1) -> np.ndarray:
    """Median filter with a ``(2r+1) x (2r+1)`` window and edge replication."""
    img = np.asarray(img)
    if radius < 1:
        raise ParameterError("median radius must be >= 1")
    if radius >= min(img.shape):
        raise ParameterError(
            f"median radius {radius} too large for image of shape {img.shape}")
    return ndimage.median_filter(img, size=2 * radius + 1, mode="nearest")


def between_class_variance(hist) -> list:
    """Exact between-class variance numerators for every threshold.

    Returns a list of ``(numerator, denominator)`` integer pairs, one per level
    ``t`` in ``0..len(hist)-1``, where the class split is ``<= t`` vs ``> t``.
    Levels with an empty class get ``None``. The variance is
    ``num / den / total**2``; the common ``total**2`` factor is dropped so that
    comparisons stay in exact integer arithmetic.
    """
    counts = [int(c) for c in hist]
    total = sum(counts)
    total_sum = sum(i * c for i, c in enumerate(counts))
    out = []
    n0 = s0 = 0
    for level, c in enumerate(counts):
        n0 += c
        s0 += level * c
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            out.append(None)
            continue
        s1 = total_sum - s0
        out.append(((n1 * s0 - n0 * s1) ** 2, n0 * n1))
    return out


def otsu_level(img: np.ndarray) -> int:
    """Threshold maximizing between-class variance; ties go to the smallest level."""
    img = np.asarray(img)
    if img.size == 0:
        raise ParameterError("empty image")
    hist = np.bincount(img.ravel().astype(np.int64), minlength=256)[:256]
    best = None
    best_level = -1
    for level, score in enumerate(between_class_variance(hist)):
        if score is None:
            continue
        if best is None or score[0] * best[1] > best[0] * score[1]:
            best = score
            best_level = level
    if best is None:
        raise DegenerateHistogramError("image has a single intensity; no separable classes")
    return best_level


def otsu_threshold(img: np.ndarray, dark_foreground: bool = True):
    """Binarize with Otsu's method.

    Returns ``(level, mask)``. With ``dark_foreground`` (the default) pixels
    ``<= level`` are foreground; otherwise pixels ``> level`` are.
    """
    level = otsu_level(img)
    img = np.asarray(img)
    mask = img <= level if dark_foreground else img > level
    return level, mask


def disc(radius: int) -> np.ndarray:
    """Disc structuring element ``x^2 + y^2 <= r^2``."""
    r = int(radius)
    yy, xx = np.mgrid[-r:r + 1, -r:r + 1]
    return xx * xx + yy * yy <= r * r


def _padded(op, mask, radius):
    # each elementary pass sees its own edge-replicated border
    padded = np.pad(mask, radius, mode="edge")
    out = op(padded, structure=disc(radius))
    return out[radius:-radius, radius:-radius]


def dilate(mask: np.ndarray, radius: int) -> np.ndarray:
    if radius <= 0:
        return mask.copy()
    return _padded(ndimage.binary_dilation, mask, radius)


def erode(mask: np.ndarray, radius: int) -> np.ndarray:
    if radius <= 0:
        return mask.copy()
    return _padded(ndimage.binary_erosion, mask, radius)


def opening(mask: np.ndarray, radius: int) -> np.ndarray:
    return dilate(erode(mask, radius), radius)


def closing(mask: np.ndarray, radius: int) -> np.ndarray:
    return erode(dilate(mask, radius), radius)


_EIGHT = np.ones((3, 3), dtype=bool)
_FOUR = ndimage.generate_binary_structure(2, 1)


def remove_small_components(mask: np.ndarray, min_area: int) -> np.ndarray:
    """Drop 8-connected foreground components smaller than ``min_area``."""
    if min_area <= 1:
        return mask.copy()
    labels, n = ndimage.label(mask, structure=_EIGHT)
    if n == 0:
        return mask.copy()
    sizes = np.bincount(labels.ravel())
    keep = sizes >= min_area
    keep[0] = False
    return keep[labels]


def fill_small_holes(mask: np.ndarray, min_area: int) -> np.ndarray:
    """Fill 4-connected background holes smaller than ``min_area``.

    Background components touching the image border are never holes.
    """
    if min_area <= 1:
        return mask.copy()
    labels, n = ndimage.label(~mask, structure=_FOUR)
    if n == 0:
        return mask.copy()
    sizes = np.bincount(labels.ravel())
    border = np.unique(np.concatenate(
        [labels[0], labels[-1], labels[:, 0], labels[:, -1]]))
    fill = sizes < min_area
    fill[0] = False
    fill[border] = False
    return mask | fill[labels]


def morph_cleanup(mask: np.ndarray, open_radius: int = 1, close_radius: int = 2,
                  min_area: int = 30) -> np.ndarray:
    """Opening, then closing, then removal of small blobs and small holes."""
    if open_radius < 0 or close_radius < 0:
        raise ParameterError("morphology radii must be >= 0")
    mask = np.asarray(mask, dtype=bool)
    out = opening(mask, open_radius)
    out = closing(out, close_radius)
    out = remove_small_components(out, min_area)
    out = fill_small_holes(out, min_area)
    return out


def binarize(gray: np.ndarray, median_radius: int = 1, dark_foreground: bool = True,
             open_radius: int = 1, close_radius: int = 2, min_area: int = 30) -> np.ndarray:
    """Full preprocessing chain from a gray image to a clean foreground mask.

    A constant image yields an empty mask rather than an error.
    """
    blurred = median_blur(gray, median_radius) if median_radius > 0 else np.asarray(gray)
    try:
        _, mask = otsu_threshold(blurred, dark_foreground)
    except DegenerateHistogramError:
        return np.zeros(blurred.shape, dtype=bool)
    return morph_cleanup(mask, open_radius, close_radius, min_area)
