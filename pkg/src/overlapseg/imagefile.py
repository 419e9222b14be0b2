"""Reading and writing PNG / PGM images."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .imgproc import to_grayscale


def _read_pgm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if data[:2] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace byte before the raster
    width, height, maxval = fields
    if maxval < 256:
        raster = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
        return raster.reshape(height, width).copy()
    raster = np.frombuffer(data, dtype=">u2", count=width * height, offset=pos)
    return (raster.reshape(height, width) >> 8).astype(np.uint8)


def read_gray(path) -> np.ndarray:
    """Load an image as 8-bit grayscale.

    PGM (P5) is parsed directly; everything else goes through Pillow. Color
    images are converted with the fixed luma weights, 16-bit data is reduced
    to 8 bits by a right shift.
    """
    path = Path(path)
    if path.suffix.lower() in (".pgm", ".pnm"):
        return _read_pgm(path)
    with Image.open(path) as im:
        if im.mode in ("I;16", "I;16B", "I;16L", "I"):
            arr = np.asarray(im).astype(np.int64)
            return (arr >> 8).clip(0, 255).astype(np.uint8)
        if im.mode in ("L", "1"):
            return np.asarray(im.convert("L"), dtype=np.uint8).copy()
        return to_grayscale(np.asarray(im.convert("RGB")))


def write_pgm(path, img: np.ndarray) -> None:
    """Write an 8-bit gray image, or a boolean mask as 0/255, as binary PGM."""
    img = np.asarray(img)
    if img.dtype == bool:
        img = img.astype(np.uint8) * 255
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def write_image(path, img: np.ndarray) -> None:
    """Write by extension: ``.pgm`` natively, anything else via Pillow."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        write_pgm(path, img)
        return
    img = np.asarray(img)
    if img.dtype == bool:
        img = img.astype(np.uint8) * 255
    Image.fromarray(np.ascontiguousarray(img, dtype=np.uint8)).save(path)
