"""Monochrome rasterization: integer Bresenham strokes into boolean bitmaps
and P4 (packed 1-bit) image export.

Two implementations of the same line algorithm are provided: a per-pixel
loop and a closed-form vectorized variant used on large segment batches.
They emit identical pixel sets (integer arithmetic only)."""

from __future__ import annotations

import math

import numpy as np


def bresenham_points(x0: int, y0: int, x1: int, y1: int):
    """Yield the Bresenham pixels of a segment, endpoints included."""
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x1 >= x0 else -1
    sy = 1 if y1 >= y0 else -1
    if dx >= dy:
        err = 2 * dy - dx
        y = y0
        for k in range(dx + 1):
            yield (x0 + sx * k, y)
            if err >= 0:
                y += sy
                err -= 2 * dx
            err += 2 * dy
    else:
        err = 2 * dx - dy
        x = x0
        for k in range(dy + 1):
            yield (x, y0 + sy * k)
            if err >= 0:
                x += sx
                err -= 2 * dy
            err += 2 * dx


def new_bitmap(width: int, height: int) -> np.ndarray:
    return np.zeros((height, width), dtype=bool)


def draw_segment(bitmap: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> None:
    h, w = bitmap.shape
    for x, y in bresenham_points(x0, y0, x1, y1):
        if 0 <= x < w and 0 <= y < h:
            bitmap[y, x] = True


def round_half_up(values: np.ndarray) -> np.ndarray:
    """Deterministic float-to-pixel rounding (ties away from banker's)."""
    return np.floor(np.asarray(values) + 0.5).astype(np.int32)


def rasterize_segment_batch(
    width: int,
    height: int,
    x0: np.ndarray,
    y0: np.ndarray,
    x1: np.ndarray,
    y1: np.ndarray,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Rasterize many integer segments at once.

    Closed form of the Bresenham walk: along the major axis the minor
    coordinate after k steps is floor((2k*dmin + dmaj) / (2*dmaj)).
    """
    bitmap = new_bitmap(width, height) if out is None else out
    x0 = np.asarray(x0, dtype=np.int32)
    y0 = np.asarray(y0, dtype=np.int32)
    x1 = np.asarray(x1, dtype=np.int32)
    y1 = np.asarray(y1, dtype=np.int32)
    if x0.size == 0:
        return bitmap
    dx = x1 - x0
    dy = y1 - y0
    adx = np.abs(dx)
    ady = np.abs(dy)
    sx = np.where(dx >= 0, 1, -1).astype(np.int32)
    sy = np.where(dy >= 0, 1, -1).astype(np.int32)
    n = np.maximum(adx, ady)

    counts = n + 1
    total = int(counts.sum())
    seg = np.repeat(np.arange(x0.size, dtype=np.int32), counts)
    offsets = np.concatenate(([0], np.cumsum(counts, dtype=np.int64)[:-1]))
    k = (np.arange(total, dtype=np.int64) - offsets[seg]).astype(np.int32)

    dmaj = np.maximum(n[seg], 1)
    x_major = adx[seg] >= ady[seg]
    dmin = np.where(x_major, ady[seg], adx[seg])
    minor = (2 * k * dmin + dmaj) // (2 * dmaj)

    xs = np.where(x_major, x0[seg] + sx[seg] * k, x0[seg] + sx[seg] * minor)
    ys = np.where(x_major, y0[seg] + sy[seg] * minor, y0[seg] + sy[seg] * k)

    keep = (xs >= 0) & (xs < width) & (ys >= 0) & (ys < height)
    bitmap[ys[keep], xs[keep]] = True
    return bitmap


def write_p4(bitmap: np.ndarray, path: str) -> None:
    """Write a bitmap as a binary P4 image (set pixels are black)."""
    h, w = bitmap.shape
    header = f"P4\n{w} {h}\n".encode("ascii")
    packed = np.packbits(bitmap.astype(np.uint8), axis=1)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(packed.tobytes())


def clip_segment(
    x0: float, y0: float, x1: float, y1: float, width: float, height: float
) -> tuple[float, float, float, float] | None:
    """Liang-Barsky clip of a segment to [0, width] x [0, height]."""
    dx = x1 - x0
    dy = y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in (
        (-dx, x0),
        (dx, width - x0),
        (-dy, y0),
        (dy, height - y0),
    ):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        r = q / p
        if p < 0.0:
            if r > t1:
                return None
            t0 = max(t0, r)
        else:
            if r < t0:
                return None
            t1 = min(t1, r)
    return (x0 + t0 * dx, y0 + t0 * dy, x0 + t1 * dx, y0 + t1 * dy)
