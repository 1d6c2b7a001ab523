"""Pixel-grid containers on a normalized, periodic domain.

The longest image side is mapped to physical length 1, so the pixel side is
``h = 1 / max(rows, cols)`` and diffusion times such as ``tau = 1e-3`` mean the
same thing at every resolution.
"""

from dataclasses import dataclass

import numpy as np

MIN_SIDE = 3


class GridError(ValueError):
    """Raised for malformed images or masks."""


def periodic_wrap(i, n):
    """Map an integer index onto ``[0, n)`` with periodic wrap-around."""
    if n < 1:
        raise GridError(f"period must be positive, got {n}")
    return i % n


def spacing_for(rows, cols):
    return 1.0 / max(rows, cols)


def _check_shape(rows, cols):
    if rows < MIN_SIDE or cols < MIN_SIDE:
        raise GridError(
            f"grid must be at least {MIN_SIDE}x{MIN_SIDE}, got {rows}x{cols}"
        )


@dataclass(frozen=True)
class ImageGrid:
    """Image ``f`` with intensities in [0, 1], stored as (rows, cols, channels)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 2:
            v = v[:, :, None]
        if v.ndim != 3 or v.shape[2] < 1:
            raise GridError(f"expected (rows, cols[, channels]) array, got {v.shape}")
        _check_shape(v.shape[0], v.shape[1])
        if not np.all(np.isfinite(v)):
            raise GridError("image contains non-finite values")
        if v.min() < 0.0 or v.max() > 1.0:
            raise GridError("intensities must lie in [0, 1]; use ImageGrid.rescaled")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def rescaled(cls, values, vmax=None):
        """Build a grid from arbitrary non-negative data (e.g. 8-bit) by linear rescaling.

        Integer data is divided by 255 (65535 for ``uint16``). Float data already
        inside [0, 1] is kept as is, otherwise it is divided by its maximum.
        """
        raw = np.asarray(values)
        v = raw.astype(float)
        if vmax is None:
            if np.issubdtype(raw.dtype, np.integer):
                vmax = 65535.0 if raw.dtype == np.uint16 else 255.0
            elif v.min() >= 0.0 and v.max() <= 1.0:
                return cls(v)
            else:
                vmax = float(v.max())
        if vmax <= 0:
            raise GridError("cannot rescale an all-zero or negative image")
        return cls(np.clip(v / vmax, 0.0, 1.0))

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def channels(self):
        return self.values.shape[2]

    @property
    def shape(self):
        return self.values.shape[:2]

    @property
    def spacing(self):
        return spacing_for(self.rows, self.cols)


def as_mask(bits, shape=None):
    """Validate and return a binary mask as a ``uint8`` array of 0/1 entries."""
    a = np.asarray(bits)
    if a.ndim != 2:
        raise GridError(f"mask must be 2-D, got shape {a.shape}")
    if a.dtype == bool:
        a = a.astype(np.uint8)
    elif not np.all((a == 0) | (a == 1)):
        raise GridError("mask entries must be exactly 0 or 1")
    if shape is not None and a.shape != tuple(shape):
        raise GridError(f"mask shape {a.shape} does not match grid {tuple(shape)}")
    _check_shape(*a.shape)
    return a.astype(np.uint8, copy=False)


def mask_flip_count(a, b):
    """Number of pixels where two masks differ."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise GridError(f"shape mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


def pixel_centers(rows, cols):
    """Physical (x, y) coordinates of pixel centers; x runs along columns."""
    h = spacing_for(rows, cols)
    y = (np.arange(rows) + 0.5) * h
    x = (np.arange(cols) + 0.5) * h
    return np.meshgrid(x, y)
