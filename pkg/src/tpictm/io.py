"""PNG / PGM / PPM reading and writing for images, masks and snapshots."""

import csv

import numpy as np
from PIL import Image, UnidentifiedImageError

from .grid import ImageGrid, as_mask

SUPPORTED_FORMATS = ("PNG", "PPM")  # Pillow reports PGM and PPM files as "PPM"
BOUNDARY_COLOR = (255, 0, 0)


class ImageFormatError(ValueError):
    pass


def _open(path):
    try:
        img = Image.open(path)
        img.load()
    except FileNotFoundError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ImageFormatError(f"{path}: cannot decode image ({exc})") from exc
    if img.format not in SUPPORTED_FORMATS:
        raise ImageFormatError(f"{path}: unsupported format {img.format}; use PNG, PGM or PPM")
    return img


def _pixels(img):
    if img.mode in ("L", "RGB"):
        return np.asarray(img)
    if img.mode in ("I;16", "I;16B", "I;16L"):
        return np.asarray(img).astype(np.uint16)
    if img.mode in ("RGBA", "P", "CMYK", "YCbCr"):
        return np.asarray(img.convert("RGB"))
    return np.asarray(img.convert("L"))


def load_image(path):
    """Decode a grayscale or RGB image and rescale it to [0, 1]."""
    return ImageGrid.rescaled(_pixels(_open(path)))


def load_mask(path):
    """Read a mask image; pixels above mid-gray are foreground."""
    a = _pixels(_open(path))
    if a.ndim == 3:
        a = a.max(axis=2)
    return as_mask(a > np.iinfo(a.dtype).max / 2)


def save_mask(mask, path):
    """Write ``mask`` as 8-bit grayscale, foreground 255 and background 0."""
    m = as_mask(mask)
    Image.fromarray((m * 255).astype(np.uint8), mode="L").save(path)


def save_image(image, path):
    v = image.values if isinstance(image, ImageGrid) else np.asarray(image)
    if v.ndim == 3 and v.shape[2] == 1:
        v = v[:, :, 0]
    Image.fromarray(np.round(np.clip(v, 0, 1) * 255).astype(np.uint8)).save(path)


def boundary(mask):
    """Foreground pixels with at least one 4-adjacent background pixel (periodic)."""
    m = as_mask(mask).astype(bool)
    bg_near = np.zeros_like(m)
    for axis in (0, 1):
        for shift in (1, -1):
            bg_near |= ~np.roll(m, shift, axis=axis)
    return m & bg_near


def save_overlay(image, mask, path, color=BOUNDARY_COLOR):
    """Write the image as RGB with the mask boundary drawn in ``color``."""
    v = image.values
    rgb = np.repeat(v, 3, axis=2) if v.shape[2] == 1 else v[:, :, :3]
    rgb = np.round(rgb * 255).astype(np.uint8)
    rgb[boundary(mask)] = color
    Image.fromarray(rgb, mode="RGB").save(path)


def write_energy_csv(trace, path, fields):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for row in trace.rows():
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def read_energy_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
