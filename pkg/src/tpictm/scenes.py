"""Synthetic test scenes and named initial masks.

Geometry is given in physical coordinates on the normalized domain, with
``x`` along columns and ``y`` along rows, both in ``[0, 1]`` for square grids.
"""

from dataclasses import dataclass

import numpy as np

from .grid import ImageGrid, as_mask, pixel_centers

RNG_ALGORITHM = "numpy.random.default_rng/PCG64"

SCENES = ("two-discs-line", "star-noise", "discs-with-holes", "pattern-interior")

# two-discs-line geometry, shared with callers that need the disc centers
TWO_DISCS = ((0.3, 0.5), (0.7, 0.5))
TWO_DISCS_RADIUS = 0.15


@dataclass(frozen=True)
class SyntheticSpec:
    scene: str
    size: int = 128
    sigma: float = 0.0
    density: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.scene not in SCENES:
            raise ValueError(f"unknown scene {self.scene!r}; choose from {', '.join(SCENES)}")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if not 0 < self.density <= 1:
            raise ValueError("density must be in (0, 1]")
        if self.size < 16:
            raise ValueError("size must be at least 16")


def disc(shape, cx, cy, r):
    x, y = pixel_centers(*shape)
    return ((x - cx) ** 2 + (y - cy) ** 2 <= r * r).astype(np.uint8)


def rectangle(shape, x0, y0, x1, y1):
    x, y = pixel_centers(*shape)
    return ((x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)).astype(np.uint8)


def ring(shape, cx, cy, r_out, r_in):
    return disc(shape, cx, cy, r_out) & (1 - disc(shape, cx, cy, r_in))


def star(shape, cx, cy, r_out, r_in, points=5):
    x, y = pixel_centers(*shape)
    theta = np.arctan2(y - cy, x - cx) + np.pi / 2
    rho = np.hypot(x - cx, y - cy)
    # piecewise-linear radius between tips and notches
    sector = 2 * np.pi / points
    t = np.abs(((theta % sector) / sector) * 2 - 1)  # 1 at tips, 0 at notches
    bound = r_in + (r_out - r_in) * t
    return (rho <= bound).astype(np.uint8)


def _two_discs_line(n):
    shape = (n, n)
    (ax, ay), (bx, by) = TWO_DISCS
    m = disc(shape, ax, ay, TWO_DISCS_RADIUS) | disc(shape, bx, by, TWO_DISCS_RADIUS)
    row = int(ay * n)
    c0, c1 = int(ax * n), int(bx * n)
    m[row, c0:c1 + 1] = 1
    return m


def _discs_with_holes(n):
    shape = (n, n)
    left = ring(shape, 0.3, 0.5, 0.17, 0.07)
    right = disc(shape, 0.72, 0.5, 0.14)
    return left | right


def _pattern_interior(n, density):
    m = disc((n, n), 0.5, 0.5, 0.35)
    step = max(2, int(round(1.0 / np.sqrt(density))))
    holes = np.zeros_like(m)
    holes[step // 2::step, step // 2::step] = 1
    # keep holes off the rim so the outline stays intact
    inner = disc((n, n), 0.5, 0.5, 0.35 - 2.0 / n)
    return m & (1 - (holes & inner))


def solid_truth(spec):
    """The scene's outline with interior patterns filled in."""
    if spec.scene == "pattern-interior":
        return disc((spec.size, spec.size), 0.5, 0.5, 0.35)
    return generate(spec)[1]


def generate(spec):
    """Return ``(image, ground_truth)`` for a synthetic scene.

    The ground truth is the noiseless drawn scene, holes included; the image
    adds clamped Gaussian noise of standard deviation ``sigma``. For
    pattern-interior the hole-free outline is ``solid_truth``.
    """
    n = spec.size
    if spec.scene == "two-discs-line":
        truth = _two_discs_line(n)
    elif spec.scene == "star-noise":
        truth = star((n, n), 0.5, 0.5, 0.4, 0.18)
    elif spec.scene == "discs-with-holes":
        truth = _discs_with_holes(n)
    else:
        truth = _pattern_interior(n, spec.density)
    img = truth.astype(float)
    if spec.sigma > 0:
        rng = np.random.default_rng(spec.seed)
        img = np.clip(img + rng.normal(0.0, spec.sigma, img.shape), 0.0, 1.0)
    return ImageGrid(img), as_mask(truth)


def _floats(args, n, name):
    vals = [float(a) for a in args.split(",")] if args else []
    if len(vals) != n:
        raise ValueError(f"initializer {name!r} takes {n} comma-separated numbers, got {len(vals)}")
    return vals


INITIALIZERS = {
    "circle": 3,
    "rectangle": 4,
    "ring": 4,
    "two-circles": 6,
    "checkerboard-seeds": 2,
}


def initial_mask(text, shape):
    """Build a mask from ``NAME:ARGS``, e.g. ``circle:0.5,0.5,0.3``.

    * ``circle:cx,cy,r``
    * ``rectangle:x0,y0,x1,y1``
    * ``ring:cx,cy,r_out,r_in`` (one component with one hole)
    * ``two-circles:cx1,cy1,r1,cx2,cy2,r2``
    * ``checkerboard-seeds:k,r`` (k x k grid of discs of radius r)
    """
    name, _, args = text.partition(":")
    if name not in INITIALIZERS:
        raise ValueError(f"unknown initializer {name!r}; choose from {', '.join(INITIALIZERS)}")
    v = _floats(args, INITIALIZERS[name], name)
    if name == "circle":
        m = disc(shape, *v)
    elif name == "rectangle":
        m = rectangle(shape, *v)
    elif name == "ring":
        m = ring(shape, *v)
    elif name == "two-circles":
        m = disc(shape, *v[:3]) | disc(shape, *v[3:])
    else:
        k, r = int(v[0]), v[1]
        h = 1.0 / max(shape)
        extent = (shape[1] * h, shape[0] * h)
        m = np.zeros(shape, np.uint8)
        for i in range(k):
            for j in range(k):
                m |= disc(shape, (j + 0.5) * extent[0] / k, (i + 0.5) * extent[1] / k, r)
    m = as_mask(m)
    if not m.any() or m.all():
        raise ValueError(f"initializer {text!r} gives an empty or full mask on a {shape} grid")
    return m
