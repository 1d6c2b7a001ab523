"""Periodic heat-kernel convolution on the normalized grid.

``G_tau`` is the Gaussian of variance ``2 tau`` with unit mass. It is applied
exactly on the torus through its Fourier multiplier
``exp(-4 pi^2 tau |xi|^2)``, so convolution costs two FFTs and
``G_a * (G_b * v) == G_{a+b} * v`` holds to roundoff.
"""

from dataclasses import dataclass

import numpy as np

from .grid import spacing_for


@dataclass(frozen=True)
class HeatMultiplier:
    tau: float
    rows: int
    cols: int
    multipliers: np.ndarray  # shape (rows, cols // 2 + 1), rfft2 layout

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_identity(self):
        return self.tau == 0.0


def build_multiplier(tau, rows, cols, spacing=None):
    """Fourier multiplier of ``G_tau`` for a ``rows x cols`` grid of pixel side ``spacing``."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    h = spacing_for(rows, cols) if spacing is None else spacing
    xi_r = np.fft.fftfreq(rows, d=h)
    xi_c = np.fft.rfftfreq(cols, d=h)
    m = np.exp(-4.0 * np.pi**2 * tau * (xi_r[:, None] ** 2 + xi_c[None, :] ** 2))
    m.setflags(write=False)
    return HeatMultiplier(float(tau), rows, cols, m)


def convolve(field, mult):
    """``G_tau * field`` with periodic boundaries; extra trailing axes are channels."""
    v = np.asarray(field, dtype=float)
    if v.shape[:2] != mult.shape:
        raise ValueError(f"field shape {v.shape[:2]} does not match multiplier {mult.shape}")
    if mult.is_identity:
        return v.copy()
    spec = np.fft.rfft2(v, axes=(0, 1))
    m = mult.multipliers.reshape(mult.multipliers.shape + (1,) * (v.ndim - 2))
    return np.fft.irfft2(spec * m, s=mult.shape, axes=(0, 1))


def is_resolved(tau, spacing):
    """True when ``G_tau`` is wide enough on the grid for its spatial kernel to stay non-negative.

    Below about ``3 h^2`` the band-limited kernel develops negative side lobes
    (about -4e-6 of the peak at ``tau = h^2``).
    """
    return tau == 0 or tau >= 3.0 * spacing**2


class HeatKernel:
    """Caches multipliers per diffusion time for one grid shape."""

    def __init__(self, rows, cols, spacing=None):
        self.rows = rows
        self.cols = cols
        self.spacing = spacing_for(rows, cols) if spacing is None else spacing
        self._cache = {}

    def multiplier(self, tau):
        m = self._cache.get(tau)
        if m is None:
            m = self._cache[tau] = build_multiplier(tau, self.rows, self.cols, self.spacing)
        return m

    def __call__(self, field, tau):
        return convolve(field, self.multiplier(tau))


def perimeter_estimate(u, tau, spacing=None):
    """Heat-content estimate of the boundary length of the set ``u == 1``.

    ``sqrt(pi / tau) * sum(u * (G_tau * (1 - u))) * h**2``.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    u = np.asarray(u, dtype=float)
    h = spacing_for(*u.shape) if spacing is None else spacing
    mult = build_multiplier(tau, u.shape[0], u.shape[1], h)
    return float(np.sqrt(np.pi / tau) * np.sum(u * convolve(1.0 - u, mult)) * h * h)
