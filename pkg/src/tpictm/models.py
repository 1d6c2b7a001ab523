"""Fidelity models: Chan-Vese (global region means) and LIF (local Gaussian fits).

Each model supplies the closed-form parameter update for a fixed mask and the
per-pixel fidelity fields ``F1`` (cost of labelling a pixel foreground) and
``F2`` (cost of labelling it background), summed over channels.
"""

from dataclasses import dataclass

import numpy as np

from .convolution import HeatKernel
from .grid import ImageGrid


class DegenerateRegionError(ValueError):
    """A region needed for a mean is empty."""


@dataclass(frozen=True)
class FidelityFields:
    f1: np.ndarray
    f2: np.ndarray

    def swapped(self):
        return FidelityFields(self.f2, self.f1)


@dataclass(frozen=True)
class CvState:
    c1: np.ndarray  # (channels,)
    c2: np.ndarray


@dataclass(frozen=True)
class LifState:
    c1: np.ndarray  # (rows, cols, channels)
    c2: np.ndarray


def _kernel_for(f, kernel):
    if kernel is None:
        return HeatKernel(f.rows, f.cols)
    return kernel


def _image(f):
    return f if isinstance(f, ImageGrid) else ImageGrid(f)


def cv_update(u, f, tau1, kernel=None):
    """Optimal Chan-Vese constants for mask ``u`` after smoothing ``f`` by ``G_tau1``.

    By self-adjointness and mass conservation of the periodic kernel,
    ``sum((G*u) f) / sum(G*u) == sum(u (G*f)) / sum(u)``, which is what is
    evaluated here.
    """
    f = _image(f)
    u = np.asarray(u, dtype=float)
    n_fg = u.sum()
    n_bg = u.size - n_fg
    if n_fg == 0 or n_bg == 0:
        raise DegenerateRegionError("Chan-Vese update needs both phases to be non-empty")
    g = _kernel_for(f, kernel)
    sf = g(f.values, tau1)
    c1 = np.einsum("ij,ijk->k", u, sf) / n_fg
    c2 = np.einsum("ij,ijk->k", 1.0 - u, sf) / n_bg
    return CvState(c1, c2)


def cv_fields(state, f):
    """``F_i(x) = sum_ch (c_i - f(x))^2``."""
    v = _image(f).values
    f1 = np.sum((v - state.c1) ** 2, axis=2)
    f2 = np.sum((v - state.c2) ** 2, axis=2)
    return FidelityFields(f1, f2)


def lif_update(u, f, tau1, delta, eps=1e-8, kernel=None):
    """Locally fitted intensities ``C_i(x)`` for mask ``u``.

    ``C1 = G_delta * ((G_tau1 * u) f) / (G_delta * G_tau1 * u + eps)`` and the
    same with ``1 - u`` for ``C2``; ``eps`` keeps far-away pixels finite.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    f = _image(f)
    g = _kernel_for(f, kernel)
    u = np.asarray(u, dtype=float)
    v = f.values
    out = []
    for w in (u, 1.0 - u):
        sw = g(w, tau1)
        num = g(sw[:, :, None] * v, delta)
        den = g(sw, delta)[:, :, None] + eps
        out.append(num / den)
    return LifState(out[0], out[1])


def lif_fields(state, f, delta, lambda1=1.0, lambda2=1.0, kernel=None):
    """``F_i(y) = lambda_i * sum_x G_delta(x - y) |C_i(x) - f(y)|^2 h^2``, summed over channels.

    Expanded into three convolutions using the unit mass of ``G_delta``.
    """
    f = _image(f)
    g = _kernel_for(f, kernel)
    v = f.values
    fields = []
    for lam, c in ((lambda1, state.c1), (lambda2, state.c2)):
        resid = g(c * c, delta) - 2.0 * v * g(c, delta) + v * v
        fields.append(np.maximum(lam * resid.sum(axis=2), 0.0))
    return FidelityFields(fields[0], fields[1])


class ChanVese:
    name = "cv"

    def __init__(self, tau1=0.0):
        self.tau1 = tau1

    def fit(self, u, f, kernel):
        state = cv_update(u, f, self.tau1, kernel)
        return state, cv_fields(state, f)


class LocalIntensityFitting:
    name = "lif"

    def __init__(self, tau1=0.0, delta=1e-3, lambda1=1.0, lambda2=1.0, eps=1e-8):
        if lambda1 <= 0 or lambda2 <= 0:
            raise ValueError("lambda1 and lambda2 must be positive")
        self.tau1 = tau1
        self.delta = delta
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.eps = eps

    def fit(self, u, f, kernel):
        state = lif_update(u, f, self.tau1, self.delta, self.eps, kernel)
        return state, lif_fields(state, f, self.delta, self.lambda1, self.lambda2, kernel)
