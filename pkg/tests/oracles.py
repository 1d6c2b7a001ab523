"""Brute-force reference computations, deliberately free of FFTs and lookup tables."""

import itertools
from collections import deque

import numpy as np


def gaussian_kernel_periodized(rows, cols, tau, copies=4):
    """Sampled heat kernel ``G_tau(x) h^2`` summed over +-copies periodic images.

    Entry ``[dr, dc]`` is the weight for a displacement of (dr, dc) pixels mod the grid.
    """
    h = 1.0 / max(rows, cols)
    ly, lx = rows * h, cols * h
    k = np.zeros((rows, cols))
    for dr in range(rows):
        for dc in range(cols):
            acc = 0.0
            for a in range(-copies, copies + 1):
                for b in range(-copies, copies + 1):
                    y = dr * h + a * ly
                    x = dc * h + b * lx
                    acc += np.exp(-(x * x + y * y) / (4 * tau)) / (4 * np.pi * tau)
            k[dr, dc] = acc * h * h
    return k


def fourier_series_kernel(rows, cols, tau):
    """Periodic heat kernel as an explicit finite cosine series over the grid's frequencies."""
    h = 1.0 / max(rows, cols)
    fr = [p if p <= rows // 2 else p - rows for p in range(rows)]
    fc = [q if q <= cols // 2 else q - cols for q in range(cols)]
    k = np.zeros((rows, cols))
    for dr in range(rows):
        for dc in range(cols):
            acc = 0.0
            for p in fr:
                for q in fc:
                    xi2 = (p / (rows * h)) ** 2 + (q / (cols * h)) ** 2
                    acc += np.exp(-4 * np.pi**2 * tau * xi2) * np.cos(
                        2 * np.pi * (p * dr / rows + q * dc / cols)
                    )
            k[dr, dc] = acc / (rows * cols)
    return k


def dense_convolve(v, k):
    """``out[i, j] = sum_{a, b} k[(i - a) % R, (j - b) % C] v[a, b]`` by explicit loops."""
    v = np.asarray(v, dtype=float)
    rows, cols = v.shape[:2]
    out = np.zeros_like(v)
    for i in range(rows):
        for j in range(cols):
            w = k[(i - np.arange(rows))[:, None] % rows, (j - np.arange(cols))[None, :] % cols]
            if v.ndim == 2:
                out[i, j] = np.sum(w * v)
            else:
                out[i, j] = np.einsum("ab,abc->c", w, v)
    return out


def kernel_for(rows, cols, tau):
    """Identity for tau = 0, otherwise the sampled periodized Gaussian."""
    if tau == 0:
        k = np.zeros((rows, cols))
        k[0, 0] = 1.0
        return k
    return gaussian_kernel_periodized(rows, cols, tau)


def bfs_components(mask, conn, periodic=False):
    m = np.asarray(mask).astype(bool)
    rows, cols = m.shape
    steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    if conn == 8:
        steps += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    seen = np.zeros_like(m)
    count = 0
    for r, c in itertools.product(range(rows), range(cols)):
        if not m[r, c] or seen[r, c]:
            continue
        count += 1
        seen[r, c] = True
        q = deque([(r, c)])
        while q:
            a, b = q.popleft()
            for dr, dc in steps:
                x, y = a + dr, b + dc
                if periodic:
                    x, y = x % rows, y % cols
                elif not (0 <= x < rows and 0 <= y < cols):
                    continue
                if m[x, y] and not seen[x, y]:
                    seen[x, y] = True
                    q.append((x, y))
    return count


def flip_preserves_counts(mask, x, pair):
    """Does flipping ``x`` keep both global component counts (non-periodic)?"""
    m = np.asarray(mask).astype(np.uint8)
    flipped = m.copy()
    flipped[x] = 1 - flipped[x]
    before = (bfs_components(m, pair.foreground), bfs_components(1 - m, pair.background))
    after = (bfs_components(flipped, pair.foreground), bfs_components(1 - flipped, pair.background))
    return before == after


# --- model and energy references, evaluated from their defining sums ---


def _channels(f):
    f = np.asarray(f, dtype=float)
    return f[:, :, None] if f.ndim == 2 else f


def cv_reference(u, f, tau1):
    """Defining quotients sum((G*u) f) / sum(G*u), without the adjoint shortcut."""
    f = _channels(f)
    u = np.asarray(u, dtype=float)
    k = kernel_for(*u.shape, tau1)
    out = []
    for w in (u, 1.0 - u):
        sw = dense_convolve(w, k)
        out.append(np.einsum("ij,ijk->k", sw, f) / sw.sum())
    return out


def lif_reference(u, f, tau1, delta, eps):
    f = _channels(f)
    u = np.asarray(u, dtype=float)
    k1 = kernel_for(*u.shape, tau1)
    kd = kernel_for(*u.shape, delta)
    out = []
    for w in (u, 1.0 - u):
        sw = dense_convolve(w, k1)
        num = dense_convolve(sw[:, :, None] * f, kd)
        den = dense_convolve(sw, kd)[:, :, None] + eps
        out.append(num / den)
    return out


def lif_fields_reference(c1, c2, f, delta, lambda1, lambda2):
    """Double sum ``lam * sum_x G_delta(x - y) |C(x) - f(y)|^2 h^2`` per pixel y."""
    f = _channels(f)
    rows, cols = f.shape[:2]
    kd = kernel_for(rows, cols, delta)
    res = []
    for lam, c in ((lambda1, c1), (lambda2, c2)):
        F = np.zeros((rows, cols))
        for yr in range(rows):
            for yc in range(cols):
                acc = 0.0
                for xr in range(rows):
                    for xc in range(cols):
                        d = c[xr, xc] - f[yr, yc]
                        acc += kd[(xr - yr) % rows, (xc - yc) % cols] * np.dot(d, d)
                F[yr, yc] = max(lam * acc, 0.0)
        res.append(F)
    return res


def phi_reference(f1, f2, u, tau1, tau2, lam):
    rows, cols = u.shape
    data = dense_convolve(f1 - f2, kernel_for(rows, cols, tau1))
    reg = dense_convolve(1.0 - 2.0 * np.asarray(u, float), kernel_for(rows, cols, tau2))
    return data + lam * np.sqrt(np.pi / tau2) * reg


def energy_reference(u, f1, f2, tau1, tau2, lam):
    """Quadrature of the smoothed energy in its indicator-smoothing form."""
    u = np.asarray(u, dtype=float)
    rows, cols = u.shape
    h2 = (1.0 / max(rows, cols)) ** 2
    su = dense_convolve(u, kernel_for(rows, cols, tau1))
    fid = np.sum(su * f1 + (1.0 - su) * f2) * h2
    per = lam * np.sqrt(np.pi / tau2) * np.sum(u * dense_convolve(1.0 - u, kernel_for(rows, cols, tau2))) * h2
    return fid + per, fid, per


def random_instance(rng, n=8, channels=None):
    """Random image, two-phase mask and oracle-friendly diffusion times on an n x n grid."""
    d = channels or int(rng.choice([1, 3]))
    f = rng.random((n, n, d))
    while True:
        u = (rng.random((n, n)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
        if 0 < u.sum() < u.size:
            break
    tau1 = 0.0 if rng.random() < 0.25 else rng.uniform(0.05, 0.1)
    return dict(
        f=f, u=u, tau1=tau1, tau2=rng.uniform(0.05, 0.1), delta=rng.uniform(0.05, 0.1),
        lam=rng.uniform(1e-3, 0.1), lambda1=rng.uniform(0.5, 2.0), lambda2=rng.uniform(0.5, 2.0),
    )
