"""Topology-preserving iterative convolution-thresholding (TP-ICTM), two phases.

Each iteration

1. fits the model parameters to the current mask ``u``,
2. forms the linearized energy gradient ``phi``,
3. predicts the new mask by thresholding ``phi``,
4. accepts predicted flips one at a time, most confident first, and only at
   simple points of the evolving mask.

Step 4 is skipped for plain ICTM (``topology=False``). The approximate energy
is recorded every iteration and checked to be non-increasing; with topology on,
the foreground and background component counts are checked to stay fixed.
"""

from dataclasses import asdict, dataclass, field, replace
import logging
import warnings

import numpy as np

from .convolution import HeatKernel, is_resolved
from .grid import ImageGrid, as_mask, mask_flip_count
from .models import ChanVese, DegenerateRegionError, LocalIntensityFitting
from .topology import (
    FG4_BG8,
    NEIGHBOR_OFFSETS,
    ConnectivityPair,
    component_counts,
    simple_point_table,
)

log = logging.getLogger(__name__)

ENERGY_RTOL = 1e-9


class InvariantViolation(RuntimeError):
    """Energy increased or topology changed during a run."""


class ParameterError(ValueError):
    def __init__(self, name, message):
        super().__init__(f"{name} {message}")
        self.name = name


@dataclass(frozen=True)
class SolverParams:
    tau1: float = 0.0
    tau2: float = 1e-3
    lam: float = 0.01
    tol: int = 0
    max_iter: int = 500
    pair: ConnectivityPair = FG4_BG8
    topology: bool = True
    model: str = "cv"
    delta: float = 1e-3
    lambda1: float = 1.0
    lambda2: float = 1.0
    eps: float = 1e-8

    def __post_init__(self):
        checks = [
            ("tau1", self.tau1, self.tau1 >= 0, "must be >= 0"),
            ("tau2", self.tau2, self.tau2 > 0, "must be > 0"),
            ("lambda", self.lam, self.lam > 0, "must be > 0"),
            ("tol", self.tol, self.tol >= 0, "must be >= 0"),
            ("max_iter", self.max_iter, self.max_iter >= 1, "must be >= 1"),
            ("model", self.model, self.model in ("cv", "lif"), "must be 'cv' or 'lif'"),
            ("delta", self.delta, self.delta > 0, "must be > 0"),
            ("lambda1", self.lambda1, self.lambda1 > 0, "must be > 0"),
            ("lambda2", self.lambda2, self.lambda2 > 0, "must be > 0"),
            ("eps", self.eps, self.eps > 0, "must be > 0"),
        ]
        for name, value, ok, what in checks:
            if not ok:
                raise ParameterError(name, f"{what}, got {value!r}")

    def make_model(self):
        if self.model == "cv":
            return ChanVese(self.tau1)
        return LocalIntensityFitting(self.tau1, self.delta, self.lambda1, self.lambda2, self.eps)

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class CandidateList:
    """Flat pixel indices in processing order with their ``phi`` scores."""

    index: np.ndarray
    score: np.ndarray
    shape: tuple

    def __len__(self):
        return len(self.index)

    @property
    def pixels(self):
        return np.column_stack(np.unravel_index(self.index, self.shape))


@dataclass
class IterationRecord:
    iter: int
    total: float
    fidelity: float
    perimeter: float
    predicted_flips: int
    accepted_flips: int
    rejected_flips: int
    fg_components: int
    bg_components: int


CSV_FIELDS = [
    "iter", "total", "fidelity", "perimeter", "predicted_flips",
    "accepted_flips", "rejected_flips", "fg_components", "bg_components",
]


@dataclass
class EnergyTrace:
    """Per-iteration records.

    Record ``k`` holds the energy of ``(u^k, Theta^k)``, the flips made going
    from ``u^k`` to ``u^{k+1}``, and the component counts of ``u^{k+1}``.
    """

    records: list = field(default_factory=list)

    def append(self, rec):
        self.records.append(rec)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def totals(self):
        return np.array([r.total for r in self.records])

    def rows(self):
        return [asdict(r) for r in self.records]


@dataclass
class SegmentationResult:
    mask: np.ndarray
    trace: EnergyTrace
    converged: bool
    stop_reason: str

    @property
    def iterations(self):
        return len(self.trace)


def compute_phi(fields, u, params, kernel):
    """Linearized energy gradient at ``u``.

    ``G_tau1 * (F1 - F2) + lam * sqrt(pi / tau2) * G_tau2 * (1 - 2u)``.
    """
    u = np.asarray(u, dtype=float)
    data = kernel(fields.f1 - fields.f2, params.tau1)
    reg = kernel(1.0 - 2.0 * u, params.tau2)
    return data + params.lam * np.sqrt(np.pi / params.tau2) * reg


def threshold_predict(phi):
    return (np.asarray(phi) <= 0).astype(np.uint8)


def build_candidates(phi, u):
    """Pixels that want to join (P1, ascending phi) and leave (P2, descending phi).

    Membership uses strict inequalities; equal scores keep row-major order.
    """
    phi = np.asarray(phi, dtype=float)
    u = np.asarray(u)
    flat_phi = phi.ravel()
    flat_u = u.ravel()
    join = np.flatnonzero((flat_phi < 0) & (flat_u == 0))
    leave = np.flatnonzero((flat_phi > 0) & (flat_u == 1))
    join = join[np.argsort(flat_phi[join], kind="stable")]
    leave = leave[np.argsort(-flat_phi[leave], kind="stable")]
    return (
        CandidateList(join, flat_phi[join], phi.shape),
        CandidateList(leave, flat_phi[leave], phi.shape),
    )


def _neighbor_table(rows, cols):
    """(rows*cols, 8) flat indices of the periodic neighbors in NEIGHBOR_OFFSETS order."""
    r, c = np.divmod(np.arange(rows * cols), cols)
    cols_out = [((r + dr) % rows) * cols + (c + dc) % cols for dr, dc in NEIGHBOR_OFFSETS]
    return np.stack(cols_out, axis=1)


def topology_correct(u_prev, p1, p2, pair=FG4_BG8):
    """Apply candidate flips in order, skipping any pixel that is not simple.

    Simplicity is judged on the evolving mask, so every accepted flip preserves
    the foreground and background component counts. Returns
    ``(u_next, accepted, rejected)``.
    """
    u_prev = as_mask(u_prev)
    flat_prev = u_prev.ravel()
    if len(p1) and np.any(flat_prev[p1.index] != 0):
        raise ValueError("joining candidates must be background in the previous mask")
    if len(p2) and np.any(flat_prev[p2.index] != 1):
        raise ValueError("leaving candidates must be foreground in the previous mask")
    rows, cols = u_prev.shape
    table = simple_point_table(pair).tolist()
    nbrs = _neighbor_table(rows, cols)
    cur = bytearray(flat_prev.tobytes())
    accepted = 0
    for cand, new in ((p1, 1), (p2, 0)):
        if not len(cand):
            continue
        for i, nb in zip(cand.index.tolist(), nbrs[cand.index].tolist()):
            code = (cur[nb[0]] | cur[nb[1]] << 1 | cur[nb[2]] << 2 | cur[nb[3]] << 3
                    | cur[nb[4]] << 4 | cur[nb[5]] << 5 | cur[nb[6]] << 6 | cur[nb[7]] << 7)
            if table[code]:
                cur[i] = new
                accepted += 1
    u_next = np.frombuffer(bytes(cur), dtype=np.uint8).reshape(rows, cols).copy()
    rejected = len(p1) + len(p2) - accepted
    return u_next, accepted, rejected


def energy(u, fields, params, kernel):
    """``(total, fidelity, perimeter)`` of the smoothed energy at ``u``."""
    u = np.asarray(u, dtype=float)
    h2 = kernel.spacing**2
    fid = np.sum(u * kernel(fields.f1, params.tau1) + (1.0 - u) * kernel(fields.f2, params.tau1)) * h2
    per = params.lam * np.sqrt(np.pi / params.tau2) * np.sum(u * kernel(1.0 - u, params.tau2)) * h2
    return float(fid + per), float(fid), float(per)


def _check_decrease(prev, cur, k):
    slack = ENERGY_RTOL * max(abs(prev), abs(cur))
    if cur > prev + slack:
        raise InvariantViolation(
            f"energy increased at iteration {k}: {prev!r} -> {cur!r}"
        )


def run(f, u0, params=None, observer=None, check=True):
    """Segment image ``f`` starting from mask ``u0``.

    ``observer(k, mask, record)`` is called after every iteration with a
    read-only view of ``u^{k+1}``. Stops once an iteration flips at most
    ``params.tol`` pixels, or after ``params.max_iter`` iterations.
    """
    params = SolverParams() if params is None else params
    f = f if isinstance(f, ImageGrid) else ImageGrid(f)
    u = as_mask(u0, f.shape).copy()
    if not u.any() or u.all():
        raise DegenerateRegionError("initial mask needs at least one foreground and one background pixel")
    kernel = HeatKernel(f.rows, f.cols)
    if params.model == "lif" and not is_resolved(params.delta + params.tau1, kernel.spacing):
        # the local fit is then not a convex problem and the energy may rise
        warnings.warn(
            f"LIF window delta + tau1={params.delta + params.tau1:g} is below 3*h^2={3 * kernel.spacing**2:.3g} "
            "on this grid; energy decrease is not guaranteed",
            RuntimeWarning,
            stacklevel=2,
        )
    model = params.make_model()
    trace = EnergyTrace()
    counts = component_counts(u, params.pair)
    prev_total = None
    converged = False
    reason = "max_iter"

    for k in range(params.max_iter):
        try:
            _, fields = model.fit(u, f, kernel)
        except DegenerateRegionError:
            reason = "degenerate"
            break
        total, fid, per = energy(u, fields, params, kernel)
        if check and prev_total is not None:
            _check_decrease(prev_total, total, k)
        prev_total = total

        phi = compute_phi(fields, u, params, kernel)
        p1, p2 = build_candidates(phi, u)
        predicted = len(p1) + len(p2)
        if params.topology:
            u_next, accepted, rejected = topology_correct(u, p1, p2, params.pair)
            new_counts = component_counts(u_next, params.pair)
            if check and new_counts != counts:
                raise InvariantViolation(
                    f"component counts changed at iteration {k}: {counts} -> {new_counts}"
                )
        else:
            u_next = threshold_predict(phi)
            accepted, rejected = mask_flip_count(u, u_next), 0
            new_counts = component_counts(u_next, params.pair)
        flips = mask_flip_count(u, u_next)

        rec = IterationRecord(k, total, fid, per, predicted, accepted, rejected, *new_counts)
        trace.append(rec)
        log.debug("iter %d: energy %.6g, %d/%d flips accepted", k, total, accepted, predicted)
        u, counts = u_next, new_counts
        if observer is not None:
            view = u.view()
            view.setflags(write=False)
            observer(k, view, rec)
        if flips <= params.tol:
            converged = True
            reason = "converged"
            break

    return SegmentationResult(u, trace, converged, reason)
