"""Topology-preserving iterative convolution-thresholding for two-phase segmentation."""

from .convolution import HeatKernel, build_multiplier, convolve, perimeter_estimate
from .grid import ImageGrid, as_mask, mask_flip_count, periodic_wrap
from .models import ChanVese, LocalIntensityFitting, cv_fields, cv_update, lif_fields, lif_update
from .solver import (
    EnergyTrace,
    InvariantViolation,
    SegmentationResult,
    SolverParams,
    build_candidates,
    compute_phi,
    energy,
    run,
    threshold_predict,
    topology_correct,
)
from .topology import (
    FG4_BG8,
    FG8_BG4,
    ConnectivityPair,
    component_counts,
    hole_count,
    is_simple,
    label_components,
    topology_numbers,
)

__version__ = "0.1.0"
