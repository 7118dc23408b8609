"""Sequential importance sampling of self-avoiding walks, with exact moments."""

from .estimator import Estimate, MomentAccumulator, estimate, relative_variance_exact
from .exact_enum import EnumReport, LimitExceeded, enumerate_crossing, enumerate_directed, \
    enumerate_nes, enumerate_strip
from .lattice import Direction, Point, Rect, Walk, enclosed, render_svg, winding_number
from .samplers import ProbTrace, Sample, is_trapping_step, sample, sample_crossing_saw, \
    sample_directed, sample_nes, sample_untrapped

__version__ = "0.1.0"

__all__ = [
    "Direction", "Point", "Rect", "Walk", "enclosed", "render_svg", "winding_number",
    "ProbTrace", "Sample", "is_trapping_step", "sample", "sample_crossing_saw",
    "sample_directed", "sample_nes", "sample_untrapped",
    "Estimate", "MomentAccumulator", "estimate", "relative_variance_exact",
    "EnumReport", "LimitExceeded", "enumerate_crossing", "enumerate_directed",
    "enumerate_nes", "enumerate_strip",
]
