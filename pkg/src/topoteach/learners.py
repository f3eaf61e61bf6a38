"""Learner policies over a sampled point cloud.

A learner sees the Cech persistence of the sample and must pick a ball
radius eps. Its geometry counts as correct when the Betti profile at eps
matches the shape's and eps is below the reach (past the reach the
narrow parts of the shape get bridged even if the topology happens to
look right).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import delaunay_cech_filtration
from .demos import DemonstrationSet, build_demo_complex
from .homology import Barcode, betti_at, betti_gf2, filter_barcode, h1_support, persistence, profile_pieces
from .shapes import Shape, reach_profile, target_betti

DEFAULT_MAX_RADIUS = 2.0
DEFAULT_MIN_BAR = 0.05


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    witness_epsilon: float | None = None


@dataclass(frozen=True)
class LearnerOutcome:
    policy: str
    success: float
    chosen_epsilon: float | None = None


class TeacherContractError(ValueError):
    """The demonstration does not show the loops the shape has."""


def sample_barcode(points, max_radius: float = DEFAULT_MAX_RADIUS) -> Barcode:
    return persistence(delaunay_cech_filtration(points, max_radius=max_radius))


def _dims(shape: Shape) -> range:
    # a union of balls in R^n has no homology in degree >= n
    return range(min(shape.dim, 3))


def _barcode(points, shape, barcode, max_radius):
    if barcode is not None:
        return barcode
    tau = reach_profile(shape).reach
    return sample_barcode(points, max(max_radius, tau))


def _correct_pieces(bc: Barcode, shape: Shape, lo: float, hi: float):
    return profile_pieces(bc, target_betti(shape), _dims(shape), lo, hi)


def feasible(points, shape: Shape, *, barcode: Barcode | None = None,
             max_radius: float = DEFAULT_MAX_RADIUS) -> FeasibilityVerdict:
    """Is there eps < reach at which the sample's ball union has the shape's Betti profile?"""
    if len(points) == 0:
        return FeasibilityVerdict(False)
    bc = _barcode(points, shape, barcode, max_radius)
    pieces = _correct_pieces(bc, shape, 0.0, reach_profile(shape).reach)
    if not pieces:
        return FeasibilityVerdict(False)
    a, b = pieces[0]
    return FeasibilityVerdict(True, (a + b) / 2)


def taught_policy(points, shape: Shape, taught: DemonstrationSet, *,
                  barcode: Barcode | None = None,
                  max_radius: float = DEFAULT_MAX_RADIUS) -> LearnerOutcome:
    """Learner told the loop count by a demonstration; succeeds on every feasible sample."""
    shown = betti_gf2(build_demo_complex(taught))
    if shown.b1 != target_betti(shape)[1]:
        raise TeacherContractError(f"demonstration shows b1={shown.b1}, shape has b1={target_betti(shape)[1]}")
    verdict = feasible(points, shape, barcode=barcode, max_radius=max_radius)
    return LearnerOutcome("taught", 1.0 if verdict.feasible else 0.0, verdict.witness_epsilon)


def uniform_policy(points, shape: Shape, *, barcode: Barcode | None = None,
                   max_radius: float = DEFAULT_MAX_RADIUS,
                   min_bar_length: float = DEFAULT_MIN_BAR) -> LearnerOutcome:
    """Probability of correct geometry for eps drawn uniformly over the H1 support.

    Computed exactly from barcode breakpoints.
    """
    if len(points) == 0:
        return LearnerOutcome("uniform", 0.0)
    bc = _barcode(points, shape, barcode, max_radius)
    support = h1_support(filter_barcode(bc, min_bar_length))
    if support is None:
        return LearnerOutcome("uniform", 0.0)
    lo, hi = support
    tau = reach_profile(shape).reach
    good = sum(b - a for a, b in _correct_pieces(bc, shape, lo, min(hi, tau)))
    return LearnerOutcome("uniform", good / (hi - lo))


def most_persistent_epsilon(bc: Barcode) -> float | None:
    bars = [(b, e) for b, e in bc.of_dim(1) if e != np.inf]
    if not bars:
        return None
    b, e = min(bars, key=lambda t: (-(t[1] - t[0]), t[0]))
    return (b + e) / 2


def persistent_policy(points, shape: Shape, *, barcode: Barcode | None = None,
                      max_radius: float = DEFAULT_MAX_RADIUS) -> LearnerOutcome:
    """Pick the midpoint of the longest finite H1 bar."""
    if len(points) == 0:
        return LearnerOutcome("persistent", 0.0)
    bc = _barcode(points, shape, barcode, max_radius)
    eps = most_persistent_epsilon(bc)
    if eps is None:
        return LearnerOutcome("persistent", 0.0)
    target = target_betti(shape)
    prof = betti_at(bc, eps)
    ok = eps < reach_profile(shape).reach and all(prof[k] == target[k] for k in _dims(shape))
    return LearnerOutcome("persistent", 1.0 if ok else 0.0, eps)
