"""Teacher side: teaching sets for ball-union learners, teaching-number
formulas, and the canonical demonstrations."""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .complex import cech_filtration
from .demos import DemonstrationSet
from .homology import BettiProfile, betti_at, persistence, profile_pieces
from .shapes import Circle, Shape, Torus, contains


@dataclass(frozen=True)
class Window:
    """Real interval of admissible ball radii, with per-end closedness."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self):
        if not (self.lo < self.hi or (self.lo == self.hi and self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty window {self}")

    def __contains__(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def format(self, digits: int = 4) -> str:
        return (("[" if self.lo_closed else "(") + f"{self.lo:.{digits}f},{self.hi:.{digits}f}"
                + ("]" if self.hi_closed else ")"))

    def __str__(self):
        return self.format()


@dataclass
class TeachingSet:
    points: np.ndarray
    window: Window
    target: BettiProfile
    kind: str = "upper-bound"
    shape: Shape | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(len(self.points), -1)
        self.target = BettiProfile(*self.target)

    def __len__(self):
        return len(self.points)

    def on_shape(self) -> bool:
        return self.shape is None or all(contains(self.shape, p) for p in self.points)


@dataclass(frozen=True)
class TeachingCount:
    value: int
    kind: str
    points_per_sequence_max: int | None = None
    breakdown: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# point teaching sets

def circle_teaching_set(r: float = 1.0) -> TeachingSet:
    """Three equidistant points; the loop is visible exactly for sqrt(3)/2 r <= eps < r."""
    if not r > 0:
        raise ValueError("radius must be positive")
    unit = np.array([[math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3)] for k in range(3)])
    return TeachingSet(r * unit, Window(math.sqrt(3) / 2 * r, r, True, False),
                       BettiProfile(1, 1, 0), "exact-minimal", Circle(r))


def torus_grid_teaching_set(r1: float, r2: float, k_tube: int, k_rings: int,
                            stagger: bool = False) -> TeachingSet:
    """``k_tube`` equidistant points on each of ``k_rings`` tube circles.

    With ``stagger`` a second family of rings sits half-way between the
    first, rotated by half a tube step, doubling the point count.
    """
    if not r2 > r1 > 0:
        raise ValueError("need r2 > r1 > 0")
    if k_tube < 3 or k_rings < 3:
        raise ValueError("need k_tube >= 3 and k_rings >= 3")
    rings = [(2 * math.pi * j / k_rings, 0.0) for j in range(k_rings)]
    if stagger:
        rings += [(2 * math.pi * (j + 0.5) / k_rings, math.pi / k_tube) for j in range(k_rings)]
    pts = []
    for phi, shift in rings:
        for i in range(k_tube):
            th = 2 * math.pi * i / k_tube + shift
            rad = r2 + r1 * math.cos(th)
            pts.append((rad * math.cos(phi), rad * math.sin(phi), r1 * math.sin(th)))
    chord = 2 * r1 * math.sin(math.pi / k_tube)
    return TeachingSet(np.array(pts), Window(chord / 2, r1, False, False),
                       BettiProfile(1, 2, 1), "upper-bound", Torus(r1, r2))


def teaching_witness(ts: TeachingSet) -> list[Window]:
    """Subintervals of the window on which the Cech learner sees the target profile.

    Betti numbers are compared in dimensions below the ambient dimension;
    higher ones vanish for any union of balls.
    """
    if len(ts.points) == 0:
        return []
    dim = ts.points.shape[1]
    w = ts.window
    bc = persistence(cech_filtration(ts.points, max_dim=min(dim, 3), max_radius=w.hi))
    dims = range(min(dim, 3))
    out = []
    for a, b in profile_pieces(bc, ts.target, dims, w.lo, w.hi):
        out.append(Window(a, b, w.lo_closed or a > w.lo, False))
    if w.hi_closed and all(betti_at(bc, w.hi)[k] == ts.target[k] for k in dims):
        if out and out[-1].hi == w.hi:
            last = out.pop()
            out.append(Window(last.lo, w.hi, last.lo_closed, True))
        else:
            out.append(Window(w.hi, w.hi, True, True))
    return out


def verify_teaching_set(ts: TeachingSet) -> bool:
    """True iff some eps in the window yields the target Betti profile."""
    return bool(teaching_witness(ts))


def search_torus_grid(r1: float = 1.0, r2: float = 2.5, k_tube_range=range(3, 7),
                      k_rings_range=range(3, 25)):
    """Smallest verified ring grid; returns ``(k_tube, k_rings, stagger, TeachingSet)`` or None."""
    cands = sorted(itertools.product(k_tube_range, k_rings_range, (False, True)),
                   key=lambda c: (c[0] * c[1] * (2 if c[2] else 1), c))
    for k_tube, k_rings, stagger in cands:
        ts = torus_grid_teaching_set(r1, r2, k_tube, k_rings, stagger)
        if verify_teaching_set(ts):
            return k_tube, k_rings, stagger, ts
    return None


# --------------------------------------------------------------------------
# counting

def circle_teaching_count() -> TeachingCount:
    return TeachingCount(3, "exact-minimal")


def torus_teaching_count() -> TeachingCount:
    base = 3 * 9          # three points on l1, swept through nine rotations
    gaps = 27             # one filler per remaining gap
    removed = 3           # the core loop l2 is over-taught
    return TeachingCount(base + gaps - removed, "upper-bound", breakdown={
        "rotated_base_points": base, "gap_fillers": gaps,
        "enough": base + gaps, "removed_from_core_loop": removed,
    })


def min_teaching_number_closed(g: int) -> TeachingCount:
    if g < 1:
        raise ValueError("genus must be >= 1")
    return TeachingCount(49 * g + 2, "upper-bound")


def min_teaching_number_with_boundary(g: int, b: int) -> TeachingCount:
    if g < 1:
        raise ValueError("genus must be >= 1")
    if not 0 <= b <= 49 * g + 1:
        raise ValueError(f"boundary count must lie in [0, {49 * g + 1}]")
    return TeachingCount(49 * g + 2 - b, "upper-bound")


def pants_decomposition_count(g: int) -> TeachingCount:
    if g < 2:
        raise ValueError("genus must be >= 2 (use torus_demo for the torus)")
    return TeachingCount(3 * g - 3, "upper-bound", points_per_sequence_max=4)


# --------------------------------------------------------------------------
# demonstrations

def circle_demo() -> DemonstrationSet:
    return DemonstrationSet.of(["a", "b", "c", "a"])


def torus_demo() -> DemonstrationSet:
    return DemonstrationSet.of([
        ["a1", "a2", "a3", "a1"],
        ["b1", "b2", "b3", "b1"],
        ["c1", "c2", "c3", "c1"],
        ["a1", "a2", "a3", "a1"],
    ])


def pants_demo() -> DemonstrationSet:
    return DemonstrationSet.of(
        [["a1", "a2", "a3", "a6"], ["b1", "b2", "b3", "b6"]],
        [["a1", "a4", "a5", "a6"], ["b1", "b4", "b5", "b6"]],
    )


def pants_gluing_demo() -> DemonstrationSet:
    return DemonstrationSet.of([["b1", "b2", "b3", "b1"], ["b1", "b4", "b5", "b1"]])


DEMOS = {
    "circle": circle_demo,
    "torus": torus_demo,
    "pants": pants_demo,
    "pants-gluing": pants_gluing_demo,
}


# --------------------------------------------------------------------------
# file format: one header comment, then one CSV row per point

_HEADER = re.compile(r"#\s*window\s*=?\s*([\[(])\s*([^,\s]+)\s*,\s*([^\])\s]+)\s*([\])])"
                     r"\s+target\s*=?\s*\(?\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)?")


class TeachFormatError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def format_teaching_set(ts: TeachingSet) -> str:
    w = ts.window
    head = (f"# window={'[' if w.lo_closed else '('}{w.lo:.17g},{w.hi:.17g}{']' if w.hi_closed else ')'}"
            f" target=({ts.target.b0},{ts.target.b1},{ts.target.b2})")
    rows = [",".join(f"{x:.17g}" for x in p) for p in ts.points]
    return "\n".join([head, *rows]) + "\n"


def parse_teaching_set(text: str) -> TeachingSet:
    lines = text.splitlines()
    if not lines:
        raise TeachFormatError(1, "empty file")
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise TeachFormatError(1, "expected '# window=[lo,hi) target=(b0,b1,b2)'")
    lb, lo, hi, rb, *betti = m.groups()
    try:
        window = Window(float(lo), float(hi), lb == "[", rb == "]")
    except ValueError as exc:
        raise TeachFormatError(1, str(exc)) from None
    pts = []
    for lineno, line in enumerate(lines[1:], 2):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = [float(x) for x in line.split(",")]
        except ValueError:
            raise TeachFormatError(lineno, f"bad coordinate row {line!r}") from None
        if pts and len(row) != len(pts[0]):
            raise TeachFormatError(lineno, "inconsistent point dimension")
        if len(row) not in (2, 3):
            raise TeachFormatError(lineno, "points must have 2 or 3 coordinates")
        pts.append(row)
    return TeachingSet(np.array(pts).reshape(len(pts), -1), window, BettiProfile(*map(int, betti)))
