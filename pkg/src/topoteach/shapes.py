"""Target shapes: sampling, membership and the two reach scales."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

SURFACE_TOL = 1e-9
_BATCH = 4096


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Deterministic generator for ``seed`` split along ``keys``.

    Streams for different key tuples are statistically independent, so
    adding a new (size, trial) pair never perturbs existing streams.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class Circle:
    radius: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")
        if len(self.center) != 2:
            raise ValueError("circle center must be 2-D")

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class Torus:
    """Surface swept by a tube circle of radius ``tube_radius`` around a core circle of radius ``core_radius``."""

    tube_radius: float = 1.0
    core_radius: float = 2.5
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.tube_radius > 0:
            raise ValueError("tube radius must be positive")
        if not self.core_radius > self.tube_radius:
            raise ValueError("torus must be embedded: core_radius > tube_radius")
        if len(self.center) != 3:
            raise ValueError("torus center must be 3-D")

    @property
    def dim(self) -> int:
        return 3


@dataclass(frozen=True)
class BarbellAnnulus:
    """Planar barbell-shaped annulus ``Outer \\ interior(Hole)``.

    Outer is two disks of radius ``lobe_outer_radius`` at (+-lobe_offset, 0)
    joined by the band |y| <= outer_neck_halfwidth; Hole is the same figure
    with radius ``lobe_hole_radius`` and band half-width ``hole_neck_halfwidth``.
    """

    lobe_offset: float = 1.1
    lobe_outer_radius: float = 1.1
    lobe_hole_radius: float = 1.0
    outer_neck_halfwidth: float = 0.36
    hole_neck_halfwidth: float = 0.26

    def __post_init__(self):
        d, R, rho = self.lobe_offset, self.lobe_outer_radius, self.lobe_hole_radius
        ho, wi = self.outer_neck_halfwidth, self.hole_neck_halfwidth
        if not d > 0:
            raise ValueError("lobe_offset must be positive")
        if not 0 < wi < rho < R:
            raise ValueError("need 0 < hole_neck_halfwidth < lobe_hole_radius < lobe_outer_radius")
        if not wi < ho < R:
            raise ValueError("need hole_neck_halfwidth < outer_neck_halfwidth < lobe_outer_radius")
        if d < rho and math.sqrt(rho * rho - d * d) >= wi:
            raise ValueError("lobe holes overlap wider than the neck; the neck would not be the bottleneck")

    @property
    def dim(self) -> int:
        return 2

    @property
    def bbox(self) -> tuple[tuple[float, float], tuple[float, float]]:
        d, R = self.lobe_offset, self.lobe_outer_radius
        return (-d - R, d + R), (-R, R)

    def _in_outer(self, x, y):
        d, R, h = self.lobe_offset, self.lobe_outer_radius, self.outer_neck_halfwidth
        lobes = ((x - d) ** 2 + y**2 <= R * R) | ((x + d) ** 2 + y**2 <= R * R)
        band = (np.abs(x) <= d) & (np.abs(y) <= h)
        return lobes | band

    def _in_hole_interior(self, x, y):
        d, r, w = self.lobe_offset, self.lobe_hole_radius, self.hole_neck_halfwidth
        lobes = ((x - d) ** 2 + y**2 < r * r) | ((x + d) ** 2 + y**2 < r * r)
        band = (np.abs(x) < d) & (np.abs(y) < w)
        return lobes | band

    def mask(self, x, y):
        """Vectorised membership on coordinate arrays."""
        return self._in_outer(x, y) & ~self._in_hole_interior(x, y)


Shape = Union[Circle, Torus, BarbellAnnulus]


@dataclass(frozen=True)
class ReachProfile:
    reach: float
    topological_reach: float


def target_betti(shape: Shape) -> tuple[int, int, int]:
    if isinstance(shape, Torus):
        return (1, 2, 1)
    if isinstance(shape, (Circle, BarbellAnnulus)):
        return (1, 1, 0)
    raise TypeError(f"unknown shape {shape!r}")


def sample_uniform(shape: Shape, n: int, seed: int | np.random.Generator) -> np.ndarray:
    """Draw ``n`` points uniformly from ``shape``; returns an (n, dim) array.

    Uniform means w.r.t. arc length (circle), surface area (torus) or planar
    area (barbell). ``seed`` may be an int or an already derived generator.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed)
    if n == 0:
        return np.empty((0, shape.dim))

    if isinstance(shape, Circle):
        t = rng.uniform(0.0, 2 * math.pi, size=n)
        c = np.asarray(shape.center, dtype=float)
        return c + shape.radius * np.column_stack([np.cos(t), np.sin(t)])

    if isinstance(shape, Torus):
        r1, r2 = shape.tube_radius, shape.core_radius
        thetas = []
        got = 0
        # area element is proportional to (r2 + r1 cos theta)
        while got < n:
            th = rng.uniform(0.0, 2 * math.pi, size=_BATCH)
            keep = rng.uniform(0.0, r2 + r1, size=_BATCH) <= r2 + r1 * np.cos(th)
            thetas.append(th[keep])
            got += int(keep.sum())
        th = np.concatenate(thetas)[:n]
        ph = rng.uniform(0.0, 2 * math.pi, size=n)
        rad = r2 + r1 * np.cos(th)
        pts = np.column_stack([rad * np.cos(ph), rad * np.sin(ph), r1 * np.sin(th)])
        return pts + np.asarray(shape.center, dtype=float)

    if isinstance(shape, BarbellAnnulus):
        (x0, x1), (y0, y1) = shape.bbox
        chunks = []
        got = 0
        while got < n:
            x = rng.uniform(x0, x1, size=_BATCH)
            y = rng.uniform(y0, y1, size=_BATCH)
            keep = shape.mask(x, y)
            chunks.append(np.column_stack([x[keep], y[keep]]))
            got += int(keep.sum())
        return np.concatenate(chunks)[:n]

    raise TypeError(f"unknown shape {shape!r}")


def contains(shape: Shape, p) -> bool:
    p = np.asarray(p, dtype=float)
    if p.shape != (shape.dim,):
        raise ValueError(f"point of dimension {p.shape} does not match {type(shape).__name__} (dim {shape.dim})")
    if not np.all(np.isfinite(p)):
        return False
    if isinstance(shape, Circle):
        r = math.hypot(*(p - np.asarray(shape.center)))
        return abs(r - shape.radius) <= SURFACE_TOL
    if isinstance(shape, Torus):
        x, y, z = p - np.asarray(shape.center)
        dist = math.hypot(math.hypot(x, y) - shape.core_radius, z)
        return abs(dist - shape.tube_radius) <= SURFACE_TOL
    if isinstance(shape, BarbellAnnulus):
        return bool(shape.mask(p[0], p[1]))
    raise TypeError(f"unknown shape {shape!r}")


def reach_profile(shape: Shape) -> ReachProfile:
    """Analytic reach and topological reach.

    The topological reach is the first scale at which the offset
    ``U_eps(M)`` changes homotopy type. For the barbell that is the neck
    pinch at ``hole_neck_halfwidth``, which also bounds trustworthy geometry.
    """
    if isinstance(shape, Circle):
        return ReachProfile(shape.radius, shape.radius)
    if isinstance(shape, Torus):
        r1, r2 = shape.tube_radius, shape.core_radius
        tau = min(r1, r2 - r1)
        return ReachProfile(tau, tau)
    if isinstance(shape, BarbellAnnulus):
        w = shape.hole_neck_halfwidth
        return ReachProfile(w, w)
    raise TypeError(f"unknown shape {shape!r}")


def hole_fill_scale(shape: BarbellAnnulus) -> float:
    """Offset radius at which the barbell's lobe holes are swallowed."""
    return shape.lobe_hole_radius


SHAPES = {"circle": Circle, "torus": Torus, "barbell": BarbellAnnulus}


def make_shape(name: str, **params) -> Shape:
    try:
        cls = SHAPES[name]
    except KeyError:
        raise ValueError(f"unknown shape {name!r}; choose from {sorted(SHAPES)}") from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from None
