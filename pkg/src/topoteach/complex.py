"""Filtered simplicial complexes over point clouds.

The Cech filtration is the nerve of the growing balls ``B_eps(x)``: a simplex
enters at the radius of the smallest ball enclosing its vertices. Values are
stored in ball-radius units for every construction here, so Cech, Rips and
Delaunay-Cech filtrations share one eps axis.
"""
from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import Delaunay, QhullError
from scipy.spatial.distance import pdist, squareform

Simplex = tuple

# candidates below this count go through the scalar path (numpy overhead dominates)
_SCALAR_CUTOFF = 128
_CHUNK = 50_000


@dataclass
class SimplicialComplex:
    """A static complex: ``cells[k]`` is a sorted list of k-simplices (sorted label tuples)."""

    cells: dict[int, list[Simplex]] = field(default_factory=dict)

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence]) -> "SimplicialComplex":
        by_dim: dict[int, set] = {}
        for s in simplices:
            t = tuple(sorted(s))
            by_dim.setdefault(len(t) - 1, set()).add(t)
        return cls({k: sorted(v) for k, v in sorted(by_dim.items())})

    @property
    def dim(self) -> int:
        return max((k for k, v in self.cells.items() if v), default=-1)

    def count(self, k: int) -> int:
        return len(self.cells.get(k, ()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self.cells.items())

    def is_closed(self) -> bool:
        for k, simplices in self.cells.items():
            if k == 0:
                continue
            lower = set(self.cells.get(k - 1, ()))
            for s in simplices:
                if any(f not in lower for f in itertools.combinations(s, k)):
                    return False
        return True

    def __len__(self):
        return sum(len(v) for v in self.cells.values())


@dataclass
class FilteredComplex:
    """Simplices with filtration values, kept in filtration order.

    Order is (value, dim, lexicographic vertices), which is a valid
    filtration order whenever values are monotone along faces.
    """

    simplices: list[Simplex]
    values: list[float]
    vertex_count: int
    max_dim: int
    max_radius: float

    def __post_init__(self):
        order = sorted(range(len(self.simplices)),
                       key=lambda i: (self.values[i], len(self.simplices[i]), self.simplices[i]))
        self.simplices = [self.simplices[i] for i in order]
        self.values = [float(self.values[i]) for i in order]

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(zip(self.simplices, self.values))

    def value_map(self) -> dict[Simplex, float]:
        return dict(zip(self.simplices, self.values))

    def check(self) -> None:
        """Raise ``ValueError`` unless face-closed and monotone."""
        vm = self.value_map()
        for s, v in self:
            if len(s) > 1:
                for f in itertools.combinations(s, len(s) - 1):
                    if f not in vm:
                        raise ValueError(f"face {f} of {s} missing")
                    if vm[f] > v:
                        raise ValueError(f"face {f} enters after coface {s}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("dim,vertices,filtration\n")
        for s, v in self:
            buf.write(f"{len(s) - 1},{' '.join(map(str, s))},{v:.17g}\n")
        return buf.getvalue()


# --------------------------------------------------------------------------
# minimal enclosing balls

def _solve_small(G, b):
    """Gaussian elimination with partial pivoting; None when singular."""
    n = len(b)
    M = [list(G[i]) + [b[i]] for i in range(n)]
    scale = max((abs(x) for row in G for x in row), default=0.0) or 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[piv][col]) <= 1e-12 * scale:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        x[r] = (M[r][n] - sum(M[r][c] * x[c] for c in range(r + 1, n))) / M[r][r]
    return x


def _circumball(pts):
    p0 = pts[0]
    if len(pts) == 1:
        return p0, 0.0
    A = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    G = [[sum(x * y for x, y in zip(u, v)) for v in A] for u in A]
    rhs = [0.5 * sum(x * x for x in u) for u in A]
    lam = _solve_small(G, rhs)
    if lam is None:
        return None
    c = [p0[j] + sum(lam[i] * A[i][j] for i in range(len(A))) for j in range(len(p0))]
    return c, math.dist(c, p0)


def min_enclosing_radius(points) -> float:
    """Radius of the smallest ball containing 1-4 points in R^2 or R^3.

    The minimal ball is the circumball (within the affine hull) of some
    support subset, so the smallest valid circumball over all subsets is exact.
    """
    pts = [tuple(float(x) for x in p) for p in points]
    if not 1 <= len(pts) <= 4:
        raise ValueError("min_enclosing_radius takes 1 to 4 points")
    best = math.inf
    for size in range(1, len(pts) + 1):
        for sub in itertools.combinations(pts, size):
            ball = _circumball(sub)
            if ball is None:
                continue
            c, r = ball
            if r >= best:
                continue
            tol = 1e-9 * r + 1e-12
            if all(math.dist(c, p) <= r + tol for p in pts):
                best = r
    return best


def enclosing_radii(P: np.ndarray) -> np.ndarray:
    """Batched minimal enclosing radius for an (m, k, n) array of point groups."""
    P = np.asarray(P, dtype=float)
    m, k, _ = P.shape
    best = np.full(m, np.inf)
    if k == 1:
        return np.zeros(m)
    for size in range(2, k + 1):
        for sub in itertools.combinations(range(k), size):
            p0 = P[:, sub[0], :]
            A = P[:, sub[1:], :] - p0[:, None, :]
            G = A @ A.transpose(0, 2, 1)
            rhs = 0.5 * np.einsum("mij,mij->mi", A, A)
            scale = np.max(np.abs(G), axis=(1, 2)) + 1e-300
            ok = np.abs(np.linalg.det(G)) > 1e-10 * scale ** (size - 1)
            if not ok.any():
                continue
            lam = np.linalg.solve(G[ok], rhs[ok][..., None])[..., 0]
            c = p0[ok] + np.einsum("mi,mij->mj", lam, A[ok])
            r = np.linalg.norm(c - p0[ok], axis=1)
            d = np.linalg.norm(P[ok] - c[:, None, :], axis=2)
            valid = np.all(d <= (r * (1 + 1e-9) + 1e-12)[:, None], axis=1)
            cand = np.where(valid, r, np.inf)
            best[ok] = np.minimum(best[ok], cand)
    return best


# --------------------------------------------------------------------------
# filtrations

def _as_points(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValueError("need a non-empty (n, d) array of points")
    if not np.all(np.isfinite(P)):
        raise ValueError("points must be finite")
    return P


def _cliques(adj: np.ndarray, max_dim: int) -> dict[int, np.ndarray]:
    """Vertex sets of size 3..max_dim+1 that are cliques of ``adj``, as index arrays."""
    n = adj.shape[0]
    out = {2: [], 3: []}
    for i in range(n):
        nb = np.nonzero(adj[i, i + 1:])[0] + i + 1
        if len(nb) < 2 or max_dim < 2:
            continue
        sub = adj[np.ix_(nb, nb)]
        a, b = np.nonzero(np.triu(sub, 1))
        if len(a) == 0:
            continue
        out[2].append(np.column_stack([np.full(len(a), i), nb[a], nb[b]]))
        if max_dim >= 3:
            common = sub[a] & sub[b]
            common &= np.arange(len(nb))[None, :] > b[:, None]
            pi, c = np.nonzero(common)
            if len(pi):
                out[3].append(np.column_stack([np.full(len(pi), i), nb[a[pi]], nb[b[pi]], nb[c]]))
    return {k: (np.concatenate(v) if v else np.empty((0, k + 1), dtype=int))
            for k, v in out.items() if k <= max_dim}


def _radii(P: np.ndarray, idx: np.ndarray, kind: str) -> np.ndarray:
    if len(idx) == 0:
        return np.empty(0)
    if kind == "rips":
        k = idx.shape[1]
        dmax = np.zeros(len(idx))
        for a, b in itertools.combinations(range(k), 2):
            dmax = np.maximum(dmax, np.linalg.norm(P[idx[:, a]] - P[idx[:, b]], axis=1))
        return dmax / 2
    if len(idx) <= _SCALAR_CUTOFF:
        return np.array([min_enclosing_radius(P[list(s)]) for s in idx])
    return np.concatenate([enclosing_radii(P[idx[s:s + _CHUNK]])
                           for s in range(0, len(idx), _CHUNK)])


def _assemble(P, vertex_values, edge_idx, edge_vals, higher, max_dim, max_radius):
    simplices: list[Simplex] = [(i,) for i in range(len(P))]
    values: list[float] = list(vertex_values)
    vm: dict[Simplex, float] = dict(zip(simplices, values))
    for (i, j), v in zip(edge_idx.tolist(), edge_vals.tolist()):
        if max_dim >= 1 and v <= max_radius:
            vm[(i, j)] = v
            simplices.append((i, j))
            values.append(v)
    for k in range(2, max_dim + 1):
        idx, vals = higher.get(k, (np.empty((0, k + 1), dtype=int), np.empty(0)))
        for s, v in zip(map(tuple, idx.tolist()), vals.tolist()):
            if v > max_radius:
                continue
            facets = [vm.get(f) for f in itertools.combinations(s, k)]
            if any(f is None for f in facets):
                continue
            # an obtuse simplex enters with its largest facet; rounding must not split them
            top = max(facets)
            if v <= top * (1 + 1e-12):
                v = top
            vm[s] = v
            simplices.append(s)
            values.append(v)
    return FilteredComplex(simplices, values, len(P), max_dim, float(max_radius))


def _clique_filtration(points, max_dim: int, max_radius: float, kind: str) -> FilteredComplex:
    P = _as_points(points)
    if not 0 <= max_dim <= 3:
        raise ValueError("max_dim must be in 0..3")
    if not max_radius > 0:
        raise ValueError("max_radius must be positive")
    n = len(P)
    D = squareform(pdist(P)) if n > 1 else np.zeros((1, 1))
    adj = D <= 2 * max_radius
    np.fill_diagonal(adj, False)
    iu, ju = np.nonzero(np.triu(adj, 1))
    edge_idx = np.column_stack([iu, ju])
    edge_vals = D[iu, ju] / 2
    higher = {}
    if max_dim >= 2:
        for k, idx in _cliques(adj, max_dim).items():
            higher[k] = (idx, _radii(P, idx, kind))
    return _assemble(P, [0.0] * n, edge_idx, edge_vals, higher, max_dim, max_radius)


def cech_filtration(points, max_dim: int = 2, max_radius: float = 2.0) -> FilteredComplex:
    """Every simplex of dim <= max_dim whose enclosing radius is <= max_radius."""
    return _clique_filtration(points, max_dim, max_radius, "cech")


def rips_filtration(points, max_dim: int = 2, max_radius: float = 2.0) -> FilteredComplex:
    """Clique complex; a simplex enters at half its diameter."""
    return _clique_filtration(points, max_dim, max_radius, "rips")


def delaunay_cech_filtration(points, max_dim: int | None = None, max_radius: float = 2.0) -> FilteredComplex:
    """Delaunay simplices carrying their Cech (enclosing-ball) values.

    Its persistence diagram equals the full Cech diagram, at a fraction of
    the size. Falls back to the full Cech filtration for degenerate input.
    """
    P = _as_points(points)
    n, d = P.shape
    max_dim = d if max_dim is None else max_dim
    if n < d + 2:
        return cech_filtration(P, max_dim, max_radius)
    try:
        tri = Delaunay(P)
    except QhullError:
        return cech_filtration(P, max_dim, max_radius)
    if len(tri.coplanar):
        return cech_filtration(P, max_dim, max_radius)
    top = np.sort(tri.simplices, axis=1)
    faces: dict[int, np.ndarray] = {}
    for k in range(1, min(max_dim, d) + 1):
        combos = [top[:, list(c)] for c in itertools.combinations(range(d + 1), k + 1)]
        faces[k] = np.unique(np.concatenate(combos), axis=0)
    edges = faces.get(1, np.empty((0, 2), dtype=int))
    edge_vals = np.linalg.norm(P[edges[:, 0]] - P[edges[:, 1]], axis=1) / 2
    higher = {k: (idx, _radii(P, idx, "cech")) for k, idx in faces.items() if k >= 2}
    return _assemble(P, [0.0] * n, edges, edge_vals, higher, max_dim, max_radius)


FILTRATIONS = {
    "cech": cech_filtration,
    "rips": rips_filtration,
    "delaunay-cech": delaunay_cech_filtration,
}


def complex_at(fc: FilteredComplex, eps: float) -> SimplicialComplex:
    """The static complex of all simplices with value <= eps."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps > fc.max_radius:
        raise ValueError(f"eps={eps} exceeds the filtration's max_radius={fc.max_radius}")
    return SimplicialComplex.from_simplices(s for s, v in fc if v <= eps)
