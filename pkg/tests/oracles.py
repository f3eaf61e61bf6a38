"""Independent reference computations used by the tests.

Nothing here imports the code paths it is used to check.
"""
import itertools

import numpy as np
from scipy import ndimage, optimize

_EIGHT = np.ones((3, 3), dtype=int)
_FOUR = ndimage.generate_binary_structure(2, 1)


def grid_betti(mask: np.ndarray) -> tuple[int, int]:
    """(components, holes) of a binary image; foreground 8-connected, background 4-connected."""
    padded = np.pad(mask, 1, constant_values=False)
    _, b0 = ndimage.label(padded, structure=_EIGHT)
    bg, nbg = ndimage.label(~padded, structure=_FOUR)
    # the padded border is one background component; every other one is a hole
    return b0, nbg - 1


def union_of_disks_betti(points, eps: float, pitch: float) -> tuple[int, int]:
    """Rasterise the union of closed eps-disks and count components and holes."""
    P = np.asarray(points, dtype=float)
    lo = P.min(axis=0) - eps - 3 * pitch
    hi = P.max(axis=0) + eps + 3 * pitch
    xs = np.arange(lo[0], hi[0], pitch)
    ys = np.arange(lo[1], hi[1], pitch)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    mask = np.zeros(X.shape, dtype=bool)
    for x, y in P:
        mask |= (X - x) ** 2 + (Y - y) ** 2 <= eps * eps
    return grid_betti(mask)


def offset_betti_profile(mask_fn, bbox, pitch: float, eps_values):
    """Betti (b0, b1) of the eps-offset of a planar region for several eps."""
    (x0, x1), (y0, y1) = bbox
    m = max(eps_values) + 4 * pitch
    xs = np.arange(x0 - m, x1 + m, pitch)
    ys = np.arange(y0 - m, y1 + m, pitch)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    region = mask_fn(X, Y)
    dist = ndimage.distance_transform_edt(~region) * pitch
    return {eps: grid_betti(dist <= eps) for eps in eps_values}


def enclosing_radius_numeric(points) -> float:
    """Minimal enclosing ball by constrained optimisation."""
    P = np.asarray(points, dtype=float)
    c0 = P.mean(axis=0)
    r0 = np.max(np.linalg.norm(P - c0, axis=1))
    n = P.shape[1]
    # optimise the squared radius s so the feasible set stays convex and s >= 0
    cons = [{"type": "ineq", "fun": (lambda z, p=p: z[n] - np.sum((z[:n] - p) ** 2))} for p in P]
    res = optimize.minimize(lambda z: z[n], np.r_[c0, r0 * r0], constraints=cons, method="SLSQP",
                            bounds=[(None, None)] * n + [(0, None)],
                            options={"ftol": 1e-15, "maxiter": 1000})
    return float(np.sqrt(max(res.x[n], 0.0)))


def gf2_rank(M: np.ndarray) -> int:
    """Rank over GF(2) by dense row reduction on a uint8 matrix."""
    A = (np.asarray(M) % 2).astype(np.uint8)
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = np.nonzero(A[rank:, c])[0]
        if len(piv) == 0:
            continue
        p = rank + piv[0]
        A[[rank, p]] = A[[p, rank]]
        others = np.nonzero(A[:, c])[0]
        others = others[others != rank]
        A[others] ^= A[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def dense_betti(simplices) -> tuple[int, int, int]:
    """Betti numbers b0..b2 from dense GF(2) boundary matrices."""
    by_dim = {}
    for s in simplices:
        s = tuple(sorted(s))
        by_dim.setdefault(len(s) - 1, set()).add(s)
    cells = {k: sorted(v) for k, v in by_dim.items()}
    ranks = {}
    for k in range(1, 4):
        lo, up = cells.get(k - 1, []), cells.get(k, [])
        if not lo or not up:
            ranks[k] = 0
            continue
        idx = {s: i for i, s in enumerate(lo)}
        M = np.zeros((len(lo), len(up)), dtype=np.uint8)
        for j, s in enumerate(up):
            for f in itertools.combinations(s, k):
                M[idx[f], j] = 1
        ranks[k] = gf2_rank(M)
    return tuple(len(cells.get(k, [])) - (ranks[k] if k else 0) - ranks[k + 1] for k in range(3))
