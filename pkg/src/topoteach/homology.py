"""GF(2) Betti numbers and persistent homology.

Boundary columns are Python ints used as bitsets over the faces of the
previous dimension, so adding two columns is a single XOR and the pivot
is ``bit_length() - 1``.
"""
from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .complex import FilteredComplex, SimplicialComplex

INF = math.inf


class BettiProfile(NamedTuple):
    b0: int
    b1: int
    b2: int

    def __str__(self):
        return f"({self.b0},{self.b1},{self.b2})"


@dataclass
class Barcode:
    """Persistence intervals ``(dim, birth, death)``; ``death`` may be ``inf``."""

    intervals: list[tuple[int, float, float]] = field(default_factory=list)
    max_radius: float = INF

    def __post_init__(self):
        self.intervals = sorted((int(d), float(b), float(e)) for d, b, e in self.intervals)
        for d, b, e in self.intervals:
            if not b < e:
                raise ValueError(f"interval ({b}, {e}) in dim {d} is empty")

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def of_dim(self, dim: int) -> list[tuple[float, float]]:
        return [(b, e) for d, b, e in self.intervals if d == dim]

    def breakpoints(self, dims: Sequence[int] | None = None) -> list[float]:
        pts = set()
        for d, b, e in self.intervals:
            if dims is None or d in dims:
                pts.add(b)
                if e != INF:
                    pts.add(e)
        return sorted(pts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("dim,birth,death\n")
        for d, b, e in self.intervals:
            buf.write(f"{d},{_fmt(b)},{_fmt(e)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, max_radius: float = INF) -> "Barcode":
        rows = [ln.split(",") for ln in text.strip().splitlines()[1:] if ln.strip()]
        return cls([(int(d), float(b), float(e)) for d, b, e in rows], max_radius)


def _fmt(x: float) -> str:
    return "inf" if x == INF else f"{x:.17g}"


# --------------------------------------------------------------------------
# static Betti numbers

def _boundary_rank(lower: Sequence[tuple], upper: Sequence[tuple]) -> int:
    if not upper:
        return 0
    index = {s: i for i, s in enumerate(lower)}
    pivots: dict[int, int] = {}
    rank = 0
    for s in upper:
        col = 0
        for f in itertools.combinations(s, len(s) - 1):
            col |= 1 << index[f]
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                rank += 1
                break
            col ^= other
    return rank


def betti_gf2(cx, max_dim: int = 2) -> BettiProfile:
    """Betti numbers b0..b2 of a face-closed complex over GF(2).

    Accepts a ``SimplicialComplex`` or anything with ``as_complex()``.
    Numbers above ``max_dim`` are reported as 0.
    """
    if not isinstance(cx, SimplicialComplex):
        cx = cx.as_complex()
    if not cx.cells.get(0):
        raise ValueError("betti numbers of an empty complex are undefined")
    cells = cx.cells
    ranks = [0] + [_boundary_rank(cells.get(k - 1, []), cells.get(k, [])) for k in range(1, min(max_dim, 2) + 2)]
    betti = []
    for k in range(3):
        if k > max_dim:
            betti.append(0)
            continue
        n_k = len(cells.get(k, []))
        betti.append(n_k - ranks[k] - ranks[k + 1])
    return BettiProfile(*betti)


# --------------------------------------------------------------------------
# persistence

@dataclass
class PersistencePairs:
    """Raw reduction output, zero-length pairs included.

    ``pairs[d]`` holds (birth, death) for every creator of dim d, in creator order.
    """

    pairs: dict[int, list[tuple[float, float]]]
    creators: dict[int, int]
    top_dim: int


def persistence_pairs(fc: FilteredComplex) -> PersistencePairs:
    by_dim: dict[int, list[tuple]] = {}
    vals: dict[int, list[float]] = {}
    for s, v in fc:
        by_dim.setdefault(len(s) - 1, []).append(s)
        vals.setdefault(len(s) - 1, []).append(v)
    top = max(by_dim, default=-1)
    pos = {d: {s: i for i, s in enumerate(cells)} for d, cells in by_dim.items()}

    killer: dict[int, dict[int, int]] = {d: {} for d in by_dim}  # creator index -> killer index (dim d+1)
    negative: dict[int, set[int]] = {d: set() for d in by_dim}
    # clearing: run top-down so creators paired from above are skipped
    for d in range(top, 0, -1):
        face_pos = pos[d - 1]
        cleared = killer[d]
        pivots: dict[int, int] = {}
        for j, s in enumerate(by_dim[d]):
            if j in cleared:
                continue
            col = 0
            for f in itertools.combinations(s, d):
                col |= 1 << face_pos[f]
            while col:
                low = col.bit_length() - 1
                other = pivots.get(low)
                if other is None:
                    pivots[low] = col
                    killer[d - 1][low] = j
                    negative[d].add(j)
                    break
                col ^= other

    pairs: dict[int, list[tuple[float, float]]] = {}
    creators: dict[int, int] = {}
    for d in range(top + 1):
        out = []
        for i in range(len(by_dim[d])):
            if i in negative[d]:
                continue
            j = killer[d].get(i)
            out.append((vals[d][i], INF if j is None else vals[d + 1][j]))
        pairs[d] = out
        creators[d] = len(out)
    return PersistencePairs(pairs, creators, top)


def persistence(fc: FilteredComplex, max_report_dim: int = 2) -> Barcode:
    """Barcode of the filtration; zero-length intervals are dropped.

    Classes still alive at ``fc.max_radius`` get death ``inf``.
    """
    raw = persistence_pairs(fc)
    intervals = [(d, b, e) for d, prs in raw.pairs.items() if d <= max_report_dim
                 for b, e in prs if b < e]
    return Barcode(intervals, fc.max_radius)


# --------------------------------------------------------------------------
# barcode queries

def rank_at(bc: Barcode, dim: int, eps: float) -> int:
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return sum(1 for d, b, e in bc.intervals if d == dim and b <= eps < e)


def betti_at(bc: Barcode, eps: float) -> BettiProfile:
    return BettiProfile(*(rank_at(bc, k, eps) for k in range(3)))


def filter_barcode(bc: Barcode, min_length: float) -> Barcode:
    if min_length < 0:
        raise ValueError("min_length must be non-negative")
    return Barcode([(d, b, e) for d, b, e in bc.intervals if e - b >= min_length], bc.max_radius)


def _pieces(points: Sequence[float], lo: float, hi: float) -> list[tuple[float, float]]:
    cuts = [lo] + [p for p in points if lo < p < hi] + [hi]
    return list(zip(cuts, cuts[1:]))


def rank_measure(bc: Barcode, dim: int, rank: int, within: tuple[float, float]) -> float:
    """Fraction of ``within`` on which exactly ``rank`` dim-classes are alive.

    Exact: ranks are constant between consecutive interval endpoints.
    """
    lo, hi = within
    if not hi > lo:
        raise ValueError("'within' must have positive length")
    total = sum(q - p for p, q in _pieces(bc.breakpoints([dim]), lo, hi)
                if rank_at(bc, dim, p) == rank)
    return total / (hi - lo)


def profile_pieces(bc: Barcode, target: Sequence[int], dims: Sequence[int],
                   lo: float, hi: float) -> list[tuple[float, float]]:
    """Maximal subintervals ``[a, b)`` of ``[lo, hi)`` where the Betti
    numbers in ``dims`` equal ``target`` at those indices.

    Pieces narrower than a relative 1e-12 are rounding artifacts (equal
    lengths computed along different float paths) and never stand alone.
    """
    out: list[tuple[float, float]] = []
    if not hi > lo:
        return out
    for p, q in _pieces(bc.breakpoints(), max(lo, 0.0), hi):
        if q - p <= 1e-12 * max(1.0, abs(q)):
            if out and out[-1][1] == p:
                out[-1] = (out[-1][0], q)
            continue
        if all(rank_at(bc, k, p) == target[k] for k in dims):
            if out and out[-1][1] == p:
                out[-1] = (out[-1][0], q)
            else:
                out.append((p, q))
    return out


def h1_support(bc: Barcode) -> tuple[float, float] | None:
    """``[min birth, max death]`` over H1 bars; infinite deaths are capped at max_radius."""
    bars = bc.of_dim(1)
    if not bars:
        return None
    lo = min(b for b, _ in bars)
    hi = max(min(e, bc.max_radius) for _, e in bars)
    return (lo, hi) if hi > lo else None


# --------------------------------------------------------------------------
# plotting

_COLORS = {0: "tab:red", 1: "tab:green", 2: "tab:blue"}


def plot_barcode(bc: Barcode, path, min_length: float = 0.0, title: str | None = None) -> None:
    """Horizontal bars grouped by dimension (H0 red, H1 green, H2 blue), saved as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "topoteach"
    bars = [iv for iv in filter_barcode(bc, min_length)]
    cap = bc.max_radius if bc.max_radius != INF else max((e for _, _, e in bars if e != INF), default=1.0) * 1.1
    fig, ax = plt.subplots(figsize=(6, max(2.0, 0.12 * len(bars) + 1)))
    y = 0
    for dim in sorted({d for d, _, _ in bars}):
        for _, b, e in sorted((iv for iv in bars if iv[0] == dim), key=lambda t: (t[1] - t[2], t[1])):
            ax.hlines(y, b, min(e, cap), color=_COLORS.get(dim, "k"), lw=2)
            y += 1
        y += 1
    for dim, col in _COLORS.items():
        ax.plot([], [], color=col, label=f"H{dim}")
    ax.set_xlabel("eps (ball radius)")
    ax.set_yticks([])
    ax.legend(loc="lower right", fontsize="small")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
