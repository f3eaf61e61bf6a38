"""Seeded trial harness: feasibility, barcode statistics and policy accuracy vs sample size."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .complex import FILTRATIONS
from .homology import Barcode, filter_barcode, h1_support, persistence, plot_barcode, rank_measure
from .learners import feasible, persistent_policy, taught_policy, uniform_policy
from .shapes import derive_rng, make_shape, sample_uniform, target_betti
from .teaching import circle_demo, torus_demo

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    shape: str = "barbell"
    shape_params: dict = field(default_factory=dict)
    sizes: tuple[int, ...] = (50, 100, 150, 200, 300, 500)
    trials: int = 20
    seed: int = 42
    max_radius: float = 2.0
    min_bar_length: float = 0.05
    max_dim: int = 2
    complex: str = "delaunay-cech"

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if any(s < 0 for s in self.sizes):
            raise ValueError("sizes must be non-negative")
        if self.complex not in FILTRATIONS:
            raise ValueError(f"unknown complex {self.complex!r}")
        make_shape(self.shape, **self.shape_params)

    def build_shape(self):
        return make_shape(self.shape, **self.shape_params)

    def describe(self) -> str:
        """Flat key=value dump of the resolved configuration."""
        d = asdict(self)
        params = d.pop("shape_params")
        d["sizes"] = ",".join(map(str, self.sizes))
        lines = [f"{k}={v}" for k, v in d.items()]
        lines += [f"shape.{k}={v}" for k, v in sorted(params.items())]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ResultRow:
    size: int
    trial: int
    feasible: int
    taught_acc: float
    uniform_acc: float
    persistent_acc: float
    two_loop_fraction: float
    h1_bar_count: int


def trial_barcode(cfg: ExperimentConfig, size: int, trial: int) -> tuple[np.ndarray, Barcode]:
    shape = cfg.build_shape()
    pts = sample_uniform(shape, size, derive_rng(cfg.seed, size, trial))
    if len(pts) == 0:
        return pts, Barcode([], cfg.max_radius)
    fc = FILTRATIONS[cfg.complex](pts, max_dim=cfg.max_dim, max_radius=cfg.max_radius)
    return pts, persistence(fc)


def run_trial(cfg: ExperimentConfig, size: int, trial: int) -> ResultRow:
    shape = cfg.build_shape()
    pts, bc = trial_barcode(cfg, size, trial)
    demo = torus_demo() if target_betti(shape)[1] == 2 else circle_demo()
    kw = dict(barcode=bc, max_radius=cfg.max_radius)
    verdict = feasible(pts, shape, **kw)
    taught = taught_policy(pts, shape, demo, **kw)
    uniform = uniform_policy(pts, shape, min_bar_length=cfg.min_bar_length, **kw)
    pers = persistent_policy(pts, shape, **kw)
    long_bars = filter_barcode(bc, cfg.min_bar_length)
    support = h1_support(long_bars)
    two = rank_measure(long_bars, 1, 2, support) if support else 0.0
    return ResultRow(size, trial, int(verdict.feasible), taught.success, uniform.success,
                     pers.success, two, len(long_bars.of_dim(1)))


def _job(args):
    return run_trial(*args)


def run_trials(cfg: ExperimentConfig, jobs: int = 1) -> list[ResultRow]:
    """All (size, trial) rows, sorted; independent of ``jobs``."""
    tasks = [(cfg, s, t) for s in cfg.sizes for t in range(cfg.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(_job, tasks, chunksize=4))
    else:
        rows = [_job(t) for t in tasks]
    return sorted(rows, key=lambda r: (r.size, r.trial))


# --------------------------------------------------------------------------
# studies

def feasibility_study(cfg: ExperimentConfig, rows: list[ResultRow] | None = None, jobs: int = 1):
    rows = rows if rows is not None else run_trials(cfg, jobs)
    return [(s, float(np.mean([r.feasible for r in rows if r.size == s]))) for s in cfg.sizes]


@dataclass
class BarcodeSummary:
    size: int
    barcodes: list[Barcode]
    two_loop_fractions: list[float]
    h1_counts: list[int]

    @property
    def mean_two_loop(self) -> float:
        return float(np.mean(self.two_loop_fractions))

    @property
    def var_two_loop(self) -> float:
        return float(np.var(self.two_loop_fractions))


def barcode_study(cfg: ExperimentConfig, size: int) -> BarcodeSummary:
    if size < 1:
        raise ValueError("size must be >= 1")
    bcs, fracs, counts = [], [], []
    for t in range(cfg.trials):
        _, bc = trial_barcode(cfg, size, t)
        long_bars = filter_barcode(bc, cfg.min_bar_length)
        support = h1_support(long_bars)
        bcs.append(bc)
        fracs.append(rank_measure(long_bars, 1, 2, support) if support else 0.0)
        counts.append(len(long_bars.of_dim(1)))
    return BarcodeSummary(size, bcs, fracs, counts)


def accuracy_study(cfg: ExperimentConfig, rows: list[ResultRow] | None = None, jobs: int = 1):
    rows = rows if rows is not None else run_trials(cfg, jobs)
    out = []
    for s in cfg.sizes:
        sub = [r for r in rows if r.size == s]
        out.append((s, float(np.mean([r.taught_acc for r in sub])),
                    float(np.mean([r.uniform_acc for r in sub])),
                    float(np.mean([r.persistent_acc for r in sub]))))
    return out


# --------------------------------------------------------------------------
# output

def _g(x: float) -> str:
    return f"{x:.17g}"


def write_feasibility_csv(rows: list[ResultRow], path) -> None:
    lines = ["size,trial,feasible"] + [f"{r.size},{r.trial},{r.feasible}" for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def write_accuracy_csv(table, path) -> None:
    lines = ["size,taught,uniform,persistent"] + [f"{s},{_g(a)},{_g(b)},{_g(c)}" for s, a, b, c in table]
    Path(path).write_text("\n".join(lines) + "\n")


def write_barcode_stats_csv(rows: list[ResultRow], path) -> None:
    lines = ["size,trial,two_loop_fraction,h1_bars"]
    lines += [f"{r.size},{r.trial},{_g(r.two_loop_fraction)},{r.h1_bar_count}" for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def plot_accuracy(table, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "topoteach"
    sizes = [t[0] for t in table]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i, label in enumerate(["taught", "uniform", "persistent"], start=1):
        ax.plot(sizes, [t[i] for t in table], marker="o", label=label)
    ax.set_xlabel("sample size")
    ax.set_ylabel("mean geometric accuracy")
    ax.set_ylim(-0.05, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def run_experiment(kind: str, cfg: ExperimentConfig, out_dir, jobs: int = 1) -> dict:
    """Run one study, write its CSV/SVG outputs plus the resolved config; returns a summary dict."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.resolved.txt").write_text(cfg.describe())
    if kind == "feasibility":
        rows = run_trials(cfg, jobs)
        write_feasibility_csv(rows, out / "feasibility.csv")
        return {"rates": feasibility_study(cfg, rows)}
    if kind == "accuracy":
        rows = run_trials(cfg, jobs)
        table = accuracy_study(cfg, rows)
        write_accuracy_csv(table, out / "accuracy.csv")
        write_feasibility_csv(rows, out / "feasibility.csv")
        plot_accuracy(table, out / "accuracy.svg")
        return {"accuracy": table, "rates": feasibility_study(cfg, rows)}
    if kind == "barcode":
        rows = run_trials(cfg, jobs)
        write_barcode_stats_csv(rows, out / "barcode_stats.csv")
        size = cfg.sizes[-1]
        _, bc = trial_barcode(cfg, size, 0)
        (out / "barcode.csv").write_text(bc.to_csv())
        plot_barcode(bc, out / "barcode.svg", min_length=cfg.min_bar_length,
                     title=f"{cfg.shape}, n={size}, trial 0")
        sub = [r for r in rows if r.size == size]
        fr = [r.two_loop_fraction for r in sub]
        return {"size": size, "mean_two_loop": float(np.mean(fr)), "var_two_loop": float(np.var(fr)),
                "two_bar_rate": float(np.mean([r.h1_bar_count == 2 for r in sub]))}
    raise ValueError(f"unknown experiment {kind!r}")
