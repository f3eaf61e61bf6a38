"""Command-line front end.

Exit codes: 0 success, 1 validation error (bad flags, malformed input
files), 2 internal error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .complex import FILTRATIONS, complex_at
from .demos import DemoFormatError, build_demo_complex, format_demo, parse_demo
from .homology import betti_gf2, persistence, plot_barcode
from .shapes import make_shape, sample_uniform
from .teaching import (
    DEMOS,
    TeachFormatError,
    circle_teaching_set,
    format_teaching_set,
    min_teaching_number_closed,
    min_teaching_number_with_boundary,
    pants_decomposition_count,
    parse_teaching_set,
    search_torus_grid,
    teaching_witness,
    torus_grid_teaching_set,
    torus_teaching_count,
)

log = logging.getLogger("topoteach")

DEFAULTS = {
    "shape": "barbell",
    "n": 500,
    "seed": 42,
    "trials": 20,
    "sizes": "50,100,150,200,300,500",
    "max_radius": 2.0,
    "max_dim": 2,
    "min_bar_length": 0.05,
    "out": None,
    "jobs": 1,
    "complex": "delaunay-cech",
}
_CASTS = {"n": int, "seed": int, "trials": int, "max_radius": float, "max_dim": int,
          "min_bar_length": float, "jobs": int}
_PATH_KEYS = {"out"}


class UsageError(Exception):
    """Invalid invocation or input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_config(path) -> dict:
    """Parse a flat ``key=value`` file; relative paths resolve against the file's directory."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    cfg: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key.startswith("shape."):
            cfg.setdefault("params", {})[key[6:]] = value
            continue
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key in _PATH_KEYS:
            value = str((path.parent / value).resolve())
        cfg[key] = value
    return cfg


def _resolve(args) -> dict:
    """Flags over config file over built-in defaults."""
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        value = flag if flag is not None else file_cfg.get(key, default)
        if value is not None and key in _CASTS:
            try:
                value = _CASTS[key](value)
            except ValueError:
                raise UsageError(f"bad value for {key}: {value!r}") from None
        out[key] = value
    params = {k: _num(v) for k, v in file_cfg.get("params", {}).items()}
    for item in getattr(args, "param", None) or []:
        if "=" not in item:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = _num(v)
    out["params"] = params
    return out


def _num(v):
    try:
        return float(v)
    except (TypeError, ValueError):
        raise UsageError(f"shape parameter must be numeric, got {v!r}") from None


def _sizes(text: str) -> list[int]:
    try:
        return [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--sizes expects comma-separated integers, got {text!r}") from None


def _write_resolved(cfg: dict, out: Path) -> None:
    lines = [f"{k}={v}" for k, v in cfg.items() if k != "params" and v is not None]
    lines += [f"shape.{k}={v}" for k, v in sorted(cfg["params"].items())]
    (out / "config.resolved.txt").write_text("\n".join(lines) + "\n")


def _emit(text: str, out: str | None, name: str, cfg: dict | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)
    if cfg is not None:
        _write_resolved(cfg, d)
    print(f"wrote {d / name}")


def _read_points(path) -> np.ndarray:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    rows = []
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = [float(x) for x in line.split(",")]
        except ValueError:
            if not rows and lineno == 1:
                continue  # header
            raise UsageError(f"{path}:{lineno}: bad coordinate row {line!r}") from None
        if rows and len(row) != len(rows[0]):
            raise UsageError(f"{path}:{lineno}: inconsistent point dimension")
        rows.append(row)
    if not rows:
        raise UsageError(f"{path}: no points")
    return np.array(rows)


def _points_csv(pts: np.ndarray) -> str:
    return "".join(",".join(f"{x:.17g}" for x in p) + "\n" for p in pts)


# --------------------------------------------------------------------------
# subcommands

def cmd_sample(args):
    cfg = _resolve(args)
    shape = make_shape(cfg["shape"], **cfg["params"])
    pts = sample_uniform(shape, cfg["n"], cfg["seed"])
    _emit(_points_csv(pts), cfg["out"], "points.csv", cfg)


def _cloud(args, cfg):
    if args.points:
        return _read_points(args.points)
    shape = make_shape(cfg["shape"], **cfg["params"])
    return sample_uniform(shape, cfg["n"], cfg["seed"])


def cmd_barcode(args):
    cfg = _resolve(args)
    pts = _cloud(args, cfg)
    fc = FILTRATIONS[cfg["complex"]](pts, max_dim=cfg["max_dim"], max_radius=cfg["max_radius"])
    bc = persistence(fc)
    _emit(bc.to_csv(), cfg["out"], "barcode.csv", cfg)
    if cfg["out"] is not None:
        plot_barcode(bc, Path(cfg["out"]) / "barcode.svg", min_length=cfg["min_bar_length"])


def cmd_betti(args):
    cfg = _resolve(args)
    pts = _cloud(args, cfg)
    dim = pts.shape[1]
    radius = max(args.epsilon, 1e-12)
    fc = FILTRATIONS[cfg["complex"]](pts, max_dim=min(dim, 3), max_radius=radius)
    b = betti_gf2(complex_at(fc, args.epsilon), max_dim=dim - 1)
    print(f"eps={args.epsilon:g} betti={b}")


def cmd_teach(args):
    cfg = _resolve(args)
    what = args.what
    if what == "circle":
        _emit(format_teaching_set(circle_teaching_set(args.radius)), cfg["out"], "circle3.teach")
    elif what == "torus-grid":
        ts = torus_grid_teaching_set(args.r1, args.r2, args.k_tube, args.k_rings, args.stagger)
        _emit(format_teaching_set(ts), cfg["out"], "torus_grid.teach")
    elif what == "search":
        found = search_torus_grid(args.r1, args.r2)
        if found is None:
            print("no verified grid in range")
        else:
            k_tube, k_rings, stagger, ts = found
            w = teaching_witness(ts)[0]
            print(f"k_tube={k_tube} k_rings={k_rings} stagger={'yes' if stagger else 'no'} "
                  f"points={len(ts)} window {w}")
    elif what == "counts":
        g = args.genus
        t = torus_teaching_count()
        print(f"torus: {t.value} (before removal {t.breakdown['enough']})")
        print(f"closed genus {g}: {min_teaching_number_closed(g).value}")
        print(f"genus {g}, {args.boundary} boundary: {min_teaching_number_with_boundary(g, args.boundary).value}")
        if g >= 2:
            p = pants_decomposition_count(g)
            print(f"demonstration sequences genus {g}: {p.value} (<= {p.points_per_sequence_max} points each)")
    elif what in DEMOS:
        _emit(format_demo(DEMOS[what]()), cfg["out"], f"{what}.demo")
    else:
        raise UsageError(f"unknown teach target {what!r}")


def cmd_demo_learn(args):
    try:
        demo = parse_demo(Path(args.file).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except DemoFormatError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    dc = build_demo_complex(demo)
    print(f"V={dc.V} E={dc.E} F={dc.F} betti={betti_gf2(dc)}")


def cmd_verify(args):
    try:
        ts = parse_teaching_set(Path(args.file).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except TeachFormatError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    witness = teaching_witness(ts)
    if witness:
        print(f"feasible: yes, window {witness[0]}")
    else:
        print("feasible: no")


def cmd_experiment(args):
    cfg = _resolve(args)
    out = cfg["out"] or f"results/{args.kind}"
    ecfg = ex.ExperimentConfig(shape=cfg["shape"], shape_params=cfg["params"], sizes=_sizes(cfg["sizes"]),
                               trials=cfg["trials"], seed=cfg["seed"], max_radius=cfg["max_radius"],
                               min_bar_length=cfg["min_bar_length"], max_dim=cfg["max_dim"],
                               complex=cfg["complex"])
    summary = ex.run_experiment(args.kind, ecfg, out, jobs=cfg["jobs"])
    if "rates" in summary and args.kind == "feasibility":
        for size, rate in summary["rates"]:
            print(f"size={size} feasible_rate={rate:.3f}")
    if "accuracy" in summary:
        for size, a, b, c in summary["accuracy"]:
            print(f"size={size} taught={a:.3f} uniform={b:.3f} persistent={c:.3f}")
    if args.kind == "barcode":
        print(f"size={summary['size']} two_loop_fraction mean={summary['mean_two_loop']:.4f} "
              f"var={summary['var_two_loop']:.6f} two_bar_rate={summary['two_bar_rate']:.3f}")
    print(f"outputs in {out}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--shape", choices=["circle", "torus", "barbell"])
    common.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="shape parameter, e.g. hole_neck_halfwidth=0.26")
    common.add_argument("--n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--sizes")
    common.add_argument("--max-radius", dest="max_radius", type=float)
    common.add_argument("--max-dim", dest="max_dim", type=int)
    common.add_argument("--min-bar-length", dest="min_bar_length", type=float)
    common.add_argument("--complex", choices=sorted(FILTRATIONS))
    common.add_argument("--out")
    common.add_argument("--jobs", type=int)

    p = _Parser(prog="topoteach", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", parents=[common], help="sample points from a shape")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("barcode", parents=[common], help="Cech persistence barcode of a point cloud")
    s.add_argument("points", nargs="?", help="CSV of points (default: sample from --shape)")
    s.set_defaults(func=cmd_barcode)

    s = sub.add_parser("betti", parents=[common], help="Betti numbers of the ball union at one radius")
    s.add_argument("points", nargs="?")
    s.add_argument("--epsilon", type=float, required=True)
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("teach", parents=[common], help="emit teaching sets, counts or demonstrations")
    s.add_argument("what", help="circle | torus-grid | search | counts | " + " | ".join(DEMOS))
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("--r1", type=float, default=1.0)
    s.add_argument("--r2", type=float, default=2.5)
    s.add_argument("--k-tube", dest="k_tube", type=int, default=3)
    s.add_argument("--k-rings", dest="k_rings", type=int, default=9)
    s.add_argument("--stagger", action="store_true")
    s.add_argument("--genus", type=int, default=1)
    s.add_argument("--boundary", type=int, default=0)
    s.set_defaults(func=cmd_teach)

    s = sub.add_parser("demo-learn", help="build the complex a demonstration describes")
    s.add_argument("file")
    s.set_defaults(func=cmd_demo_learn)

    s = sub.add_parser("verify", help="check a teaching-set file")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("experiment", parents=[common], help="run a seeded study")
    s.add_argument("kind", choices=["feasibility", "barcode", "accuracy"])
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
