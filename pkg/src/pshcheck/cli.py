"""Command-line front end.

Subcommands: check (run a named consistency check over a grid), mean
(one ellipsoid mean), laplacian (pointwise operator estimates), catalog
(list built-in test functions), scan (operator field over a grid as a
table).  Exit codes: 0 consistent, 1 violation, 2 inconclusive, 64 usage
error, 70 internal error.

Points are given as comma-separated real coordinates; complex dimensions
interleave (re, im) pairs, so a point in C^2 takes four numbers.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .catalog import LABELS, catalog, lookup
from .criteria import (
    check_bp_psh,
    check_harmonic_p,
    check_mean_value_b,
    check_mean_value_d,
    check_subharmonic_p,
    lattice_ellipsoids,
    monotonicity_scan,
)
from .errors import ConfigError, DomainError, EvaluationError, ParseError, PshcheckError
from .geometry import Ellipsoid, UnitaryFrame, sample_haar_unitary
from .integrate import mean_over_ellipsoid
from .mc import default_budget
from .operators import (
    LimsupSchedule,
    bp_laplacian,
    candidate_frames,
    d_upper,
    default_inner_schedule,
    default_outer_schedule,
    p_laplacian,
)
from .report import build_report, to_csv, to_json, to_plain, verdict_csv
from .vm import compile_expression, default_backend
from .weights import ball_weight, ellipsoid_slice_weight

EXIT_CONSISTENT = 0
EXIT_VIOLATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70

_STATUS_EXIT = {
    "consistent": EXIT_CONSISTENT,
    "violation": EXIT_VIOLATION,
    "inconclusive": EXIT_INCONCLUSIVE,
}

CHECK_NAMES = (
    "mean-b",
    "mean-d",
    "bp-psh",
    "subharmonic-p",
    "harmonic-p",
    "monotonicity",
)

GRID_CAP = 4096

# Defaults live here, not in argparse, so a --config file can fill any
# value a flag did not set explicitly (flag > file > default).
_COMMON_DEFAULTS = {
    "seed": 0,
    "workers": 1,
    "format": "json",
    "sched_ratio": 0.7,
    "sched_count": 12,
    "sched_window": 4,
}

_CMD_DEFAULTS = {
    "check": {
        "grid": "random:10:0.4",
        "frames": "all",
        "weight": "ball",
        "r0": 0.3,
        "levels": 4,
        "t_nodes": 16,
        "axis": 1,
    },
    "mean": {"radii": "0.5", "frame": "identity"},
    "laplacian": {
        "operator": "bp",
        "weight": "ball",
        "frames": "all",
        "t_nodes": 16,
    },
    "catalog": {},
    "scan": {
        "grid": "box:-0.5,-0.5,-0.5,-0.5:0.5,0.5,0.5,0.5:2",
        "frames": "swaps",
    },
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 64
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# Spec-string parsing


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in str(text).split(",") if tok != "")
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _rows_to_points(rows: np.ndarray, complex_domain: bool):
    if complex_domain:
        return [row[0::2] + 1j * row[1::2] for row in rows]
    return [np.asarray(row) for row in rows]


def parse_grid(spec: str, rdim: int, seed: int, complex_domain: bool):
    """Grid forms: points:<p1;p2;..>, box:<lo>:<hi>:<count>, random:<count>:<radius>.

    Each point is rdim comma-separated reals; complex coordinates
    interleave re and im.  The box form builds a count**rdim lattice.
    """
    kind, _, rest = spec.partition(":")
    if kind == "points":
        rows = []
        for group in rest.split(";"):
            coords = _floats(group)
            if len(coords) != rdim:
                raise ConfigError(
                    f"grid point {group!r} has {len(coords)} coordinates, need {rdim}"
                )
            rows.append(np.asarray(coords))
        if not rows:
            raise ConfigError("empty grid")
        return _rows_to_points(np.asarray(rows), complex_domain)
    if kind == "box":
        parts = rest.split(":")
        if len(parts) != 3:
            raise ConfigError("box grid needs lo:hi:count")
        lo = _floats(parts[0])
        hi = _floats(parts[1])
        if len(lo) != rdim or len(hi) != rdim:
            raise ConfigError(f"box corners need {rdim} coordinates each")
        try:
            count = int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad box count {parts[2]!r}") from exc
        if count < 1:
            raise ConfigError("box count must be >= 1")
        if count**rdim > GRID_CAP:
            raise ConfigError(
                f"box grid would have {count**rdim} points (cap {GRID_CAP})"
            )
        axes = [np.linspace(lo[j], hi[j], count) for j in range(rdim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        rows = np.stack([m.ravel() for m in mesh], axis=1)
        return _rows_to_points(rows, complex_domain)
    if kind == "random":
        parts = rest.split(":")
        if len(parts) != 2:
            raise ConfigError("random grid needs count:radius")
        try:
            count = int(parts[0])
            radius = float(parts[1])
        except ValueError as exc:
            raise ConfigError(f"bad random grid spec {rest!r}") from exc
        if count < 1 or not radius > 0:
            raise ConfigError("random grid needs count >= 1 and radius > 0")
        if count > GRID_CAP:
            raise ConfigError(f"random grid count {count} exceeds cap {GRID_CAP}")
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(0x6721D,)))
        )
        rows = rng.uniform(-radius, radius, size=(count, rdim))
        return _rows_to_points(rows, complex_domain)
    raise ConfigError(
        f"unknown grid form {spec!r}; use points:..., box:..., or random:..."
    )


def parse_frames(spec: str, n: int, seed: int):
    """Frame-set forms: identity, swaps, haar:<k>, all (identity + swaps + 2 Haar)."""
    if spec == "identity":
        return (UnitaryFrame.identity(n),)
    if spec == "swaps":
        return candidate_frames(n, 0, seed)
    if spec == "all":
        return candidate_frames(n, 2, seed)
    if spec.startswith("haar:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad frames spec {spec!r}") from exc
        if k < 0:
            raise ConfigError("haar frame count must be >= 0")
        frames = [UnitaryFrame.identity(n)]
        for i in range(k):
            frames.append(sample_haar_unitary(n, seed * 1_000_003 + i))
        return tuple(frames)
    raise ConfigError(
        f"unknown frames spec {spec!r}; use identity, swaps, haar:<k>, or all"
    )


def parse_single_frame(spec: str, n: int):
    if spec == "identity":
        return UnitaryFrame.identity(n)
    if spec.startswith("swap:"):
        try:
            i, j = (int(t) for t in spec.split(":", 1)[1].split(","))
        except ValueError as exc:
            raise ConfigError(f"bad frame spec {spec!r}") from exc
        return UnitaryFrame.swap(n, i, j)
    if spec.startswith("haar:"):
        try:
            s = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad frame spec {spec!r}") from exc
        return sample_haar_unitary(n, s)
    raise ConfigError(
        f"unknown frame spec {spec!r}; use identity, swap:<i>,<j>, or haar:<seed>"
    )


def parse_weight(spec: str, m: int):
    if spec == "ball":
        return ball_weight(m)
    if spec.startswith("slice:"):
        try:
            k, l = (int(t) for t in spec.split(":", 1)[1].split(","))
        except ValueError as exc:
            raise ConfigError(f"bad weight spec {spec!r}") from exc
        return ellipsoid_slice_weight(k, l)
    raise ConfigError(f"unknown weight spec {spec!r}; use ball or slice:<k>,<l>")


def parse_radii_sets(spec: str, n: int):
    """Semicolon-separated ellipsoids, each n comma-separated radii.

    A single radius per group is shorthand for a round ball.
    """
    out = []
    for group in spec.split(";"):
        radii = _floats(group)
        if len(radii) == 1 and n > 1:
            radii = radii * n
        if len(radii) != n:
            raise ConfigError(
                f"ellipsoid {group!r} needs {n} radii (or 1 for a round ball)"
            )
        out.append(Ellipsoid(tuple(radii)))
    if not out:
        raise ConfigError("empty radii spec")
    return tuple(out)


# ---------------------------------------------------------------------------
# Function resolution and schedules


def _resolve_function(args):
    """Compile --expr or look up --catalog; returns (fn, ambient_dim, source)."""
    if bool(args.expr) == bool(args.catalog):
        raise ConfigError("exactly one of --expr or --catalog is required")
    if args.catalog:
        entry = lookup(args.catalog)
        fn = entry.compile(backend=args.backend)
        dim = entry.dim
        source = {"catalog": entry.name, "expr": entry.text}
    else:
        fn = compile_expression(args.expr, backend=args.backend)
        dim = fn.dim
        source = {"expr": fn.text}
    if args.dim is not None:
        if args.dim < fn.dim:
            raise ConfigError(
                f"--dim {args.dim} is below the expression's dimension {fn.dim}"
            )
        dim = args.dim
    if dim == 0:
        raise ConfigError("constant expression: give an ambient dimension with --dim")
    return fn, dim, source


def _real_dim(fn, dim: int) -> int:
    # a no-variable expression compiled with --dim is treated as complex
    return dim if fn.family == "x" else 2 * dim


def _as_real(fn):
    return fn if fn.family == "x" else fn.as_real_domain()


def _point_sched(args) -> LimsupSchedule:
    """Radius schedule for the one-level operators (bp, p)."""
    base = args.sched_base if args.sched_base is not None else 0.5
    return LimsupSchedule.geometric(
        base, ratio=args.sched_ratio, count=args.sched_count, window=args.sched_window
    )


def _outer_sched(args) -> LimsupSchedule:
    """Outer (long-axis) schedule for the nested ellipsoid operator."""
    if args.sched_base is None:
        return default_outer_schedule()
    return LimsupSchedule.geometric(
        args.sched_base,
        ratio=args.sched_ratio,
        count=args.sched_count,
        window=args.sched_window,
    )


def _sched_echo(sched: LimsupSchedule) -> dict:
    return {"radii": list(sched.radii), "window": sched.tail_window}


# ---------------------------------------------------------------------------
# Commands


def _cmd_mean(args) -> tuple[dict, int]:
    fn, dim, source = _resolve_function(args)
    if fn.family == "x":
        raise ConfigError("mean computes complex-ellipsoid means; use a z-expression")
    radii_sets = parse_radii_sets(args.radii, dim)
    if len(radii_sets) != 1:
        raise ConfigError("mean takes exactly one ellipsoid")
    ellipsoid = radii_sets[0]
    frame = parse_single_frame(args.frame, dim)
    center = np.zeros(dim, dtype=np.complex128)
    if args.center:
        coords = _floats(args.center)
        if len(coords) != 2 * dim:
            raise ConfigError(f"--center needs {2 * dim} coordinates")
        arr = np.asarray(coords)
        center = arr[0::2] + 1j * arr[1::2]
    est = mean_over_ellipsoid(
        fn, center, frame, ellipsoid, args.budget, args.seed, (), args.workers
    )
    config = {
        "command": "mean",
        **source,
        "dim": dim,
        "center": to_plain(list(center)),
        "frame": args.frame,
        "radii": list(ellipsoid.radii),
        "budget": args.budget,
        "seed": args.seed,
    }
    return {"config": config, "result": {"estimate": to_plain(est)}}, EXIT_CONSISTENT


def _parse_point(args, rdim: int, complex_domain: bool):
    if args.point:
        coords = _floats(args.point)
        if len(coords) != rdim:
            raise ConfigError(f"--point needs {rdim} real coordinates")
        arr = np.asarray(coords)
    else:
        arr = np.zeros(rdim)
    if complex_domain:
        return arr[0::2] + 1j * arr[1::2]
    return arr


def _cmd_laplacian(args) -> tuple[dict, int]:
    fn, dim, source = _resolve_function(args)
    rdim = _real_dim(fn, dim)
    config = {
        "command": "laplacian",
        "operator": args.operator,
        **source,
        "dim": dim,
        "budget": args.budget,
        "seed": args.seed,
    }
    if args.operator == "d":
        if fn.family == "x":
            raise ConfigError("operator d needs a complex-domain expression")
        z0 = _parse_point(args, 2 * dim, True)
        frames = parse_frames(args.frames, dim, args.seed)
        outer = _outer_sched(args)
        inner = default_inner_schedule()
        est = d_upper(
            fn,
            z0,
            R_sched=outer,
            r_sched=inner,
            budget=args.budget,
            seed=args.seed,
            workers=args.workers,
            frames=frames,
        )
        config.update(
            {
                "point": to_plain(list(z0)),
                "frames": args.frames,
                "outer_sched": _sched_echo(outer),
                "inner_sched": _sched_echo(inner),
            }
        )
        return {"config": config, "result": {"estimate": to_plain(est)}}, EXIT_CONSISTENT
    if args.operator not in ("bp", "p"):
        raise ConfigError(f"unknown operator {args.operator!r}; use bp, p, or d")
    x0 = _parse_point(args, rdim, False)
    u = _as_real(fn)
    sched = _point_sched(args)
    if args.operator == "bp":
        est = bp_laplacian(u, x0, sched, args.budget, args.seed, workers=args.workers)
    else:
        weight = parse_weight(args.weight, rdim)
        est = p_laplacian(
            u,
            x0,
            weight,
            rdim,
            sched,
            args.budget,
            args.seed,
            t_nodes=args.t_nodes,
            workers=args.workers,
        )
        config["weight"] = args.weight
    config.update({"point": to_plain(list(x0)), "sched": _sched_echo(sched)})
    return {"config": config, "result": {"estimate": to_plain(est)}}, EXIT_CONSISTENT


def _cmd_check(args) -> tuple[dict, int]:
    fn, dim, source = _resolve_function(args)
    rdim = _real_dim(fn, dim)
    name = args.check
    if name not in CHECK_NAMES:
        raise ConfigError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")
    config = {
        "command": "check",
        "check": name,
        **source,
        "dim": dim,
        "grid": args.grid,
        "budget": args.budget,
        "seed": args.seed,
    }
    if name in ("subharmonic-p", "harmonic-p"):
        u = _as_real(fn)
        grid = parse_grid(args.grid, rdim, args.seed, False)
        weight = parse_weight(args.weight, rdim)
        config["weight"] = args.weight
        if name == "subharmonic-p":
            sched = _point_sched(args)
            config["sched"] = _sched_echo(sched)
            verdict = check_subharmonic_p(
                u,
                grid,
                weight,
                rdim,
                sched,
                args.budget,
                args.seed,
                t_nodes=args.t_nodes,
                workers=args.workers,
            )
        else:
            r_list = _floats(args.radii) if args.radii else (0.4, 0.25, 0.15)
            config["radii"] = list(r_list)
            verdict = check_harmonic_p(
                u,
                grid,
                weight,
                rdim,
                r_list,
                args.budget,
                args.seed,
                t_nodes=args.t_nodes,
                workers=args.workers,
            )
    else:
        if fn.family == "x":
            raise ConfigError(f"check {name} needs a complex-domain expression")
        grid = parse_grid(args.grid, 2 * dim, args.seed, True)
        frames = parse_frames(args.frames, dim, args.seed)
        config["frames"] = args.frames
        if name == "mean-b":
            radii_sets = (
                parse_radii_sets(args.radii, dim)
                if args.radii
                else lattice_ellipsoids(dim, args.r0, levels=2, ratio=args.sched_ratio)
            )
            config["radii"] = [list(e.radii) for e in radii_sets]
            verdict = check_mean_value_b(
                fn,
                grid,
                frames,
                radii_sets,
                args.budget,
                args.seed,
                workers=args.workers,
                domain_radius=args.domain_radius,
            )
        elif name == "mean-d":
            config.update(
                {"r0": args.r0, "levels": args.levels, "ratio": args.sched_ratio}
            )
            verdict = check_mean_value_d(
                fn,
                grid,
                frames,
                args.r0,
                args.budget,
                args.seed,
                levels=args.levels,
                ratio=args.sched_ratio,
                workers=args.workers,
                domain_radius=args.domain_radius,
            )
        elif name == "bp-psh":
            outer = _outer_sched(args)
            inner = default_inner_schedule()
            config.update(
                {"outer_sched": _sched_echo(outer), "inner_sched": _sched_echo(inner)}
            )
            verdict = check_bp_psh(
                fn,
                grid,
                R_sched=outer,
                r_sched=inner,
                budget=args.budget,
                seed=args.seed,
                workers=args.workers,
                frames=frames,
            )
        else:  # monotonicity: one growing axis at the first grid point
            z0 = grid[0]
            steps = (
                _floats(args.steps) if args.steps else (0.1, 0.15, 0.2, 0.25, 0.3, 0.35)
            )
            base = (
                parse_radii_sets(args.radii, dim)[0]
                if args.radii
                else Ellipsoid((steps[0],) * dim)
            )
            config.update(
                {
                    "axis": args.axis,
                    "steps": list(steps),
                    "base": list(base.radii),
                    "frame": frames[0].label,
                }
            )
            verdict = monotonicity_scan(
                fn,
                z0,
                frames[0],
                base,
                args.axis,
                steps,
                args.budget,
                args.seed,
                workers=args.workers,
            )
            grid = [z0]
    payload = {
        "config": config,
        "result": {"verdict": to_plain(verdict)},
        "_grid": grid,
    }
    return payload, _STATUS_EXIT[verdict.status]


def _cmd_catalog(args) -> tuple[dict, int]:
    if args.filter is not None and args.filter not in LABELS:
        raise ConfigError(
            f"unknown label {args.filter!r}; choose from {', '.join(LABELS)}"
        )
    entries = catalog(args.filter)
    config = {"command": "catalog", "filter": args.filter}
    return (
        {"config": config, "result": {"entries": [to_plain(e) for e in entries]}},
        EXIT_CONSISTENT,
    )


def _cmd_scan(args) -> tuple[dict, int]:
    fn, dim, source = _resolve_function(args)
    if fn.family == "x":
        raise ConfigError("scan maps the ellipsoid operator; use a z-expression")
    grid = parse_grid(args.grid, 2 * dim, args.seed, True)
    frames = parse_frames(args.frames, dim, args.seed)
    outer = _outer_sched(args)
    inner = default_inner_schedule()
    rows = []
    for ip, z0 in enumerate(grid):
        est = d_upper(
            fn,
            z0,
            R_sched=outer,
            r_sched=inner,
            budget=args.budget,
            seed=args.seed,
            key=(ip,),
            workers=args.workers,
            frames=frames,
        )
        rows.append(
            {
                "point": to_plain(list(z0)),
                "value": est.value,
                "std_error": est.std_error,
                "frame": est.frame_label,
                "inconclusive": est.inconclusive,
            }
        )
    config = {
        "command": "scan",
        **source,
        "dim": dim,
        "grid": args.grid,
        "frames": args.frames,
        "budget": args.budget,
        "seed": args.seed,
        "outer_sched": _sched_echo(outer),
        "inner_sched": _sched_echo(inner),
    }
    return {"config": config, "result": {"field": rows}}, EXIT_CONSISTENT


# ---------------------------------------------------------------------------
# Argument plumbing


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--expr", help="expression text, e.g. 'abs(z1)^2-abs(z2)^2'")
    sub.add_argument("--catalog", help="built-in function name (see the catalog command)")
    sub.add_argument("--dim", type=int, help="ambient dimension override")
    sub.add_argument("--budget", type=int, help="Monte Carlo samples per mean")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--workers", type=int, help="threads for sample chunks")
    sub.add_argument("--backend", choices=("numpy", "cython"))
    sub.add_argument("--format", choices=("json", "csv"))
    sub.add_argument("--out", help="output path (default stdout)")
    sub.add_argument("--config", help="JSON file with defaults for these flags")
    sub.add_argument("--sched-ratio", type=float)
    sub.add_argument("--sched-count", type=int)
    sub.add_argument("--sched-window", type=int)
    sub.add_argument("--sched-base", type=float)


def build_parser() -> _Parser:
    parser = _Parser(prog="pshcheck", description=__doc__)
    parser.add_argument(
        "--version", action="version", version=f"pshcheck {__version__}"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_check = subs.add_parser("check", help="run a named consistency check over a grid")
    _add_common(p_check)
    p_check.add_argument("--check", required=True, choices=CHECK_NAMES)
    p_check.add_argument("--grid")
    p_check.add_argument("--frames")
    p_check.add_argument("--weight")
    p_check.add_argument("--radii", help="ellipsoid radii sets 'r1,..,rn;...'")
    p_check.add_argument("--r0", type=float)
    p_check.add_argument("--levels", type=int)
    p_check.add_argument("--t-nodes", type=int)
    p_check.add_argument("--axis", type=int)
    p_check.add_argument("--steps", help="increasing radii for monotonicity")
    p_check.add_argument("--domain-radius", type=float)

    p_mean = subs.add_parser("mean", help="one ellipsoid mean value")
    _add_common(p_mean)
    p_mean.add_argument("--radii")
    p_mean.add_argument("--center")
    p_mean.add_argument("--frame")

    p_lap = subs.add_parser("laplacian", help="pointwise operator estimate")
    _add_common(p_lap)
    p_lap.add_argument("--operator", choices=("bp", "p", "d"))
    p_lap.add_argument("--point")
    p_lap.add_argument("--weight")
    p_lap.add_argument("--frames")
    p_lap.add_argument("--t-nodes", type=int)

    p_cat = subs.add_parser("catalog", help="list built-in test functions")
    _add_common(p_cat)
    p_cat.add_argument("--filter")

    p_scan = subs.add_parser("scan", help="operator field over a grid")
    _add_common(p_scan)
    p_scan.add_argument("--grid")
    p_scan.add_argument("--frames")
    return parser


def _merge_config(args) -> None:
    """Fill unset options from the --config file, then from defaults.

    Explicit command-line flags always win; the file wins over built-in
    defaults.
    """
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                overrides = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ConfigError("config file must hold a JSON object")
        for raw_key, value in overrides.items():
            key = raw_key.replace("-", "_")
            if key == "command" or not hasattr(args, key):
                raise ConfigError(f"config file sets unknown option {raw_key!r}")
            if getattr(args, key) is None:
                setattr(args, key, value)
    defaults = {**_COMMON_DEFAULTS, **_CMD_DEFAULTS[args.command]}
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.format not in ("json", "csv"):
        raise ConfigError(f"unknown format {args.format!r}; use json or csv")
    if args.budget is None:
        args.budget = default_budget()
    args.budget = int(args.budget)
    args.seed = int(args.seed)
    args.workers = int(args.workers)
    if args.budget < 2:
        raise ConfigError(f"budget must be >= 2, got {args.budget}")
    if args.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {args.workers}")


def _emit(payload: dict, args, wall: float) -> None:
    grid = payload.pop("_grid", None)
    backend = args.backend if args.backend is not None else default_backend()
    if args.format == "csv":
        text = _to_csv_text(payload, grid)
    else:
        report = build_report(payload["config"], payload["result"], backend, wall)
        text = to_json(report) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv_text(payload: dict, grid) -> str:
    result = payload["result"]
    if "verdict" in result and grid is not None:
        return verdict_csv(result["verdict"], grid)
    if "estimate" in result:
        est = result["estimate"]
        if "per_radius" in est:
            header = ["radius", "quotient", "std_error", "noise_dominated", "minus_inf"]
            rows = [
                [p["radius"], p["quotient"], p["std_error"], p["noise_dominated"], p["minus_inf"]]
                for p in est["per_radius"]
            ]
            return to_csv(header, rows)
        header = ["value", "std_error", "samples", "hit_minus_infinity"]
        return to_csv(
            header,
            [[est["value"], est["std_error"], est["samples"], est["hit_minus_infinity"]]],
        )
    if "field" in result:
        header = ["point", "value", "std_error", "frame", "inconclusive"]
        rows = [
            [r["point"], r["value"], r["std_error"], r["frame"], r["inconclusive"]]
            for r in result["field"]
        ]
        return to_csv(header, rows)
    if "entries" in result:
        header = ["name", "dim", "label", "smoothness", "family", "text", "note"]
        rows = [
            [e["name"], e["dim"], e["label"], e["smoothness"], e["family"], e["text"], e["note"]]
            for e in result["entries"]
        ]
        return to_csv(header, rows)
    raise ConfigError("no CSV form for this result")


_COMMANDS = {
    "check": _cmd_check,
    "mean": _cmd_mean,
    "laplacian": _cmd_laplacian,
    "catalog": _cmd_catalog,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args)
        start = time.perf_counter()
        payload, code = _COMMANDS[args.command](args)
        wall = time.perf_counter() - start
        _emit(payload, args, wall)
        return code
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"expression error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PshcheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
