"""Command-line front end: eval, optimize, bounds, competitor, plot.

Exit codes: 0 on success, 2 on input errors (bad arguments, malformed
files), 3 on domain errors (well-formed input violating a precondition).
Whenever ``--out`` is given a run manifest is written next to it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import verify_bounds
from .competitor import verify_energy_inequalities
from .energy import DEFAULT_QUADRATURE, QuadratureConfig, total_energy
from .errors import DomainError, ElasticaError, InputError, ShapeFormatError
from .geometry import ConvexShape, load_shape, random_convex_shape
from .optimizer import METHODS, OptimizerConfig, minimize

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 2, 3


# ---------------------------------------------------------------------------
# output helpers


def _clean(obj):
    """JSON-safe copy: numpy scalars become floats, non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.replace(microsecond=0).isoformat()


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".manifest.json")


def write_manifest(args, config: dict, inputs, outputs) -> Path:
    """Record what produced ``outputs``; the outputs themselves carry no timestamp."""
    path = manifest_path(args.out)
    manifest = {
        "command": args.command,
        "inputs": [{"path": str(p), "sha256": _digest(p)} for p in inputs],
        "config": config,
        "version": __version__,
        "seed": args.seed,
        "timestamp": _timestamp(),
        "outputs": [str(p) for p in outputs],
    }
    path.write_text(dumps(manifest))
    return path


def _emit(args, payload: dict, config: dict, inputs, extra_outputs=()) -> None:
    if args.out is None:
        sys.stdout.write(dumps(payload))
        return
    out = Path(args.out)
    payload = dict(payload, manifest=manifest_path(out).name)
    out.write_text(dumps(payload))
    write_manifest(args, config, inputs, [out, *extra_outputs])


# ---------------------------------------------------------------------------
# argument parsing


def _quadrature(args) -> QuadratureConfig:
    fields = {"seed": args.seed, "method": args.quad_method}
    if args.quad_n is not None:
        fields["n_normal" if args.quad_method == "normal" else "n_theta"] = args.quad_n
    return QuadratureConfig(**{**DEFAULT_QUADRATURE.to_dict(), **fields})


_DISK = re.compile(r"^disk\(\s*([^)]+?)\s*\)$")


def parse_init(text: str, seed: int) -> ConvexShape:
    """``disk(R)``, ``random`` or a shape JSON path."""
    m = _DISK.match(text)
    if m:
        try:
            radius = float(m.group(1))
        except ValueError:
            raise InputError(f"bad disk radius in {text!r}") from None
        return ConvexShape.disk(radius)
    if text == "random":
        return random_convex_shape(np.random.default_rng(seed))
    return load_shape(text)


def parse_eps_list(text: str) -> list:
    try:
        values = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"bad --eps-list {text!r}") from None
    if not values or any(not (v > 0 and math.isfinite(v)) for v in values):
        raise InputError("--eps-list needs positive finite values")
    return values


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=float, default=1.0, help="distance exponent, p >= 1")
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0, help="elastica weight")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--quad-n", type=int, default=None,
                        help="angular resolution of the distance quadrature")
    parser.add_argument("--quad-method", choices=("normal", "polar"), default="normal")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elastica", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="energy of a shape")
    p.add_argument("shape")
    _common(p)

    p = sub.add_parser("optimize", help="minimise the energy")
    _common(p)
    p.add_argument("--init", default=None, help="disk(R), random or a shape file (default: best disk)")
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--k-max", type=int, default=16)
    p.add_argument("--method", choices=METHODS, default="projected-gradient")
    p.add_argument("--trace", default=None, help="trace CSV (default: <out>.trace.csv)")
    p.add_argument("--shape-out", default=None, help="final shape JSON (default: <out>.shape.json)")

    p = sub.add_parser("bounds", help="check the a-priori inequalities on a shape")
    p.add_argument("shape")
    _common(p)

    p = sub.add_parser("competitor", help="competitor sweep on a shape")
    p.add_argument("shape")
    _common(p)
    p.add_argument("--eps-list", default="0.02,0.01,0.005,0.0025")
    p.add_argument("--t1", type=float, default=None, help="arc-length start of the probe arc")
    p.add_argument("--svg", default=None, help="overlay of the boundary and the first competitor")

    p = sub.add_parser("plot", help="SVG of shapes or an energy trace")
    p.add_argument("files", nargs="+", help="shape JSON files or one trace CSV")
    p.add_argument("--svg", required=True)
    p.add_argument("--csv", default=None, help="also write sampled boundary points of the shapes")
    p.add_argument("--samples", type=int, default=512)
    return parser


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    shape = load_shape(args.shape).validate()
    q = _quadrature(args)
    br = total_energy(shape, args.p, args.lam, q)
    _emit(args, br.to_dict(), {"p": args.p, "lambda": args.lam, "quadrature": q.to_dict()}, [args.shape])
    return EXIT_OK


def cmd_optimize(args) -> int:
    q = _quadrature(args)
    config = OptimizerConfig(p=args.p, lam=args.lam, k_max=args.k_max, max_iters=args.max_iters,
                             method=args.method, seed=args.seed, quadrature=q)
    initial = parse_init(args.init, args.seed) if args.init else None
    trace = minimize(config, initial)
    final = trace.final_shape
    bounds = verify_bounds(final, args.p, args.lam, q)
    payload = {
        "converged": trace.converged,
        "status": trace.status,
        "iterations": trace.rows[-1].iter,
        "initial_energy": trace.rows[0].energy,
        "final_energy": trace.final_energy,
        "final_diameter": final.diameter_exact(),
        "bounds_all_satisfied": bounds.all_satisfied,
        "final_shape": final.to_json(),
        "config": config.to_dict(),
    }
    extra = []
    if args.out is not None:
        stem = Path(args.out).with_suffix("")
        trace_path = Path(args.trace) if args.trace else stem.with_name(stem.name + ".trace.csv")
        shape_path = Path(args.shape_out) if args.shape_out else stem.with_name(stem.name + ".shape.json")
        trace_path.write_text(trace.to_csv())
        shape_path.write_text(dumps(final.to_json()))
        payload["trace"], payload["shape"] = trace_path.name, shape_path.name
        extra = [trace_path, shape_path]
    inputs = [args.init] if args.init and Path(args.init).is_file() else []
    _emit(args, payload, config.to_dict(), inputs, extra)
    return EXIT_OK


def cmd_bounds(args) -> int:
    shape = load_shape(args.shape).validate()
    q = _quadrature(args)
    report = verify_bounds(shape, args.p, args.lam, q, shape_id=Path(args.shape).stem)
    if args.out is None:
        print(report.table())
        return EXIT_OK
    print(report.table(), file=sys.stderr)
    _emit(args, report.to_dict(), {"p": args.p, "lambda": args.lam, "quadrature": q.to_dict()}, [args.shape])
    return EXIT_OK


def cmd_competitor(args) -> int:
    shape = load_shape(args.shape).validate()
    eps_list = parse_eps_list(args.eps_list)
    report = verify_energy_inequalities(shape, eps_list, args.p, args.lam, t1=args.t1)
    extra = []
    if args.svg:
        from .plotting import plot_shapes

        if report.results:
            res = report.results[0]
            plot_shapes([res.original_curve, res.competitor_curve], args.svg,
                        labels=["boundary", f"competitor, eps={res.eps:g}"])
        else:
            plot_shapes([shape], args.svg, labels=["boundary"], title="no competitor built")
        extra.append(Path(args.svg))
    config = {"p": args.p, "lambda": args.lam, "eps_list": eps_list, "t1": args.t1}
    _emit(args, report.to_dict(), config, [args.shape], extra)
    return EXIT_OK


def _read_trace(path) -> list:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        return [float(r["energy"]) for r in rows]
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read trace {path}: {exc}") from None


def cmd_plot(args) -> int:
    from .plotting import plot_shapes, plot_trace

    if args.samples < 16:
        raise InputError("--samples must be at least 16")
    if all(str(f).endswith(".csv") for f in args.files):
        if len(args.files) != 1:
            raise InputError("plot takes a single trace CSV")
        plot_trace(_read_trace(args.files[0]), args.svg)
        return EXIT_OK
    if any(str(f).endswith(".csv") for f in args.files):
        raise InputError("cannot mix trace CSV and shape files")
    shapes = [load_shape(f).validate() for f in args.files]
    labels = [Path(f).stem for f in args.files] if len(shapes) > 1 else None
    plot_shapes(shapes, args.svg, labels=labels)
    if args.csv:
        from .geometry import boundary_from_shape

        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["shape", "x", "y"])
            for name, shape in zip(args.files, shapes):
                for x, y in boundary_from_shape(shape, args.samples).vertices:
                    writer.writerow([Path(name).stem, repr(float(x)), repr(float(y))])
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "optimize": cmd_optimize, "bounds": cmd_bounds,
            "competitor": cmd_competitor, "plot": cmd_plot}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ShapeFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ElasticaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
