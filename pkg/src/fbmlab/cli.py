"""Command-line front end: kernel tables, inequality audits, exponent
experiments, bound tables, and raw path export.

Every artifact embeds the full run configuration, outputs carry no timestamps,
and all floats print at 17 significant digits, so a rerun with the same config
and seed is byte-identical.

Exit codes: 0 success (and all audits passed), 1 failed audit or runtime
failure, 2 invalid arguments or selector.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import audit, kernels, persistence, sampler

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _parse_grid_1d(spec: str) -> np.ndarray:
    """``lo:hi:n`` (linear) or ``lo:hi:n:log`` (log-spaced) evaluation grid."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"bad grid spec {spec!r}, expected lo:hi:n[:log]")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or hi < lo:
        raise ValueError(f"bad grid spec {spec!r}")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ValueError(f"bad grid spec {spec!r}")
        if lo <= 0:
            raise ValueError("log grid needs lo > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _parse_ladder(spec: str) -> tuple[float, ...]:
    """Comma-separated horizons, or ``lo:hi:n`` for a linear ladder."""
    if ":" in spec:
        return tuple(float(v) for v in _parse_grid_1d(spec))
    return tuple(float(v) for v in spec.split(","))


def _kernel_id(name: str, hurst: float | None) -> kernels.KernelId:
    kinds = {
        "ifbm": kernels.KernelKind.DUAL_IFBM,
        "fbm": kernels.KernelKind.DUAL_FBM,
        "ifbm-half": kernels.KernelKind.DUAL_IFBM_HALF,
    }
    if name not in kinds:
        raise ValueError(f"unknown kernel {name!r}")
    kind = kinds[name]
    if kind is kernels.KernelKind.DUAL_IFBM_HALF:
        return kernels.KernelId(kind)
    if hurst is None:
        raise ValueError(f"kernel {name!r} requires --hurst")
    return kernels.KernelId(kind, hurst)


def cmd_kernel_eval(args) -> int:
    kid = _kernel_id(args.kernel, args.hurst)
    ts = _parse_grid_1d(args.grid)
    vals = kernels.kernel_corr(kid, ts)
    config = {
        "command": "kernel-eval",
        "kernel": args.kernel,
        "hurst": args.hurst,
        "grid": args.grid,
    }
    with Path(args.out).open("w") as fh:
        fh.write("# " + json.dumps(config, sort_keys=True) + "\n")
        fh.write("t,value\n")
        for t, v in zip(ts, np.atleast_1d(vals)):
            fh.write(f"{_fmt(t)},{_fmt(v)}\n")
    return EXIT_OK


def cmd_audit(args) -> int:
    selector = args.inequality
    valid = {i.value for i in audit.Inequality}
    if selector not in valid | {"all", "claims"}:
        print(f"invalid selector {selector!r}; choose one of "
              f"{sorted(valid)} or 'all' or 'claims'", file=sys.stderr)
        return EXIT_USAGE
    config = {"command": "audit", "inequality": selector, "grid": args.grid}
    grid = None
    if args.grid:
        parts = args.grid.split(":")
        if len(parts) != 2:
            print(f"bad grid spec {args.grid!r}, expected nx:nalpha", file=sys.stderr)
            return EXIT_USAGE
        grid = audit.GridSpec(nx=int(parts[0]), nalpha=int(parts[1]))

    payload: dict = {"config": config}
    all_pass = True
    if selector == "claims":
        claims = audit.check_claims()
        payload["claims"] = [c.to_dict() for c in claims]
        all_pass = all(c.passed for c in claims)
    else:
        targets = (
            list(audit.Inequality) if selector == "all"
            else [audit.Inequality(selector)]
        )
        reports = [audit.verify_inequality(t, grid) for t in targets]
        payload["reports"] = [r.to_dict() for r in reports]
        all_pass = all(r.passed for r in reports)
    payload["pass"] = all_pass
    Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if all_pass else EXIT_FAIL


def cmd_estimate(args) -> int:
    side = persistence.Side(args.side)
    ladder = (
        persistence.HorizonLadder(_parse_ladder(args.ladder), side)
        if args.ladder
        else persistence.default_ladder(side)
    )
    cfg = persistence.ExperimentConfig(
        process=args.process,
        batch=args.batch,
        dt=args.dt,
        ladder=ladder,
        level=args.level,
        master_seed=args.seed,
        mesh_check=not args.no_mesh_check,
    )
    est = persistence.experiment(args.hurst, side, cfg)
    est.save_csv(args.out)
    if args.format == "json":
        Path(args.out).with_suffix(".json").write_text(
            json.dumps(est.to_dict(), indent=2, sort_keys=True) + "\n"
        )
    return EXIT_OK


def cmd_bounds(args) -> int:
    hs = _parse_grid_1d(args.grid)
    rows = persistence.bounds_table(hs)
    config = {"command": "bounds", "grid": args.grid}
    out = Path(args.out)
    with out.open("w") as fh:
        fh.write("# " + json.dumps(config, sort_keys=True) + "\n")
        fh.write("H,lower,upper,hypothesis,lower_clause,upper_clause\n")
        for r in rows:
            fh.write(
                f"{_fmt(r.H)},{_fmt(r.lower)},{_fmt(r.upper)},{_fmt(r.hypothesis)},"
                f"\"{r.lower_clause}\",\"{r.upper_clause}\"\n"
            )
    # companion column file for plotting tools: H lower hypothesis upper
    plot = out.with_suffix(out.suffix + ".dat")
    with plot.open("w") as fh:
        fh.write("# " + json.dumps(config, sort_keys=True) + "\n")
        fh.write("# H lower hypothesis upper\n")
        for r in rows:
            fh.write(f"{_fmt(r.H)} {_fmt(r.lower)} {_fmt(r.hypothesis)} {_fmt(r.upper)}\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    parts = args.grid.split(":")
    if len(parts) != 2:
        print(f"bad grid spec {args.grid!r}, expected n:dt", file=sys.stderr)
        return EXIT_USAGE
    grid = sampler.SampleGrid(n=int(parts[0]), dt=float(parts[1]))
    seed = sampler.SeedSpec(args.seed, args.stream)
    if args.process == "fgn":
        bundle = sampler.sample_fgn(args.hurst, grid, args.batch, seed)
    elif args.process == "fbm":
        bundle = sampler.sample_fbm(args.hurst, grid, args.batch, seed)
    elif args.process == "ifbm":
        bundle = sampler.sample_ifbm(args.hurst, grid, args.batch, seed)
    elif args.process == "stationary":
        kid = _kernel_id(args.kernel, args.hurst)
        bundle = sampler.sample_stationary(kid, grid, args.batch, seed)
    else:
        print(f"unknown process {args.process!r}", file=sys.stderr)
        return EXIT_USAGE
    bundle.notes["config"] = {
        "command": "sample",
        "process": args.process,
        "kernel": args.kernel,
        "hurst": args.hurst,
        "grid": args.grid,
        "batch": args.batch,
        "master_seed": args.seed,
        "stream_index": args.stream,
        "format": args.format,
    }
    if args.format == "csv":
        bundle.save_csv(args.out)
    else:
        bundle.save_binary(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fbmlab",
        description="Persistence laboratory for fractional Brownian motion "
        "and its running integral.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel-eval", help="tabulate a dual correlation kernel")
    k.add_argument("--kernel", required=True, choices=["ifbm", "fbm", "ifbm-half"])
    k.add_argument("--hurst", type=float, default=None)
    k.add_argument("--grid", required=True, help="t grid, lo:hi:n[:log]")
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_kernel_eval)

    a = sub.add_parser("audit", help="verify correlation inequalities and claims")
    a.add_argument("--inequality", default="all",
                   help="ifbm-reflection | ifbm-vs-fbm | ifbm-vs-half | "
                        "ifbm-vs-half-linear | ifbm-vs-half-sqrt | all | claims")
    a.add_argument("--grid", default=None, help="audit grid, nx:nalpha")
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_audit)

    e = sub.add_parser("estimate", help="Monte Carlo persistence exponent")
    e.add_argument("--hurst", type=float, required=True)
    e.add_argument("--side", default="dual", choices=["dual", "self-similar"])
    e.add_argument("--process", default="ifbm", choices=["ifbm", "fbm"])
    e.add_argument("--ladder", default=None,
                   help="horizons: comma list or lo:hi:n")
    e.add_argument("--batch", type=int, default=100_000)
    e.add_argument("--dt", type=float, default=0.05)
    e.add_argument("--level", type=float, default=1.0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--no-mesh-check", action="store_true")
    e.add_argument("--format", default="csv", choices=["csv", "json"])
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_estimate)

    b = sub.add_parser("bounds", help="proven exponent bounds vs the H(1-H) hypothesis")
    b.add_argument("--grid", required=True, help="H grid, lo:hi:n")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sample", help="export raw sampled paths")
    s.add_argument("--process", required=True,
                   choices=["fgn", "fbm", "ifbm", "stationary"])
    s.add_argument("--kernel", default=None, choices=["ifbm", "fbm", "ifbm-half"])
    s.add_argument("--hurst", type=float, default=None)
    s.add_argument("--grid", required=True, help="sample grid, n:dt")
    s.add_argument("--batch", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--stream", type=int, default=0)
    s.add_argument("--format", default="binary", choices=["csv", "binary"])
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize other codes
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, sampler.EmbeddingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
