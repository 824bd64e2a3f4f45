"""Command-line front end: ``invsub {bound,sample,verify,diagnose,density}``.

Exit codes are 0 on success, 1 on a domain error or a failed check, and 2
on a usage error (bad flags, malformed spec). Every file written with
``--out`` gets a ``<out>.meta.json`` sidecar holding everything needed to
reproduce it. Floats are printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import struct
import sys
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import density as dens
from . import samplers as smp
from . import verify as ver
from .bounds import NOT_ID, bound_curve, closed_form_log_bound, diagnose_id, is_trivial
from .exponents import DomainError, Subordinator, parse_spec

FMT = "%.17g"


def _version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _g(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "nan"
    return FMT % v


# -- argument types -----------------------------------------------------------


def spec_arg(text: str) -> Subordinator:
    """``family:p1,p2``, a JSON object, or a path to a JSON file."""
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return parse_spec(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def waiting_arg(text: str) -> smp.WaitingTime:
    """``exp:RATE``, ``det:C`` or ``gamma:SHAPE,SCALE``."""
    kind, _, rest = text.partition(":")
    names = {"exp": "exponential", "exponential": "exponential", "det": "deterministic",
             "deterministic": "deterministic", "gamma": "gamma"}
    try:
        args = float_list(rest)
        return smp.WaitingTime(names[kind.strip().lower()], *args)
    except (KeyError, TypeError, DomainError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(
            f"bad waiting-time law {text!r}; use exp:RATE, det:C or gamma:SHAPE,SCALE"
        ) from None


def _add_grid(p, name, help_name=None):
    help_name = help_name or name
    p.add_argument(f"--{name}", type=float_list, help=f"explicit {help_name} values, comma-separated")
    p.add_argument(f"--{name}-min", type=float)
    p.add_argument(f"--{name}-max", type=float)
    p.add_argument(f"--{name}-points", type=int, default=50, help="points in the log-spaced grid")


def _grid(parser, args, name, default=None):
    vals = getattr(args, name)
    lo, hi, pts = (getattr(args, f"{name}_{k}") for k in ("min", "max", "points"))
    if vals is not None and (lo is not None or hi is not None):
        parser.error(f"give either --{name} or --{name}-min/--{name}-max, not both")
    if vals is not None:
        return np.asarray(vals, dtype=float)
    if lo is None and hi is None:
        if default is None:
            parser.error(f"--{name} or --{name}-min/--{name}-max is required")
        return np.asarray(default, dtype=float)
    if lo is None or hi is None or not 0 < lo < hi or pts < 2:
        parser.error(f"need 0 < --{name}-min < --{name}-max and --{name}-points >= 2")
    return np.geomspace(lo, hi, pts)


# -- output -------------------------------------------------------------------


def _open_out(path, binary=False):
    if path in (None, "-"):
        return sys.stdout.buffer if binary else sys.stdout
    return open(path, "wb" if binary else "w", newline="" if not binary else None)


def _emit_text(path, text):
    fh = _open_out(path)
    fh.write(text)
    if fh is not sys.stdout:
        fh.close()


def write_sample(values, fmt, path):
    values = np.asarray(values, dtype=float).ravel()
    if fmt == "f64le":
        fh = _open_out(path, binary=True)
        fh.write(struct.pack("<Q", values.size))
        fh.write(values.astype("<f8").tobytes())
        if fh is not sys.stdout.buffer:
            fh.close()
        else:
            fh.flush()
    elif fmt == "json":
        _emit_text(path, json.dumps([float(v) for v in values]) + "\n")
    else:
        _emit_text(path, "".join(_g(v) + "\n" for v in values.tolist()))


def read_sample(path, fmt=None) -> np.ndarray:
    """Read a sample written by :func:`write_sample`.

    The format comes from ``fmt``, then the sidecar, then the file extension.
    """
    if fmt is None:
        meta = path + ".meta.json"
        if os.path.exists(meta):
            with open(meta) as fh:
                fmt = json.load(fh).get("format")
    if fmt is None:
        ext = os.path.splitext(path)[1].lower()
        fmt = {".json": "json", ".f64": "f64le", ".bin": "f64le", ".f64le": "f64le"}.get(ext, "csv")
    if fmt == "f64le":
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) < 8:
            raise DomainError(f"{path}: missing count header")
        (count,) = struct.unpack("<Q", raw[:8])
        if len(raw) != 8 + 8 * count:
            raise DomainError(f"{path}: header says {count} values, file holds {(len(raw) - 8) / 8:g}")
        return np.frombuffer(raw[8:], dtype="<f8").astype(float)
    if fmt == "json":
        with open(path) as fh:
            return np.asarray(json.load(fh), dtype=float)
    return np.loadtxt(path, dtype=float, ndmin=1)


def write_meta(args, meta):
    """Write ``<out>.meta.json``; ``argv`` in it replays the run exactly."""
    path = args.out
    if path in (None, "-"):
        return
    meta = {"version": _version(), "argv": args.argv, **meta}
    with open(path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _spec_meta(spec):
    return None if spec is None else json.loads(spec.to_json())


# -- subcommands --------------------------------------------------------------


def cmd_bound(args, parser):
    grid = _grid(parser, args, "x")
    spec, t, p = args.spec, args.t, args.p
    curve = bound_curve(spec, t, np.sort(grid), p)
    levels = curve.x_grid ** (1.0 / p)
    closed = np.array([math.exp(closed_form_log_bound(spec, t, lv)) for lv in levels])
    regime = np.where(is_trivial(spec, t, levels), "trivial", "chernoff")
    rows = list(zip(curve.x_grid.tolist(), curve.bound.tolist(), closed.tolist(), curve.ratio.tolist(), regime))
    if args.format == "json":
        out = {
            "spec": _spec_meta(spec), "t": t, "p": p,
            "rows": [
                {"x": x, "bound": b, "closed_form": c, "ratio": None if math.isnan(r) else r, "regime": g}
                for x, b, c, r, g in rows
            ],
        }
        _emit_text(args.out, json.dumps(out, indent=2) + "\n")
    else:
        lines = ["x,bound,closed_form,ratio,regime\n"]
        lines += [f"{_g(x)},{_g(b)},{_g(c)},{_g(r)},{g}\n" for x, b, c, r, g in rows]
        _emit_text(args.out, "".join(lines))
    write_meta(args, {"subcommand": "bound", "spec": _spec_meta(spec), "t": t, "p": p,
                          "x": curve.x_grid.tolist(), "format": args.format})
    return 0


def _sampler(args, parser):
    """Return ``(fn(rng, m), meta)`` for the requested target."""
    target, t, dt = args.target, args.t, args.dt

    def need(*names):
        missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
        if missing:
            parser.error(f"--target {target} needs {' '.join(missing)}")

    meta = {"target": target, "t": t, "dt": dt}
    if target in ("increment", "inverse"):
        need("spec")
        spec = args.spec
        meta["spec"] = _spec_meta(spec)
        if target == "increment":
            return (lambda rng, m: smp.sample_increment(spec, t, rng, m)), meta
        if dt is None and not spec.family == "stable":
            dt = 1e-2 * max(t, 1.0)
            if spec.family == "tempered":
                dt = min(dt, smp.TEMPER_LIMIT / spec.lam**spec.alpha)
            meta["dt"] = dt
        return (lambda rng, m: ver.inverse_draws(spec, t, m, rng, dt)), meta
    if target == "composed":
        need("alphas")
        meta["alphas"] = args.alphas
        return (lambda rng, m: smp.sample_composed_iss(args.alphas, t, rng, m)), meta
    if target == "fracpoisson":
        need("lam", "alpha")
        meta.update(lam=args.lam, alpha=args.alpha)
        return (lambda rng, m: smp.sample_fractional_poisson(args.lam, args.alpha, t, rng, m).astype(float)), meta
    if target == "renewal":
        need("waiting")
        w, alpha = args.waiting, args.alpha
        meta.update(waiting={"kind": w.kind, "a": w.a, "b": w.b}, alpha=alpha)

        def renewal(rng, m):
            clock = t if alpha is None or alpha == 1 else smp.sample_inverse_stable_exact(alpha, t, rng, m)
            return np.asarray(smp.sample_renewal_count(w, clock, rng, m if np.ndim(clock) == 0 else None), dtype=float)

        return renewal, meta
    if target == "timechanged":
        need("alpha")
        outer = args.outer
        step = 1.0 if dt is None else dt
        if outer is not None and outer.family == "tempered":
            step = min(step, smp.TEMPER_LIMIT / outer.lam**outer.alpha)
        meta.update(alpha=args.alpha, outer=_spec_meta(outer), dt=step)
        return (lambda rng, m: smp.sample_time_changed_iss(args.alpha, outer, t, step, rng, m)), meta
    parser.error(f"unknown target {target!r}")


def cmd_sample(args, parser):
    if args.n < 0:
        parser.error("--n must be >= 0")
    fn, meta = _sampler(args, parser)
    draws = smp.parallel_draws(fn, args.n, args.seed, args.streams, args.workers)
    write_sample(draws, args.format, args.out)
    meta.update(subcommand="sample", n=args.n, seed=args.seed, streams=args.streams, format=args.format)
    write_meta(args, meta)
    return 0


def _run_suite(args, parser):
    s, n, seed = args.suite, args.n, args.seed
    if s == "selfsim":
        if args.input:
            parser.error("--input is only supported by the composition suite")
        return ver.selfsim(args.alpha or 0.5, args.c, args.t or 1.0, n or 100_000, seed)
    if s == "composition":
        alphas = args.alphas or [0.8, 0.75]
        if args.input:
            lhs = read_sample(args.input)
            t = args.t or 1.0
            target = math.prod(alphas)
            rhs = smp.sample_inverse_stable_exact(target, t, smp.RngStream(seed, 1).generator(), n or lhs.size)
            rep = ver.ks_report(f"composition {args.input} vs alpha={target:.6g}", lhs, rhs, 0.01)
            return ver.SuiteResult("composition", [rep])
        return ver.composition(alphas, args.t or 1.0, n or 100_000, seed)
    if s == "tailbound":
        if args.spec is None:
            parser.error("tailbound needs --spec")
        grid = None if args.x is None and args.x_min is None else _grid(parser, args, "x")
        return ver.tailbound(args.spec, args.t or 1.0, n or 1_000_000, seed, grid, args.dt)
    if s == "renewal-limit":
        w = args.waiting or smp.WaitingTime.exponential(2.0)
        return ver.renewal_limit(args.alpha or 0.5, w, args.t or 1e4, n or 10_000, seed)
    if s == "timechange-limit":
        outer = args.outer or parse_spec("gamma:1,1")
        return ver.timechange_limit(args.alpha or 0.5, outer, args.t or 1e4, n or 10_000, seed, dt=args.dt or 1.0)
    if s == "lt-consistency":
        if args.spec is None:
            parser.error("lt-consistency needs --spec")
        return ver.lt_consistency(args.spec, n or 1_000_000, seed, dt=args.dt or 1.0)
    parser.error(f"unknown suite {s!r}")


def cmd_verify(args, parser):
    res = _run_suite(args, parser)
    out = res.to_dict()
    out["seed"] = args.seed
    _emit_text(args.out, json.dumps(out, indent=2, default=float) + "\n")
    write_meta(args, {"subcommand": "verify", "suite": args.suite, "seed": args.seed, "format": "json"})
    return 0 if res.passed else 1


def cmd_diagnose(args, parser):
    grid = _grid(parser, args, "x", default=np.geomspace(10.0, 1e12, 111))
    diag = diagnose_id(args.spec, args.t, np.sort(grid), args.p, args.margin)
    out = {"spec": _spec_meta(args.spec), "t": args.t, "p": args.p, **diag.to_dict(),
           "not_id": diag.verdict == NOT_ID}
    _emit_text(args.out, json.dumps(out, indent=2) + "\n")
    curve_path = args.curve or (None if args.out in (None, "-") else args.out + ".curve.csv")
    if curve_path:
        _emit_text(curve_path, diag.curve.to_csv())
    write_meta(args, {"subcommand": "diagnose", "spec": _spec_meta(args.spec), "t": args.t,
                          "p": args.p, "margin": args.margin, "curve": curve_path, "format": "json"})
    return 0


def cmd_density(args, parser):
    kind = args.kind
    if kind == "inverse":
        if args.spec is None:
            parser.error("--kind inverse needs --spec")
        xs, ts = _grid(parser, args, "x"), _grid(parser, args, "t")
        if xs.size > 1 and ts.size > 1:
            parser.error("sweep one of x or t; the other must be a single value")
        cfg = dens.LTInversionConfig(args.method, args.terms or (32 if args.method == "talbot" else 14))
        sweep, var = (ts, "t") if xs.size == 1 else (xs, "x")
        vals = [dens.inverse_subordinator_density(args.spec, float(x), float(t), cfg) for x, t in np.broadcast(xs, ts)]
        low = dens.low_confidence(np.broadcast_to(xs, sweep.shape), np.broadcast_to(ts, sweep.shape))
        lines = [f"{var},density,low_confidence\n"]
        lines += [f"{_g(s)},{_g(v)},{int(l)}\n" for s, v, l in zip(sweep.tolist(), vals, low.tolist())]
        meta = {"spec": _spec_meta(args.spec), "x": xs.tolist(), "t": ts.tolist(),
                "method": cfg.method, "terms": cfg.terms}
    elif kind == "erlang":
        if args.lam is None:
            parser.error("--kind erlang needs --lambda")
        ts = _grid(parser, args, "t")
        vals = np.atleast_1d(dens.erlang_pdf(args.shape, args.lam, ts))
        lines = ["t,density\n"] + [f"{_g(t)},{_g(v)}\n" for t, v in zip(ts.tolist(), vals.tolist())]
        meta = {"shape": args.shape, "lambda": args.lam, "t": ts.tolist()}
    else:
        if args.spec is None:
            parser.error("--kind family needs --spec")
        ts, ys = _grid(parser, args, "t"), _grid(parser, args, "y")
        if ts.size != 1:
            parser.error("--kind family takes a single --t")
        vals = np.atleast_1d(dens.family_pdf(args.spec, float(ts[0]), ys))
        lines = ["y,density\n"] + [f"{_g(y)},{_g(v)}\n" for y, v in zip(ys.tolist(), vals.tolist())]
        meta = {"spec": _spec_meta(args.spec), "t": float(ts[0]), "y": ys.tolist()}
    _emit_text(args.out, "".join(lines))
    write_meta(args, {"subcommand": "density", "kind": kind, "format": "csv", **meta})
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invsub", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default stdout); also writes <out>.meta.json")
    common.add_argument("--seed", type=int, default=0, help="root seed (default 0)")

    b = sub.add_parser("bound", parents=[common], help="Chernoff tail bound of E(t) on an x grid")
    b.add_argument("--spec", type=spec_arg, required=True, help="family:params, JSON, or a JSON file")
    b.add_argument("--t", type=float, required=True)
    b.add_argument("--p", type=float, default=1.0, help="bound P(E(t)**p > x)")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_grid(b, "x")

    s = sub.add_parser("sample", parents=[common], help="draw samples")
    s.add_argument("--target", required=True,
                   choices=("increment", "inverse", "composed", "fracpoisson", "renewal", "timechanged"))
    s.add_argument("--spec", type=spec_arg, help="subordinator for increment and inverse")
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--dt", type=float, help="grid step (default 1e-2*max(t,1) for inverse)")
    s.add_argument("--alphas", type=float_list, help="comma list of indices for composed")
    s.add_argument("--alpha", type=float, help="inverse stable clock index")
    s.add_argument("--lambda", dest="lam", type=float, help="Poisson rate for fracpoisson")
    s.add_argument("--waiting", type=waiting_arg, help="exp:RATE, det:C or gamma:SHAPE,SCALE")
    s.add_argument("--outer", type=spec_arg, help="outer clock for --target timechanged")
    s.add_argument("--streams", type=int, default=1, help="split n over this many RNG streams")
    s.add_argument("--workers", type=int, default=1, help="threads; output does not depend on it")
    s.add_argument("--format", choices=("csv", "json", "f64le"), default="csv")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=ver.SUITES)
    v.add_argument("--spec", type=spec_arg)
    v.add_argument("--t", type=float)
    v.add_argument("--n", type=int)
    v.add_argument("--dt", type=float)
    v.add_argument("--alpha", type=float)
    v.add_argument("--alphas", type=float_list)
    v.add_argument("--c", type=float, default=2.0)
    v.add_argument("--waiting", type=waiting_arg)
    v.add_argument("--outer", type=spec_arg)
    v.add_argument("--input", help="sample file to test (composition suite)")
    _add_grid(v, "x")

    d = sub.add_parser("diagnose", parents=[common], help="infinite-divisibility diagnostic")
    d.add_argument("--spec", type=spec_arg, required=True)
    d.add_argument("--t", type=float, default=1.0)
    d.add_argument("--p", type=float, default=1.0)
    d.add_argument("--margin", type=float, default=0.1)
    d.add_argument("--curve", help="ratio curve CSV path (default <out>.curve.csv)")
    _add_grid(d, "x")

    q = sub.add_parser("density", parents=[common], help="density curves")
    q.add_argument("--kind", choices=("inverse", "erlang", "family"), default="inverse")
    q.add_argument("--spec", type=spec_arg)
    q.add_argument("--method", choices=("talbot", "gaver"), default="talbot")
    q.add_argument("--terms", type=int)
    q.add_argument("--shape", type=int, default=1, help="Erlang shape n")
    q.add_argument("--lambda", dest="lam", type=float)
    _add_grid(q, "x")
    _add_grid(q, "t")
    _add_grid(q, "y")
    return parser


COMMANDS = {
    "bound": cmd_bound,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "diagnose": cmd_diagnose,
    "density": cmd_density,
}


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return COMMANDS[args.command](args, parser)
    except (DomainError, dens.InversionError) as exc:
        print(f"invsub {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
