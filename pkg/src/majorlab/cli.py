"""
Command-line front end: ``majorlab {sample,check,pi,exact,experiment}``.

Every subcommand prints one JSON envelope (or CSV where offered) on stdout
and keeps diagnostics on stderr. Exit status is 0 on success, 1 for a
negative ``check`` verdict and 2 for usage or validation errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__, exact
from .conversion import pi_maj, pi_ut
from .core import DistributionSpec, RngStream, profile, sample
from .montecarlo import (ExperimentConfig, Functional, bridge_persistence_check,
                         convergence_study, ecdf_pi, estimate_comparability)
from .orders import compare, relation

NORMALIZE_TOL = 1e-6


class UsageError(ValueError):
    pass


def parse_vector(text: str) -> np.ndarray:
    """Parse ``"0.2,0.5,0.3"``; rescale if the total is within 1e-6 of one."""
    try:
        v = np.array([float(s) for s in text.replace(" ", "").split(",") if s], dtype=float)
    except ValueError:
        raise UsageError(f"malformed vector {text!r}") from None
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise UsageError(f"malformed vector {text!r}")
    if np.any(v < 0):
        raise UsageError(f"vector {text!r} has negative entries")
    total = v.sum()
    if abs(total - 1.0) > NORMALIZE_TOL:
        raise UsageError(f"vector {text!r} sums to {total!r}, not 1")
    return v / total


def parse_grid(text: str) -> tuple:
    """``start:stop:step`` (stop included) or a comma-separated list."""
    if ":" in text:
        try:
            start, stop, step = (float(s) for s in text.split(":"))
        except ValueError:
            raise UsageError(f"malformed grid {text!r}") from None
        if step <= 0 or stop < start:
            raise UsageError(f"malformed grid {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    try:
        return tuple(float(s) for s in text.split(",") if s)
    except ValueError:
        raise UsageError(f"malformed grid {text!r}") from None


def _read_vectors(path: str, count: int) -> list[np.ndarray]:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) < count:
        raise UsageError(f"{path} holds {len(lines)} vectors, need {count}")
    return [parse_vector(ln) for ln in lines[:count]]


def _pair(args) -> tuple[np.ndarray, np.ndarray]:
    if args.file:
        x, y = _read_vectors(args.file, 2)
    else:
        if args.x is None or args.y is None:
            raise UsageError("give --x and --y, or --file")
        x, y = parse_vector(args.x), parse_vector(args.y)
    if x.shape != y.shape:
        raise UsageError(f"dimensions differ: {x.size} and {y.size}")
    return x, y


def _dist(args) -> DistributionSpec:
    if args.dist == "uniform":
        return DistributionSpec.uniform()
    if args.alpha is None:
        raise UsageError("--dist dirichlet needs --alpha")
    alpha = [float(a) for a in args.alpha.split(",")]
    return DistributionSpec.dirichlet(alpha[0] if len(alpha) == 1 else alpha)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MAJORLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"MAJORLAB_SEED={env!r} is not an integer") from None


def _clean(obj):
    """Make a payload JSON-safe: numpy to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def envelope(command: str, config: dict, results, timing_ms: int | None) -> str:
    env = {"command": command, "config": config, "results": results,
           "tool_version": __version__}
    if timing_ms is not None:
        env["timing_ms"] = timing_ms
    return json.dumps(_clean(env), allow_nan=False) + "\n"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}" if math.isfinite(v) else ""
    return str(v)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path: str, text: str):
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- subcommands ----------------------------------------------------------

def cmd_sample(args, t0):
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    dist = _dist(args)
    seed = _seed(args)
    X = sample(dist, args.n, RngStream(seed, 0), args.count) if args.count else np.empty((0, args.n))
    if args.format == "csv":
        return to_csv(None, X.tolist()), 0
    config = {"n": args.n, "dist": dist.describe(), "count": args.count, "seed": seed}
    return envelope("sample", config, {"vectors": X}, _ms(t0)), 0


def cmd_check(args, t0):
    x, y = _pair(args)
    rel = relation(args.rel, args.s)
    ok = compare(x, y, rel, args.tol)
    results = {"comparable": ok, "relation": str(rel),
               "profiles": {"x": profile(x, rel.kind).values, "y": profile(y, rel.kind).values}}
    config = {"x": x, "y": y, "rel": args.rel, "s": args.s, "tol": args.tol}
    return envelope("check", config, results, _ms(t0)), 0 if ok else 1


def cmd_pi(args, t0):
    x, y = _pair(args)
    res = (pi_maj if args.kind == "maj" else pi_ut)(x, y)
    results = {"p_star": float(f"{res.p_star:.12g}"), "argmin_k": res.argmin_k}
    return envelope("pi", {"kind": args.kind, "x": x, "y": y}, results, _ms(t0)), 0


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--law {args.law} needs --{name}")


def cmd_exact(args, t0):
    law = args.law
    if law == "pcomp":
        _need(args, "n")
        results = {"value": exact.exact_p_comparable_ut(args.n)}
    elif law == "cdf":
        _need(args, "n", "t")
        results = {"value": exact.exact_cdf_pi_ut(args.n, args.t)}
    elif law == "dirbound":
        _need(args, "n", "alpha", "t")
        results = {"value": exact.dirichlet_bound(args.n, args.alpha, args.t)}
    elif law == "n3a2":
        _need(args, "t")
        if not 0 < args.t < 1:
            raise UsageError("--t must lie in (0, 1)")
        results = {"value": exact.example_cdf_n3_alpha2(args.t)}
    elif law == "bolshev":
        _need(args, "a")
        results = {"value": exact.bolshev(parse_grid(args.a))}
    else:  # bounds
        _need(args, "n")
        table = exact.bernstein_table(args.n)
        if args.k is not None:
            if not 1 <= args.k <= args.n:
                raise UsageError("--k must lie in 1..n")
            table = [table[args.k - 1]]
        results = {"rows": [dict(vars(d), chain_holds=d.chain_holds()) for d in table],
                   "all_hold": all(d.chain_holds() for d in table)}
    config = {k: getattr(args, k) for k in ("law", "n", "t", "alpha", "a", "k")
              if getattr(args, k) is not None}
    return envelope("exact", config, results, _ms(t0)), 0


def cmd_experiment(args, t0):
    seed = _seed(args)
    dist = _dist(args)
    threads = args.threads
    kind = args.kind
    if kind == "convergence":
        ns = [int(v) for v in args.n.split(",")]
        rows = convergence_study(args.eps, ns, args.samples, seed, dist, threads)
        config = {"kind": kind, "eps": args.eps, "n": ns, "samples": args.samples,
                  "seed": seed, "dist": dist.describe()}
        header = ["n", "p_hat", "stderr", "median"]
        table = [[r.n, r.p_hat, r.stderr, r.median] for r in rows]
        results = {"rows": [vars(r) for r in rows]}
    else:
        n = int(args.n)
        if kind == "ecdf":
            if args.grid is None:
                raise UsageError("--kind ecdf needs --grid")
            cfg = ExperimentConfig(Functional(args.functional), dist, n, args.samples, seed,
                                   grid=parse_grid(args.grid))
            tab = ecdf_pi(cfg, threads)
            header = ["t", "estimate", "stderr", "exact_ref", "z"]
            ref = tab.exact_ref if tab.exact_ref is not None else [None] * len(tab.t)
            z = tab.z if tab.z is not None else [None] * len(tab.t)
            table = [list(r) for r in zip(tab.t, tab.F, tab.stderr, ref, z)]
            results = tab.to_dict()
        else:
            if kind == "comp":
                cfg = ExperimentConfig(relation(args.rel, args.s), dist, n, args.samples, seed)
                res = estimate_comparability(cfg, threads)
            else:  # bridge
                cfg = ExperimentConfig(relation("ut"), dist, n, args.samples, seed)
                res = bridge_persistence_check(n, args.samples, dist, seed, threads=threads)
            header = ["estimate", "stderr", "samples", "count", "exact_ref", "z"]
            table = [[res.estimate, res.stderr, res.samples, res.count, res.exact_ref,
                      res.z_score]]
            results = res.to_dict()
        config = dict(cfg.describe(), kind=kind)
    if args.format == "csv":
        text = to_csv(header, table)
        if args.out:
            write_atomic(args.out, text)
        return text, 0
    if args.out:
        # no timing in the file: reruns must be byte-identical
        write_atomic(args.out, envelope("experiment", config, results, None))
    return envelope("experiment", config, results, _ms(t0)), 0


def _ms(t0) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="majorlab", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_dist(sp):
        sp.add_argument("--dist", choices=["uniform", "dirichlet"], default="uniform")
        sp.add_argument("--alpha", help="Dirichlet parameter, one value or one per coordinate")

    def add_pair(sp):
        sp.add_argument("--x")
        sp.add_argument("--y")
        sp.add_argument("--file", help="CSV file with x on line 1 and y on line 2")

    sp = sub.add_parser("sample", help="draw points of the simplex")
    sp.add_argument("--n", type=int, required=True)
    add_dist(sp)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=["json", "csv"], default="csv")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("check", help="test whether x is below y")
    sp.add_argument("--rel", choices=["maj", "wmaj", "ut", "wut", "sdom"], required=True)
    sp.add_argument("--s", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=1e-9)
    add_pair(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("pi", help="maximal conversion probability")
    sp.add_argument("--kind", choices=["maj", "ut"], required=True)
    add_pair(sp)
    sp.set_defaults(func=cmd_pi)

    sp = sub.add_parser("exact", help="closed-form laws and diagnostics")
    sp.add_argument("--law", choices=["pcomp", "cdf", "dirbound", "n3a2", "bolshev", "bounds"],
                    required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--t", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--a", help="band a_1,...,a_m (nondecreasing)")
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("experiment", help="Monte Carlo experiments")
    sp.add_argument("--kind", choices=["comp", "ecdf", "convergence", "bridge"], required=True)
    sp.add_argument("--rel", choices=["maj", "wmaj", "ut", "wut", "sdom"], default="ut")
    sp.add_argument("--s", type=float, default=0.0)
    sp.add_argument("--functional", choices=["pimaj", "piut"], default="piut")
    add_dist(sp)
    sp.add_argument("--n", required=True, help="dimension (comma list for convergence)")
    sp.add_argument("--eps", type=float, default=0.3)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--grid", help="start:stop:step (inclusive) or comma list")
    sp.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out", help="also write the output to this file")
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        text, code = args.func(args, t0)
    except (UsageError, ValueError, OSError) as exc:
        print(f"majorlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
