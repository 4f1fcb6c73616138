"""Command-line front end.

Subcommands: code-info, adversary, transmit, decode,
analyze {bottleneck|mixing|sandwich|bound}, verify-grid.

Reports are JSON by default and embed the full parameter set, the seed, the
library version, and the wall-clock duration; curve data (TV curves, chain
trajectories) is also available as CSV. The exit code is 0 iff every
assertion the command makes passed.

Seed streams: the chain uses (seed, 0); random received sequences draw the
message from (seed, 1) and push it through the channel keyed by seed + 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Optional

import numpy as np

from . import __version__, _backend, adversary, analysis, channel, gibbs, rmcode
from .errors import RmGibbsError
from .gf2 import BitVector

DEFAULT_CAP_K = channel.DEFAULT_K_CAP
DEFAULT_CAP_N = rmcode.DEFAULT_N_CAP


def _json_default(obj):
    # numpy scalars leak into reports from vectorized code paths
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _emit(args, payload: dict, params: dict, passed: Optional[bool], t0: float,
          csv_rows=None, csv_header=None) -> int:
    report = {
        "command": args.command if args.command != "analyze" else f"analyze-{args.kind}",
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "backend": _backend.backend_name(),
        "duration_s": round(time.perf_counter() - t0, 6),
        "passed": passed,
    }
    report.update(payload)
    if args.format == "csv":
        if csv_rows is None:
            raise RmGibbsError(f"--format csv is not available for {report['command']}")
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, default=_json_default)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)
    return 0 if passed in (True, None) else 1


def _matrix_preview(code, limit_bits: int = 1 << 12):
    if code.k * code.n <= limit_bits:
        return [row.to01() for row in code.G.rows]
    return [row.to01() for row in code.G.rows[:4]] + [f"... ({code.k} rows total)"]


def _resolve_y(args, code) -> tuple[BitVector, dict]:
    source = args.y_source
    if source == "adversarial":
        y = adversary.build_y(code.m, channel.BscParams(args.p).q)
        return y, {"y_source": "adversarial"}
    if source == "random":
        rng = channel.chain_rng(args.seed, 1)
        bits = rng.integers(0, 2, size=code.k).astype(np.uint8)
        msg = BitVector.from_array(bits)
        y = channel.transmit(code.encode(msg), args.p, args.seed + 1)
        return y, {"y_source": "random", "true_message": msg.to01()}
    if source == "file":
        if not args.y_file:
            raise RmGibbsError("--y-source file requires --y-file")
        with open(args.y_file) as fh:
            y = BitVector.from01(fh.read().strip())
        return y, {"y_source": f"file:{args.y_file}"}
    raise RmGibbsError(f"unknown y source {source!r}")


def cmd_code_info(args) -> int:
    t0 = time.perf_counter()
    code = rmcode.build(args.r, args.m, cap_n=args.cap_n)
    payload = {
        "k": code.k,
        "n": code.n,
        "rate": code.rate,
        "min_distance": code.designed_distance,
        "monomials": [str(mono) for mono in code.monomials] if code.k <= 256 else None,
        "generator": _matrix_preview(code),
    }
    if args.exhaustive_min_distance:
        payload["min_distance_exhaustive"] = rmcode.min_distance(code, exhaustive=True)
    params = {"m": args.m, "r": args.r}
    return _emit(args, payload, params, None, t0)


def cmd_adversary(args) -> int:
    t0 = time.perf_counter()
    report = adversary.verify_lemma4(args.m, args.r, p=args.p, q=args.q_override, k_cap=args.cap_k)
    params = {"m": args.m, "r": args.r, "p": args.p, "q_override": args.q_override}
    return _emit(args, {"report": report.to_dict()}, params, report.passed, t0)


def cmd_transmit(args) -> int:
    t0 = time.perf_counter()
    code = rmcode.build(args.r, args.m, cap_n=args.cap_n)
    if args.message:
        msg = BitVector.from01(args.message)
    else:
        rng = channel.chain_rng(args.seed, 1)
        msg = BitVector.from_array(rng.integers(0, 2, size=code.k).astype(np.uint8))
    x = code.encode(msg)
    y = channel.transmit(x, args.p, args.seed)
    payload = {
        "message": msg.to01(),
        "codeword": x.to01(),
        "received": y.to01(),
        "flips": (x.bits ^ y.bits).bit_count(),
    }
    params = {"m": args.m, "r": args.r, "p": args.p}
    return _emit(args, payload, params, None, t0)


def cmd_decode(args) -> int:
    t0 = time.perf_counter()
    code = rmcode.build(args.r, args.m, cap_n=args.cap_n)
    y, y_info = _resolve_y(args, code)
    model = channel.PosteriorModel(code, y, channel.BscParams(args.p))
    if args.start == "file":
        if not args.start_file:
            raise RmGibbsError("--start file requires --start-file")
        with open(args.start_file) as fh:
            start = BitVector.from01(fh.read().strip())
    else:
        start = args.start
    chain = gibbs.GibbsChain(model, start=start, seed=args.seed)
    stride = args.stride if args.traj_out else 0
    result = chain.run(args.steps, record_stride=stride)
    traj_path = None
    if args.traj_out:
        with open(args.traj_out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step", "distance", "flipped_coordinate"])
            writer.writerows(result.trajectory)
        traj_path = args.traj_out
    payload = {
        **y_info,
        "received": y.to01() if code.n <= 4096 else None,
        "start": args.start,
        "final_message": chain.message.to01(),
        "final_distance": chain.cached_distance,
        "zero_occupancy": result.zero_fraction,
        "steps": args.steps,
        "trajectory_csv": traj_path,
    }
    if code.k <= args.cap_k:
        payload["map_message"] = analysis.map_decode(model, k_cap=args.cap_k).to01()
    params = {"m": args.m, "r": args.r, "p": args.p, "steps": args.steps, "start": args.start}
    return _emit(args, payload, params, None, t0)


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    params = {"m": args.m, "r": args.r, "p": args.p, "kind": args.kind}
    if args.kind == "bound":
        report = analysis.theorem3_bound(args.m, args.r, p=args.p, q=args.q_override)
        return _emit(args, {"report": report.to_dict()}, params, None, t0)
    if args.kind == "sandwich":
        code = rmcode.build(args.r, args.m, cap_n=args.cap_n)
        report = analysis.sandwich_check(code, args.p)
        return _emit(args, {"report": report.to_dict()}, params, report.holds, t0)

    code = rmcode.build(args.r, args.m, cap_n=args.cap_n)
    y, y_info = _resolve_y(args, code)
    model = channel.PosteriorModel(code, y, channel.BscParams(args.p))
    if args.kind == "bottleneck":
        report = analysis.singleton_bottleneck(model, m0=args.m0, k_cap=args.cap_k)
        return _emit(args, {**y_info, "report": report.to_dict()}, params, None, t0)
    if args.kind == "mixing":
        eps_list = tuple(float(e) for e in args.eps.split(","))
        report = analysis.exact_tv_curve(
            model, mu0=args.mu0, t_max=args.t_max, eps_list=eps_list, k_cap=args.cap_k
        )
        rows = report.tv_curve
        return _emit(
            args,
            {**y_info, "report": report.to_dict()},
            {**params, "eps": eps_list, "t_max": args.t_max},
            report.reached_all,
            t0,
            csv_rows=rows,
            csv_header=["t", "tv"],
        )
    raise RmGibbsError(f"unknown analyze kind {args.kind!r}")


def cmd_verify_grid(args) -> int:
    t0 = time.perf_counter()
    p_values = tuple(float(p) for p in args.p_list.split(","))
    reports = adversary.verify_grid(p_values, m_max=args.m_max, k_cap=args.cap_k)
    failures = [r.to_dict() for r in reports if not r.passed]
    payload = {
        "cells": len(reports),
        "failed_cells": len(failures),
        "failures": failures,
        "typical_all": all(r.typical for r in reports),
    }
    params = {"p_list": list(p_values), "m_max": args.m_max}
    return _emit(args, payload, params, not failures, t0)


def _add_common(sub, seed_default: Optional[int] = 0):
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.add_argument("--out", default=None, help="write the report to this path")
    sub.add_argument("--cap-k", type=int, default=DEFAULT_CAP_K, dest="cap_k",
                     help="exact-enumeration cap on k")
    sub.add_argument("--cap-n", type=int, default=DEFAULT_CAP_N, dest="cap_n",
                     help="cap on the block length n")
    if seed_default is not None:
        sub.add_argument("--seed", type=int, default=seed_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmgibbs",
        description="Reed-Muller codes, Gibbs posterior-sampling decoding, and mixing diagnostics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("code-info", help="code parameters and generator matrix")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--exhaustive-min-distance", action="store_true")
    _add_common(s, seed_default=None)
    s.set_defaults(func=cmd_code_info, seed=None)

    s = subs.add_parser("adversary", help="build and verify the worst-case received sequence")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--q-override", type=int, default=None, dest="q_override")
    _add_common(s, seed_default=None)
    s.set_defaults(func=cmd_adversary, seed=None)

    s = subs.add_parser("transmit", help="encode a message and push it through BSC(p)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--message", default=None, help="01 string of length k (default: random)")
    _add_common(s)
    s.set_defaults(func=cmd_transmit)

    s = subs.add_parser("decode", help="run the Gibbs decoder chain")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--y-source", choices=["random", "adversarial", "file"],
                   default="random", dest="y_source")
    s.add_argument("--y-file", default=None, dest="y_file")
    s.add_argument("--start", choices=["zero", "uniform", "file"], default="zero")
    s.add_argument("--start-file", default=None, dest="start_file")
    s.add_argument("--stride", type=int, default=100, help="trajectory recording stride")
    s.add_argument("--traj-out", default=None, dest="traj_out",
                   help="write the (step, distance, flip) trajectory CSV here")
    _add_common(s)
    s.set_defaults(func=cmd_decode)

    s = subs.add_parser("analyze", help="bottleneck / mixing / sandwich / bound diagnostics")
    s.add_argument("kind", choices=["bottleneck", "mixing", "sandwich", "bound"])
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--q-override", type=int, default=None, dest="q_override")
    s.add_argument("--m0", type=int, default=0, help="bottleneck state index")
    s.add_argument("--y-source", choices=["random", "adversarial", "file"],
                   default="adversarial", dest="y_source")
    s.add_argument("--y-file", default=None, dest="y_file")
    s.add_argument("--mu0", default="zero", help="initial law for mixing: zero|stationary|uniform")
    s.add_argument("--t-max", type=int, default=10_000, dest="t_max")
    s.add_argument("--eps", default="0.25", help="comma-separated TV thresholds")
    _add_common(s)
    s.set_defaults(func=cmd_analyze)

    s = subs.add_parser("verify-grid", help="run the full worst-case verification grid")
    s.add_argument("--p-list", default="0.4,0.25,0.11,0.05", dest="p_list")
    s.add_argument("--m-max", type=int, default=adversary.GRID_M_MAX, dest="m_max")
    _add_common(s, seed_default=None)
    s.set_defaults(func=cmd_verify_grid, seed=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RmGibbsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
