"""Command line interface.

Subcommands: ``run`` (seeded batches, CSV, frame recording), ``verify``
(randomized soundness checks), ``serve`` (WebSocket game server) and
``scenario`` (inspect, export, validate scenario files).

Exit codes: 0 success, 1 a requested check failed (``--expect-safe`` or
``verify``), 2 bad arguments such as an unknown scenario or controller name.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._kernels import BACKEND
from .harness import (HUMAN_KINDS, ROBOT_KINDS, Outcome, RunConfig,
                      records_to_csv, run_batch, summarize)
from .scenarios import BUILTIN_NAMES, ScenarioError, builtin, dumps, load, save
from .verify import (check_backend_parity, check_recoverability_soundness,
                     check_transformer_soundness)


def _parse_seeds(text: str) -> list[int]:
    if ":" in text:
        lo, _, hi = text.partition(":")
        return list(range(int(lo), int(hi)))
    if "," in text:
        return [int(t) for t in text.split(",") if t]
    return [int(text)]


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        builtin(args.scenario)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.robot not in ROBOT_KINDS:
        print(f"error: unknown robot {args.robot!r}; known: "
              f"{', '.join(ROBOT_KINDS)}", file=sys.stderr)
        return 2
    if args.human not in HUMAN_KINDS + ("remote",):
        print(f"error: unknown human {args.human!r}; known: "
              f"{', '.join(HUMAN_KINDS + ('remote',))}", file=sys.stderr)
        return 2
    seeds = _parse_seeds(args.seeds)

    if args.record is not None:
        from .server import record_frames
        frames = record_frames(args.scenario, args.robot, args.human, seeds[0])
        with open(args.record, "w", encoding="utf-8") as f:
            json.dump(frames, f, separators=(",", ":"))
            f.write("\n")
        print(f"recorded {len(frames)} frames to {args.record}")
        return 0

    if args.human == "remote":
        print("error: the remote human needs a live server; use 'serve'",
              file=sys.stderr)
        return 2
    configs = [RunConfig(args.scenario, args.robot, args.human, s) for s in seeds]
    records = run_batch(configs, processes=args.processes)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as f:
            f.write(records_to_csv(records))
    s = summarize(records)
    print(f"{args.scenario} robot={args.robot} human={args.human} "
          f"n={s.n} backend={BACKEND}")
    print(f"  unsafe={s.unsafe_fraction:.4f} goal={s.goal_fraction:.4f} "
          f"time_to_goal={s.mean_time_to_goal_s:.2f}s "
          f"min_dist={s.mean_min_center_dist:.3f} "
          f"stops_in_zone={s.total_stops_in_zone}")
    if args.expect_safe and s.unsafe_fraction > 0.0:
        unsafe = [r.seed for r in records if r.outcome is Outcome.UNSAFE]
        print(f"error: expected zero unsafe episodes, got seeds {unsafe}",
              file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = []
    if args.check in ("soundness", "all"):
        results.append(check_transformer_soundness(args.samples, args.seed))
    if args.check in ("isrec", "all"):
        results.append(check_recoverability_soundness(
            args.isrec_states, args.isrec_rollouts, args.seed))
    if args.check in ("parity", "all"):
        parity = check_backend_parity(seed=args.seed)
        if parity is not None:
            results.append(parity)
        else:
            print("note: compiled backend unavailable, parity check skipped")
    ok = True
    for r in results:
        print(r.line())
        ok = ok and r.passed
    return 0 if ok else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve
    try:
        builtin(args.scenario)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    serve(args.scenario, args.robot, args.human, args.host, args.port,
          args.hz, args.lockstep, args.seed)
    return 0


def _cmd_scenario(args: argparse.Namespace) -> int:
    try:
        if args.action == "list":
            for name in BUILTIN_NAMES:
                print(name)
        elif args.action == "show":
            print(dumps(builtin(args.name)), end="")
        elif args.action == "save":
            save(builtin(args.name), args.path)
            print(f"wrote {args.path}")
        elif args.action == "check":
            s = load(args.path)
            print(f"ok: {s.name} (cap {s.episode_cap}, "
                  f"{len(s.lanes)} lanes, {len(s.walls)} walls, "
                  f"{len(s.no_stop_zones)} no-stop zones)")
    except (ScenarioError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="driveshield",
        description="Recoverability-shielded turn-based driving simulator.")
    ap.add_argument("--version", action="version",
                    version=f"driveshield {__version__} (backend={BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded episode batches")
    run.add_argument("--scenario", required=True)
    run.add_argument("--robot", default="shield")
    run.add_argument("--human", default="social")
    run.add_argument("--seeds", default="0:10",
                     help="'lo:hi' range, 'a,b,c' list, or a single seed")
    run.add_argument("--processes", type=int, default=1)
    run.add_argument("--csv", help="write per-episode rows to this file")
    run.add_argument("--expect-safe", action="store_true",
                     help="exit 1 if any episode is unsafe")
    run.add_argument("--record", metavar="PATH",
                     help="record protocol frames for the first seed instead")
    run.set_defaults(func=_cmd_run)

    ver = sub.add_parser("verify", help="randomized soundness checks")
    ver.add_argument("--check", default="all",
                     choices=("soundness", "isrec", "parity", "all"),
                     help="which check to run (default: all)")
    ver.add_argument("--samples", type=int, default=100_000,
                     help="containment trials for the soundness check")
    ver.add_argument("--isrec-states", type=int, default=200)
    ver.add_argument("--isrec-rollouts", type=int, default=50)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=_cmd_verify)

    srv = sub.add_parser("serve", help="serve the WebSocket game protocol")
    srv.add_argument("--scenario", required=True)
    srv.add_argument("--robot", default="shield")
    srv.add_argument("--human", default="remote")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8700)
    srv.add_argument("--hz", type=float, default=10.0)
    srv.add_argument("--lockstep", action="store_true")
    srv.add_argument("--seed", type=int, default=0)
    srv.set_defaults(func=_cmd_serve)

    sc = sub.add_parser("scenario", help="inspect and export scenarios")
    scs = sc.add_subparsers(dest="action", required=True)
    scs.add_parser("list")
    show = scs.add_parser("show")
    show.add_argument("name")
    sv = scs.add_parser("save")
    sv.add_argument("name")
    sv.add_argument("path")
    ck = scs.add_parser("check")
    ck.add_argument("path")
    sc.set_defaults(func=_cmd_scenario)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
