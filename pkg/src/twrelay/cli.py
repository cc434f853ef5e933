"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import formats
from .errors import TwrelayError
from .geometry import TOL, convexify
from .ranking import PathPair, RankAssignment, ValidPairing, enumerate_valid
from .region import achievable_region, bounds_report
from .schedule import (DEFAULT_THRESHOLD_MODE, THRESHOLD_MODES, DelayTable,
                       build_schedule, parse_delay_map, verify_causality)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class InputError(TwrelayError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    channel_path: Path | None = None
    nodes: int | None = None
    ranking: RankAssignment | None = None
    blocks: int | None = None
    path_universe: str = "canonical"
    threshold_mode: str = DEFAULT_THRESHOLD_MODE
    output_path: Path | None = None
    tolerance: float = TOL
    seed: int = 7
    count: int = 100
    suite: str | None = None
    dtilde_path: Path | None = None
    time_sharing: bool = False
    as_json: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        ranking = None
        if getattr(ns, "ranking", None):
            try:
                ranking = RankAssignment.parse(ns.ranking)
            except ValueError as exc:
                raise InputError(f"bad --ranking {ns.ranking!r}: {exc}") from exc
        for attr in ("channel", "dtilde"):
            p = getattr(ns, attr, None)
            if p is not None and not Path(p).is_file():
                raise InputError(f"--{attr} file {p} does not exist")
        return cls(
            command=ns.command,
            channel_path=Path(ns.channel) if getattr(ns, "channel", None) else None,
            nodes=getattr(ns, "nodes", None),
            ranking=ranking,
            blocks=getattr(ns, "blocks", None),
            path_universe=getattr(ns, "path_universe", "canonical"),
            threshold_mode=getattr(ns, "threshold_mode", DEFAULT_THRESHOLD_MODE),
            output_path=Path(ns.out) if getattr(ns, "out", None) else None,
            tolerance=getattr(ns, "tol", TOL),
            seed=getattr(ns, "seed", 7),
            count=getattr(ns, "count", 100),
            suite=getattr(ns, "suite", None),
            dtilde_path=Path(ns.dtilde) if getattr(ns, "dtilde", None) else None,
            time_sharing=getattr(ns, "time_sharing", False),
            as_json=getattr(ns, "json", False),
        )


def _load_model(cfg: RunConfig):
    model = formats.load_channel(cfg.channel_path.read_text())
    if cfg.nodes is not None and cfg.nodes != model.node_count:
        raise InputError(f"--nodes {cfg.nodes} disagrees with the channel's "
                         f"{model.node_count} nodes")
    return model


def _emit(text: str, path: Path | None, out) -> None:
    if path is None:
        out.write(text if text.endswith("\n") else text + "\n")
    else:
        path.write_text(text)


def cmd_rankings(cfg: RunConfig, out) -> int:
    if cfg.nodes is None:
        raise InputError("rankings needs --nodes")
    pairings = enumerate_valid(cfg.nodes)
    if cfg.as_json:
        text = json.dumps({"nodes": cfg.nodes, "count": len(pairings),
                           "rankings": [list(v.ranks.ranks) for v in pairings]})
    else:
        text = "\n".join(str(v.ranks) for v in pairings)
    _emit(text, cfg.output_path, out)
    if cfg.output_path is not None or not cfg.as_json:
        print(f"{len(pairings)} valid rankings for M={cfg.nodes}", file=sys.stderr)
    return EXIT_OK


def cmd_region(cfg: RunConfig, out) -> int:
    model = _load_model(cfg)
    rankings = None if cfg.ranking is None else [cfg.ranking]
    union = achievable_region(model, rankings=rankings)
    fr = convexify(union) if cfg.time_sharing else union.frontier
    if cfg.output_path is None:
        _emit(formats.region_json(union, fr), None, out)
    else:
        cfg.output_path.write_text(formats.frontier_csv(fr))
        cfg.output_path.with_suffix(".json").write_text(formats.region_json(union, fr))
    return EXIT_OK


def cmd_bounds(cfg: RunConfig, out) -> int:
    model = _load_model(cfg)
    rankings = None if cfg.ranking is None else [cfg.ranking]
    rep = bounds_report(model, cfg.path_universe, rankings, cfg.tolerance)
    _emit(json.dumps(rep, indent=2), cfg.output_path, out)
    return EXIT_OK if rep["achievable_in_cutset"] else EXIT_VERIFY


def cmd_schedule(cfg: RunConfig, out) -> int:
    if cfg.ranking is None:
        raise InputError("schedule needs --ranking")
    m = len(cfg.ranking)
    if cfg.nodes is not None and cfg.nodes != m:
        raise InputError(f"--nodes {cfg.nodes} disagrees with ranking {cfg.ranking}")
    if m < 3:
        raise InputError("schedules need at least one relay (M >= 3)")
    pairing = ValidPairing(PathPair.canonical(m), cfg.ranking)
    dtilde = None
    if cfg.dtilde_path is not None:
        raw = json.loads(cfg.dtilde_path.read_text())
        dtilde = parse_delay_map(raw.get("dtilde", raw))
    table = DelayTable.for_pairing(pairing, cfg.threshold_mode, dtilde)
    blocks = cfg.blocks if cfg.blocks is not None else 2 * max(table.d.values()) + 2
    sched = build_schedule(pairing, blocks, table.dtilde, table.d)
    report = verify_causality(sched, table.d, table.dtilde)
    if cfg.output_path is None:
        doc = {"delays": json.loads(table.to_json()), "causality": report.to_dict()}
        _emit(json.dumps(doc, indent=2), None, out)
    else:
        cfg.output_path.write_text(formats.schedule_csv(sched))
        cfg.output_path.with_suffix(".delays.json").write_text(table.to_json())
        cfg.output_path.with_suffix(".causality.json").write_text(
            json.dumps(report.to_dict(), indent=2))
    if not report.ok:
        for v in report.violations:
            print(f"violation: {v.kind} node={v.node} source={v.source} "
                  f"block={v.block}: {v.detail}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out) -> int:
    max_nodes = cfg.nodes if cfg.nodes is not None else 7
    res = run_suite(cfg.suite, cfg.seed, cfg.count, max_nodes, cfg.threshold_mode)
    out.write(res.summary() + "\n")
    if cfg.output_path is not None:
        cfg.output_path.write_text(json.dumps(
            {"suite": res.suite, "ok": res.ok, "checked": res.checked,
             "failures": res.failures}, indent=2, default=str))
    return EXIT_OK if res.ok else EXIT_VERIFY


COMMANDS = {"rankings": cmd_rankings, "region": cmd_region, "bounds": cmd_bounds,
            "schedule": cmd_schedule, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twrelay",
        description="Ranked decode-forward regions for the two-way multiple-relay channel.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, channel=False):
        if channel:
            p.add_argument("--channel", required=True, help="channel spec (JSON)")
        p.add_argument("--nodes", type=int, help="number of nodes M")
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("rankings", help="list valid rank assignments")
    common(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("region", help="achievable region frontier and members")
    common(p, channel=True)
    p.add_argument("--ranking", help='restrict to one ranking, e.g. "(3,2,1)"')
    p.add_argument("--time-sharing", action="store_true",
                   help="report the convex hull of the union (off by default)")

    p = sub.add_parser("bounds", help="compare achievable region with outer bounds")
    common(p, channel=True)
    p.add_argument("--ranking")
    p.add_argument("--path-universe", choices=("canonical", "all"), default="canonical")
    p.add_argument("--tol", type=float, default=TOL)

    p = sub.add_parser("schedule", help="delay tables, block schedule, causality check")
    common(p)
    p.add_argument("--ranking", required=True)
    p.add_argument("--blocks", type=int)
    p.add_argument("--threshold-mode", choices=THRESHOLD_MODES,
                   default=DEFAULT_THRESHOLD_MODE)
    p.add_argument("--dtilde", help="JSON decoding delays {\"i,s\": v} to use instead")

    p = sub.add_parser("verify", help="run a seeded property sweep")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--nodes", type=int, help="largest M for exhaustive-schedule")
    p.add_argument("--threshold-mode", choices=THRESHOLD_MODES,
                   default=DEFAULT_THRESHOLD_MODE)
    p.add_argument("--out")
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except (TwrelayError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
