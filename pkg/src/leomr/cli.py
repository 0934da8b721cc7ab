"""
Command-line front end.

    leomr info       [--config PATH] [--format csv|json]
    leomr route      --from S,O --to S,O [--time SEC] [--mode baseline|optimized]
    leomr experiment {routing,map-alloc,reduce-place,fr-sweep,contention,all} [--out DIR]

Exit codes: 0 success, 2 usage or configuration error, 3 infeasible job,
4 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import Settings, load_settings
from .constellation import (
    ConstellationConfig,
    SatelliteId,
    inter_plane_base_distance,
    intra_plane_distance,
)
from .errors import ConfigError, DomainError, JobInfeasibleError
from .routing import baseline_route, optimized_route
from .simharness import EXPERIMENTS, ExperimentReport

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("leomr")

# metrics echoed in the summary table after an experiment
HEADLINE = {
    "routing": ("distance_reduction_pct", "hop_delta_max"),
    "map-alloc": ("k", "improvement_vs_random_pct", "improvement_vs_eager_pct"),
    "reduce-place": ("reduction_pct",),
    "fr-sweep": ("reduction_pct",),
    "contention": ("map_random_max", "map_bipartite_max", "reduce_los_max", "reduce_center_max"),
}


def _sat(text: str) -> SatelliteId:
    try:
        slot, plane = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected SLOT,PLANE, got {text!r}") from None
    return SatelliteId(slot, plane)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--runs", type=int, help="override the number of runs")
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="leomr", description="LEO collect-map-reduce simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="summarise the constellation")

    route = sub.add_parser("route", parents=[common], help="route between two satellites")
    route.add_argument("--from", dest="src", type=_sat, required=True, metavar="SLOT,PLANE")
    route.add_argument("--to", dest="dst", type=_sat, required=True, metavar="SLOT,PLANE")
    route.add_argument("--time", type=float, default=0.0, metavar="SEC")
    route.add_argument("--mode", choices=("baseline", "optimized"), default="optimized")

    exp = sub.add_parser("experiment", parents=[common], help="run an experiment sweep")
    exp.add_argument("which", choices=(*EXPERIMENTS, "all"))
    return parser


def cmd_info(settings: Settings, fmt: str) -> str:
    c = settings.constellation
    info = {
        "num_planes": c.num_planes,
        "sats_per_plane": c.sats_per_plane,
        "total_satellites": c.total_satellites,
        "altitude_km": c.altitude_km,
        "inclination_deg": c.inclination_deg,
        "period_s": c.period,
        "period_min": c.period / 60.0,
        "intra_plane_km": intra_plane_distance(c),
        "inter_plane_max_km": inter_plane_base_distance(c),
    }
    if fmt == "json":
        return json.dumps(info, indent=1)
    return "\n".join(
        [
            f"planes N            {c.num_planes}",
            f"sats per plane M    {c.sats_per_plane}",
            f"total satellites    {c.total_satellites}",
            f"altitude h          {c.altitude_km:g} km",
            f"inclination i       {c.inclination_deg:g} deg",
            f"period T            {c.period:.1f} s ({c.period / 60:.1f} min)",
            f"intra-plane D_m     {info['intra_plane_km']:.1f} km",
            f"inter-plane D_base  {info['inter_plane_max_km']:.1f} km",
        ]
    )


def cmd_route(config: ConstellationConfig, src, dst, time: float, mode: str, fmt: str) -> str:
    fn = optimized_route if mode == "optimized" else baseline_route
    route = fn(src, dst, config, time)
    if fmt == "json":
        return json.dumps({"mode": mode, "time_s": time, **route.to_dict()}, indent=1)
    lines = [f"{mode} route at t={time:g}s"]
    for (a, b), d in zip(zip(route.path, route.path[1:]), route.link_distances):
        kind = "in-plane" if a.plane == b.plane else "cross-plane"
        lines.append(f"  ({a.slot},{a.plane}) -> ({b.slot},{b.plane})  {kind:11s} {d:9.1f} km")
    lines.append(f"{route.hops} hops, {route.total_distance:g} km")
    return "\n".join(lines)


def cmd_experiment(settings: Settings, which: str, out_dir: Path, runs: int | None) -> list[ExperimentReport]:
    cfg = settings.experiment_config(runs)
    names = list(EXPERIMENTS) if which == "all" else [which]
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for name in names:
        log.info("running %s (%d runs)", name, cfg.runs)
        report = EXPERIMENTS[name](cfg)
        (out_dir / f"{name}.csv").write_text(report.to_csv())
        (out_dir / f"{name}.json").write_text(report.to_json())
        reports.append(report)
    if which == "all":
        combined = ExperimentReport("all", [row for r in reports for row in r.rows])
        (out_dir / "all.csv").write_text(combined.to_csv())
    return reports


def summary_table(reports: list[ExperimentReport]) -> str:
    lines = [f"{'experiment':13s} {'shell':>9s} {'i':>4s} {'param':>8s} {'metric':28s} {'mean':>12s} {'std':>10s}"]
    for report in reports:
        wanted = HEADLINE.get(report.experiment, ())
        for row in report.rows:
            if row.metric in wanted:
                lines.append(
                    f"{row.experiment:13s} {row.planes:>4d}x{row.sats_per_plane:<4d} {row.inclination_deg:4g} "
                    f"{row.param:>8s} {row.metric:28s} {row.mean:12.3f} {row.std:10.3f}"
                )
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = load_settings(args.config)
        if args.seed is not None:
            settings.seed = args.seed
        if args.runs is not None and args.runs < 1:
            raise ConfigError(f"--runs must be >= 1, got {args.runs}")
        if args.command == "info":
            print(cmd_info(settings, args.format))
        elif args.command == "route":
            print(cmd_route(settings.constellation, args.src, args.dst, args.time, args.mode, args.format))
        else:
            reports = cmd_experiment(settings, args.which, Path(args.out), args.runs)
            if not args.quiet:
                print(summary_table(reports))
    except (ConfigError, DomainError) as exc:
        print(f"leomr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JobInfeasibleError as exc:
        print(f"leomr: infeasible job: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Exception as exc:  # noqa: BLE001 - stable exit code for anything unexpected
        log.exception("internal error")
        print(f"leomr: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
