"""Command line front end: ``wallcross <surface|walls|delta|flips|verify>``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import report
from .cohomology import EngineError
from .flips import FlipError
from .lattice import LatticeError, SurfaceLattice, make_surface
from .transition import TransitionError, donaldson_difference
from .verification import run_all
from .walls import WallError, WallType, enumerate_walls, enumerate_walls_box, wall_signature

SUBCOMMANDS = ("surface", "walls", "delta", "flips", "verify")
EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


class ConfigError(ValueError):
    def __init__(self, message: str):
        super().__init__(f"CONFIG: {message}")
        self.code = "CONFIG"


@dataclass(frozen=True)
class JobConfig:
    surface: SurfaceLattice
    delta: tuple[int, ...] | None = None
    c: int | None = None
    L_minus: tuple[int, ...] | None = None
    L_plus: tuple[int, ...] | None = None
    alpha: tuple[int, ...] | None = None
    insert_point: bool = False
    normalization: str = "standard"
    output: str = "json"
    method: str = "general"
    allow_leading: bool = False

    def require(self, *names: str):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"missing field(s): {', '.join(missing)}")


def _vector(raw: Any, name: str, rank: int) -> tuple[int, ...] | None:
    if raw is None:
        return None
    if not isinstance(raw, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
        raise ConfigError(f"{name} must be a list of integers")
    if len(raw) != rank:
        raise ConfigError(f"{name} has length {len(raw)}, surface rank is {rank}")
    return tuple(raw)


def parse_surface(raw: Any) -> SurfaceLattice:
    if isinstance(raw, str):
        return make_surface(raw)
    if not isinstance(raw, dict):
        raise ConfigError("surface must be a preset name or an object")
    if "preset" in raw:
        preset = raw["preset"]
        params = raw.get("params", {})
        if preset == "BlnP2":
            preset = f"Bl{params.get('n', 1)}P2"
        elif preset == "Fe":
            preset = f"F{params.get('e', 0)}"
        return make_surface(preset)
    return make_surface(
        gram=raw.get("gram"),
        canonical=raw.get("K", raw.get("canonical")),
        reference_ample=raw.get("ample", raw.get("reference_ample")),
        chi=raw.get("chi", 1),
        extremal_curves=raw.get("extremal_curves", ()),
        anticanonical_effective=raw.get("anticanonical_effective"),
        name=raw.get("name", "custom"),
    )


def parse_config(data: dict[str, Any]) -> JobConfig:
    if not isinstance(data, dict):
        raise ConfigError("top level must be an object")
    if "surface" not in data:
        raise ConfigError("missing field: surface")
    surface = parse_surface(data["surface"])
    n = surface.rank
    c = data.get("c")
    if c is not None and (not isinstance(c, int) or isinstance(c, bool)):
        raise ConfigError("c must be an integer")
    normalization = data.get("normalization", "standard")
    if normalization not in ("standard", "km"):
        raise ConfigError("normalization must be 'standard' or 'km'")
    output = data.get("output", "json")
    if output not in ("json", "csv", "md", "markdown"):
        raise ConfigError("output must be json, csv or markdown")
    method = data.get("method", "general")
    if method not in ("general", "explicit"):
        raise ConfigError("method must be 'general' or 'explicit'")
    return JobConfig(
        surface=surface,
        delta=_vector(data.get("delta"), "delta", n),
        c=c,
        L_minus=_vector(data.get("L_minus"), "L_minus", n),
        L_plus=_vector(data.get("L_plus"), "L_plus", n),
        alpha=_vector(data.get("alpha"), "alpha", n),
        insert_point=bool(data.get("insert_point", False)),
        normalization=normalization,
        output="md" if output == "markdown" else output,
        method=method,
        allow_leading=bool(data.get("allow_leading", False)),
    )


def load_config(path: str | None) -> JobConfig | None:
    if path is None:
        return None
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from exc
    return parse_config(data)


def _wall_type(cfg: JobConfig) -> WallType:
    cfg.require("delta", "c")
    return WallType(cfg.surface.divisor(cfg.delta), cfg.c)


def _segment(cfg: JobConfig):
    cfg.require("L_minus", "L_plus")
    return cfg.surface.divisor(cfg.L_minus), cfg.surface.divisor(cfg.L_plus)


def run(subcommand: str, cfg: JobConfig | None, args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    """Execute one job; returns the report record and the exit status."""
    if subcommand == "verify":
        checks = run_all(seed=args.seed, include_reference=not args.skip_reference,
                         oracle_radius=args.oracle_radius if args.oracle_radius is not None else 25)
        record = report.verify_record(checks)
        return record, EXIT_OK if record["passed"] else EXIT_FAILED
    if cfg is None:
        raise ConfigError(f"'{subcommand}' needs --config")
    if subcommand == "surface":
        return report.surface_record(cfg.surface), EXIT_OK
    wt = _wall_type(cfg)
    L_minus, L_plus = _segment(cfg)
    if subcommand == "walls":
        walls = enumerate_walls(L_minus, L_plus, wt)
        oracle = None
        status = EXIT_OK
        if args.oracle_radius is not None:
            box = enumerate_walls_box(L_minus, L_plus, wt, args.oracle_radius)
            agree = wall_signature(box) == wall_signature(walls)
            oracle = {"radius": args.oracle_radius, "agrees": agree, "walls_found": len(box)}
            status = EXIT_OK if agree else EXIT_FAILED
        return report.walls_record(walls, wt, oracle), status
    if subcommand == "flips":
        return report.flips_record(enumerate_walls(L_minus, L_plus, wt), wt), EXIT_OK
    if subcommand == "delta":
        cfg.require("alpha")
        rep = donaldson_difference(
            L_minus, L_plus, wt, cfg.surface.divisor(cfg.alpha), cfg.insert_point,
            method=cfg.method, allow_leading=cfg.allow_leading,
            km_normalization=args.km_normalization or cfg.normalization == "km")
        return report.transition_record(rep), EXIT_OK
    raise ConfigError(f"unknown subcommand {subcommand!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON job file")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "md"), help="report format (default: config output, else json)")
    common.add_argument("--km-normalization", action="store_true", help="scale degree-e terms by 2^e")
    common.add_argument("--oracle-radius", type=int, help="cross-check walls against a box scan of this radius")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks in verify")
    parser = argparse.ArgumentParser(prog="wallcross", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("surface", parents=[common], help="lattice invariants")
    sub.add_parser("walls", parents=[common], help="walls crossed by the segment")
    sub.add_parser("delta", parents=[common], help="change of the invariant across the segment")
    sub.add_parser("flips", parents=[common], help="flip stages and critical values per wall")
    v = sub.add_parser("verify", parents=[common], help="identity checks for every module")
    v.add_argument("--skip-reference", action="store_true",
                   help="leave out comparisons against the reference closed forms")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand != "verify":
        args.skip_reference = False
    try:
        cfg = load_config(args.config)
        record, status = run(args.subcommand, cfg, args)
    except (ConfigError, LatticeError, WallError, TransitionError, FlipError, EngineError) as exc:
        err = {"error": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
        sys.stderr.write(report.to_json(err))
        return EXIT_ERROR
    fmt = args.format or (cfg.output if cfg is not None else "json")
    text = report.render(args.subcommand, record, fmt)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
