"""
Command-line interface.

Subcommands: ``entry``, ``sweep``, ``headings``, ``compare``, ``render`` and
``info``. Exit status is 0 for a non-empty result, 2 when the result is empty
(the slot is infeasible under the given limits) and 1 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import io as pio
from .baseline import compare_direction_changes
from .planner import attach_paths, find_entry_positions, minimal_gamma
from .presets import all_presets, get_preset
from .slot import Side
from .sweep import SweepParams, curves_for, heading_subranges
from .vehicle import CarDimensions, curb_to_curb, min_turning_radius

EXIT_OK, EXIT_ERROR, EXIT_EMPTY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _gamma_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None
    if not vals or min(vals) < 0:
        raise argparse.ArgumentTypeError("expected non-negative integers")
    return vals


def _common(p: argparse.ArgumentParser, *, slot: bool = True) -> None:
    p.add_argument("--config", type=Path, help="INI run configuration; flags override its values")
    p.add_argument("--car", help="car preset name (see `info`)")
    if slot:
        p.add_argument("--slot-width", type=float, help="slot width W [m]")
        p.add_argument("--slot-length", type=float, help="slot length L [m]")
        p.add_argument("--extra-width", type=float, help="W - w [m], instead of --slot-width")
        p.add_argument("--extra-length", type=float, help="L - (d_f + d_r) [m], instead of --slot-length")
        p.add_argument("--side", choices=("right", "left"))
        p.add_argument("--direction", help="entry-side direction (degrees, or radians with 'rad')")
    p.add_argument("--delta", type=float, help="simulation step [m]")
    p.add_argument("--delta-theta", help="entry heading step (degrees, or radians with 'rad')")
    p.add_argument("--gamma-cap", type=int, help="hard cap on direction changes per branch")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parkentry", description="Optimal entry positions for parallel parking slots.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entry", help="entry positions for one slot")
    _common(p)
    p.add_argument("--gamma-max", type=int, help="direction-change limit (with --all)")
    p.add_argument("--min-only", action=argparse.BooleanOptionalAction, default=True,
                   help="keep only the globally minimal entries (--no-min-only: all within --gamma-max)")

    p = sub.add_parser("sweep", help="minimum slot length per width for each gamma_max")
    _common(p, slot=False)
    p.add_argument("--gamma-max", type=_gamma_list, help="comma separated list, e.g. 0,1,2,10")
    p.add_argument("--desk", action="store_true", help="coarse grid: 0.05 m cells, 1e-3 rad headings")
    p.add_argument("--delta-w", type=float)
    p.add_argument("--delta-l", type=float)
    p.add_argument("--w-extra-max", type=float)
    p.add_argument("--l-extra-max", type=float)
    p.add_argument("--side", choices=("right", "left"))
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("headings", help="feasible entry heading subranges for one slot")
    _common(p)
    p.add_argument("--gamma-max", type=_gamma_list, default=(1, 2, 5, 10))

    p = sub.add_parser("compare", help="reversed trials from the aligned goal versus found goals")
    _common(p, slot=False)
    p.add_argument("--slot-width", type=float, required=True)
    p.add_argument("--length-min", type=float, help="default: car length")
    p.add_argument("--length-max", type=float, required=True)
    p.add_argument("--length-step", type=float, default=0.01)

    p = sub.add_parser("render", help="SVG of the slot with entry frames, goal frames and paths")
    _common(p)
    p.add_argument("--gamma-max", type=int)
    p.add_argument("--min-only", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--limit", type=int, default=3, help="number of entries drawn with paths")
    p.add_argument("--frame-every", type=int, default=0, help="draw every n-th frame along paths")
    p.add_argument("--scale", type=float, default=100.0, help="SVG units per meter")

    p = sub.add_parser("info", help="turning radius and curb-to-curb distance per preset")
    p.add_argument("--car", help="single preset (default: all)")
    return parser


def _config(args: argparse.Namespace) -> pio.RunConfig:
    cfg = pio.RunConfig()
    if getattr(args, "config", None) is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise pio.ConfigError("config", str(exc)) from None
        cfg = pio.load_config(text, cfg)
    if getattr(args, "car", None):
        cfg.car, cfg.dims = args.car, None
    for flag in ("slot_width", "slot_length", "extra_width", "extra_length"):
        val = getattr(args, flag, None)
        if val is not None:
            setattr(cfg, flag, val)
    # an explicit width or length replaces the other form from the config
    if getattr(args, "slot_width", None) is not None:
        cfg.extra_width = None
    if getattr(args, "extra_width", None) is not None:
        cfg.slot_width = None
    if getattr(args, "slot_length", None) is not None:
        cfg.extra_length = None
    if getattr(args, "extra_length", None) is not None:
        cfg.slot_length = None
    if getattr(args, "side", None):
        cfg.side = args.side
    if getattr(args, "direction", None) is not None:
        cfg.direction = pio.parse_angle(args.direction, "--direction")
    sim = {}
    if getattr(args, "delta", None) is not None:
        sim["delta"] = args.delta
    if getattr(args, "gamma_cap", None) is not None:
        sim["gamma_cap"] = args.gamma_cap
    if sim:
        cfg.sim = pio._build(type(cfg.sim), cfg.sim, sim, "sim")
    if getattr(args, "delta_theta", None) is not None:
        cfg.delta_theta = pio.parse_angle(args.delta_theta, "--delta-theta")
        if cfg.delta_theta <= 0:
            raise pio.ConfigError("--delta-theta", "must be positive")
    return cfg


def _dims(cfg: pio.RunConfig) -> CarDimensions:
    if cfg.dims is not None:
        return cfg.dims
    if not cfg.car:
        raise pio.ConfigError("car", "a car preset (--car) or [car] dimensions are required")
    try:
        return get_preset(cfg.car).dims
    except KeyError as exc:
        raise pio.ConfigError("car", exc.args[0]) from None


def _heading_step(cfg: pio.RunConfig) -> float:
    return cfg.delta_theta if cfg.delta_theta is not None else cfg.sweep.delta_theta


def _emit(data: bytes, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()
    else:
        out.write_bytes(data)


def _entry(args, cfg: pio.RunConfig) -> int:
    dims = _dims(cfg)
    slot = cfg.slot_for(dims)
    results = find_entry_positions(dims, slot, cfg.sim, _heading_step(cfg), args.gamma_max, args.min_only)
    _emit(pio.serialize_results(results, args.format), args.out)
    g = minimal_gamma(results)
    if g is None:
        print("no entry position reaches a goal", file=sys.stderr)
        return EXIT_EMPTY
    print(f"minimal gamma: {g} ({len(results)} entry positions)", file=sys.stderr)
    return EXIT_OK


def _sweep(args, cfg: pio.RunConfig) -> int:
    dims = _dims(cfg)
    sp = SweepParams.desk() if args.desk else cfg.sweep
    kw = {k: getattr(args, k) for k in ("delta_w", "delta_l", "w_extra_max", "l_extra_max")
          if getattr(args, k) is not None}
    if args.gamma_max is not None:
        kw["gamma_max_list"] = args.gamma_max
    if cfg.delta_theta is not None:
        kw["delta_theta"] = cfg.delta_theta
    sp = pio._build(SweepParams, sp, kw, "sweep")
    curves = curves_for(dims, sp, cfg.sim, side=Side(cfg.side), workers=max(1, args.workers))
    _emit(pio.serialize_results(curves, args.format), args.out)
    found = sum(len(c.points) for c in curves)
    for c in curves:
        extra = c.min_extra_length(dims)
        shown = "none" if extra is None else f"{extra:.3f} m"
        print(f"gamma_max={c.gamma_max}: min extra length {shown}", file=sys.stderr)
    return EXIT_OK if found else EXIT_EMPTY


def _headings(args, cfg: pio.RunConfig) -> int:
    dims = _dims(cfg)
    slot = cfg.slot_for(dims)
    sp = replace(cfg.sweep, delta_theta=_heading_step(cfg))
    items = [heading_subranges(dims, slot, g, sp, cfg.sim) for g in args.gamma_max]
    _emit(pio.serialize_results(items, args.format), args.out)
    for h in items:
        print(f"gamma_max={h.gamma_max}: {len(h)} subranges, {math.degrees(h.width()):.3f} deg total",
              file=sys.stderr)
    return EXIT_OK if any(len(h) for h in items) else EXIT_EMPTY


def _compare(args, cfg: pio.RunConfig) -> int:
    dims = _dims(cfg)
    if args.slot_width <= dims.w:
        raise pio.ConfigError("--slot-width", f"slot width {args.slot_width} must exceed car width {dims.w}")
    if args.length_step <= 0:
        raise pio.ConfigError("--length-step", "must be positive")
    lo = dims.length if args.length_min is None else args.length_min
    n = int(math.floor((args.length_max - lo) / args.length_step + 1e-9))
    if n < 0:
        raise pio.ConfigError("--length-max", "must not be below the start length")
    lengths = [round(lo + i * args.length_step, 10) for i in range(n + 1)]
    rows = compare_direction_changes(dims, args.slot_width, lengths, cfg.sim,
                                     delta_theta=_heading_step(cfg), side=cfg.side)
    _emit(pio.serialize_results(rows, args.format), args.out)
    usable = [r for r in rows if r.gamma_aligned is not None and r.gamma_ours is not None]
    return EXIT_OK if usable else EXIT_EMPTY


def _render(args, cfg: pio.RunConfig) -> int:
    dims = _dims(cfg)
    slot = cfg.slot_for(dims)
    results = find_entry_positions(dims, slot, cfg.sim, _heading_step(cfg), args.gamma_max, args.min_only)
    shown = attach_paths(results[:max(0, args.limit)], dims, slot, cfg.sim)
    svg = pio.render_svg(dims, slot, entries=[r.entry for r in shown], goals=[r.goal for r in shown],
                         paths=[r.path for r in shown], scale=args.scale, path_frame_every=args.frame_every)
    _emit(svg.encode("utf-8"), args.out)
    return EXIT_OK if results else EXIT_EMPTY


def _info(args) -> int:
    presets = all_presets()
    if args.car:
        try:
            presets = {args.car: get_preset(args.car)}
        except KeyError as exc:
            raise pio.ConfigError("car", exc.args[0]) from None
    print("name,min_turning_radius,curb_to_curb")
    for name, preset in presets.items():
        print(f"{name},{min_turning_radius(preset.dims):.4f},{curb_to_curb(preset.dims):.4f}")
    return EXIT_OK


_COMMANDS = {"entry": _entry, "sweep": _sweep, "headings": _headings, "compare": _compare, "render": _render}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "info":
            return _info(args)
        cfg = _config(args)
        return _COMMANDS[args.command](args, cfg)
    except pio.ConfigError as exc:
        print(f"parkentry: config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"parkentry: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
