"""Result serialization (CSV/JSON), run configuration files and SVG rendering."""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional, Sequence

from .baseline import ComparisonRow
from .planner import PlanResult
from .slot import ParkingSlot, Side, slot_geometry
from .sweep import FeasibilityCurve, HeadingSubranges, SweepParams
from .geometry import Point2
from .vehicle import CarDimensions, CarState, SimParams, frame_of

ENTRY_COLUMNS = ("entry_x", "entry_y", "entry_theta", "goal_x", "goal_y", "goal_theta", "gamma")
SWEEP_COLUMNS = ("gamma_max", "width", "length_min")
HEADING_COLUMNS = ("width", "length", "gamma_max", "theta_lo", "theta_hi")
COMPARE_COLUMNS = ("length", "gamma_aligned", "gamma_ours", "gamma_planner")


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


# --- serialization -----------------------------------------------------------

def entry_rows(results: Iterable[PlanResult]) -> list[dict[str, Any]]:
    rows = [
        {
            "entry_x": r.entry.x, "entry_y": r.entry.y, "entry_theta": r.heading,
            "goal_x": r.goal.x, "goal_y": r.goal.y, "goal_theta": r.goal.theta,
            "gamma": int(r.gamma),
        }
        for r in results
    ]
    rows.sort(key=lambda row: (row["entry_theta"], row["gamma"]))
    return rows


def sweep_rows(curves: Iterable[FeasibilityCurve]) -> list[dict[str, Any]]:
    return [
        {"gamma_max": c.gamma_max, "width": w, "length_min": length}
        for c in curves for w, length in c.points
    ]


def heading_rows(items: Iterable[HeadingSubranges]) -> list[dict[str, Any]]:
    return [
        {"width": h.slot_dims[0], "length": h.slot_dims[1], "gamma_max": h.gamma_max,
         "theta_lo": lo, "theta_hi": hi}
        for h in items for lo, hi in h.subranges
    ]


def compare_rows(rows: Iterable[ComparisonRow]) -> list[dict[str, Any]]:
    return [
        {"length": r.L, "gamma_aligned": r.gamma_aligned, "gamma_ours": r.gamma_ours,
         "gamma_planner": r.gamma_planner}
        for r in rows
    ]


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def to_csv(rows: Sequence[dict[str, Any]], columns: Sequence[str]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue().encode("utf-8")


def to_json(rows: Sequence[dict[str, Any]]) -> bytes:
    return (json.dumps(list(rows), indent=1) + "\n").encode("utf-8")


def serialize_results(results: Sequence[Any], fmt: str = "csv") -> bytes:
    """Serialize entry results, feasibility curves, heading subranges or comparison rows."""
    results = list(results)
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    kind = type(results[0]) if results else PlanResult
    if kind is PlanResult:
        rows, cols = entry_rows(results), ENTRY_COLUMNS
    elif kind is FeasibilityCurve:
        rows, cols = sweep_rows(results), SWEEP_COLUMNS
    elif kind is HeadingSubranges:
        rows, cols = heading_rows(results), HEADING_COLUMNS
    elif kind is ComparisonRow:
        rows, cols = compare_rows(results), COMPARE_COLUMNS
    else:
        raise TypeError(f"cannot serialize {kind.__name__}")
    return to_csv(rows, cols) if fmt == "csv" else to_json(rows)


def read_entry_json(data: bytes) -> list[dict[str, Any]]:
    return json.loads(data.decode("utf-8"))


# --- configuration -----------------------------------------------------------

def parse_angle(text: str, key: str) -> float:
    """Angle in degrees, or in radians with a ``rad`` suffix; returns radians."""
    t = str(text).strip().lower()
    try:
        if t.endswith("rad"):
            return float(t[:-3])
        if t.endswith("deg"):
            t = t[:-3]
        return math.radians(float(t))
    except ValueError:
        raise ConfigError(key, f"not an angle: {text!r}") from None


@dataclass
class RunConfig:
    car: Optional[str] = None  # preset name
    dims: Optional[CarDimensions] = None
    slot_width: Optional[float] = None
    slot_length: Optional[float] = None
    extra_width: Optional[float] = None
    extra_length: Optional[float] = None
    side: str = "right"
    direction: float = 0.0  # radians
    px: float = 0.0
    py: float = 0.0
    sim: SimParams = field(default_factory=SimParams)
    sweep: SweepParams = field(default_factory=SweepParams)
    delta_theta: Optional[float] = None  # entry-search heading step; defaults to sweep.delta_theta
    options: dict[str, str] = field(default_factory=dict)

    def slot_for(self, dims: CarDimensions) -> ParkingSlot:
        if self.slot_width is not None:
            W = self.slot_width
        elif self.extra_width is not None:
            W = dims.w + self.extra_width
        else:
            raise ConfigError("slot.width", "slot width (or extra_width) is required")
        if self.slot_length is not None:
            L = self.slot_length
        elif self.extra_length is not None:
            L = dims.length + self.extra_length
        else:
            raise ConfigError("slot.length", "slot length (or extra_length) is required")
        try:
            slot = ParkingSlot(Point2(self.px, self.py), self.direction, W, L, Side(self.side))
        except ValueError as exc:
            raise ConfigError("slot", str(exc)) from None
        try:
            slot.check_fits(dims)
        except ValueError as exc:
            key = "slot.width" if W <= dims.w else "slot.length"
            raise ConfigError(key, str(exc)) from None
        return slot


_SECTIONS = {
    "car": {"preset", "w", "d_f", "d_r", "b", "phi_max"},
    "slot": {"width", "length", "extra_width", "extra_length", "side", "direction", "px", "py"},
    "sim": {"delta", "gamma_cap", "max_arc", "delta_theta"},
    "sweep": {"delta_w", "delta_l", "w_extra_max", "l_extra_max", "delta_theta", "gamma_max_list"},
}


def _num(sec: configparser.SectionProxy, key: str, kind=float):
    try:
        return kind(sec[key])
    except ValueError:
        raise ConfigError(f"{sec.name}.{key}", f"expected a number, got {sec[key]!r}") from None


def load_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse an INI-style run configuration; unknown sections or keys are errors."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0]) from None
    cfg = base or RunConfig()
    for name in cp.sections():
        if name not in _SECTIONS:
            raise ConfigError(name, "unknown section")
        unknown = set(cp[name]) - _SECTIONS[name]
        if unknown:
            raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")

    if "car" in cp:
        sec = cp["car"]
        if "preset" in sec:
            cfg.car = sec["preset"]
        dim_keys = ("w", "d_f", "d_r", "b", "phi_max")
        given = [k for k in dim_keys if k in sec]
        if given:
            missing = [k for k in dim_keys if k not in sec]
            if missing:
                raise ConfigError(f"car.{missing[0]}", "missing car dimension")
            vals = [_num(sec, k) for k in dim_keys[:4]]
            try:
                cfg.dims = CarDimensions(*vals, parse_angle(sec["phi_max"], "car.phi_max"))
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError("car", str(exc)) from None

    if "slot" in cp:
        sec = cp["slot"]
        for key, attr in (("width", "slot_width"), ("length", "slot_length"),
                          ("extra_width", "extra_width"), ("extra_length", "extra_length"),
                          ("px", "px"), ("py", "py")):
            if key in sec:
                setattr(cfg, attr, _num(sec, key))
        if "side" in sec:
            if sec["side"] not in ("right", "left"):
                raise ConfigError("slot.side", f"expected right or left, got {sec['side']!r}")
            cfg.side = sec["side"]
        if "direction" in sec:
            cfg.direction = parse_angle(sec["direction"], "slot.direction")

    if "sim" in cp:
        sec = cp["sim"]
        kw = {}
        if "delta" in sec:
            kw["delta"] = _num(sec, "delta")
        if "gamma_cap" in sec:
            kw["gamma_cap"] = _num(sec, "gamma_cap", int)
        if "max_arc" in sec:
            kw["max_arc"] = _num(sec, "max_arc")
        if "delta_theta" in sec:
            cfg.delta_theta = parse_angle(sec["delta_theta"], "sim.delta_theta")
        cfg.sim = _build(SimParams, cfg.sim, kw, "sim")

    if "sweep" in cp:
        sec = cp["sweep"]
        kw = {}
        for key in ("delta_w", "delta_l", "w_extra_max", "l_extra_max"):
            if key in sec:
                kw[key] = _num(sec, key)
        if "delta_theta" in sec:
            kw["delta_theta"] = parse_angle(sec["delta_theta"], "sweep.delta_theta")
        if "gamma_max_list" in sec:
            try:
                kw["gamma_max_list"] = tuple(int(v) for v in sec["gamma_max_list"].replace(",", " ").split())
            except ValueError:
                raise ConfigError("sweep.gamma_max_list", "expected integers") from None
        cfg.sweep = _build(SweepParams, cfg.sweep, kw, "sweep")
    return cfg


def _build(cls, current, overrides: dict, section: str):
    try:
        return replace(current, **overrides)
    except ValueError as exc:
        key = next(iter(overrides), "")
        raise ConfigError(f"{section}.{key}" if key else section, str(exc)) from None


# --- SVG ---------------------------------------------------------------------

SVG_NS = "http://www.w3.org/2000/svg"


def render_svg(dims: CarDimensions, slot: ParkingSlot, *, entries: Sequence[CarState] = (),
               goals: Sequence[CarState] = (), paths: Sequence[Sequence[CarState]] = (),
               scale: float = 100.0, margin: float = 1.0, path_frame_every: int = 0) -> str:
    """
    Draw the slot, car frames and rear-axle paths.

    Coordinates are meters times ``scale`` with the y axis flipped; the scale
    is stored in ``<metadata>`` and in the root ``data-scale`` attribute. Each
    path is one ``<g>``; each frame is one ``<polygon>``.
    """
    g = slot_geometry(slot)
    pts = [*g.slot_rect.corners]
    frames = [frame_of(c, dims) for c in (*entries, *goals)]
    for f in frames:
        pts.extend(f.corners)
    for path in paths:
        pts.extend(Point2(c.x, c.y) for c in path)
    xmin = min(p.x for p in pts) - margin
    xmax = max(p.x for p in pts) + margin
    ymin = min(p.y for p in pts) - margin
    ymax = max(p.y for p in pts) + margin

    def xy(p) -> str:
        return f"{(p.x - xmin) * scale:.3f},{(ymax - p.y) * scale:.3f}"

    root = ET.Element("svg", {
        "xmlns": SVG_NS,
        "width": f"{(xmax - xmin) * scale:.0f}",
        "height": f"{(ymax - ymin) * scale:.0f}",
        "data-scale": f"{scale:g}",
    })
    meta = ET.SubElement(root, "metadata")
    meta.text = json.dumps({"scale": scale, "units": "m", "origin": [xmin, ymax], "y_axis": "up"})

    sg = ET.SubElement(root, "g", {"class": "slot"})
    ET.SubElement(sg, "polygon", {"points": " ".join(xy(p) for p in g.slot_rect.corners),
                                  "fill": "none", "stroke": "#1f4e9c", "stroke-width": "2",
                                  "stroke-dasharray": "6,4"})
    for side in g.obstacle_sides:
        ET.SubElement(sg, "polyline", {"points": f"{xy(side.a)} {xy(side.b)}",
                                       "stroke": "#1f4e9c", "stroke-width": "4", "fill": "none"})

    for cls, states, colour in (("entry", entries, "#e08a1e"), ("goal", goals, "#2e9c3f")):
        grp = ET.SubElement(root, "g", {"class": cls})
        for c in states:
            f = frame_of(c, dims)
            ET.SubElement(grp, "polygon", {"points": " ".join(xy(p) for p in f.corners),
                                           "fill": "none", "stroke": colour, "stroke-width": "1.5"})

    for i, path in enumerate(paths):
        grp = ET.SubElement(root, "g", {"class": "path", "id": f"path-{i}"})
        if path:
            ET.SubElement(grp, "polyline", {"points": " ".join(xy(c) for c in path),
                                            "fill": "none", "stroke": "#555", "stroke-width": "1"})
        if path_frame_every > 0:
            for c in path[::path_frame_every]:
                f = frame_of(c, dims)
                ET.SubElement(grp, "polygon", {"points": " ".join(xy(p) for p in f.corners),
                                               "fill": "none", "stroke": "#999", "stroke-width": "0.5"})
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"
