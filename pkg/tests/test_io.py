import csv
import io as stdio
import json
import math
import xml.etree.ElementTree as ET

import pytest

from parkentry import io as pio
from parkentry.baseline import ComparisonRow
from parkentry.planner import attach_paths, find_entry_positions
from parkentry.presets import BUILTIN, PRESET_DIR_ENV, all_presets, get_preset
from parkentry.slot import ParkingSlot
from parkentry.sweep import FeasibilityCurve, HeadingSubranges
from parkentry.vehicle import CarState, SimParams

ZOE = BUILTIN["zoe"].dims
MID = BUILTIN["mid-sized"].dims


@pytest.fixture(scope="module")
def zips_results():
    return find_entry_positions(MID, ParkingSlot.axis_aligned(2.2, 5.1), SimParams(), 1e-3)


def _csv(data: bytes):
    return list(csv.reader(stdio.StringIO(data.decode())))


def test_entry_csv_schema(zips_results):
    rows = _csv(pio.serialize_results(zips_results, "csv"))
    assert tuple(rows[0]) == pio.ENTRY_COLUMNS
    assert len(rows) == len(zips_results) + 1
    assert {r[-1] for r in rows[1:]} == {"10"}
    thetas = [float(r[2]) for r in rows[1:]]
    assert thetas == sorted(thetas)
    for r in rows[1:]:
        for cell in r[:-1]:
            digits = cell.lstrip("-").replace(".", "").split("e")[0].lstrip("0")
            assert len(digits) <= 9


def test_entry_json_round_trip(zips_results):
    data = pio.serialize_results(zips_results, "json")
    rows = pio.read_entry_json(data)
    assert [set(r) for r in rows] == [set(pio.ENTRY_COLUMNS)] * len(zips_results)
    for r, res in zip(rows, sorted(zips_results, key=lambda x: x.heading)):
        assert r["entry_x"] == res.entry.x and r["goal_theta"] == res.goal.theta
        assert r["entry_theta"] == res.heading and r["gamma"] == res.gamma


def test_empty_results():
    assert pio.serialize_results([], "csv") == (",".join(pio.ENTRY_COLUMNS) + "\n").encode()
    assert json.loads(pio.serialize_results([], "json")) == []


def test_byte_identical_reruns():
    slot = ParkingSlot.axis_aligned(2.0, 4.7)
    a = pio.serialize_results(find_entry_positions(ZOE, slot, SimParams(), 1e-3), "csv")
    b = pio.serialize_results(find_entry_positions(ZOE, slot, SimParams(), 1e-3), "csv")
    assert a == b


def test_other_schemas():
    curve = FeasibilityCurve(10, ((2.0, 4.5), (2.05, 4.45)))
    rows = _csv(pio.serialize_results([curve], "csv"))
    assert tuple(rows[0]) == ("gamma_max", "width", "length_min") and rows[1] == ["10", "2", "4.5"]
    h = HeadingSubranges((2.0, 5.0), 5, ((3.2, 3.3), (3.5, 3.6)))
    assert len(_csv(pio.serialize_results([h], "csv"))) == 3
    cmp_rows = _csv(pio.serialize_results([ComparisonRow(4.0, None, None), ComparisonRow(5.0, 2, 4, 2)], "csv"))
    assert cmp_rows[1] == ["4", "", "", ""] and cmp_rows[2] == ["5", "2", "4", "2"]
    with pytest.raises(ValueError):
        pio.serialize_results([curve], "xml")


def test_parse_angle():
    assert pio.parse_angle("45", "k") == pytest.approx(math.pi / 4)
    assert pio.parse_angle("0.5rad", "k") == 0.5
    assert pio.parse_angle("90deg", "k") == pytest.approx(math.pi / 2)
    with pytest.raises(pio.ConfigError) as exc:
        pio.parse_angle("steep", "slot.direction")
    assert exc.value.key == "slot.direction"


def test_load_config_full():
    cfg = pio.load_config("""
[car]
preset = zoe
[slot]
width = 2.0
length = 4.5
side = left
direction = 90
[sim]
delta = 0.0025
gamma_cap = 50
delta_theta = 0.01rad
[sweep]
delta_w = 0.05
gamma_max_list = 1, 2, 30
""")
    assert cfg.car == "zoe" and cfg.side == "left"
    assert cfg.direction == pytest.approx(math.pi / 2)
    assert cfg.sim == SimParams(delta=0.0025, gamma_cap=50)
    assert cfg.delta_theta == 0.01
    assert cfg.sweep.delta_w == 0.05 and cfg.sweep.gamma_max_list == (1, 2, 30)
    slot = cfg.slot_for(ZOE)
    assert (slot.W, slot.L) == (2.0, 4.5)


def test_config_explicit_dims_and_extras():
    cfg = pio.load_config("[car]\nw=1.8\nd_f=3.7\nd_r=1.0\nb=2.7\nphi_max=45\n[slot]\nextra_width=0.4\nextra_length=0.5\n")
    assert cfg.dims.phi_max == pytest.approx(math.pi / 4)
    slot = cfg.slot_for(cfg.dims)
    assert (slot.W, slot.L) == pytest.approx((2.2, 5.2))


@pytest.mark.parametrize("text,key", [
    ("[slot]\nwidth = wide\n", "slot.width"),
    ("[slot]\ncolour = red\n", "slot.colour"),
    ("[garage]\nx = 1\n", "garage"),
    ("[sim]\ndelta = -1\n", "sim.delta"),
    ("[car]\nw = 1.8\n", "car.d_f"),
    ("[slot]\nside = middle\n", "slot.side"),
    ("[sweep]\ngamma_max_list = a b\n", "sweep.gamma_max_list"),
    ("no section here", "config"),
])
def test_config_errors_name_key(text, key):
    with pytest.raises(pio.ConfigError) as exc:
        pio.load_config(text)
    assert exc.value.key == key
    assert key in str(exc.value)


def test_slot_for_errors():
    cfg = pio.RunConfig(slot_width=1.5, slot_length=5.0)
    with pytest.raises(pio.ConfigError) as exc:
        cfg.slot_for(ZOE)
    assert exc.value.key == "slot.width"
    with pytest.raises(pio.ConfigError) as exc:
        pio.RunConfig(slot_width=2.0).slot_for(ZOE)
    assert exc.value.key == "slot.length"


def test_user_preset_directory(tmp_path, monkeypatch):
    (tmp_path / "kart.ini").write_text("[car]\nname = kart\nw = 1.2\nd_f = 1.5\nd_r = 0.3\nb = 1.1\nphi_max_deg = 30\n")
    monkeypatch.setenv(PRESET_DIR_ENV, str(tmp_path))
    assert "kart" in all_presets() and "zoe" in all_presets()
    assert get_preset("kart").dims.b == 1.1
    with pytest.raises(KeyError, match="known"):
        get_preset("tank")


def _polygon_sides(poly, scale):
    pts = [tuple(float(v) / scale for v in p.split(",")) for p in poly.get("points").split()]
    sides = [math.dist(pts[i], pts[(i + 1) % 4]) for i in range(4)]
    return sorted(sides)


def test_svg_frames_have_car_dimensions():
    slot = ParkingSlot.axis_aligned(2.2, 5.1)
    res = attach_paths(find_entry_positions(MID, slot, SimParams(), 1e-3)[:2], MID, slot)
    svg = pio.render_svg(MID, slot, entries=[r.entry for r in res], goals=[r.goal for r in res],
                         paths=[r.path for r in res], scale=80.0, path_frame_every=150)
    root = ET.fromstring(svg)
    ns = {"s": pio.SVG_NS}
    scale = float(root.get("data-scale"))
    meta = json.loads(root.find("s:metadata", ns).text)
    assert scale == meta["scale"] == 80.0
    frames = [p for g in root.findall("s:g", ns) if g.get("class") != "slot" for p in g.findall("s:polygon", ns)]
    assert len(frames) >= 4
    for poly in frames:
        a, b, c, d = _polygon_sides(poly, scale)
        assert (a, b) == pytest.approx((MID.w, MID.w), abs=1e-4)
        assert (c, d) == pytest.approx((MID.length, MID.length), abs=1e-4)
    assert len(root.findall("s:g[@class='path']", ns)) == 2


def test_svg_deterministic():
    slot = ParkingSlot.axis_aligned(2.0, 5.0)
    c = CarState(3.0, 1.0, math.pi)
    assert pio.render_svg(ZOE, slot, goals=[c]) == pio.render_svg(ZOE, slot, goals=[c])
