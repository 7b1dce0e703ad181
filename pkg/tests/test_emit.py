import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabolic_weingarten import emit
from parabolic_weingarten.errors import EmptyCurve
from parabolic_weingarten.odetrace import GeneratingCurve, MaxArcLength
from parabolic_weingarten.params import GaussConstant, InitialConditions


def _empty():
    return GeneratingCurve(np.empty((0, 4)), GaussConstant(0.0), InitialConditions(),
                           MaxArcLength(), MaxArcLength())


def _from_rows(rows):
    return GeneratingCurve(np.asarray(rows, float), GaussConstant(0.0), InitialConditions(),
                           MaxArcLength(), MaxArcLength())


def test_csv_round_trip(curves):
    c = curves("LW-2,1")
    buf = io.StringIO()
    n = emit.write_curve(c, "csv", buf)
    text = buf.getvalue()
    assert n == len(text.encode())
    assert text.startswith("s,x,z,theta\n") and "\r" not in text
    back = emit.read_csv(text)
    assert back.tobytes() == c.samples.tobytes()


@settings(max_examples=50)
@given(st.lists(st.tuples(*[st.floats(allow_nan=False, allow_infinity=False)] * 4),
                min_size=1, max_size=20))
def test_csv_round_trip_any_doubles(rows):
    c = _from_rows(rows)
    back = emit.read_csv(emit.curve_to_csv(c))
    assert back.tobytes() == c.samples.tobytes()


def test_json_schema(curves, tmp_path):
    c = curves("LW-2,1")
    path = tmp_path / "c.json"
    n = emit.write_curve(c, "json", path)
    assert n == path.stat().st_size
    doc = json.loads(path.read_text())
    assert set(doc) == {"spec", "ic", "samples", "left_end", "right_end"}
    assert doc["left_end"]["kind"] == "BoundaryContact"
    assert doc["spec"] == {"kind": "LinearPrincipal", "m": -2.0, "n": 1.0, "orientation_flipped": False}
    back = emit.read_json(path.read_text())
    assert back.samples.tobytes() == c.samples.tobytes()
    assert back.right_end == c.right_end and back.spec == c.spec


def test_empty_curve():
    with pytest.raises(EmptyCurve):
        emit.write_curve(_empty(), "csv", io.StringIO())
    with pytest.raises(EmptyCurve):
        emit.render_svg([_empty()])
    with pytest.raises(EmptyCurve):
        emit.sweep_mesh(_empty(), 1.0, 2)


def test_svg_basic(curves):
    svg = emit.render_svg([curves("K1")], emit.SvgStyle(caption="K = 1"))
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 1 and "stroke-dasharray" in svg and "K = 1" in svg
    assert svg == emit.render_svg([curves("K1")], emit.SvgStyle(caption="K = 1"))


def test_svg_empty_list_has_axis():
    svg = emit.render_svg([])
    assert "<line" in svg and "<polyline" not in svg


def test_svg_axis_in_view(curves):
    # the curve stays near z = 1, yet the boundary line must be inside the viewport
    svg = emit.render_svg([curves("K1")])
    height = float(svg.split('height="')[1].split('"')[0])
    y_axis = float(svg.split('<line x1="0" y1="')[1].split('"')[0])
    assert 0 < y_axis < height


def test_svg_panels_and_decimation(curves):
    svg = emit.render_svg([curves("LW1,2"), curves("LW3,1")],
                          emit.SvgStyle(panels=True, labels=("a", "b"), max_points=500))
    assert svg.count("<polyline") == 2 and svg.count("<g transform") == 2
    first = svg.split('points="')[1].split('"')[0]
    assert len(first.split()) <= 500


def test_mesh_counts():
    rows = [[s, s, 1.0, 0.0] for s in np.linspace(-1, 1, 100)]
    mesh = emit.sweep_mesh(_from_rows(rows), 2.0, 10)
    assert len(mesh.vertices) == 1000 and len(mesh.faces) == 891
    assert (mesh.rows, mesh.cols) == (100, 10)


def test_flat_strip(curves):
    mesh = emit.sweep_mesh(curves("K0"), 1.5, 2)
    assert np.all(mesh.vertices[:, 2] == 1.0)
    assert set(mesh.vertices[:, 1]) == {-1.5, 1.5}


@pytest.mark.parametrize("name", ["K1", "LW1,2", "LW-2,1"])
def test_mesh_orientation_and_positivity(curves, name):
    c = curves(name)
    mesh = emit.sweep_mesh(c, 1.0, 4, rows=300)
    assert np.all(mesh.vertices[:, 2] > 0)
    v = mesh.vertices
    a, b, d = v[mesh.faces[:, 0]], v[mesh.faces[:, 1]], v[mesh.faces[:, 3]]
    normal = np.cross(b - a, d - a)
    assert np.all(np.abs(normal[:, 1]) < 1e-12)
    # every face normal lies on the same side of the curve tangent
    tangent = (d - a)[:, [0, 2]]
    side = normal[:, 0] * tangent[:, 1] - normal[:, 2] * tangent[:, 0]
    assert np.all(side < 0) or np.all(side > 0)


def test_obj_output(curves, tmp_path):
    mesh = emit.sweep_mesh(curves("K1"), 1.0, 5)
    path = tmp_path / "m.obj"
    n = emit.write_obj(mesh, path)
    text = path.read_text()
    assert n == len(text.encode())
    lines = text.splitlines()
    vs = [l for l in lines if l.startswith("v ")]
    fs = [l for l in lines if l.startswith("f ")]
    assert len(vs) == len(mesh.vertices) and len(fs) == len(mesh.faces)
    assert len(vs) + len(fs) == len(lines)
    idx = np.array([[int(t) for t in l.split()[1:]] for l in fs])
    assert idx.min() == 1 and idx.max() == len(vs)
    buf = io.BytesIO()
    emit.write_obj(mesh, buf)
    assert buf.getvalue() == text.encode()
    assert float(vs[0].split()[3]) == pytest.approx(mesh.vertices[0, 2], rel=1e-8)
