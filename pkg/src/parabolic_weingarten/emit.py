"""Serialization of curves (CSV, JSON), SVG figures and OBJ surface meshes."""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass
from xml.sax.saxutils import escape

import numpy as np

from .analysis import _hermite_xz
from .errors import EmptyCurve
from .odetrace import (
    BoundaryContact, GeneratingCurve, MaxArcLength, StepUnderflow, SymmetryPoint,
    TraceOptions, VerticalTangent,
)
from .params import GaussConstant, InitialConditions, Kappa1Constant, Kappa2Constant, LinearPrincipal

CSV_HEADER = ("s", "x", "z", "theta")

_SPEC_TYPES = {cls.__name__: cls for cls in (GaussConstant, LinearPrincipal, Kappa1Constant, Kappa2Constant)}
_END_TYPES = {cls.__name__: cls for cls in (BoundaryContact, VerticalTangent, SymmetryPoint,
                                             MaxArcLength, StepUnderflow)}


def _emit(text: str, sink) -> int:
    data = text.encode("utf-8")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            fh.write(data)
    elif isinstance(sink, (io.RawIOBase, io.BufferedIOBase)):
        sink.write(data)
    else:
        sink.write(text)
    return len(data)


def _check_curve(curve):
    if curve is None or len(curve) == 0:
        raise EmptyCurve("curve has no samples")


def _tagged(obj) -> dict:
    out = {"kind": type(obj).__name__}
    out.update(asdict(obj))
    return out


def _untag(d: dict, table: dict):
    d = dict(d)
    cls = table[d.pop("kind")]
    return cls(**d)


# -- curves ---------------------------------------------------------------------

def curve_to_csv(curve: GeneratingCurve) -> str:
    _check_curve(curve)
    lines = [",".join(CSV_HEADER)]
    for row in curve.samples.tolist():
        lines.append(",".join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def curve_to_json(curve: GeneratingCurve) -> str:
    _check_curve(curve)
    doc = {
        "spec": _tagged(curve.spec),
        "ic": asdict(curve.ic),
        "samples": curve.samples.tolist(),
        "left_end": _tagged(curve.left_end),
        "right_end": _tagged(curve.right_end),
    }
    return json.dumps(doc, indent=None) + "\n"


def write_curve(curve: GeneratingCurve, fmt: str, sink) -> int:
    """Write ``curve`` as ``"csv"`` or ``"json"`` to a path or stream;
    returns the number of bytes written."""
    fmt = fmt.lower()
    if fmt == "csv":
        return _emit(curve_to_csv(curve), sink)
    if fmt == "json":
        return _emit(curve_to_json(curve), sink)
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(text: str) -> np.ndarray:
    """Parse CSV produced by :func:`write_curve` into an ``(N, 4)`` array."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected header {header!r}")
    return np.array([[float(v) for v in row] for row in reader if row], dtype=float)


def read_json(text: str) -> GeneratingCurve:
    """Rebuild a curve from JSON produced by :func:`write_curve`.

    Critical points recorded during integration are not serialized.
    """
    doc = json.loads(text)
    return GeneratingCurve(
        samples=np.array(doc["samples"], dtype=float).reshape(-1, 4),
        spec=_untag(doc["spec"], _SPEC_TYPES),
        ic=InitialConditions(**doc["ic"]),
        left_end=_untag(doc["left_end"], _END_TYPES),
        right_end=_untag(doc["right_end"], _END_TYPES),
        options=TraceOptions(),
    )


# -- SVG ------------------------------------------------------------------------

_PALETTE = ("#1f4e9c", "#b22222", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f")


@dataclass(frozen=True)
class SvgStyle:
    width: float = 480.0
    caption: str = ""
    labels: tuple = ()             # one label per curve, shown in its panel
    panels: bool = False           # one panel per curve instead of overlaying
    max_points: int = 4000
    stroke_width: float = 1.5
    padding: float = 0.1


def _decimate(curve, max_points):
    n = len(curve)
    if n <= max_points:
        return curve.x, curve.z
    idx = np.unique(np.linspace(0, n - 1, max_points).round().astype(int))
    return curve.x[idx], curve.z[idx]


def _frame(polys, pad):
    xs = [p[0] for p in polys]
    zs = [p[1] for p in polys]
    if xs:
        x0 = min(float(a.min()) for a in xs)
        x1 = max(float(a.max()) for a in xs)
        z1 = max(0.0, max(float(a.max()) for a in zs))
        z0 = min(0.0, min(float(a.min()) for a in zs))
    else:
        x0, x1, z0, z1 = -1.0, 1.0, 0.0, 1.0
    w, h = x1 - x0, z1 - z0
    span = max(w, h, 1e-12)
    w = w if w > 0 else span
    h = h if h > 0 else span
    cx = 0.5 * (x0 + x1)
    cz = 0.5 * (z0 + z1)
    return cx - 0.5 * w * (1 + 2 * pad), cz - 0.5 * h * (1 + 2 * pad), w * (1 + 2 * pad), h * (1 + 2 * pad)


def _panel(polys, colors, width, style, label):
    x0, z0, w, h = _frame(polys, style.padding)
    scale = width / w
    height = h * scale

    def px(x):
        return (x - x0) * scale

    def pz(z):
        return (z0 + h - z) * scale

    out = [f'<line x1="0" y1="{pz(0.0):.3f}" x2="{width:.3f}" y2="{pz(0.0):.3f}" '
           f'stroke="#555555" stroke-width="1" stroke-dasharray="4 3"/>']
    for (x, z), color in zip(polys, colors):
        pts = " ".join(f"{px(a):.3f},{pz(b):.3f}" for a, b in zip(x.tolist(), z.tolist()))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="{style.stroke_width:g}" stroke-linejoin="round"/>')
    if label:
        out.append(f'<text x="{width / 2:.3f}" y="{height - 6:.3f}" text-anchor="middle" '
                   f'font-family="serif" font-size="13">{escape(label)}</text>')
    return out, height


def render_svg(curves, style: SvgStyle | None = None) -> str:
    """Draw generating curves in the (x, z) plane with equal scales.

    The ideal boundary z = 0 is always in view, as a dashed line.  Output is
    a pure function of the input.
    """
    style = style or SvgStyle()
    curves = list(curves)
    for c in curves:
        _check_curve(c)
    polys = [_decimate(c, style.max_points) for c in curves]
    colors = [_PALETTE[i % len(_PALETTE)] for i in range(len(curves))]
    body = []
    if style.panels and len(curves) > 1:
        total_w = style.width * len(curves)
        height = 0.0
        for i, (poly, color) in enumerate(zip(polys, colors)):
            label = style.labels[i] if i < len(style.labels) else ""
            items, h = _panel([poly], [color], style.width, style, label)
            body.append(f'<g transform="translate({i * style.width:.3f},0)">')
            body.extend(items)
            body.append("</g>")
            height = max(height, h)
    else:
        total_w = style.width
        label = style.labels[0] if len(style.labels) == 1 else ""
        body, height = _panel(polys, colors, style.width, style, label)
    cap_h = 28.0 if style.caption else 0.0
    if style.caption:
        body.append(f'<text x="{total_w / 2:.3f}" y="{height + 19:.3f}" text-anchor="middle" '
                    f'font-family="serif" font-size="14">{escape(style.caption)}</text>')
    total_h = height + cap_h
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w:.3f}" '
        f'height="{total_h:.3f}" viewBox="0 0 {total_w:.3f} {total_h:.3f}">\n'
        f'<rect x="0" y="0" width="{total_w:.3f}" height="{total_h:.3f}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


# -- meshes ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    vertices: np.ndarray    # (rows*cols, 3)
    faces: np.ndarray       # (F, 4) zero-based vertex indices
    rows: int
    cols: int


def sweep_mesh(curve: GeneratingCurve, t_half_width: float, cols: int,
               rows: int | None = None) -> SurfaceMesh:
    """Vertices ``(x(s), t, z(s))`` over the samples (or ``rows`` points
    evenly spaced in s) times ``cols`` evenly spaced values of t."""
    _check_curve(curve)
    if cols < 2:
        raise ValueError("cols must be >= 2")
    if not t_half_width > 0:
        raise ValueError("t_half_width must be positive")
    if rows is None:
        x, z = curve.x, curve.z
    else:
        if rows < 2 or len(curve) < 2:
            raise ValueError("rows must be >= 2 and the curve needs two samples")
        s = np.linspace(curve.s[0], curve.s[-1], rows)
        x, z = _hermite_xz(curve, s)
        z = np.maximum(z, curve.z.min())   # interpolation never dips below the samples
    nr = len(x)
    t = np.linspace(-t_half_width, t_half_width, cols)
    verts = np.empty((nr, cols, 3))
    verts[:, :, 0] = x[:, None]
    verts[:, :, 1] = t[None, :]
    verts[:, :, 2] = z[:, None]
    i, j = np.meshgrid(np.arange(nr - 1), np.arange(cols - 1), indexing="ij")
    a = (i * cols + j).ravel()
    faces = np.stack([a, a + 1, a + cols + 1, a + cols], axis=1)
    return SurfaceMesh(verts.reshape(-1, 3), faces, nr, cols)


def write_obj(mesh: SurfaceMesh, sink) -> int:
    lines = [f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in mesh.vertices.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1} {d + 1}" for a, b, c, d in mesh.faces.tolist()]
    return _emit("\n".join(lines) + "\n", sink)
