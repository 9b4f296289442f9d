"""SVG snapshots of a map's coordinate-pair projection.

Pure projection, no layout: finite vertices become dots, bounded edges
segments, unbounded rays truncated stubs, and (for superabundant genus-one
maps) the trace of the first containing hyperplane is overlaid as a dashed
line.  Diagnostics only; float arithmetic is fine here.
"""

from __future__ import annotations

from fractions import Fraction

from .exactgeom import is_zero_vec, ratvec, vdot
from .maps import TropicalStableMap

_STYLE = {
    "edge": "stroke:#333;stroke-width:0.04",
    "ray": "stroke:#888;stroke-width:0.03",
    "h": "stroke:#b40;stroke-width:0.03;stroke-dasharray:0.12,0.08",
    "vertex": "fill:#06c",
}


def render_svg(m: TropicalStableMap, axes: tuple[int, int] = (0, 1), radius=Fraction(3)) -> str:
    i, j = axes
    n = m.fan.ambient_dim
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise ValueError(f"axes {axes} out of range for ambient dimension {n}")
    radius = float(radius)

    def project(p) -> tuple[float, float]:
        return float(p[i]), float(p[j])

    points = [project(p) for p in m.positions.values()] or [(0.0, 0.0)]
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    lo_x, hi_x = min(xs) - radius - 0.5, max(xs) + radius + 0.5
    lo_y, hi_y = min(ys) - radius - 0.5, max(ys) + radius + 0.5

    def fmt(x: float) -> str:
        return f"{x:.4f}"

    def svg_y(y: float) -> float:
        return hi_y + lo_y - y  # flip so larger coordinates point up

    lines = []
    marked = m.curve.marked_vertex_ids
    for e in m.curve.edges:
        a, b = e.ends
        d = m.edge_data[e.id]
        if a in marked or b in marked:
            finite = b if a in marked else a
            if is_zero_vec(d.u):
                continue
            p = project(m.positions[finite])
            u = (float(d.u[i]), float(d.u[j]))
            norm = (u[0] ** 2 + u[1] ** 2) ** 0.5
            if norm == 0:
                continue
            q = (p[0] + radius * u[0] / norm, p[1] + radius * u[1] / norm)
            lines.append(_line(p, q, "ray", fmt, svg_y))
        elif a != b:
            lines.append(_line(project(m.positions[a]), project(m.positions[b]), "edge", fmt, svg_y))

    h_trace = _hyperplane_trace(m, (i, j))
    if h_trace is not None:
        (p, q) = _clip_line(h_trace, (lo_x, lo_y, hi_x, hi_y))
        if p is not None:
            lines.append(_line(p, q, "h", fmt, svg_y))

    for vid, pos in sorted(m.positions.items()):
        x, y = project(pos)
        lines.append(
            f'<circle cx="{fmt(x)}" cy="{fmt(svg_y(y))}" r="0.08" style="{_STYLE["vertex"]}">'
            f"<title>{vid}</title></circle>"
        )

    width = hi_x - lo_x
    height = hi_y - lo_y
    header = (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{fmt(lo_x)} {fmt(lo_y)} {fmt(width)} {fmt(height)}" '
        'width="640" height="640">'
    )
    return "\n".join([header, *lines, "</svg>"]) + "\n"


def _line(p, q, style, fmt, svg_y) -> str:
    return (
        f'<line x1="{fmt(p[0])}" y1="{fmt(svg_y(p[1]))}" '
        f'x2="{fmt(q[0])}" y2="{fmt(svg_y(q[1]))}" style="{_STYLE[style]}"/>'
    )


def _hyperplane_trace(m: TropicalStableMap, axes):
    """(a, b, c) with a*x + b*y = c: the projected trace of the first
    hyperplane containing the cycle span, when one exists."""
    from .curves import betti_and_genus
    from .wellspaced import cycle_data, enumerate_flats

    try:
        if betti_and_genus(m.curve)[1] != 1:
            return None
        cd = cycle_data(m)
        if cd.codim == 0:
            return None
        flats = enumerate_flats(m, cd)
    except ValueError:
        return None
    normal = ratvec(flats[0].normal)
    i, j = axes
    a, b = float(normal[i]), float(normal[j])
    if a == 0 and b == 0:
        return None
    c = float(vdot(normal, cd.base_point))
    # the trace of {normal . x = normal . base} in the (i, j)-plane through base
    off = sum(float(normal[k]) * float(cd.base_point[k]) for k in range(len(normal)) if k not in (i, j))
    return (a, b, c - off)


def _clip_line(trace, box):
    a, b, c = trace
    lo_x, lo_y, hi_x, hi_y = box
    pts = []
    if b != 0:
        for x in (lo_x, hi_x):
            y = (c - a * x) / b
            if lo_y - 1e-9 <= y <= hi_y + 1e-9:
                pts.append((x, y))
    if a != 0:
        for y in (lo_y, hi_y):
            x = (c - b * y) / a
            if lo_x - 1e-9 <= x <= hi_x + 1e-9:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if not any(abs(p[0] - q[0]) + abs(p[1] - q[1]) < 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None, None
    return uniq[0], uniq[1]
