"""SVG charts of the Duistermaat-Heckman function of a 2-dimensional
multi-polytope."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .exactmath import ONE, qstr, sign
from .polytope import MultiPolytope, bounding_box, dh_eval

CANVAS = 800
GRID = 88


@dataclass
class Chamber:
    signs: tuple
    value: Fraction
    witness: tuple
    centroid: tuple
    samples: int


def _lines(P: MultiPolytope):
    """Distinct lines <u, lambda_i> = c_i, normalised so they compare equal."""
    seen = {}
    for i in P.hyperplane_indices():
        a = P.fan.lam[i]
        k = next((t for t, x in enumerate(a) if x != 0), None)
        if k is None:
            continue
        s = a[k]
        key = (a[0] / s, a[1] / s, P.c[i] / s)
        seen.setdefault(key, i)
    return sorted(seen)


def view_box(P: MultiPolytope):
    lo, hi = bounding_box(P)
    cx, cy = (lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2
    half = max(hi[0] - lo[0], hi[1] - lo[1]) / 2
    if half == 0:
        half = ONE
    half *= Fraction(6, 5)
    return (cx - half, cy - half), (cx + half, cy + half)


def dh_chambers(P: MultiPolytope, grid: int = GRID, v=None):
    """Group perturbed grid points of the view box by their exact sign
    vector against all walls and evaluate DH once per group."""
    if P.fan.n != 2:
        raise PreconditionError("DH charts need n = 2")
    if P.fan.is_zero():
        raise PreconditionError("the zero multi-fan has no chart")
    lines = _lines(P)
    (x0, y0), (x1, y1) = view_box(P)
    if v is None:
        v = P.fan.generic_vector(0)
    groups = {}
    # the small offsets keep grid points off walls with rational data
    dx, dy = Fraction(1, 1009), Fraction(1, 1013)
    for a in range(grid):
        for b in range(grid):
            u = (x0 + (x1 - x0) * (Fraction(2 * a + 1, 2 * grid) + dx / grid),
                 y0 + (y1 - y0) * (Fraction(2 * b + 1, 2 * grid) + dy / grid))
            signs = tuple(sign(p * u[0] + r * u[1] - c) for p, r, c in lines)
            if 0 in signs:
                continue
            groups.setdefault(signs, []).append(u)
    out = []
    for signs in sorted(groups):
        pts = groups[signs]
        value = dh_eval(P, pts[0], v).value
        cen = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
        out.append(Chamber(signs, value, pts[0], cen, len(pts)))
    return out


def _clip(line, lo, hi):
    """Segment of p*x + r*y = c inside the box, or None."""
    p, r, c = line
    pts = []
    if r != 0:
        for x in (lo[0], hi[0]):
            y = (c - p * x) / r
            if lo[1] <= y <= hi[1]:
                pts.append((x, y))
    if p != 0:
        for y in (lo[1], hi[1]):
            x = (c - r * y) / p
            if lo[0] <= x <= hi[0]:
                pts.append((x, y))
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def emit_svg(P: MultiPolytope, grid: int = GRID, v=None) -> str:
    chambers = dh_chambers(P, grid, v)
    lo, hi = view_box(P)
    span = hi[0] - lo[0]

    def px(u):
        x = (u[0] - lo[0]) / span * CANVAS
        y = (hi[1] - u[1]) / span * CANVAS
        return f"{float(x):.2f}", f"{float(y):.2f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
           f'viewBox="0 0 {CANVAS} {CANVAS}">',
           f'<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>']
    for line in _lines(P):
        seg = _clip(line, lo, hi)
        if seg is None:
            continue
        (ax, ay), (bx, by) = px(seg[0]), px(seg[1])
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="black" stroke-width="1.5"/>')
    for ch in chambers:
        x, y = px(ch.centroid)
        out.append(f'<text x="{x}" y="{y}" font-family="monospace" font-size="18" '
                   f'text-anchor="middle" dominant-baseline="middle" '
                   f'data-witness="{qstr(ch.witness[0])},{qstr(ch.witness[1])}">{qstr(ch.value)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
