"""Minimal deterministic SVG rendering of tessellations: skeleton polylines,
window outline, and per-cell incircles with optional highlighting of large
inradii."""

from __future__ import annotations

from .stit import Tessellation


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def render_svg(
    tess: Tessellation,
    path: str,
    highlight_threshold: float | None = None,
    show_incircles: bool = True,
    size: int = 800,
) -> None:
    """Write an SVG of the tessellation to `path`.

    Incircles with radius above highlight_threshold are drawn in red; the
    rest (when show_incircles) in a faint blue.  Output bytes depend only on
    the tessellation and the arguments.
    """
    xs = [x for x, _ in tess.sim_window.vertices]
    ys = [y for _, y in tess.sim_window.vertices]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    span = max(xhi - xlo, yhi - ylo)
    pad = 0.02 * span
    unit = size / (span + 2.0 * pad)

    def sx(x: float) -> str:
        return _fmt((x - xlo + pad) * unit)

    def sy(y: float) -> str:
        return _fmt((yhi - y + pad) * unit)  # svg y grows downward

    stroke = max(0.5, 0.0015 * size)
    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    out.append(f'<rect width="{size}" height="{size}" fill="white"/>')
    pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in tess.sim_window.vertices)
    out.append(
        f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="{stroke * 1.5}"/>'
    )
    for seg in tess.segments:
        out.append(
            f'<line x1="{sx(seg.a[0])}" y1="{sy(seg.a[1])}" '
            f'x2="{sx(seg.b[0])}" y2="{sy(seg.b[1])}" '
            f'stroke="black" stroke-width="{stroke}"/>'
        )
    for cell in tess.cells:
        hot = highlight_threshold is not None and cell.inradius > highlight_threshold
        if not (hot or show_incircles):
            continue
        color = "crimson" if hot else "#7799cc"
        width = stroke * (2.0 if hot else 0.8)
        out.append(
            f'<circle cx="{sx(cell.incenter[0])}" cy="{sy(cell.incenter[1])}" '
            f'r="{_fmt(cell.inradius * unit)}" fill="none" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
