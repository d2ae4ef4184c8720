"""Mesh pictures: a hand-written deterministic SVG and a matplotlib PNG."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .mesh import VERTICAL, LRMesh

WIDTH = 480.0
MARGIN = 20.0
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
BASE_STROKE = 1.5


def _fmt(v: float) -> str:
    text = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


class _Frame:
    def __init__(self, domain):
        self.x0, self.x1, self.y0, self.y1 = domain
        self.scale = WIDTH / float(self.x1 - self.x0)
        self.height = float(self.y1 - self.y0) * self.scale

    def x(self, v):
        return MARGIN + float(v - self.x0) * self.scale

    def y(self, v):
        return MARGIN + float(self.y1 - v) * self.scale


def render_svg(mesh: LRMesh, supports=(), vertices=(), title=None) -> str:
    """SVG of ``mesh``: one ``<line>`` per meshline, width proportional to multiplicity.

    ``supports`` are B-splines drawn as shaded rectangles; ``vertices`` are
    ``(x, y)`` positions marked with circles.
    """
    f = _Frame(mesh.domain)
    w, h = WIDTH + 2 * MARGIN, f.height + 2 * MARGIN
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
           f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">']
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g class="supports">')
    for i, B in enumerate(supports):
        x0, x1, y0, y1 = B.support
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<rect class="support" x="{_fmt(f.x(x0))}" y="{_fmt(f.y(y1))}" '
                   f'width="{_fmt(f.x(x1) - f.x(x0))}" height="{_fmt(f.y(y0) - f.y(y1))}" '
                   f'fill="{color}" fill-opacity="0.18" stroke="{color}" stroke-width="2"/>')
    out.append("</g>")
    out.append('<g class="meshlines" stroke="black" stroke-linecap="square">')
    for m in sorted(mesh.meshlines, key=lambda m: (m.axis, m.fixed, m.lo)):
        if m.axis == VERTICAL:
            a, b, c, d = f.x(m.fixed), f.y(m.lo), f.x(m.fixed), f.y(m.hi)
        else:
            a, b, c, d = f.x(m.lo), f.y(m.fixed), f.x(m.hi), f.y(m.fixed)
        out.append(f'<line x1="{_fmt(a)}" y1="{_fmt(b)}" x2="{_fmt(c)}" y2="{_fmt(d)}" '
                   f'stroke-width="{_fmt(BASE_STROKE * m.multiplicity)}"/>')
    out.append("</g>")
    out.append('<g class="vertices">')
    for x, y in sorted(vertices):
        out.append(f'<circle cx="{_fmt(f.x(x))}" cy="{_fmt(f.y(y))}" r="4" fill="black"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_png(mesh: LRMesh, path, supports=(), vertices=(), title=None):
    """Matplotlib rendering of the same picture, for report figures."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    x0, x1, y0, y1 = (float(v) for v in mesh.domain)
    fig, ax = plt.subplots(figsize=(5.0, 5.0 * (y1 - y0) / (x1 - x0) + 0.4))
    for i, B in enumerate(supports):
        a, b, c, d = (float(v) for v in B.support)
        color = PALETTE[i % len(PALETTE)]
        ax.add_patch(Rectangle((a, c), b - a, d - c, facecolor=color, alpha=0.18,
                               edgecolor=color, linewidth=1.5))
    for m in mesh.meshlines:
        fixed, lo, hi = float(m.fixed), float(m.lo), float(m.hi)
        xs, ys = ((fixed, fixed), (lo, hi)) if m.axis == VERTICAL else ((lo, hi), (fixed, fixed))
        ax.plot(xs, ys, color="black", linewidth=0.8 * m.multiplicity, solid_capstyle="butt")
    if vertices:
        ax.scatter([float(x) for x, _ in vertices], [float(y) for _, y in vertices],
                   color="black", s=18, zorder=3)
    ax.set_aspect("equal")
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
