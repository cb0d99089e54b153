"""Deterministic SVG drawings of a network and its flow state.

The output is plain hand-assembled SVG text: every coordinate is formatted
with two decimals and elements are emitted in sorted order, so rendering
the same network and solution twice produces byte-identical files.
"""

from __future__ import annotations

from .network import (
    DeadEnd,
    FlowSolution,
    FlowSource,
    Network,
    Outlet,
    PressureSource,
)
from .simulate import StreamlinePath

__all__ = ["render_svg"]

_MARGIN = 48.0  # px
_PATH_COLORS = ("#111111", "#006400", "#8b008b", "#b8860b", "#00555f")


def _fmt(value: float) -> str:
    out = f"{value:.2f}"
    return "0.00" if out == "-0.00" else out


def _terminal_color(bc: object) -> str:
    if isinstance(bc, (PressureSource, FlowSource)):
        return "#2e7d32"
    if isinstance(bc, Outlet):
        return "#e65100"
    if isinstance(bc, DeadEnd):
        return "#616161"
    return "#000000"


def render_svg(
    net: Network,
    sol: FlowSolution | None = None,
    paths: tuple[StreamlinePath, ...] = (),
    title: str | None = None,
    width: int = 640,
) -> str:
    """Draw the channel layout, colour-coded by flow magnitude.

    Channel stroke width tracks the physical channel width; the colour runs
    from blue (no flow) to red (the largest flow in the solution). Droplet
    streamline paths are overlaid as dashed polylines.
    """
    xs = [n.x for n in net.nodes.values()]
    ys = [n.y for n in net.nodes.values()]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span_x = max_x - min_x
    span_y = max_y - min_y

    inner = width - 2.0 * _MARGIN
    if span_x > 0.0:
        scale = inner / span_x
    elif span_y > 0.0:
        scale = inner / span_y
    else:
        scale = 1.0
    height = span_y * scale + 2.0 * _MARGIN

    def px(x: float) -> float:
        return _MARGIN + (x - min_x) * scale

    def py(y: float) -> float:
        return _MARGIN + (max_y - y) * scale

    q_max = 0.0
    if sol is not None:
        q_max = max((abs(q) for q in sol.flows.values()), default=0.0)

    lines: list[str] = []
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{_fmt(height)}" viewBox="0 0 {width} {_fmt(height)}">'
    )
    lines.append(f'<rect width="{width}" height="{_fmt(height)}" fill="#ffffff"/>')
    if title:
        lines.append(
            f'<text x="{_fmt(_MARGIN)}" y="24.00" font-family="monospace" '
            f'font-size="14">{title}</text>'
        )

    for cid in sorted(net.channels):
        ch = net.channels[cid]
        a = net.nodes[ch.from_node]
        b = net.nodes[ch.to_node]
        stroke = max(ch.geometry.width * scale, 1.0)
        if sol is None or q_max == 0.0:
            color = "#888888"
        else:
            hue = 240.0 * (1.0 - abs(sol.flows[cid]) / q_max)
            color = f"hsl({hue:.1f},100%,50%)"
        lines.append(
            f'<line x1="{_fmt(px(a.x))}" y1="{_fmt(py(a.y))}" '
            f'x2="{_fmt(px(b.x))}" y2="{_fmt(py(b.y))}" '
            f'stroke="{color}" stroke-width="{_fmt(stroke)}" '
            f'stroke-linecap="round"><title>{cid}</title></line>'
        )

    for i, path in enumerate(paths):
        color = _PATH_COLORS[i % len(_PATH_COLORS)]
        points = " ".join(
            f"{_fmt(px(net.nodes[nid].x))},{_fmt(py(net.nodes[nid].y))}"
            for nid in path.nodes
        )
        lines.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="2.00" stroke-dasharray="6 4">'
            f"<title>droplet path from {path.start}</title></polyline>"
        )

    for nid in sorted(net.nodes):
        node = net.nodes[nid]
        cx, cy = px(node.x), py(node.y)
        if node.kind == "terminal":
            color = _terminal_color(net.boundaries.get(nid))
            lines.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="5.00" fill="{color}"/>'
            )
        elif node.kind == "junction":
            lines.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="3.50" fill="#000000"/>'
            )
        else:
            lines.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.00" fill="#444444"/>'
            )
        if node.kind != "interior":
            lines.append(
                f'<text x="{_fmt(cx + 7.0)}" y="{_fmt(cy - 7.0)}" '
                f'font-family="monospace" font-size="11">{nid}</text>'
            )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
