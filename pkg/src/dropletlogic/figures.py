"""Matplotlib figures accompanying a truth-table report.

Two files per report: a grid of the observed logic values with mismatching
cells flagged, and a panel of flow maps, one per input combination, with
channels coloured by flow magnitude. Rendering uses the Agg backend so it
works headless; pyplot is imported lazily to keep library imports cheap.
"""

from __future__ import annotations

from pathlib import Path

from .logic import DRAIN_LABEL, TruthTableReport, port_map
from .netlist import NetlistDocument, to_network
from .network import solve_flow

__all__ = ["save_figures"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _table_figure(plt, report: TruthTableReport, path: Path) -> None:
    columns = (
        list(report.input_labels) + list(report.output_labels) + [DRAIN_LABEL]
    )
    n_in = len(report.input_labels)
    data = [
        [int(row.inputs[k]) for k in report.input_labels]
        + [int(row.outputs[k]) for k in report.output_labels]
        + [int(row.drain)]
        for row in report.rows
    ]

    fig, ax = plt.subplots(
        figsize=(1.2 + 0.75 * len(columns), 1.0 + 0.4 * len(data))
    )
    ax.imshow(data, cmap="Blues", vmin=0, vmax=2, aspect="auto")
    for r, row in enumerate(report.rows):
        for c, name in enumerate(columns):
            ax.text(
                c, r, str(data[r][c]), ha="center", va="center", fontsize=10
            )
            bad = (
                c >= n_in
                and name in row.expected
                and name in row.mismatches
            )
            if bad:
                ax.add_patch(
                    plt.Rectangle(
                        (c - 0.5, r - 0.5), 1, 1, fill=False, edgecolor="red", lw=2
                    )
                )
    ax.set_xticks(range(len(columns)), columns)
    ax.set_yticks(
        range(len(data)),
        [
            "".join(str(int(row.inputs[k])) for k in report.input_labels)
            for row in report.rows
        ],
    )
    ax.xaxis.set_ticks_position("top")
    ax.axvline(n_in - 0.5, color="black", lw=1)
    verdict = "all rows match" if report.passed else "MISMATCHES flagged in red"
    ax.set_title(f"{report.design}: {verdict}", pad=24)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _flow_figure(
    plt, doc: NetlistDocument, report: TruthTableReport, path: Path, pressure_scale: float
) -> None:
    net = to_network(doc, pressure_scale)
    ports = port_map(doc)
    solutions = []
    for row in report.rows:
        active = frozenset(
            ports.inputs[label] for label, on in row.inputs.items() if on
        )
        solutions.append(solve_flow(net, active))
    q_max = max(
        (abs(q) for sol in solutions for q in sol.flows.values()), default=0.0
    )
    w_max = max(ch.geometry.width for ch in net.channels.values())

    n = len(report.rows)
    cols = 4 if n > 4 else max(n, 1)
    rows_ = (n + cols - 1) // cols
    fig, axes = plt.subplots(
        rows_, cols, figsize=(3.2 * cols, 3.2 * rows_), squeeze=False
    )
    cmap = plt.get_cmap("coolwarm")
    for idx, (row, sol) in enumerate(zip(report.rows, solutions)):
        ax = axes[idx // cols][idx % cols]
        for cid in sorted(net.channels):
            ch = net.channels[cid]
            a, b = net.nodes[ch.from_node], net.nodes[ch.to_node]
            level = abs(sol.flows[cid]) / q_max if q_max > 0 else 0.0
            ax.plot(
                [a.x * 1e3, b.x * 1e3],
                [a.y * 1e3, b.y * 1e3],
                color=cmap(level),
                lw=1.0 + 4.0 * ch.geometry.width / w_max,
                solid_capstyle="round",
            )
        for nid in sorted(net.nodes):
            node = net.nodes[nid]
            if node.kind == "terminal":
                ax.plot(node.x * 1e3, node.y * 1e3, "ko", ms=4)
                ax.annotate(
                    nid,
                    (node.x * 1e3, node.y * 1e3),
                    textcoords="offset points",
                    xytext=(4, 4),
                    fontsize=8,
                )
        bits = "".join(str(int(row.inputs[k])) for k in report.input_labels)
        ax.set_title(f"{bits} {'ok' if row.passed else 'MISMATCH'}", fontsize=10)
        ax.set_aspect("equal")
        ax.set_xticks([])
        ax.set_yticks([])
    for idx in range(n, rows_ * cols):
        axes[idx // cols][idx % cols].axis("off")
    fig.suptitle(f"{report.design}: flow magnitude per input combination")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_figures(
    doc: NetlistDocument,
    report: TruthTableReport,
    out_dir: str | Path,
    pressure_scale: float = 1.0,
) -> tuple[Path, Path]:
    """Write truth_table.png and flows.png into out_dir, creating it."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plt = _pyplot()
    table_path = out / "truth_table.png"
    flows_path = out / "flows.png"
    _table_figure(plt, report, table_path)
    _flow_figure(plt, doc, report, flows_path, pressure_scale)
    return table_path, flows_path
