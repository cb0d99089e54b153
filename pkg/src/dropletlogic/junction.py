"""Non-crossing streamline transport through junction nodes.

Under creeping flow the streams entering a junction leave it without
crossing each other. Stacking the port fluxes on a cumulative level axis
turns that into parenthesis matching: walk the ports in circular order
starting from a cut where the running sum is minimal, let each inflow raise
the level and each outflow lower it, and match every level in an inflow's
rising interval to the first later falling interval that crosses it. The
matching is unique, planar, conserves flux port by port, and is invariant
to the overall flow magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .network import FlowSolution, Network

__all__ = [
    "JunctionError",
    "JunctionLayout",
    "JunctionPartition",
    "junction_layout",
    "partition_flows",
    "route_streamline",
]

EPS_ABSOLUTE = 1e-15  # m^3/s
EPS_RELATIVE = 1e-9  # of the largest port flux

_TWO_PI = 2.0 * math.pi


class JunctionError(ValueError):
    """Invalid junction layout, imbalanced fluxes, or bad routing query."""


@dataclass(frozen=True)
class Port:
    """One channel mouth at a junction.

    angle is measured at the junction node toward the channel's other
    endpoint, in [0, 2*pi). into_sign is +1 when positive channel flow runs
    into the junction (the junction is the channel's `to` end), else -1.
    """

    channel: str
    angle: float
    into_sign: int


@dataclass(frozen=True)
class JunctionLayout:
    """Ports of one junction in ascending angular order."""

    node: str
    ports: tuple[Port, ...]


@dataclass(frozen=True)
class _InflowSegment:
    low: float
    high: float
    out_channel: str


@dataclass(frozen=True)
class JunctionPartition:
    """Flux transport of one junction for one flow state.

    transfers maps (inflow channel, outflow channel) to the transported
    flux. Levels live on a cumulative-flux axis; intervals are
    lower-exclusive / upper-inclusive.
    """

    node: str
    port_order: tuple[str, ...]  # active ports, angular order
    fluxes: dict[str, float]  # signed, positive into the junction
    threshold: float
    transfers: dict[tuple[str, str], float]
    inflow_intervals: dict[str, tuple[float, float]]
    outflow_intervals: dict[str, tuple[float, float]]
    inflow_segments: dict[str, tuple[_InflowSegment, ...]]


def junction_layout(net: Network, node_id: str) -> JunctionLayout:
    """Build the angular port layout of a junction from node coordinates."""
    node = net.nodes.get(node_id)
    if node is None:
        raise JunctionError(f"unknown node '{node_id}'")
    incident = net.adjacency[node_id]
    if len(incident) < 3:
        raise JunctionError(
            f"node '{node_id}' has {len(incident)} channels; a junction needs >= 3"
        )
    ports = []
    for cid in incident:
        other = net.nodes[net.other_end(cid, node_id)]
        angle = math.atan2(other.y - node.y, other.x - node.x) % _TWO_PI
        sign = 1 if net.channels[cid].to_node == node_id else -1
        ports.append(Port(channel=cid, angle=angle, into_sign=sign))
    ports.sort(key=lambda p: (p.angle, p.channel))
    for p1, p2 in zip(ports, ports[1:]):
        if p1.angle == p2.angle:
            raise JunctionError(
                f"ports '{p1.channel}' and '{p2.channel}' at node '{node_id}' "
                f"share angle {p1.angle!r}"
            )
    return JunctionLayout(node=node_id, ports=tuple(ports))


def _min_prefix_cut(fluxes: list[float]) -> int:
    """Index of the walk start: immediately after the minimal prefix sum."""
    running = 0.0
    best = math.inf
    best_idx = 0
    for i, q in enumerate(fluxes):
        running += q
        if running < best:  # strict: exact ties keep the lowest port index
            best = running
            best_idx = i
    return (best_idx + 1) % len(fluxes)


def _match_from_cut(
    ports: list[tuple[str, float]], start: int
) -> tuple[
    dict[tuple[str, str], float],
    dict[str, tuple[float, float]],
    dict[str, tuple[float, float]],
    dict[str, list[_InflowSegment]],
]:
    """Level-walk matching of inflows to outflows beginning at `start`.

    Inflows push their level range on a stack; each outflow pops from the
    top, which is exactly the first-later-falling-interval rule.
    """
    n = len(ports)
    transfers: dict[tuple[str, str], float] = {}
    inflow_intervals: dict[str, tuple[float, float]] = {}
    outflow_intervals: dict[str, tuple[float, float]] = {}
    segments: dict[str, list[_InflowSegment]] = {}

    stack: list[list] = []  # [channel, remaining, top_level]
    level = 0.0
    last_out: str | None = None
    for k in range(n):
        cid, q = ports[(start + k) % n]
        if q > 0.0:
            inflow_intervals[cid] = (level, level + q)
            segments[cid] = []
            stack.append([cid, q, level + q])
            level += q
        else:
            need = -q
            outflow_intervals[cid] = (level + q, level)
            level += q
            last_out = cid
            while need > 0.0 and stack:
                top = stack[-1]
                take = min(need, top[1])
                transfers[(top[0], cid)] = transfers.get((top[0], cid), 0.0) + take
                segments[top[0]].append(
                    _InflowSegment(low=top[2] - take, high=top[2], out_channel=cid)
                )
                top[1] -= take
                top[2] -= take
                need -= take
                if top[1] <= 0.0:
                    stack.pop()

    # rounding imbalance can leave a sliver on the stack; fold it into the
    # last outflow so each inflow's transfers still sum to its full flux
    if last_out is not None:
        for entry in stack:
            cid, remaining, top_level = entry
            if remaining <= 0.0:
                continue
            transfers[(cid, last_out)] = transfers.get((cid, last_out), 0.0) + remaining
            segments[cid].append(
                _InflowSegment(low=top_level - remaining, high=top_level, out_channel=last_out)
            )

    for cid, segs in segments.items():
        segs.sort(key=lambda s: s.low)
    return transfers, inflow_intervals, outflow_intervals, segments


def partition_flows(
    layout: JunctionLayout,
    sol: FlowSolution,
    *,
    eps_absolute: float = EPS_ABSOLUTE,
    eps_relative: float = EPS_RELATIVE,
) -> JunctionPartition:
    """Partition the junction's port fluxes into non-crossing transfers.

    Ports with |flux| at or below max(eps_absolute, eps_relative * largest
    port flux) are treated as inactive. The active fluxes must balance to
    within the same threshold scaled by the port count; the caller is
    expected to pass a conservative solution.
    """
    raw = [(p.channel, p.into_sign * sol.flows[p.channel]) for p in layout.ports]
    max_abs = max((abs(q) for _, q in raw), default=0.0)
    threshold = max(eps_absolute, eps_relative * max_abs)
    active = [(cid, q) for cid, q in raw if abs(q) > threshold]

    imbalance = abs(math.fsum(q for _, q in active))
    if imbalance > threshold * max(1, len(raw)):
        raise JunctionError(
            f"port fluxes at '{layout.node}' are imbalanced by {imbalance:.3e} m^3/s"
        )

    if active and not any(q > 0.0 for cid, q in active):
        raise JunctionError(f"junction '{layout.node}' has outflow but no inflow")

    if not active:
        transfers: dict[tuple[str, str], float] = {}
        return JunctionPartition(
            node=layout.node,
            port_order=(),
            fluxes={},
            threshold=threshold,
            transfers=transfers,
            inflow_intervals={},
            outflow_intervals={},
            inflow_segments={},
        )

    start = _min_prefix_cut([q for _, q in active])
    transfers, in_iv, out_iv, segments = _match_from_cut(active, start)
    return JunctionPartition(
        node=layout.node,
        port_order=tuple(cid for cid, _ in active),
        fluxes={cid: q for cid, q in active},
        threshold=threshold,
        transfers=transfers,
        inflow_intervals=in_iv,
        outflow_intervals=out_iv,
        inflow_segments={cid: tuple(segs) for cid, segs in segments.items()},
    )


def route_streamline(
    partition: JunctionPartition, in_channel: str, fraction: float
) -> str:
    """Outflow channel receiving the streamline at `fraction` of an inflow.

    fraction 0 is the clockwise-most edge of the entering stream, 1 the
    counterclockwise-most; 0.5 is the stream median. The level
    fraction * flux above the inflow's interval floor is looked up in the
    matched sub-intervals (lower-exclusive / upper-inclusive, which sends
    boundary ties to the counterclockwise-later outflow; fraction 0 takes
    the limit from above, i.e. the lowest sub-interval).
    """
    if not (0.0 <= fraction <= 1.0) or not math.isfinite(fraction):
        raise JunctionError(f"fraction must be in [0, 1], got {fraction!r}")
    interval = partition.inflow_intervals.get(in_channel)
    if interval is None:
        raise JunctionError(
            f"channel '{in_channel}' is not an active inflow of junction "
            f"'{partition.node}'"
        )
    low, high = interval
    h = low + fraction * (high - low)
    if h > high:
        h = high
    for seg in partition.inflow_segments[in_channel]:
        if h <= seg.high:
            return seg.out_channel
    return partition.inflow_segments[in_channel][-1].out_channel
