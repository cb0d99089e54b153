"""Event-driven droplet transport through a solved flow network.

Droplets are advected plugs: each one rides the mean flow of whatever
channel it currently occupies, and at a junction it follows the streamline
at a configurable cross-section fraction of its inflow, decided by the
non-crossing flux partition. Droplets may also load the channels they sit
in (resistance grows by a configurable factor per droplet), in which case
the pressure field is re-solved every time the occupancy changes.

Events are totally ordered by (time, droplet id), so runs are
deterministic for a given network and injection schedule.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .junction import JunctionError, junction_layout, partition_flows, route_streamline
from .network import (
    NODE_INTERIOR,
    NODE_JUNCTION,
    NODE_TERMINAL,
    FlowSolution,
    Network,
    solve_flow,
)

__all__ = [
    "SimulationError",
    "SimulationParams",
    "TraceEvent",
    "TraceLog",
    "StreamlinePath",
    "run_simulation",
    "trace_streamline_path",
    "EVT_INJECTED",
    "EVT_ENTERED",
    "EVT_ROUTED",
    "EVT_ARRIVED",
    "EVT_STALLED",
]

EVT_INJECTED = "injected"
EVT_ENTERED = "entered-channel"
EVT_ROUTED = "routed-at-junction"
EVT_ARRIVED = "arrived-at-terminal"
EVT_STALLED = "stalled"

# flux below max(abs floor, rel * largest channel flow) cannot move a droplet
_STALL_ABSOLUTE = 1e-15  # m^3/s
_STALL_RELATIVE = 1e-9

_MAX_EVENTS = 200_000


class SimulationError(RuntimeError):
    """Raised when droplet transport cannot proceed sensibly."""


@dataclass(frozen=True)
class SimulationParams:
    """Knobs for a transport run.

    streamline_fraction: cross-section position of every droplet on its
        inflow, 0 = interval floor, 1 = interval ceiling, 0.5 = median.
    t_max: hard stop in seconds; None picks 10x the slowest flowing
        channel's transit time, shifted past the last injection.
    droplet_resistance_factor: relative resistance added to a channel per
        droplet sitting in it; 0 leaves the field static.
    """

    streamline_fraction: float = 0.5
    t_max: float | None = None
    droplet_resistance_factor: float = 0.0

    def validate(self) -> None:
        f = self.streamline_fraction
        if not (math.isfinite(f) and 0.0 <= f <= 1.0):
            raise ValueError(f"streamline_fraction must be in [0, 1], got {f!r}")
        if self.t_max is not None and not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError(f"t_max must be positive, got {self.t_max!r}")
        rho = self.droplet_resistance_factor
        if not (math.isfinite(rho) and rho >= 0.0):
            raise ValueError(
                f"droplet_resistance_factor must be >= 0, got {rho!r}"
            )


@dataclass(frozen=True)
class TraceEvent:
    time: float  # s
    droplet: str
    kind: str
    location: str  # node id or channel id, depending on kind


@dataclass(frozen=True)
class TraceLog:
    events: tuple[TraceEvent, ...]
    truncated: bool  # True when the run hit its time or event budget

    def arrivals(self) -> dict[str, tuple[str, ...]]:
        """Terminal node id -> droplet ids, in arrival order."""
        out: dict[str, list[str]] = {}
        for e in self.events:
            if e.kind == EVT_ARRIVED:
                out.setdefault(e.location, []).append(e.droplet)
        return {nid: tuple(ids) for nid, ids in out.items()}

    def stalled(self) -> dict[str, str]:
        """Droplet id -> channel id where it permanently stopped."""
        return {e.droplet: e.location for e in self.events if e.kind == EVT_STALLED}

    def unfinished(self) -> tuple[str, ...]:
        """Droplets injected but neither arrived nor stalled (truncated runs)."""
        pending: dict[str, None] = {}
        for e in self.events:
            if e.kind == EVT_INJECTED:
                pending[e.droplet] = None
            elif e.kind in (EVT_ARRIVED, EVT_STALLED):
                pending.pop(e.droplet, None)
        return tuple(pending)

    def to_csv(self) -> str:
        lines = ["time,droplet,event,location"]
        for e in self.events:
            lines.append(f"{e.time!r},{e.droplet},{e.kind},{e.location}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StreamlinePath:
    """Channel-by-channel route of one steady streamline."""

    start: str
    end: str
    nodes: tuple[str, ...]
    channels: tuple[str, ...]


@dataclass
class _Droplet:
    id: str
    channel: str | None = None  # None before injection / after arrival
    s: float = 0.0  # metres from the channel's from_node
    done: bool = False


def _flux_floor(sol: FlowSolution) -> float:
    peak = max((abs(q) for q in sol.flows.values()), default=0.0)
    return max(_STALL_ABSOLUTE, _STALL_RELATIVE * peak)


def _entry_position(net: Network, channel_id: str, node_id: str) -> float:
    ch = net.channels[channel_id]
    if ch.from_node == node_id:
        return 0.0
    return ch.geometry.length


def _default_t_max(net: Network, sol: FlowSolution, last_injection: float) -> float:
    floor = _flux_floor(sol)
    slowest = 0.0
    for cid, ch in net.channels.items():
        q = abs(sol.flows[cid])
        if q > floor:
            transit = ch.geometry.length * ch.geometry.cross_section_area / q
            slowest = max(slowest, transit)
    return last_injection + 10.0 * slowest


def run_simulation(
    net: Network,
    active_inputs: set[str] | frozenset[str] | None = None,
    schedule: dict[str, tuple[float, ...]] | None = None,
    params: SimulationParams | None = None,
) -> TraceLog:
    """Advect droplets injected at terminals through the steady field.

    schedule maps terminal node ids to injection times in seconds; droplet
    k injected at terminal T is named "T-k" (k counts that terminal's times
    in ascending order). Returns the full event trace; `truncated` is set
    when the time budget ran out with droplets still in flight. Droplets
    that can never move again each get a final `stalled` event instead.
    """
    params = params or SimulationParams()
    params.validate()
    schedule = schedule or {}

    injections: list[tuple[float, str, str]] = []  # (time, droplet id, terminal)
    for terminal in sorted(schedule):
        node = net.nodes.get(terminal)
        if node is None or node.kind != NODE_TERMINAL:
            raise ValueError(f"injection site '{terminal}' is not a terminal node")
        times = sorted(schedule[terminal])
        for k, t in enumerate(times):
            if not (math.isfinite(t) and t >= 0.0):
                raise ValueError(f"injection time {t!r} at '{terminal}' is invalid")
            injections.append((t, f"{terminal}-{k}", terminal))
    injections.sort(key=lambda item: (item[0], item[1]))

    rho = params.droplet_resistance_factor
    droplets: dict[str, _Droplet] = {}
    events: list[TraceEvent] = []

    def occupancy() -> Counter[str]:
        return Counter(
            d.channel for d in droplets.values() if d.channel is not None and not d.done
        )

    def solve_current() -> FlowSolution:
        if rho == 0.0:
            return solve_flow(net, active_inputs)
        counts = occupancy()
        loaded = {
            cid: r * (1.0 + rho * counts.get(cid, 0))
            for cid, r in net.resistances.items()
        }
        return solve_flow(net, active_inputs, channel_resistances=loaded)

    sol = solve_current()
    floor = _flux_floor(sol)
    t_max = (
        params.t_max
        if params.t_max is not None
        else _default_t_max(net, sol, injections[-1][0] if injections else 0.0)
    )

    layouts: dict[str, object] = {}

    def layout_for(node_id: str):
        if node_id not in layouts:
            layouts[node_id] = junction_layout(net, node_id)
        return layouts[node_id]

    now = 0.0
    next_injection = 0
    truncated = False

    for _ in range(_MAX_EVENTS):
        # candidate events: (time, droplet id, is_injection)
        best: tuple[float, str, bool] | None = None
        if next_injection < len(injections):
            t, did, _terminal = injections[next_injection]
            best = (t, did, True)
        moving = [d for d in droplets.values() if not d.done and d.channel is not None]
        for d in sorted(moving, key=lambda d: d.id):
            q = sol.flows[d.channel]
            if abs(q) <= floor:
                continue  # stuck under the current field
            ch = net.channels[d.channel]
            v = q / ch.geometry.cross_section_area
            remaining = (ch.geometry.length - d.s) if q > 0 else d.s
            t_hit = now + remaining / abs(v)
            if best is None or (t_hit, d.id) < (best[0], best[1]):
                best = (t_hit, d.id, False)

        if best is None:
            # nothing can ever move again; any droplet still in a channel
            # is permanently stalled
            for d in sorted(moving, key=lambda d: d.id):
                d.done = True
                events.append(TraceEvent(now, d.id, EVT_STALLED, d.channel))
            break

        t_event, droplet_id, is_injection = best
        if t_event > t_max:
            truncated = True
            break

        # advance every mobile droplet to the event time
        dt = t_event - now
        if dt > 0.0:
            for d in moving:
                q = sol.flows[d.channel]
                if abs(q) <= floor:
                    continue
                ch = net.channels[d.channel]
                v = q / ch.geometry.cross_section_area
                d.s = min(max(d.s + v * dt, 0.0), ch.geometry.length)
        now = t_event

        field_dirty = False
        if is_injection:
            _t, did, terminal = injections[next_injection]
            next_injection += 1
            channel_id = net.adjacency[terminal][0]
            d = _Droplet(id=did, channel=channel_id)
            d.s = _entry_position(net, channel_id, terminal)
            droplets[did] = d
            events.append(TraceEvent(now, did, EVT_INJECTED, terminal))
            events.append(TraceEvent(now, did, EVT_ENTERED, channel_id))
            field_dirty = rho != 0.0
        else:
            d = droplets[droplet_id]
            q = sol.flows[d.channel]
            ch = net.channels[d.channel]
            end_node = ch.to_node if q > 0 else ch.from_node
            d.s = ch.geometry.length if q > 0 else 0.0
            kind = net.nodes[end_node].kind
            if kind == NODE_TERMINAL:
                d.channel = None
                d.done = True
                events.append(TraceEvent(now, d.id, EVT_ARRIVED, end_node))
            elif kind == NODE_INTERIOR:
                nxt = next(c for c in net.adjacency[end_node] if c != d.channel)
                d.channel = nxt
                d.s = _entry_position(net, nxt, end_node)
                events.append(TraceEvent(now, d.id, EVT_ENTERED, nxt))
            elif kind == NODE_JUNCTION:
                partition = partition_flows(layout_for(end_node), sol)
                try:
                    nxt = route_streamline(
                        partition, d.channel, params.streamline_fraction
                    )
                except JunctionError as exc:
                    raise SimulationError(
                        f"droplet '{d.id}' cannot be routed at '{end_node}': {exc}"
                    ) from exc
                events.append(TraceEvent(now, d.id, EVT_ROUTED, end_node))
                d.channel = nxt
                d.s = _entry_position(net, nxt, end_node)
                events.append(TraceEvent(now, d.id, EVT_ENTERED, nxt))
            else:
                raise SimulationError(f"unknown node kind '{kind}' at '{end_node}'")
            field_dirty = rho != 0.0

        if field_dirty:
            sol = solve_current()
            floor = _flux_floor(sol)
    else:
        truncated = True

    return TraceLog(events=tuple(events), truncated=truncated)


def trace_streamline_path(
    net: Network,
    active_inputs: set[str] | frozenset[str] | None,
    start: str,
    fraction: float = 0.5,
) -> StreamlinePath:
    """Follow one steady streamline from a terminal to wherever it exits.

    The streamline enters at `start`, crosses interior nodes, and takes the
    outflow chosen by the non-crossing partition at every junction, always
    at the same cross-section fraction. Raises SimulationError when no flow
    leaves the start terminal or the walk revisits a channel.
    """
    if not (math.isfinite(fraction) and 0.0 <= fraction <= 1.0):
        raise ValueError(f"fraction must be in [0, 1], got {fraction!r}")
    node = net.nodes.get(start)
    if node is None or node.kind != NODE_TERMINAL:
        raise ValueError(f"streamline start '{start}' is not a terminal node")

    sol = solve_flow(net, active_inputs)
    floor = _flux_floor(sol)

    channel_id = net.adjacency[start][0]
    ch = net.channels[channel_id]
    outbound = sol.flows[channel_id] if ch.from_node == start else -sol.flows[channel_id]
    if outbound <= floor:
        raise SimulationError(f"no flow leaves terminal '{start}'")

    nodes = [start]
    channels: list[str] = []
    visited: set[str] = set()
    current_node = start
    current_channel = channel_id
    layouts: dict[str, object] = {}

    while True:
        if current_channel in visited:
            raise SimulationError(
                f"streamline from '{start}' revisits channel '{current_channel}'"
            )
        visited.add(current_channel)
        channels.append(current_channel)
        nxt_node = net.other_end(current_channel, current_node)
        nodes.append(nxt_node)
        kind = net.nodes[nxt_node].kind
        if kind == NODE_TERMINAL:
            return StreamlinePath(
                start=start,
                end=nxt_node,
                nodes=tuple(nodes),
                channels=tuple(channels),
            )
        if kind == NODE_INTERIOR:
            current_channel = next(
                c for c in net.adjacency[nxt_node] if c != current_channel
            )
            current_node = nxt_node
            continue
        if nxt_node not in layouts:
            layouts[nxt_node] = junction_layout(net, nxt_node)
        partition = partition_flows(layouts[nxt_node], sol)
        try:
            current_channel = route_streamline(partition, current_channel, fraction)
        except JunctionError as exc:
            raise SimulationError(
                f"streamline from '{start}' cannot be routed at '{nxt_node}': {exc}"
            ) from exc
        current_node = nxt_node
