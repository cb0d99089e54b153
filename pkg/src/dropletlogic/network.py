"""Hydraulic resistance networks and steady laminar flow solves.

A network is a graph of nodes joined by rectangular channels filled with a
single carrier fluid. Terminal nodes carry exactly one boundary condition;
the solver runs classic nodal analysis on the conductance matrix, treating
fixed-pressure nodes as knowns and eliminating dead branches up front so
that channels feeding only dead ends carry exactly zero flow.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .hydraulics import ChannelGeometry, FluidProperties, fluidic_resistance

__all__ = [
    "Node",
    "Channel",
    "PressureSource",
    "FlowSource",
    "Outlet",
    "DeadEnd",
    "BoundaryCondition",
    "Network",
    "FlowSolution",
    "ConservationReport",
    "NetworkValidationError",
    "SolverError",
    "build_network",
    "solve_flow",
    "validate_conservation",
]

# relative pivot floor below which the reduced conductance matrix is
# declared singular
_PIVOT_RTOL = 1e-14

NODE_INTERIOR = "interior"
NODE_JUNCTION = "junction"
NODE_TERMINAL = "terminal"


@dataclass(frozen=True)
class Node:
    """Graph vertex with a planar position in metres."""

    id: str
    x: float
    y: float
    kind: str  # interior | junction | terminal


@dataclass(frozen=True)
class Channel:
    """Directed edge; positive flow runs from `from_node` to `to_node`."""

    id: str
    from_node: str
    to_node: str
    geometry: ChannelGeometry


@dataclass(frozen=True)
class PressureSource:
    pressure: float  # Pa


@dataclass(frozen=True)
class FlowSource:
    flow: float  # m^3/s into the network


@dataclass(frozen=True)
class Outlet:
    pressure: float = 0.0  # gauge reference


@dataclass(frozen=True)
class DeadEnd:
    pass


BoundaryCondition = PressureSource | FlowSource | Outlet | DeadEnd


class NetworkValidationError(ValueError):
    """Raised by build_network with the complete list of violations."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid network: " + "; ".join(self.violations))


class SolverError(RuntimeError):
    """Raised when the flow system cannot be solved."""


@dataclass
class Network:
    """Validated hydraulic graph with precomputed channel resistances."""

    nodes: dict[str, Node]
    channels: dict[str, Channel]
    fluid: FluidProperties
    boundaries: dict[str, BoundaryCondition]
    resistances: dict[str, float] = field(repr=False)
    adjacency: dict[str, tuple[str, ...]] = field(repr=False)

    def other_end(self, channel_id: str, node_id: str) -> str:
        ch = self.channels[channel_id]
        return ch.to_node if ch.from_node == node_id else ch.from_node


@dataclass(frozen=True)
class FlowSolution:
    """Steady-state pressures per node (Pa) and flows per channel (m^3/s)."""

    pressures: dict[str, float]
    flows: dict[str, float]


@dataclass(frozen=True)
class ConservationReport:
    """Worst nodal imbalance of a solution, relative to total source inflow."""

    max_residual: float
    worst_node: str | None
    total_inflow: float


def build_network(
    nodes: list[Node] | tuple[Node, ...],
    channels: list[Channel] | tuple[Channel, ...],
    fluid: FluidProperties,
    boundaries: dict[str, BoundaryCondition],
) -> Network:
    """Validate the graph and precompute resistances.

    Collects every violation (duplicate ids, dangling endpoints, degree
    rules, terminals without boundary conditions, flow sources with no
    pressure reference in their component) before raising.
    """
    violations: list[str] = []

    node_map: dict[str, Node] = {}
    for n in nodes:
        if n.id in node_map:
            violations.append(f"duplicate node id '{n.id}'")
        else:
            node_map[n.id] = n
        if n.kind not in (NODE_INTERIOR, NODE_JUNCTION, NODE_TERMINAL):
            violations.append(f"node '{n.id}' has unknown kind '{n.kind}'")
        if not (math.isfinite(n.x) and math.isfinite(n.y)):
            violations.append(f"node '{n.id}' has a non-finite position")

    channel_map: dict[str, Channel] = {}
    adjacency: dict[str, list[str]] = {nid: [] for nid in node_map}
    for c in channels:
        if c.id in channel_map:
            violations.append(f"duplicate channel id '{c.id}'")
            continue
        channel_map[c.id] = c
        if c.from_node == c.to_node:
            violations.append(f"channel '{c.id}' connects node '{c.from_node}' to itself")
        for end in (c.from_node, c.to_node):
            if end not in node_map:
                violations.append(f"channel '{c.id}' references missing node '{end}'")
            else:
                adjacency[end].append(c.id)

    for nid in boundaries:
        if nid not in node_map:
            violations.append(f"boundary condition references missing node '{nid}'")
        elif node_map[nid].kind != NODE_TERMINAL:
            violations.append(
                f"boundary condition on node '{nid}' which is not a terminal"
            )

    for nid, node in node_map.items():
        degree = len(adjacency[nid])
        if node.kind == NODE_TERMINAL:
            if degree != 1:
                violations.append(
                    f"terminal '{nid}' must have exactly 1 channel, has {degree}"
                )
            if nid not in boundaries:
                violations.append(f"terminal '{nid}' has no boundary condition")
        elif node.kind == NODE_JUNCTION:
            if degree < 3:
                violations.append(
                    f"junction '{nid}' must have at least 3 channels, has {degree}"
                )
        elif node.kind == NODE_INTERIOR:
            if degree != 2:
                violations.append(
                    f"interior node '{nid}' must have exactly 2 channels, has {degree}"
                )

    # components: a flow source must be able to reach a pressure reference
    if not violations:
        seen: set[str] = set()
        for start in sorted(node_map):
            if start in seen:
                continue
            comp: list[str] = []
            queue = deque([start])
            seen.add(start)
            while queue:
                u = queue.popleft()
                comp.append(u)
                for cid in adjacency[u]:
                    v = channel_map[cid].to_node
                    if v == u:
                        v = channel_map[cid].from_node
                    if v not in seen:
                        seen.add(v)
                        queue.append(v)
            has_flow_source = any(
                isinstance(boundaries.get(n), FlowSource) and boundaries[n].flow != 0.0
                for n in comp
            )
            has_reference = any(
                isinstance(boundaries.get(n), (PressureSource, Outlet)) for n in comp
            )
            if has_flow_source and not has_reference:
                violations.append(
                    "component containing node "
                    f"'{start}' has a flow source but no pressure reference"
                )

    if violations:
        raise NetworkValidationError(violations)

    resistances = {
        cid: fluidic_resistance(c.geometry, fluid) for cid, c in channel_map.items()
    }
    return Network(
        nodes=node_map,
        channels=channel_map,
        fluid=fluid,
        boundaries=dict(boundaries),
        resistances=resistances,
        adjacency={nid: tuple(cids) for nid, cids in adjacency.items()},
    )


def _effective_boundaries(
    net: Network, active_inputs: set[str] | frozenset[str] | None
) -> dict[str, BoundaryCondition]:
    """Demote inactive pressure/flow sources to dead ends for this solve."""
    if active_inputs is None:
        return net.boundaries
    unknown = set(active_inputs) - set(net.boundaries)
    if unknown:
        raise ValueError(f"active_inputs reference unknown terminals: {sorted(unknown)}")
    out: dict[str, BoundaryCondition] = {}
    for nid, bc in net.boundaries.items():
        if isinstance(bc, (PressureSource, FlowSource)) and nid not in active_inputs:
            out[nid] = DeadEnd()
        else:
            out[nid] = bc
    return out


def _is_pressure_fixed(bc: BoundaryCondition | None) -> bool:
    return isinstance(bc, (PressureSource, Outlet))


def _fixed_pressure(bc: BoundaryCondition) -> float:
    return bc.pressure  # type: ignore[union-attr]


def _prune_dead_branches(
    net: Network, bcs: dict[str, BoundaryCondition]
) -> tuple[set[str], dict[str, int]]:
    """Return the set of channels forced to zero flow, plus live degrees.

    Dead-end terminals (and inactive sources, already demoted) contribute no
    equation; their branch is peeled leaf by leaf so every channel on a path
    ending only in dead ends is exactly zero.
    """

    degree = {nid: len(net.adjacency[nid]) for nid in net.nodes}
    dead: set[str] = set()

    def removable(nid: str) -> bool:
        bc = bcs.get(nid)
        if bc is None:
            return True  # interior or junction node: removable once degree drops to 1
        if isinstance(bc, DeadEnd):
            return True
        if isinstance(bc, FlowSource) and bc.flow == 0.0:
            return True
        return False

    queue = deque(
        nid for nid in sorted(net.nodes) if degree[nid] == 1 and removable(nid)
    )
    while queue:
        u = queue.popleft()
        if degree[u] != 1:
            continue
        cid = next(c for c in net.adjacency[u] if c not in dead)
        dead.add(cid)
        v = net.other_end(cid, u)
        degree[u] = 0
        degree[v] -= 1
        if degree[v] == 0:
            bc = bcs.get(v)
            if isinstance(bc, FlowSource) and bc.flow != 0.0:
                raise SolverError(
                    f"flow source at '{v}' is cut off by dead-end branches"
                )
        elif degree[v] == 1 and removable(v):
            queue.append(v)
    return dead, degree


def solve_flow(
    net: Network,
    active_inputs: set[str] | frozenset[str] | None = None,
    *,
    channel_resistances: dict[str, float] | None = None,
) -> FlowSolution:
    """Solve steady pressures and flows by nodal analysis.

    active_inputs selects which source terminals are driven; sources not in
    the set behave as dead ends. None means every declared source is active.
    channel_resistances optionally overrides the geometric resistances (used
    for droplet-occupancy coupling).

    Raises SolverError for singular systems, e.g. a driven flow source with
    no reachable pressure reference.
    """
    bcs = _effective_boundaries(net, active_inputs)
    res = net.resistances if channel_resistances is None else channel_resistances

    dead, degree = _prune_dead_branches(net, bcs)
    live_channels = sorted(cid for cid in net.channels if cid not in dead)

    # group live nodes into components; a component without a fixed pressure
    # is either an error (driven flow source) or entirely flowless
    comp_of: dict[str, int] = {}
    comps: list[list[str]] = []
    for cid in live_channels:
        for nid in (net.channels[cid].from_node, net.channels[cid].to_node):
            if nid in comp_of:
                continue
            idx = len(comps)
            members: list[str] = []
            queue = deque([nid])
            comp_of[nid] = idx
            while queue:
                u = queue.popleft()
                members.append(u)
                for c2 in net.adjacency[u]:
                    if c2 in dead:
                        continue
                    v = net.other_end(c2, u)
                    if v not in comp_of:
                        comp_of[v] = idx
                        queue.append(v)
            comps.append(members)

    flowless_nodes: set[str] = set()
    for members in comps:
        if any(_is_pressure_fixed(bcs.get(n)) for n in members):
            continue
        driven = [
            n
            for n in members
            if isinstance(bcs.get(n), FlowSource) and bcs[n].flow != 0.0
        ]
        if driven:
            raise SolverError(
                f"no pressure reference reachable from flow source at '{driven[0]}'"
            )
        flowless_nodes.update(members)

    solve_channels = [
        cid
        for cid in live_channels
        if net.channels[cid].from_node not in flowless_nodes
    ]

    unknown = sorted(
        {
            nid
            for cid in solve_channels
            for nid in (net.channels[cid].from_node, net.channels[cid].to_node)
            if not _is_pressure_fixed(bcs.get(nid))
        }
    )
    index = {nid: i for i, nid in enumerate(unknown)}

    pressures: dict[str, float] = {}
    k = len(unknown)
    if k:
        a = np.zeros((k, k))
        b = np.zeros(k)
        for cid in solve_channels:
            ch = net.channels[cid]
            r = res[cid]
            if not (math.isfinite(r) and r > 0.0):
                raise SolverError(f"channel '{cid}' has invalid resistance {r!r}")
            g = 1.0 / r
            for p, q in ((ch.from_node, ch.to_node), (ch.to_node, ch.from_node)):
                if p not in index:
                    continue
                i = index[p]
                a[i, i] += g
                if q in index:
                    a[i, index[q]] -= g
                else:
                    b[i] += g * _fixed_pressure(bcs[q])
        for nid in unknown:
            bc = bcs.get(nid)
            if isinstance(bc, FlowSource):
                b[index[nid]] += bc.flow

        scale = float(np.max(np.abs(a))) if a.size else 0.0
        if scale == 0.0:
            raise SolverError("conductance matrix is zero")
        lu, piv = lu_factor(a, check_finite=True)
        if float(np.min(np.abs(np.diag(lu)))) < _PIVOT_RTOL * scale:
            raise SolverError("singular system: no pressure reference reachable")
        x = lu_solve((lu, piv), b)
        if not np.all(np.isfinite(x)):
            raise SolverError("solve produced non-finite pressures")
        pressures.update({nid: float(x[i]) for nid, i in index.items()})

    for nid, bc in bcs.items():
        if _is_pressure_fixed(bc):
            pressures[nid] = _fixed_pressure(bc)
    for nid in flowless_nodes:
        pressures.setdefault(nid, 0.0)

    flows: dict[str, float] = {}
    for cid in net.channels:
        if cid in dead or net.channels[cid].from_node in flowless_nodes:
            flows[cid] = 0.0
        else:
            ch = net.channels[cid]
            g = 1.0 / res[cid]
            flows[cid] = g * (pressures[ch.from_node] - pressures[ch.to_node])

    # pressures on pruned branches: uniform along each zero-flow path,
    # anchored at the node where the branch attaches
    if dead:
        anchored = deque(sorted(pressures))
        while anchored:
            u = anchored.popleft()
            for cid in net.adjacency.get(u, ()):
                if cid not in dead:
                    continue
                v = net.other_end(cid, u)
                if v not in pressures:
                    pressures[v] = pressures[u]
                    anchored.append(v)
        for nid in net.nodes:
            if nid not in pressures:
                pressures[nid] = 0.0

    for nid in net.nodes:
        pressures.setdefault(nid, 0.0)
    return FlowSolution(pressures=pressures, flows=flows)


def _signed_flux_into(net: Network, sol: FlowSolution, node_id: str) -> float:
    total = 0.0
    for cid in net.adjacency[node_id]:
        q = sol.flows[cid]
        total += q if net.channels[cid].to_node == node_id else -q
    return total


def validate_conservation(sol: FlowSolution, net: Network) -> ConservationReport:
    """Report the worst nodal flow imbalance of a solution.

    The residual is the largest |sum of signed channel flows| over nodes
    with no source or outlet condition, normalised by the total inflow
    entering at boundary terminals (absolute when there is no inflow).
    A hand-built inconsistent solution therefore shows up as a large
    residual instead of being silently accepted.
    """
    total_inflow = 0.0
    for nid, bc in net.boundaries.items():
        if isinstance(bc, DeadEnd):
            continue
        total_inflow += max(_signed_flux_into(net, sol, nid) * -1.0, 0.0)

    worst = 0.0
    worst_node: str | None = None
    for nid in sorted(net.nodes):
        bc = net.boundaries.get(nid)
        if bc is not None and not isinstance(bc, DeadEnd):
            continue
        residual = abs(_signed_flux_into(net, sol, nid))
        if total_inflow > 0.0:
            residual /= total_inflow
        if residual > worst:
            worst = residual
            worst_node = nid
    return ConservationReport(
        max_residual=worst, worst_node=worst_node, total_inflow=total_inflow
    )
