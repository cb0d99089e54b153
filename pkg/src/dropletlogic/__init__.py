"""Droplet logic: lumped-resistance simulation of droplet-based fluidic circuits.

Channels are rectangular microfluidic ducts joined at nodes; steady flow
comes from nodal analysis of the resistance graph, droplets ride the flow
and pick outflows at junctions by the non-crossing flux partition, and
circuits built this way compute boolean functions that are checked against
declared truth tables.
"""

from .boolexpr import ExpressionError, parse_expression
from .hydraulics import (
    ChannelGeometry,
    FluidProperties,
    fluidic_resistance,
    hydraulic_diameter,
    mean_velocity,
    pressure_drop,
)
from .junction import (
    JunctionError,
    JunctionLayout,
    JunctionPartition,
    junction_layout,
    partition_flows,
    route_streamline,
)
from .logic import (
    EvaluationError,
    EvaluationResult,
    LogicPortMap,
    TruthTableReport,
    TruthTableRow,
    drain_function,
    evaluate_inputs,
    port_map,
    truth_table,
)
from .netlist import (
    BUILTIN_NAMES,
    NetlistDocument,
    ParseResult,
    builtin_design,
    parse_netlist,
    serialize_netlist,
    to_network,
)
from .network import (
    Channel,
    DeadEnd,
    FlowSolution,
    FlowSource,
    Network,
    NetworkValidationError,
    Node,
    Outlet,
    PressureSource,
    SolverError,
    build_network,
    solve_flow,
    validate_conservation,
)
from .render import render_svg
from .simulate import (
    SimulationError,
    SimulationParams,
    StreamlinePath,
    TraceEvent,
    TraceLog,
    run_simulation,
    trace_streamline_path,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ChannelGeometry",
    "FluidProperties",
    "hydraulic_diameter",
    "fluidic_resistance",
    "pressure_drop",
    "mean_velocity",
    "Node",
    "Channel",
    "PressureSource",
    "FlowSource",
    "Outlet",
    "DeadEnd",
    "Network",
    "FlowSolution",
    "NetworkValidationError",
    "SolverError",
    "build_network",
    "solve_flow",
    "validate_conservation",
    "JunctionError",
    "JunctionLayout",
    "JunctionPartition",
    "junction_layout",
    "partition_flows",
    "route_streamline",
    "ExpressionError",
    "parse_expression",
    "NetlistDocument",
    "ParseResult",
    "parse_netlist",
    "serialize_netlist",
    "to_network",
    "builtin_design",
    "BUILTIN_NAMES",
    "SimulationError",
    "SimulationParams",
    "StreamlinePath",
    "TraceEvent",
    "TraceLog",
    "run_simulation",
    "trace_streamline_path",
    "EvaluationError",
    "EvaluationResult",
    "LogicPortMap",
    "TruthTableReport",
    "TruthTableRow",
    "port_map",
    "evaluate_inputs",
    "truth_table",
    "drain_function",
    "render_svg",
]
