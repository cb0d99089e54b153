"""Command line front end.

Three subcommands: `solve` reports steady pressures and flows for one
input combination, `truthtable` sweeps every combination and checks the
declared expectations (optionally writing matplotlib figures next to the
delimited output), `render` draws the layout as SVG. Designs come from a
netlist file or from a named builtin.

Exit codes: 0 success (and truth table fully matching), 1 runtime or
truth-table failure, 2 bad usage, parse errors, or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .logic import EvaluationError, port_map, truth_table
from .netlist import (
    BUILTIN_NAMES,
    builtin_design,
    parse_netlist,
    to_network,
)
from .network import (
    NetworkValidationError,
    SolverError,
    solve_flow,
    validate_conservation,
)
from .hydraulics import mean_velocity
from .render import render_svg
from .simulate import SimulationError, SimulationParams, trace_streamline_path

__all__ = ["run", "build_parser"]


class _CliFailure(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        super().__init__(message)


def _add_design_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("netlist", nargs="?", help="netlist file path")
    sub.add_argument(
        "--builtin",
        choices=BUILTIN_NAMES,
        help="use a bundled design instead of a netlist file",
    )
    sub.add_argument(
        "--pressure-scale",
        type=float,
        default=1.0,
        metavar="K",
        help="multiply every input drive by K (default 1)",
    )


def _add_output_args(sub: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    sub.add_argument(
        "--format", choices=formats, default=formats[0], help="output format"
    )
    sub.add_argument(
        "--out", metavar="FILE", help="write the report here instead of stdout"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dropletlogic",
        description="simulate droplet logic circuits built from channel networks",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    solve = subs.add_parser("solve", help="steady pressures and flows")
    _add_design_args(solve)
    solve.add_argument(
        "--inputs",
        metavar="A=1,B=0",
        help="input states; unlisted inputs are off (default: all on)",
    )
    _add_output_args(solve, ("text", "json", "csv"))
    solve.set_defaults(func=_cmd_solve)

    table = subs.add_parser("truthtable", help="evaluate every input combination")
    _add_design_args(table)
    table.add_argument(
        "--fraction",
        type=float,
        default=0.5,
        help="streamline fraction droplets ride at (default 0.5)",
    )
    table.add_argument(
        "--droplet-resistance",
        type=float,
        default=0.0,
        metavar="RHO",
        help="relative channel resistance added per resident droplet",
    )
    table.add_argument(
        "--expect",
        action="append",
        metavar="LABEL=EXPR",
        help="override an expectation, e.g. S=A^B (repeatable)",
    )
    table.add_argument(
        "--figures",
        metavar="DIR",
        help="also write truth_table.png and flows.png into DIR",
    )
    _add_output_args(table, ("text", "json", "csv"))
    table.set_defaults(func=_cmd_truthtable)

    render = subs.add_parser("render", help="draw the layout as SVG")
    _add_design_args(render)
    render.add_argument(
        "--inputs",
        metavar="A=1,B=0",
        help="input states; unlisted inputs are off (default: all on)",
    )
    render.add_argument(
        "--fraction",
        type=float,
        default=0.5,
        help="streamline fraction for the overlaid droplet paths",
    )
    _add_output_args(render, ("svg",))
    render.set_defaults(func=_cmd_render)

    return parser


def _load_document(args):
    """Returns (document, design name); prints diagnostics on failure."""
    if (args.netlist is None) == (args.builtin is None):
        raise _CliFailure(2, "give exactly one of a netlist path or --builtin")
    if args.builtin is not None:
        return builtin_design(args.builtin), args.builtin
    path = Path(args.netlist)
    try:
        text = path.read_text()
    except OSError as exc:
        raise _CliFailure(2, f"cannot read '{path}': {exc}") from exc
    result = parse_netlist(text)
    for diag in result.diagnostics:
        print(f"{path}:{diag.format()}", file=sys.stderr)
    if result.document is None:
        raise _CliFailure(2, "")
    return result.document, path.stem


def _parse_input_states(text: str | None, labels) -> dict[str, bool] | None:
    """None -> every input on; otherwise parse 'A=1,B=0' (unlisted off)."""
    if text is None:
        return None
    states: dict[str, bool] = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        key, eq, value = piece.partition("=")
        truthy = {"1": True, "true": True, "on": True, "0": False, "false": False, "off": False}
        if not eq or value.lower() not in truthy:
            raise _CliFailure(2, f"bad input state '{piece}', expected LABEL=0|1")
        if key not in labels:
            raise _CliFailure(2, f"unknown input label '{key}'")
        states[key] = truthy[value.lower()]
    return states


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _active_set(ports, states: dict[str, bool] | None) -> frozenset[str]:
    if states is None:
        return frozenset(ports.inputs.values())
    return frozenset(ports.inputs[k] for k, v in states.items() if v)


def _cmd_solve(args) -> int:
    doc, _name = _load_document(args)
    net = to_network(doc, args.pressure_scale)
    ports = port_map(doc)
    states = _parse_input_states(args.inputs, ports.inputs)
    active = _active_set(ports, states)
    sol = solve_flow(net, active)
    report = validate_conservation(sol, net)

    pressures = {nid: sol.pressures[nid] for nid in sorted(net.nodes)}
    flows = {cid: sol.flows[cid] for cid in sorted(net.channels)}
    velocities = {
        cid: mean_velocity(net.channels[cid].geometry, flows[cid]) for cid in flows
    }

    if args.format == "json":
        import json

        text = (
            json.dumps(
                {
                    "pressures": pressures,
                    "flows": flows,
                    "velocities": velocities,
                    "conservation_residual": report.max_residual,
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
    elif args.format == "csv":
        lines = ["quantity,id,value"]
        lines += [f"pressure,{nid},{p!r}" for nid, p in pressures.items()]
        lines += [f"flow,{cid},{q!r}" for cid, q in flows.items()]
        lines += [f"velocity,{cid},{v!r}" for cid, v in velocities.items()]
        text = "\n".join(lines) + "\n"
    else:
        width = max(len(k) for k in list(pressures) + list(flows))
        lines = ["node pressures [Pa]"]
        lines += [f"  {nid.ljust(width)}  {p:.6g}" for nid, p in pressures.items()]
        lines.append("channel flows [m^3/s] and mean velocities [m/s]")
        lines += [
            f"  {cid.ljust(width)}  {q:+.6e}  {velocities[cid]:+.6e}"
            for cid, q in flows.items()
        ]
        lines.append(f"conservation residual: {report.max_residual:.3e}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_truthtable(args) -> int:
    doc, name = _load_document(args)
    expectations = {}
    for item in args.expect or ():
        label, eq, expr = item.partition("=")
        if not eq or not label or not expr:
            raise _CliFailure(2, f"bad --expect '{item}', expected LABEL=EXPR")
        expectations[label] = expr
    params = SimulationParams(
        streamline_fraction=args.fraction,
        droplet_resistance_factor=args.droplet_resistance,
    )
    report = truth_table(
        doc,
        design=name,
        pressure_scale=args.pressure_scale,
        params=params,
        expectations=expectations or None,
    )
    if args.format == "json":
        text = report.to_json()
    elif args.format == "csv":
        text = report.to_csv()
    else:
        text = report.to_text()
    _emit(text, args.out)
    if args.figures:
        from .figures import save_figures

        save_figures(doc, report, args.figures, args.pressure_scale)
    return 0 if report.passed else 1


def _cmd_render(args) -> int:
    doc, name = _load_document(args)
    net = to_network(doc, args.pressure_scale)
    ports = port_map(doc)
    states = _parse_input_states(args.inputs, ports.inputs)
    active = _active_set(ports, states)
    sol = solve_flow(net, active)
    paths = tuple(
        trace_streamline_path(net, active, terminal, args.fraction)
        for terminal in sorted(active)
    )
    text = render_svg(net, sol, paths, title=name)
    _emit(text, args.out)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        if str(exc):
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NetworkValidationError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, SimulationError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
