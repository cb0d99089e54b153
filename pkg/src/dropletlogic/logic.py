"""Boolean evaluation of droplet circuits.

A TRUE input is a driven source with one droplet injected at t=0; a FALSE
input is left undriven and behaves as a dead end. An outlet reads TRUE when
at least one droplet arrives at its terminal; the drain signal is TRUE when
any drain terminal receives a droplet. Truth tables enumerate every input
combination and compare the observed logic against the document's declared
expectations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .boolexpr import BoolExpr, expression_variables, parse_expression
from .netlist import NetlistDocument, to_network
from .network import FlowSolution, Network, solve_flow
from .simulate import SimulationParams, TraceLog, run_simulation

__all__ = [
    "EvaluationError",
    "LogicPortMap",
    "EvaluationResult",
    "TruthTableRow",
    "TruthTableReport",
    "port_map",
    "evaluate_inputs",
    "truth_table",
    "drain_function",
    "DRAIN_LABEL",
    "MAX_TABLE_INPUTS",
]

DRAIN_LABEL = "drain"
MAX_TABLE_INPUTS = 16


class EvaluationError(RuntimeError):
    """A droplet run could not produce a clean boolean reading."""


@dataclass(frozen=True)
class LogicPortMap:
    """Connects boolean labels to network terminals."""

    inputs: dict[str, str]  # input label -> terminal node id
    outputs: dict[str, str]  # outlet label -> terminal node id
    drains: tuple[str, ...]  # drain terminal node ids


def port_map(doc: NetlistDocument) -> LogicPortMap:
    return LogicPortMap(
        inputs={i.label: i.node for i in doc.inputs},
        outputs={o.label: o.node for o in doc.outlets},
        drains=tuple(d.node for d in doc.drains),
    )


@dataclass(frozen=True)
class EvaluationResult:
    """One input combination, decoded."""

    inputs: dict[str, bool]
    outputs: dict[str, bool]  # outlet label -> droplet arrived
    drain: bool  # any drain terminal received a droplet
    arrivals: dict[str, tuple[str, ...]]  # terminal node -> droplet ids
    solution: FlowSolution
    log: TraceLog


def _resolve_assignment(
    ports: LogicPortMap, assignment: dict[str, bool]
) -> dict[str, bool]:
    unknown = set(assignment) - set(ports.inputs)
    if unknown:
        raise ValueError(f"unknown input labels: {sorted(unknown)}")
    return {label: bool(assignment.get(label, False)) for label in ports.inputs}


def _evaluate(
    net: Network,
    ports: LogicPortMap,
    assignment: dict[str, bool],
    params: SimulationParams,
) -> EvaluationResult:
    values = _resolve_assignment(ports, assignment)
    active = frozenset(ports.inputs[label] for label, on in values.items() if on)
    schedule = {terminal: (0.0,) for terminal in active}
    log = run_simulation(net, active, schedule, params)
    if log.truncated:
        stuck = ", ".join(sorted(log.unfinished())) or "none identified"
        raise EvaluationError(
            f"simulation ran out of time with droplets still moving: {stuck}"
        )
    stalled = log.stalled()
    if stalled:
        where = ", ".join(f"'{d}' in '{c}'" for d, c in sorted(stalled.items()))
        raise EvaluationError(f"droplets stalled before reaching a terminal: {where}")
    arrivals = log.arrivals()
    outputs = {
        label: bool(arrivals.get(node)) for label, node in ports.outputs.items()
    }
    drain = any(arrivals.get(node) for node in ports.drains)
    solution = solve_flow(net, active)
    return EvaluationResult(
        inputs=values,
        outputs=outputs,
        drain=drain,
        arrivals=arrivals,
        solution=solution,
        log=log,
    )


def evaluate_inputs(
    doc: NetlistDocument,
    assignment: dict[str, bool],
    pressure_scale: float = 1.0,
    params: SimulationParams | None = None,
) -> EvaluationResult:
    """Run one input combination of a parsed design and decode the booleans."""
    net = to_network(doc, pressure_scale)
    return _evaluate(net, port_map(doc), assignment, params or SimulationParams())


@dataclass(frozen=True)
class TruthTableRow:
    inputs: dict[str, bool]
    outputs: dict[str, bool]
    drain: bool
    arrivals: dict[str, tuple[str, ...]]
    expected: dict[str, bool]  # label (or "drain") -> expected value
    mismatches: tuple[str, ...]
    passed: bool


@dataclass(frozen=True)
class TruthTableReport:
    design: str
    input_labels: tuple[str, ...]
    output_labels: tuple[str, ...]
    rows: tuple[TruthTableRow, ...]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "design": self.design,
            "rows": [
                {
                    "inputs": {k: int(v) for k, v in row.inputs.items()},
                    "outputs": {k: int(v) for k, v in row.outputs.items()},
                    "drains": int(row.drain),
                    "arrivals": {
                        node: list(ids) for node, ids in sorted(row.arrivals.items())
                    },
                    "pass": row.passed,
                }
                for row in self.rows
            ],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        header = (
            list(self.input_labels)
            + list(self.output_labels)
            + [DRAIN_LABEL, "pass"]
        )
        lines = [",".join(header)]
        for row in self.rows:
            cells = [str(int(row.inputs[k])) for k in self.input_labels]
            cells += [str(int(row.outputs[k])) for k in self.output_labels]
            cells.append(str(int(row.drain)))
            cells.append(str(int(row.passed)))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        header = (
            list(self.input_labels)
            + list(self.output_labels)
            + [DRAIN_LABEL, "result"]
        )
        table = [header]
        for row in self.rows:
            cells = [str(int(row.inputs[k])) for k in self.input_labels]
            cells += [str(int(row.outputs[k])) for k in self.output_labels]
            cells.append(str(int(row.drain)))
            cells.append("ok" if row.passed else "MISMATCH " + ",".join(row.mismatches))
            table.append(cells)
        widths = [max(len(r[i]) for r in table) for i in range(len(header))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"{verdict}: {sum(r.passed for r in self.rows)}/{len(self.rows)} rows")
        return "\n".join(lines) + "\n"


def _expectations(
    doc: NetlistDocument,
    overrides: dict[str, str] | None,
    input_labels: tuple[str, ...],
    output_labels: tuple[str, ...],
) -> dict[str, BoolExpr]:
    merged: dict[str, str] = {e.label: e.expression for e in doc.expects}
    if overrides:
        merged.update(overrides)
    parsed: dict[str, BoolExpr] = {}
    for label, text in merged.items():
        if label != DRAIN_LABEL and label not in output_labels:
            raise ValueError(f"expectation for unknown outlet '{label}'")
        expr = parse_expression(text)
        missing = expression_variables(expr) - set(input_labels)
        if missing:
            raise ValueError(
                f"expectation for '{label}' references unknown inputs: {sorted(missing)}"
            )
        parsed[label] = expr
    return parsed


def truth_table(
    doc: NetlistDocument,
    design: str = "netlist",
    pressure_scale: float = 1.0,
    params: SimulationParams | None = None,
    expectations: dict[str, str] | None = None,
) -> TruthTableReport:
    """Evaluate every input combination and compare against expectations.

    Expectations come from the document's expect declarations, overridden
    per label by the `expectations` argument (expression text). Rows count
    in binary with the first input label as the most significant bit.
    """
    params = params or SimulationParams()
    net = to_network(doc, pressure_scale)
    ports = port_map(doc)
    input_labels = tuple(sorted(ports.inputs))
    output_labels = tuple(sorted(ports.outputs))
    n = len(input_labels)
    if n == 0:
        raise ValueError("design has no inputs to enumerate")
    if n > MAX_TABLE_INPUTS:
        raise ValueError(f"{n} inputs would need {2 ** n} rows; limit is {MAX_TABLE_INPUTS}")
    exprs = _expectations(doc, expectations, input_labels, output_labels)

    rows: list[TruthTableRow] = []
    for pattern in range(2**n):
        assignment = {
            label: bool((pattern >> (n - 1 - j)) & 1)
            for j, label in enumerate(input_labels)
        }
        result = _evaluate(net, ports, assignment, params)
        expected = {label: expr.evaluate(assignment) for label, expr in exprs.items()}
        mismatches = []
        for label, want in expected.items():
            got = result.drain if label == DRAIN_LABEL else result.outputs[label]
            if got != want:
                mismatches.append(label)
        rows.append(
            TruthTableRow(
                inputs=assignment,
                outputs=result.outputs,
                drain=result.drain,
                arrivals=result.arrivals,
                expected=expected,
                mismatches=tuple(sorted(mismatches)),
                passed=not mismatches,
            )
        )
    return TruthTableReport(
        design=design,
        input_labels=input_labels,
        output_labels=output_labels,
        rows=tuple(rows),
        passed=all(r.passed for r in rows),
    )


def drain_function(report: TruthTableReport) -> dict[tuple[bool, ...], bool]:
    """Observed drain signal per input tuple (in report input label order)."""
    return {
        tuple(row.inputs[k] for k in report.input_labels): row.drain
        for row in report.rows
    }
