"""Command-line entry point.

    ndalg verify SCENARIO.json
    ndalg export SCENARIO.json [-o OUT]
    ndalg compose DESCRIPTOR [DESCRIPTOR ...]
    ndalg rho-table --grid LO HI N

Exit codes: 0 Certified, 1 Refuted, 2 Inconclusive, 64 malformed input,
65 the proposed classical solution fails ``U' = F``.  ``NDALG_INDEX_CAP`` overrides
the protocol's index cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .ndalgebra import (
    CheckProtocol, IdealWitness, Verdict, embed, eval_representative, witness_to_json,
)
from .ode import (
    ClassicalSolutionError, FirstOrderODE, NonStabilizationError, certify_generalized_solution,
    classical_solution, jump_magnitude,
)
from .smoothfn import evaluate, expr_from_json, expr_to_json, make_rho, number_to_json
from .smoothfn.intervals import exact
from .symmetry import (
    JumpAction, MultiJumpAction, VerticalShift, action_from_json, action_to_json, apply_action,
    compose_multi,
)

EXIT_CODES = {Verdict.CERTIFIED: 0, Verdict.REFUTED: 1, Verdict.INCONCLUSIVE: 2}
EX_DATAERR = 64
EX_NOT_CLASSICAL = 65


class ScenarioError(ValueError):
    """Malformed scenario; the message starts with the offending field."""


def fmt(value) -> str:
    """Fixed 17-significant-digit rendering used for every exported number."""
    return format(float(value), ".17g")


@dataclass
class Export:
    format: str
    indices: list
    grid: tuple


@dataclass
class Scenario:
    equation: FirstOrderODE
    solution: object
    actions: list
    protocol: CheckProtocol
    witness_options: dict = field(default_factory=dict)
    export: Export | None = None
    raw: dict = field(default_factory=dict)

    @property
    def gamma(self) -> tuple:
        points = set()
        for act in self.actions:
            if isinstance(act, JumpAction):
                points.add(act.a)
            elif isinstance(act, MultiJumpAction):
                points.update(act.locations)
        return tuple(sorted(points))

    def witness(self) -> IdealWitness:
        return IdealWitness(self.gamma, exact(self.witness_options.get("radius_scale", 1)),
                            self.witness_options.get("stabilization"))


def _flatten(items):
    for item in items:
        if isinstance(item, list):
            yield from _flatten(item)
        else:
            yield item


def _int_field(obj: dict, key: str, path: str, default=None, minimum=0) -> int:
    value = obj.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ScenarioError(f"{path}.{key}: expected an integer >= {minimum}")
    return value


def parse_scenario(obj, env=None) -> Scenario:
    env = os.environ if env is None else env
    if not isinstance(obj, dict):
        raise ScenarioError("$: scenario must be a JSON object")
    eq = obj.get("equation")
    if not isinstance(eq, dict) or "rhs" not in eq:
        raise ScenarioError("$.equation.rhs: missing")
    try:
        rhs = expr_from_json(eq["rhs"], "$.equation.rhs")
        if "solution" not in obj:
            raise ScenarioError("$.solution: missing")
        solution = expr_from_json(obj["solution"], "$.solution")
        raw_actions = obj.get("actions", [])
        if not isinstance(raw_actions, list):
            raise ScenarioError("$.actions: expected a list")
        actions = [action_from_json(a, f"$.actions[{i}]")
                   for i, a in enumerate(_flatten(raw_actions))]
    except ScenarioError:
        raise
    except ValueError as err:
        raise ScenarioError(str(err)) from err

    scenario = Scenario(FirstOrderODE(rhs), solution, actions, None, raw=obj)
    gamma = scenario.gamma
    proto = obj.get("protocol", {})
    if not isinstance(proto, dict):
        raise ScenarioError("$.protocol: expected an object")
    window = proto.get("window")
    if window is None:
        window = [gamma[0] - 3, gamma[-1] + 3] if gamma else [-3, 3]
    if not isinstance(window, list) or len(window) != 2:
        raise ScenarioError("$.protocol.window: expected [lo, hi]")
    index_cap = _int_field(proto, "index_cap", "$.protocol", 16)
    if "NDALG_INDEX_CAP" in env:
        try:
            index_cap = int(env["NDALG_INDEX_CAP"])
        except ValueError as err:
            raise ScenarioError("NDALG_INDEX_CAP: expected an integer") from err
    try:
        scenario.protocol = CheckProtocol(
            tuple(exact(v) for v in window),
            sample_count=_int_field(proto, "sample_count", "$.protocol", 41, minimum=1),
            index_cap=index_cap,
            margin=exact(proto.get("margin", Fraction(1, 4))),
        )
    except ScenarioError:
        raise
    except (TypeError, ValueError) as err:
        raise ScenarioError(f"$.protocol: {err}") from err

    wit = obj.get("witness", {})
    if not isinstance(wit, dict):
        raise ScenarioError("$.witness: expected an object")
    scenario.witness_options = wit

    if "export" in obj:
        scenario.export = _parse_export(obj["export"])
    return scenario


def _parse_export(ex) -> Export:
    if not isinstance(ex, dict):
        raise ScenarioError("$.export: expected an object")
    fmt_name = str(ex.get("format", "csv")).lower()
    if fmt_name not in ("csv", "json"):
        raise ScenarioError("$.export.format: expected CSV or JSON")
    indices = ex.get("indices")
    if (not isinstance(indices, list) or not indices
            or not all(isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in indices)):
        raise ScenarioError("$.export.indices: expected a nonempty list of natural numbers")
    grid = ex.get("grid")
    if not isinstance(grid, list) or len(grid) != 3:
        raise ScenarioError("$.export.grid: expected [lo, hi, count]")
    try:
        lo, hi = exact(grid[0]), exact(grid[1])
    except (TypeError, ValueError) as err:
        raise ScenarioError("$.export.grid: bounds must be real numbers") from err
    count = grid[2]
    if not isinstance(count, int) or isinstance(count, bool) or count < 2:
        raise ScenarioError("$.export.grid: count must be an integer >= 2")
    if lo > hi:
        raise ScenarioError("$.export.grid: lo must not exceed hi")
    return Export(fmt_name, sorted(set(indices)), (lo, hi, count))


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ScenarioError(f"$: cannot read {path}: {err.strerror}") from err
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"$: invalid JSON ({err.msg} at line {err.lineno})") from err
    return parse_scenario(obj)


def transformed_solution(scenario: Scenario):
    w = embed(scenario.solution)
    for act in scenario.actions:
        w = apply_action(act, w)
    return w


def verify_report(scenario: Scenario) -> tuple[dict, int]:
    """Build the certification report and the matching exit status."""
    try:
        classical_solution(scenario.equation, scenario.solution)
    except ClassicalSolutionError as err:
        report = {
            "equation": {"rhs": expr_to_json(scenario.equation.rhs)},
            "solution": expr_to_json(scenario.solution),
            "decision": "NotClassical",
            "counterexample": {"x": float(err.point), "residual": err.residual},
        }
        return report, EX_NOT_CLASSICAL
    w = transformed_solution(scenario)
    witness = scenario.witness()
    check = certify_generalized_solution(w, scenario.equation, witness, scenario.protocol)
    probes = []
    for a in witness.gamma:
        probe = {"a": number_to_json(a)}
        try:
            probe["jump"] = jump_magnitude(w, a, scenario.protocol)
        except NonStabilizationError as err:
            probe["jump"] = None
            probe["error"] = str(err)
        probes.append(probe)
    report = {
        "equation": {"rhs": expr_to_json(scenario.equation.rhs)},
        "solution": expr_to_json(scenario.solution),
        "action_chain": [action_to_json(a) for a in scenario.actions],
        "witness": witness_to_json(witness),
        "protocol": {
            "window": [number_to_json(v) for v in scenario.protocol.window],
            "sample_count": scenario.protocol.sample_count,
            "index_cap": scenario.protocol.index_cap,
            "margin": number_to_json(scenario.protocol.margin),
        },
        "decision": check.decision.value,
        "check": check.to_json(),
        "probes": probes,
    }
    return report, EXIT_CODES[check.decision]


def export_rows(scenario: Scenario) -> list[tuple]:
    """(nu, x, value) with nu ascending outside, x ascending inside."""
    w = transformed_solution(scenario)
    lo, hi, count = scenario.export.grid
    xs = [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]
    return [(nu, x, eval_representative(w, nu, x)) for nu in scenario.export.indices for x in xs]


def render_export(scenario: Scenario) -> str:
    rows = export_rows(scenario)
    if scenario.export.format == "csv":
        lines = ["nu,x,value"] + [f"{nu},{fmt(x)},{fmt(v)}" for nu, x, v in rows]
        return "\n".join(lines) + "\n"
    payload = [{"nu": nu, "x": float(fmt(x)), "value": float(fmt(v))} for nu, x, v in rows]
    return json.dumps({"rows": payload}, sort_keys=True, indent=2) + "\n"


def compose_descriptors(objs: list) -> object:
    """Fold descriptors: jumps and multis by height addition, vertical shifts by epsilon."""
    actions = [action_from_json(o, f"$[{i}]") for i, o in enumerate(objs)]
    if len(actions) == 1:
        return action_to_json(actions[0])
    total = MultiJumpAction()
    epsilon = Fraction(0)
    for act in actions:
        if isinstance(act, VerticalShift):
            epsilon += act.epsilon
        elif isinstance(act, JumpAction):
            total = compose_multi(total, MultiJumpAction.single(act))
        else:
            total = compose_multi(total, act)
    multi = action_to_json(total)
    if any(isinstance(a, VerticalShift) for a in actions):
        return [multi, action_to_json(VerticalShift(epsilon))]
    return multi


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_DATAERR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ndalg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("verify", help="certify the transformed solution of a scenario")
    p.add_argument("scenario")
    p = sub.add_parser("export", help="sample representatives over a grid")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p = sub.add_parser("compose", help="compose action descriptors")
    p.add_argument("descriptors", nargs="+", help="JSON action descriptors")
    p = sub.add_parser("rho-table", help="print samples of the cutoff function")
    p.add_argument("--grid", nargs=3, metavar=("LO", "HI", "N"), required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            report, status = verify_report(load_scenario(args.scenario))
            print(_dump(report))
            if status == EX_NOT_CLASSICAL:
                ce = report["counterexample"]
                print(f"ndalg: solution fails U' = F at x = {ce['x']!r}", file=sys.stderr)
            return status
        if args.command == "export":
            scenario = load_scenario(args.scenario)
            if scenario.export is None:
                raise ScenarioError("$.export: missing")
            text = render_export(scenario)
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return 0
        if args.command == "compose":
            try:
                objs = [json.loads(d) for d in args.descriptors]
            except json.JSONDecodeError as err:
                raise ScenarioError(f"$: invalid JSON descriptor ({err.msg})") from err
            try:
                print(_dump(compose_descriptors(objs)))
            except ValueError as err:
                raise ScenarioError(str(err)) from err
            return 0
        if args.command == "rho-table":
            try:
                lo, hi, n = exact(args.grid[0]), exact(args.grid[1]), int(args.grid[2])
            except ValueError as err:
                raise ScenarioError("--grid: expected LO HI N") from err
            if n < 2 or lo > hi:
                raise ScenarioError("--grid: need lo <= hi and n >= 2")
            rho = make_rho()
            print("x,rho")
            for i in range(n):
                x = lo + (hi - lo) * Fraction(i, n - 1)
                print(f"{fmt(x)},{fmt(evaluate(rho, x))}")
            return 0
    except ScenarioError as err:
        print(f"ndalg: {err}", file=sys.stderr)
        return EX_DATAERR
    return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
