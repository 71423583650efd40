"""Flatten programs into binary Plus/Times gate circuits and solve them.

Wires come in five kinds: the distinguished constant-one wire (always id 0),
named inputs, deduplicated constants, gate outputs, and inverse hints. Each
assertion becomes one extra Times gate whose output wire is a fresh pinned
constant, so that a wire assignment satisfies every gate equation if and
only if it also satisfies every asserted output condition:

    assert f != 0   ->   f * inv(f) = 1   (inv is a hint wire, solved as
                                           f^(p-2), which is 0 when f is 0)
    assert f == 0   ->   f * 1      = 0

Gate indices d run 1..N in topological order and count Plus and Times gates
alike, condition gates included.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .field import FieldContext, FieldElement
from .frontend import (
    Add,
    Constant,
    Expression,
    Mul,
    Neg,
    Pow,
    Program,
    Relation,
    Variable,
    reduce_constant,
)

__all__ = [
    "Circuit",
    "Gate",
    "IncompleteAssignment",
    "PLUS",
    "TIMES",
    "Wire",
    "WIRE_ONE",
    "check_solution",
    "flatten",
    "solve",
]

WIRE_ONE = 0
PLUS = "Plus"
TIMES = "Times"


class IncompleteAssignment(ValueError):
    """The assignment does not cover every wire of the circuit."""


@dataclass(frozen=True)
class Wire:
    kind: str  # "one" | "input" | "const" | "gate" | "inverse"
    name: str | None = None  # inputs only
    value: int | None = None  # consts only
    of: int | None = None  # inverse hints: the wire being inverted


@dataclass(frozen=True)
class Gate:
    op: str  # PLUS or TIMES
    left: int
    right: int
    out: int
    index: int  # 1-based constraint index d


@dataclass
class Circuit:
    ctx: FieldContext
    wires: list
    gates: list
    outputs: list  # of (wire id, Relation)
    inputs: list  # declared input names, in order
    names: dict = dc_field(default_factory=dict)  # name -> wire id

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def input_wires(self) -> list:
        return [self.names[name] for name in self.inputs]

    def symbol_wires(self) -> list:
        """Wires that carry witness values: one, inputs, hints, gate outputs.

        Constant wires that only feed gates are excluded; they fold onto the
        one-wire downstream. Pinned constant outputs of condition gates are
        gate outputs and therefore included.
        """
        ids = {WIRE_ONE}
        ids.update(self.input_wires())
        ids.update(i for i, w in enumerate(self.wires) if w.kind == "inverse")
        ids.update(g.out for g in self.gates)
        return sorted(ids)

    def wire_label(self, wire_id: int) -> str:
        """Stable human-readable symbol name; '@' keeps synthesized labels
        out of the identifier namespace."""
        wire = self.wires[wire_id]
        if wire.kind == "one":
            return "one"
        if wire.kind == "input":
            return wire.name
        for name, target in self.names.items():
            if target == wire_id:
                return name
        return f"@{wire_id}"

    def to_json_dict(self) -> dict:
        wires = []
        for w in self.wires:
            entry: dict = {"kind": w.kind}
            if w.name is not None:
                entry["name"] = w.name
            if w.value is not None:
                entry["value"] = str(w.value)
            if w.of is not None:
                entry["of"] = w.of
            wires.append(entry)
        return {
            "format": "snarkpipe-circuit/1",
            "field": self.ctx.to_json_dict(),
            "inputs": list(self.inputs),
            "names": dict(self.names),
            "wires": wires,
            "gates": [
                {"op": g.op, "l": g.left, "r": g.right, "o": g.out, "d": g.index}
                for g in self.gates
            ],
            "outputs": [
                {"wire": wire_id, "rel": rel.value} for wire_id, rel in self.outputs
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Circuit":
        ctx = FieldContext.from_json_dict(data["field"])
        wires = [
            Wire(
                kind=entry["kind"],
                name=entry.get("name"),
                value=int(entry["value"]) if "value" in entry else None,
                of=entry.get("of"),
            )
            for entry in data["wires"]
        ]
        gates = [
            Gate(op=e["op"], left=e["l"], right=e["r"], out=e["o"], index=e["d"])
            for e in data["gates"]
        ]
        outputs = [(e["wire"], Relation(e["rel"])) for e in data["outputs"]]
        return cls(
            ctx=ctx,
            wires=wires,
            gates=gates,
            outputs=outputs,
            inputs=list(data["inputs"]),
            names={k: int(v) for k, v in data["names"].items()},
        )

    def to_json_bytes(self) -> bytes:
        return (
            json.dumps(self.to_json_dict(), separators=(",", ":"), sort_keys=False)
            + "\n"
        ).encode()


class _Builder:
    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.wires = [Wire(kind="one")]
        self.gates: list = []
        self.const_cache: dict = {}
        self.warned: set = set()

    def new_wire(self, wire: Wire) -> int:
        self.wires.append(wire)
        return len(self.wires) - 1

    def const_wire(self, value: int) -> int:
        value %= self.ctx.p
        if value not in self.const_cache:
            self.const_cache[value] = self.new_wire(Wire(kind="const", value=value))
        return self.const_cache[value]

    def add_gate(self, op: str, left: int, right: int) -> int:
        out = self.new_wire(Wire(kind="gate"))
        self.gates.append(Gate(op, left, right, out, len(self.gates) + 1))
        return out

    def add_pinned_gate(self, op: str, left: int, right: int, pinned: int) -> int:
        # Condition gates pin their output to a fresh constant wire created
        # here so wire ids stay topological.
        out = self.new_wire(Wire(kind="const", value=pinned))
        self.gates.append(Gate(op, left, right, out, len(self.gates) + 1))
        return out

    def lower(self, expr: Expression, env: dict) -> int:
        if isinstance(expr, Constant):
            return self.const_wire(reduce_constant(expr.value, self.ctx, self.warned))
        if isinstance(expr, Variable):
            return env[expr.name]
        if isinstance(expr, Neg):
            inner = self.lower(expr.operand, env)
            minus_one = self.const_wire(self.ctx.p - 1)
            return self.add_gate(TIMES, minus_one, inner)
        if isinstance(expr, Add):
            acc = self.lower(expr.terms[0], env)
            for term in expr.terms[1:]:
                acc = self.add_gate(PLUS, acc, self.lower(term, env))
            return acc
        if isinstance(expr, Mul):
            acc = self.lower(expr.factors[0], env)
            for factor in expr.factors[1:]:
                acc = self.add_gate(TIMES, acc, self.lower(factor, env))
            return acc
        if isinstance(expr, Pow):
            base = self.lower(expr.base, env)
            acc = base
            for _ in range(expr.exponent - 1):
                acc = self.add_gate(TIMES, acc, base)
            return acc
        raise TypeError(f"not an expression node: {expr!r}")


def flatten(program: Program, ctx: FieldContext) -> Circuit:
    """Deterministically lower a program to binary gates.

    N-ary sums and products associate left; Neg(x) becomes (p-1)*x; x^k
    becomes a chain of k-1 multiplications; assertions become condition
    gates as described in the module docstring.
    """
    builder = _Builder(ctx)
    env: dict = {}
    for name in program.inputs:
        env[name] = builder.new_wire(Wire(kind="input", name=name))
    names = dict(env)
    for name, expr in program.definitions:
        wire = builder.lower(expr, env)
        if builder.wires[wire].kind in ("const", "one"):
            # Keep every named output a gate output.
            wire = builder.add_gate(TIMES, wire, WIRE_ONE)
        env[name] = wire
        names[name] = wire
    outputs = []
    for name, relation in program.conditions:
        target = env[name]
        if relation is Relation.NOT_EQUAL_ZERO:
            inv = builder.new_wire(Wire(kind="inverse", of=target))
            builder.add_pinned_gate(TIMES, target, inv, 1)
        else:
            builder.add_pinned_gate(TIMES, target, WIRE_ONE, 0)
        outputs.append((target, relation))
    return Circuit(
        ctx=ctx,
        wires=builder.wires,
        gates=builder.gates,
        outputs=outputs,
        inputs=list(program.inputs),
        names=names,
    )


def solve(circuit: Circuit, inputs: dict) -> dict:
    """Forward-evaluate the gates; returns a total wire -> FieldElement map.

    Inverse hints are filled with source^(p-2), so an assignment always
    exists even when a condition fails; the corresponding condition gate is
    then simply unsatisfied.
    """
    ctx = circuit.ctx
    p = ctx.p
    declared = set(circuit.inputs)
    supplied = set(inputs)
    if declared != supplied:
        missing = sorted(declared - supplied)
        extra = sorted(supplied - declared)
        problems = []
        if missing:
            problems.append(f"missing inputs: {', '.join(missing)}")
        if extra:
            problems.append(f"unexpected inputs: {', '.join(extra)}")
        raise ValueError("; ".join(problems))

    values: dict = {}
    for i, wire in enumerate(circuit.wires):
        if wire.kind == "one":
            values[i] = 1
        elif wire.kind == "const":
            values[i] = wire.value % p
        elif wire.kind == "input":
            values[i] = int(ctx(inputs[wire.name]))
    for gate in circuit.gates:
        for operand in (gate.left, gate.right):
            wire = circuit.wires[operand]
            if wire.kind == "inverse" and operand not in values:
                values[operand] = pow(values[wire.of], p - 2, p)
        result = (
            values[gate.left] * values[gate.right] % p
            if gate.op == TIMES
            else (values[gate.left] + values[gate.right]) % p
        )
        if circuit.wires[gate.out].kind == "gate":
            values[gate.out] = result
    return {i: FieldElement(ctx, v) for i, v in values.items()}


def check_solution(circuit: Circuit, assignment: dict) -> bool:
    """True iff every gate equation and every output relation holds.

    Also enforces the fixed values: the one-wire carries 1 and every
    constant wire carries its constant.
    """
    ctx = circuit.ctx
    p = ctx.p
    missing = [i for i in range(len(circuit.wires)) if i not in assignment]
    if missing:
        raise IncompleteAssignment(
            f"assignment misses {len(missing)} wire(s), first: {missing[0]}"
        )
    values = {i: int(ctx(assignment[i])) for i in range(len(circuit.wires))}
    for i, wire in enumerate(circuit.wires):
        if wire.kind == "one" and values[i] != 1:
            return False
        if wire.kind == "const" and values[i] != wire.value % p:
            return False
    for gate in circuit.gates:
        expected = (
            values[gate.left] * values[gate.right] % p
            if gate.op == TIMES
            else (values[gate.left] + values[gate.right]) % p
        )
        if values[gate.out] != expected:
            return False
    for wire_id, relation in circuit.outputs:
        if not relation.holds(values[wire_id]):
            return False
    return True
