import itertools
from fractions import Fraction

import pytest

from snarkpipe import (
    FieldTooSmall,
    IncompleteAssignment,
    Polynomial,
    Sha256Rng,
    assemble,
    build_qap,
    check_solution,
    flatten,
    parse_program,
    solve,
    soundness_scan,
)
from snarkpipe.circuit import Circuit, Gate, Wire

from conftest import GOOD_COLORING


def hand_circuit_single_times(ctx):
    """a * b = c with no conditions, built directly."""
    wires = [
        Wire(kind="one"),
        Wire(kind="input", name="a"),
        Wire(kind="input", name="b"),
        Wire(kind="gate"),
    ]
    gates = [Gate("Times", 1, 2, 3, 1)]
    return Circuit(
        ctx=ctx, wires=wires, gates=gates, outputs=[], inputs=["a", "b"],
        names={"a": 1, "b": 2, "c": 3},
    )


def hand_circuit_single_plus(ctx):
    wires = [
        Wire(kind="one"),
        Wire(kind="input", name="a"),
        Wire(kind="input", name="b"),
        Wire(kind="gate"),
    ]
    gates = [Gate("Plus", 1, 2, 3, 1)]
    return Circuit(
        ctx=ctx, wires=wires, gates=gates, outputs=[], inputs=["a", "b"],
        names={"a": 1, "b": 2, "c": 3},
    )


def gate_operand_symbols(circuit, gate):
    """Which symbols feed this gate, with constants attributed to the
    one-wire. Plus gates multiply their sum by the constant 1, so the
    one-wire is an operand of every Plus row by construction. Independent
    of the polynomial construction."""
    symbols = set()
    for operand in (gate.left, gate.right):
        wire = circuit.wires[operand]
        if wire.kind in ("const", "one"):
            symbols.add(0)
        else:
            symbols.add(operand)
    if gate.op == "Plus":
        symbols.add(0)
    return symbols


# --- construction ---------------------------------------------------------------


def test_single_times_gate_rows(ctx17):
    qap = build_qap(hand_circuit_single_times(ctx17))
    assert qap.n_gates == 1
    assert qap.symbols == (0, 1, 2, 3)
    by_name = dict(zip(qap.symbol_names, range(len(qap.symbols))))
    assert qap.v[by_name["a"]].coeffs == (1,)
    assert qap.w[by_name["b"]].coeffs == (1,)
    assert qap.k[by_name["c"]].coeffs == (1,)
    assert qap.target == Polynomial(ctx17, [-1, 1])  # x - 1
    # every other entry is the zero polynomial
    assert qap.v[by_name["one"]].is_zero()
    assert qap.w[by_name["a"]].is_zero()


def test_single_plus_gate_rows(ctx17):
    qap = build_qap(hand_circuit_single_plus(ctx17))
    by_name = dict(zip(qap.symbol_names, range(len(qap.symbols))))
    assert qap.v[by_name["a"]].coeffs == (1,)
    assert qap.v[by_name["b"]].coeffs == (1,)
    assert qap.w[by_name["one"]].coeffs == (1,)
    assert qap.k[by_name["c"]].coeffs == (1,)
    # (t_a + t_b) * 1 = t_c at the single node
    t = {0: ctx17(1), 1: ctx17(4), 2: ctx17(5), 3: ctx17(9)}
    assert assemble(qap, t).divisible


def test_field_too_small(coloring_program, ctx101):
    # The coloring circuit has N = 69 gates and 101 <= 2N.
    circuit = flatten(coloring_program, ctx101)
    with pytest.raises(FieldTooSmall):
        build_qap(circuit)


def test_degree_bounds(coloring_qap):
    n = coloring_qap.n_gates
    for polys in (coloring_qap.v, coloring_qap.w, coloring_qap.k):
        assert all(poly.degree < n for poly in polys)
    assert coloring_qap.target.degree == n
    assert coloring_qap.target.coeffs[-1] == 1


def test_target_vanishes_on_every_node(coloring_qap):
    assert all(
        coloring_qap.target.eval_int(d) == 0
        for d in range(1, coloring_qap.n_gates + 1)
    )
    assert coloring_qap.target.eval_int(coloring_qap.n_gates + 1) != 0


# --- structural properties (exhaustive scans) ------------------------------------


@pytest.mark.parametrize("name", ["coloring5.zkp", "cubic.zkp", "product.zkp"])
def test_output_rows_select_exactly_the_gate_output(name, corpus_programs, ctx):
    circuit = flatten(corpus_programs[name], ctx)
    qap = build_qap(circuit)
    out_by_index = {g.index: g.out for g in circuit.gates}
    for d in range(1, qap.n_gates + 1):
        for i, wire in enumerate(qap.symbols):
            expected = 1 if out_by_index[d] == wire else 0
            assert qap.k[i].eval_int(d) == expected


@pytest.mark.parametrize("name", ["coloring5.zkp", "cubic.zkp", "product.zkp"])
def test_operand_rows_nonzero_exactly_for_gate_inputs(name, corpus_programs, ctx):
    circuit = flatten(corpus_programs[name], ctx)
    qap = build_qap(circuit)
    gates = {g.index: g for g in circuit.gates}
    for d in range(1, qap.n_gates + 1):
        operands = gate_operand_symbols(circuit, gates[d])
        for i, wire in enumerate(qap.symbols):
            touched = qap.v[i].eval_int(d) != 0 or qap.w[i].eval_int(d) != 0
            assert touched == (wire in operands)


# --- assembling -------------------------------------------------------------------


def test_assemble_valid_solution(coloring_circuit, coloring_qap):
    instance = assemble(coloring_qap, solve(coloring_circuit, GOOD_COLORING))
    assert instance.divisible
    assert instance.h is not None
    assert instance.h * coloring_qap.target == instance.f
    assert instance.f == instance.v * instance.w - instance.k


def test_assemble_tampered_solution(coloring_circuit, coloring_qap):
    assignment = solve(coloring_circuit, GOOD_COLORING)
    internal = next(
        g.out
        for g in coloring_circuit.gates
        if coloring_circuit.wires[g.out].kind == "gate"
    )
    assignment[internal] = assignment[internal] + 1
    instance = assemble(coloring_qap, assignment)
    assert not instance.divisible
    assert instance.h is None


def test_assemble_single_gate_zero_f(ctx17):
    qap = build_qap(hand_circuit_single_times(ctx17))
    t = {0: ctx17(1), 1: ctx17(2), 2: ctx17(3), 3: ctx17(6)}
    instance = assemble(qap, t)
    assert instance.f.eval_int(1) == 0
    assert instance.divisible
    # 2*3 - 6 = 0 identically: F is the zero polynomial here
    assert instance.f.is_zero()
    assert instance.h.is_zero()


def test_assemble_requires_every_symbol(coloring_qap, coloring_circuit):
    assignment = solve(coloring_circuit, GOOD_COLORING)
    del assignment[coloring_qap.symbols[-1]]
    with pytest.raises(IncompleteAssignment):
        assemble(coloring_qap, assignment)


# --- the central equivalence ------------------------------------------------------


def test_divisibility_iff_solution_exhaustive(coloring_program, coloring_circuit, coloring_qap):
    mismatches = 0
    for colors in itertools.product((1, 2, 3), repeat=5):
        env = dict(zip(("c1", "c2", "c3", "c4", "c5"), colors))
        assignment = solve(coloring_circuit, env)
        if check_solution(coloring_circuit, assignment) != assemble(
            coloring_qap, assignment
        ).divisible:
            mismatches += 1
    assert mismatches == 0


@pytest.mark.parametrize("name", ["cubic.zkp", "product.zkp"])
def test_divisibility_iff_solution_random(name, corpus_programs, ctx):
    circuit = flatten(corpus_programs[name], ctx)
    qap = build_qap(circuit)
    rng = Sha256Rng(b"qap-equivalence")
    for _ in range(100):
        env = {v: rng.randrange(ctx.p) for v in circuit.inputs}
        assignment = solve(circuit, env)
        assert check_solution(circuit, assignment) == assemble(qap, assignment).divisible


def test_divisibility_iff_solution_under_wire_tampering(
    coloring_circuit, coloring_qap
):
    rng = Sha256Rng(b"tamper-equivalence")
    base = solve(coloring_circuit, GOOD_COLORING)
    symbol_wires = list(coloring_qap.symbols)
    for _ in range(50):
        assignment = dict(base)
        wire = symbol_wires[rng.randrange(len(symbol_wires))]
        assignment[wire] = assignment[wire] + rng.randrange(1, 100)
        assert check_solution(coloring_circuit, assignment) == assemble(
            coloring_qap, assignment
        ).divisible


# --- soundness scans ---------------------------------------------------------------


def small_field_qap(ctx101):
    program = parse_program(
        "inputs x, y; out := x^3 + x + 5 - y; assert out == 0;"
    )
    circuit = flatten(program, ctx101)
    return circuit, build_qap(circuit)


def test_scan_valid_solution_hits_everywhere(ctx101):
    circuit, qap = small_field_qap(ctx101)
    assignment = solve(circuit, {"x": 3, "y": 35})
    assert soundness_scan(qap, assignment) == Fraction(1)


def test_scan_forged_solution_bounded_by_2n(ctx101):
    circuit, qap = small_field_qap(ctx101)
    assignment = solve(circuit, {"x": 3, "y": 36})  # off by one: not a solution
    fraction = soundness_scan(qap, assignment)
    hits = fraction.numerator * 101 // fraction.denominator
    assert fraction.denominator in (1, 101)
    assert hits <= 2 * qap.n_gates
    assert fraction < 1


def test_scan_statistical_on_large_field(coloring_circuit, coloring_qap):
    assignment = solve(coloring_circuit, {**GOOD_COLORING, "c1": 1})
    fraction = soundness_scan(coloring_qap, assignment, trials=10000, seed=b"mc")
    # bound is 2N/p ~ 7.5e-18; seeing even one hit would be astronomical
    assert fraction == 0


def test_scan_trial_sampling_is_seeded(ctx101):
    circuit, qap = small_field_qap(ctx101)
    assignment = solve(circuit, {"x": 4, "y": 0})
    a = soundness_scan(qap, assignment, trials=500, seed=b"fixed")
    b = soundness_scan(qap, assignment, trials=500, seed=b"fixed")
    assert a == b
