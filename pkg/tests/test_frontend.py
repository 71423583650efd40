import itertools

import pytest

from snarkpipe import ParseError, Relation, eval_program, format_program, parse_program
from snarkpipe.frontend import (
    Add,
    Constant,
    FieldReductionWarning,
    Mul,
    Neg,
    Pow,
    Variable,
)

from conftest import COLORING_EDGES, GOOD_COLORING


# --- independent oracles ------------------------------------------------------


def eval_over_integers(expr, env):
    """Plain integer tree evaluation, no modular reduction anywhere."""
    if isinstance(expr, Constant):
        return expr.value
    if isinstance(expr, Variable):
        return env[expr.name]
    if isinstance(expr, Neg):
        return -eval_over_integers(expr.operand, env)
    if isinstance(expr, Add):
        return sum(eval_over_integers(t, env) for t in expr.terms)
    if isinstance(expr, Mul):
        out = 1
        for f in expr.factors:
            out *= eval_over_integers(f, env)
        return out
    if isinstance(expr, Pow):
        return eval_over_integers(expr.base, env) ** expr.exponent
    raise TypeError(expr)


def is_proper_coloring(colors):
    """Adjacency-scan oracle for the bundled 5-vertex graph."""
    if any(c not in (1, 2, 3) for c in colors):
        return False
    return all(colors[u - 1] != colors[v - 1] for u, v in COLORING_EDGES)


# --- parsing ------------------------------------------------------------------


def test_minimal_program():
    program = parse_program("inputs x, y; out := x*y; assert out == 0;")
    assert program.inputs == ("x", "y")
    assert len(program.definitions) == 1
    assert program.conditions == (("out", Relation.EQUAL_ZERO),)


def test_coloring_program_shape(coloring_program):
    assert coloring_program.inputs == ("c1", "c2", "c3", "c4", "c5")
    assert coloring_program.defined_names() == ("f1", "f2")
    assert coloring_program.conditions == (
        ("f1", Relation.NOT_EQUAL_ZERO),
        ("f2", Relation.EQUAL_ZERO),
    )
    # f1 is the 8-factor edge product, f2 the 5-term color-range sum
    f1 = dict(coloring_program.definitions)["f1"]
    f2 = dict(coloring_program.definitions)["f2"]
    assert isinstance(f1, Mul) and len(f1.factors) == 8
    assert isinstance(f2, Add) and len(f2.terms) == 5


def test_desugaring_shapes():
    program = parse_program("inputs x; a := x - 3; b := -x; c := x^3; assert a == 0;")
    defs = dict(program.definitions)
    assert defs["a"] == Add((Variable("x"), Neg(Constant(3))))
    assert defs["b"] == Neg(Variable("x"))
    assert defs["c"] == Pow(Variable("x"), 3)


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_program("inputs x; y := x + ; assert y == 0;")
    assert err.value.code == "syntax"
    assert err.value.line == 1
    assert err.value.col == 20  # the ';' right after the dangling '+'


@pytest.mark.parametrize(
    "source,code",
    [
        ("inputs x; y := z + 1; assert y == 0;", "unknown-identifier"),
        ("inputs x; a := b; b := x; assert a == 0;", "forward-reference"),
        ("inputs x; y := x^0; assert y == 0;", "bad-exponent"),
        ("inputs x; y := x^-2; assert y == 0;", "bad-exponent"),
        ("inputs x, x; y := x; assert y == 0;", "duplicate-name"),
        ("inputs x; y := x; y := x; assert y == 0;", "duplicate-name"),
        ("inputs one; y := one; assert y == 0;", "reserved-name"),
        ("inputs x; assert x == 0;", "bad-assertion-target"),
        ("inputs x; y := x; assert z == 0;", "unknown-identifier"),
    ],
)
def test_distinct_diagnostics(source, code):
    with pytest.raises(ParseError) as err:
        parse_program(source)
    assert err.value.code == code


def test_assertion_requires_literal_zero():
    with pytest.raises(ParseError):
        parse_program("inputs x; y := x; assert y == 1;")


def test_definitions_cannot_follow_assertions():
    with pytest.raises(ParseError):
        parse_program("inputs x; a := x; assert a == 0; b := x;")


def test_program_needs_an_assertion():
    with pytest.raises(ParseError):
        parse_program("inputs x; y := x;")


def test_comments_and_whitespace():
    program = parse_program(
        "# heading\ninputs x;  # trailing\n\nout := x * 2;\nassert out != 0;\n"
    )
    assert program.defined_names() == ("out",)


def test_parse_is_deterministic(coloring_program):
    from snarkpipe.bundled import load_bundled_text

    again = parse_program(load_bundled_text("coloring5.zkp"))
    assert again == coloring_program


# --- pretty printer -----------------------------------------------------------


@pytest.mark.parametrize("name", ["coloring5.zkp", "cubic.zkp", "product.zkp"])
def test_round_trip_bundled(name, corpus_programs):
    program = corpus_programs[name]
    assert parse_program(format_program(program)) == program


@pytest.mark.parametrize(
    "source",
    [
        "inputs x; y := -(x + 1)*(x - 2)^3; assert y == 0;",
        "inputs x; y := x*(-x); assert y != 0;",
        "inputs x; y := 1 + (2 + x); assert y == 0;",
        "inputs x; y := ((x))^2 - -3; assert y == 0;",
    ],
)
def test_round_trip_tricky_nesting(source):
    program = parse_program(source)
    assert parse_program(format_program(program)) == program


# --- evaluation ---------------------------------------------------------------


def test_eval_good_coloring(coloring_program, ctx):
    result = eval_program(coloring_program, GOOD_COLORING, ctx)
    assert result.values["f1"].value == ctx.p - 4  # -4 in the field
    assert result.values["f2"].value == 0
    assert result.ok


def test_eval_repeated_color_kills_f1(coloring_program, ctx):
    result = eval_program(coloring_program, {**GOOD_COLORING, "c1": 1}, ctx)
    assert result.values["f1"].value == 0
    checks = {c.name: c.holds for c in result.conditions}
    assert not checks["f1"] and checks["f2"]


def test_eval_out_of_range_color_kills_f2(coloring_program, ctx):
    result = eval_program(coloring_program, {**GOOD_COLORING, "c1": 4}, ctx)
    # (1-4)(2-4)(3-4) = -6, every other term 0
    assert result.values["f2"].value == ctx.p - 6
    checks = {c.name: c.holds for c in result.conditions}
    assert checks["f1"] and not checks["f2"]


def test_eval_rejects_wrong_input_names(coloring_program, ctx):
    with pytest.raises(ValueError):
        eval_program(coloring_program, {"c1": 1}, ctx)
    with pytest.raises(ValueError):
        eval_program(coloring_program, {**GOOD_COLORING, "c6": 1}, ctx)


def test_big_constant_warns(ctx17):
    program = parse_program("inputs x; y := x + 100; assert y == 0;")
    with pytest.warns(FieldReductionWarning):
        result = eval_program(program, {"x": 0}, ctx17)
    assert result.values["y"].value == 100 % 17


def test_field_eval_matches_integer_eval_on_all_color_vectors(coloring_program, ctx):
    # Intermediate magnitudes stay far below p, so plain integer evaluation
    # must agree with field evaluation after reduction.
    defs = dict(coloring_program.definitions)
    for colors in itertools.product((1, 2, 3), repeat=5):
        env = dict(zip(("c1", "c2", "c3", "c4", "c5"), colors))
        result = eval_program(coloring_program, env, ctx)
        for name in ("f1", "f2"):
            over_z = eval_over_integers(defs[name], dict(env))
            assert result.values[name].value == over_z % ctx.p


def test_condition_semantics_match_adjacency_oracle(coloring_program, ctx):
    for colors in itertools.product((1, 2, 3), repeat=5):
        env = dict(zip(("c1", "c2", "c3", "c4", "c5"), colors))
        result = eval_program(coloring_program, env, ctx)
        assert result.ok == is_proper_coloring(colors)
