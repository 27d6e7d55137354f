"""Expression grammar, type checking, and the canonical printer."""

import numpy as np
import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from pshcheck import expr
from pshcheck.errors import EvaluationError, ExprTypeError, ParseError
from pshcheck.expr import Bin, Lit, Nary, Pow, Un, Var, parse, to_text
from pshcheck.vm import compile_expression


# ---------------------------------------------------------------------------
# parsing


def test_parse_saddle_shape():
    node = parse("abs(z1)^2 - abs(z2)^2")
    assert isinstance(node, Bin) and node.op == "-"
    assert isinstance(node.left, Pow) and node.left.exponent == 2
    assert isinstance(node.left.base, Un) and node.left.base.op == "abs"


def test_parse_log_abs():
    node = parse("log(abs(z1))")
    assert isinstance(node, Un) and node.op == "log"


def test_unbalanced_paren_offset():
    with pytest.raises(ParseError) as err:
        parse("re(z1*z2")
    assert err.value.offset == 8
    assert "')'" in err.value.expected


def test_error_messages_carry_offset_text():
    with pytest.raises(ParseError, match="offset 3"):
        parse("z1+")


def test_unknown_function_rejected():
    with pytest.raises(ParseError):
        parse("sin(z1)")


def test_bad_variable_names():
    for text in ("z0", "z01", "x0", "zz1", "q1"):
        with pytest.raises(ParseError):
            parse(text)


def test_power_requires_integer_literal():
    with pytest.raises(ParseError):
        parse("abs(z1)^2.5")
    with pytest.raises(ParseError):
        parse("abs(z1)^z1")
    node = parse("abs(z1)^-2")
    assert isinstance(node, Pow) and node.exponent == -2


def test_whitespace_insensitive():
    assert parse(" abs( z1 ) ^ 2 ") == parse("abs(z1)^2")


def test_numeric_literals():
    assert parse("1.5e-3") == Lit(0.0015)
    assert parse("2*i") == Bin("*", Lit(2.0), Lit(1j))
    with pytest.raises(ParseError):
        parse("2i")  # no implicit multiplication
    with pytest.raises(ParseError):
        parse(".5")  # digit required before the point
    with pytest.raises(ParseError):
        parse("1e")


def test_call_arity_checked():
    with pytest.raises(ParseError):
        parse("abs(z1, z2)")
    with pytest.raises(ParseError):
        parse("max(abs(z1))")  # max needs at least two arguments


# ---------------------------------------------------------------------------
# typing


def test_root_must_be_real():
    with pytest.raises(ExprTypeError):
        compile_expression("z1")
    with pytest.raises(ExprTypeError):
        compile_expression("conj(z1)+1")
    compile_expression("re(z1)")  # fine


def test_log_argument_must_be_real():
    with pytest.raises(ExprTypeError):
        parse_and_check("log(z1)")
    parse_and_check("log(abs(z1))")
    parse_and_check("log(re(z1)+2)")


def parse_and_check(text):
    node = parse(text)
    expr.require_real(node)
    return node


def test_max_arguments_must_be_real():
    with pytest.raises(ExprTypeError):
        parse_and_check("max(z1, z2)")
    parse_and_check("max(re(z1), im(z2))")


def test_variable_families_must_not_mix():
    with pytest.raises(ExprTypeError):
        expr.variable_profile(parse("re(z1) + x1"))
    assert expr.variable_profile(parse("x1^2 + x3")) == ("x", 3)
    assert expr.variable_profile(parse("abs(z2)")) == ("z", 2)
    assert expr.variable_profile(parse("1 + 2"))[0] == "any"


# ---------------------------------------------------------------------------
# evaluation (through the compiled form)


def test_eval_saddle_hand_value():
    u = compile_expression("abs(z1)^2 - abs(z2)^2")
    assert u.eval_point(np.array([1.0, 2.0j])) == pytest.approx(-3.0)


def test_eval_log_modulus_minus_inf():
    u = compile_expression("log(abs(z1))")
    assert u.eval_point(np.array([0.0 + 0.0j, 5.0])) == -np.inf


def test_eval_re_product():
    u = compile_expression("re(z1*z2)")
    assert u.eval_point(np.array([1.0 + 1.0j, 2.0])) == pytest.approx(2.0)


def test_eval_division_by_zero_is_hard_error():
    u = compile_expression("re(1/z1)")
    with pytest.raises(EvaluationError):
        u.eval_point(np.array([0.0j]))


def test_eval_zero_times_minus_inf_is_hard_error():
    u = compile_expression("0 * log(abs(z1))")
    with pytest.raises(EvaluationError):
        u.eval_point(np.array([0.0j]))


def test_eval_minus_inf_propagates_through_sum():
    u = compile_expression("log(abs(z1)) + log(abs(z2))")
    assert u.eval_point(np.array([0.0j, 1.0])) == -np.inf


def test_eval_max_absorbs_minus_inf():
    u = compile_expression("max(log(abs(z1)), 0)")
    assert u.eval_point(np.array([0.0j])) == 0.0


def test_eval_is_deterministic():
    u = compile_expression("exp(re(z1)) * abs(z2)^2")
    pts = (np.arange(10) * (0.1 + 0.05j)).reshape(5, 2)
    assert np.array_equal(u(pts), u(pts))


# ---------------------------------------------------------------------------
# canonical printer


@pytest.mark.parametrize(
    "text",
    [
        "abs(z1)^2-abs(z2)^2",
        "log(abs(z1-0.3))",
        "max(log(abs(z1)),log(abs(z2)))",
        "-(abs(z1)^2+abs(z2)^2)",
        "re(z1^2)/2+im(z2)*3",
        "x1^2-x2^2",
        "exp(x1)",
        "re((z1+z2)*(z1-z2))",
        "abs(z1)^-2",
        "1.5*re(z1)+2",
    ],
)
def test_print_parse_round_trip(text):
    node = parse(text)
    printed = to_text(node)
    assert parse(printed) == node
    # printing is idempotent
    assert to_text(parse(printed)) == printed


_leaf = st.one_of(
    st.integers(min_value=0, max_value=9).map(lambda k: Lit(float(k))),
    st.just(Lit(1j)),
    st.integers(min_value=1, max_value=3).map(lambda k: Var("z", k)),
)


def _real_wrap(node):
    return Un("abs", node)


_tree = st.recursive(
    _leaf,
    lambda child: st.one_of(
        st.tuples(st.sampled_from("+-*"), child, child).map(
            lambda t: Bin(t[0], t[1], t[2])
        ),
        st.tuples(child, st.integers(min_value=-3, max_value=3).filter(lambda e: e != 0)).map(
            lambda t: Pow(t[0], t[1])
        ),
        child.map(lambda c: Un("neg", c)),
        child.map(lambda c: Un("conj", c)),
        child.map(lambda c: Un("re", c)),
        st.tuples(child, child).map(
            lambda t: Nary("max", (Un("abs", t[0]), Un("abs", t[1])))
        ),
    ),
    max_leaves=12,
)


@given(_tree)
@settings(max_examples=300, deadline=None)
def test_printer_round_trips_random_trees(node):
    printed = to_text(node)
    assert parse(printed) == node
