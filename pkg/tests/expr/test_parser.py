import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltainv.__main__ import EXIT_USAGE, main
from deltainv.exceptions import ArityError, ExpressionError, ExpressionSyntaxError, UnknownIdentifierError
from deltainv.expr import Binary, Constant, Parameter, Unary, Variable, parse_expression
from deltainv.expr.parser import MAX_NESTING, tokenize


class TestParseExpression:
    """Grammar coverage for parse_expression."""

    def test_product_of_functions(self):
        e = parse_expression("cos(u1)*sin(u2)", ["u1", "u2"])
        assert e.root == Binary("*", Unary("cos", Variable("u1", 0)), Unary("sin", Variable("u2", 1)))
        assert e.dim == 2

    def test_parameter_lookup(self):
        e = parse_expression("r*cos(u1)", ["u1"], ["r"])
        assert e.root.left == Parameter("r")
        assert e.parameters == ("r",)

    def test_precedence(self):
        e = parse_expression("a + b * c ^ 2", ["a", "b", "c"])
        assert e.root.op == "+"
        assert e.root.right == Binary("*", Variable("b", 1), Binary("^", Variable("c", 2), Constant(2.0)))

    def test_power_is_right_associative(self):
        e = parse_expression("x^2^3", ["x"])
        assert e.root == Binary("^", Variable("x", 0), Binary("^", Constant(2.0), Constant(3.0)))

    def test_unary_minus_binds_looser_than_power(self):
        e = parse_expression("-u1^2", ["u1"])
        assert e.root == Unary("neg", Binary("^", Variable("u1", 0), Constant(2.0)))
        assert e.value([3.0]) == pytest.approx(-9.0)

    def test_pi_is_a_constant(self):
        e = parse_expression("2*pi", ["u"])
        assert e.value([0.0]) == pytest.approx(6.283185307179586)

    def test_symbol_shadows_named_constant(self):
        e = parse_expression("pi", ["pi"])
        assert e.root == Variable("pi", 0)

    def test_scientific_notation(self):
        e = parse_expression("1.5e2 + .5", ["u"])
        assert e.value([0.0]) == pytest.approx(150.5)

    def test_to_text_round_trips(self):
        e = parse_expression("-(u1 - 2)^2 / sqrt(u2) + r", ["u1", "u2"], ["r"])
        again = parse_expression(e.to_text(), ["u1", "u2"], ["r"])
        assert again.root == e.root

    def test_source_kept_for_diagnostics(self):
        e = parse_expression("u + 1", ["u"])
        assert str(e) == "u + 1"


class TestParseErrors:
    """Malformed input reports a precise location."""

    def test_incomplete_input_offset(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("u1 + ", ["u1"])
        assert info.value.offset == 5

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifierError) as info:
            parse_expression("u1 + w", ["u1"])
        assert info.value.name == "w"
        assert info.value.offset == 5

    @pytest.mark.parametrize("text", ["sin()", "sin(u, u)", "sin u"])
    def test_function_arity(self, text):
        with pytest.raises(ArityError) as info:
            parse_expression(text, ["u"])
        assert info.value.name == "sin"

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression("(u + 1", ["u"])

    def test_call_of_non_function(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression("u(1)", ["u"])

    def test_unexpected_character(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("u $ 1", ["u"])
        assert info.value.offset == 2

    def test_trailing_operand(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression("u 1", ["u"])

    def test_overflowing_literal(self):
        with pytest.raises(ExpressionSyntaxError, match="out of range") as info:
            parse_expression("u1 * 1e999", ["u1"])
        assert info.value.offset == 5

    def test_large_finite_literal_round_trips(self):
        e = parse_expression("u1 * 1e300", ["u1"])
        assert parse_expression(e.to_text(), ["u1"]).root == e.root


class TestParseLimits:
    """Pathologically deep input is rejected with a located error, never a crash."""

    @pytest.mark.parametrize(
        "text",
        [
            "(" * 3000 + "u1" + ")" * 3000,
            "-" * 3000 + "u1",
            "u1" + "^u1" * 3000,
            "sin(" * 3000 + "u1" + ")" * 3000,
            "u1" + "+u1" * 3000,
            "u1" + "*u1" * 3000,
        ],
        ids=["parens", "minus", "power", "functions", "long-sum", "long-product"],
    )
    def test_deep_input(self, text):
        with pytest.raises(ExpressionSyntaxError, match="nested too deeply"):
            parse_expression(text, ["u1"])

    def test_sum_past_the_limit(self):
        with pytest.raises(ExpressionSyntaxError, match="nested too deeply"):
            parse_expression("u1" + "+u1" * (MAX_NESTING + 1), ["u1"])

    def test_nesting_at_the_limit_is_accepted(self):
        e = parse_expression("(" * MAX_NESTING + "u1" + ")" * MAX_NESTING, ["u1"])
        assert e.root == Variable("u1", 0)

    def test_sum_at_the_limit_evaluates_and_prints_back(self):
        e = parse_expression("u1" + "+u1" * MAX_NESTING, ["u1"])
        assert e.value([1.0]) == pytest.approx(MAX_NESTING + 1)
        assert parse_expression(e.to_text(), ["u1"]).root == e.root

    def test_deep_spec_expression_is_a_usage_error(self, capsys, tmp_path):
        spec = {
            "kind": "metric",
            "name": "deep",
            "dim": 2,
            "variables": ["x", "y"],
            "metric": [["(" * 3000 + "1" + ")" * 3000, "0"], ["0", "1"]],
            "domain": [[0.0, 1.0], [0.0, 1.0]],
        }
        path = tmp_path / "deep.json"
        path.write_text(json.dumps(spec))
        assert main(["compute", "--spec", str(path)]) == EXIT_USAGE
        assert "metric/0/0" in capsys.readouterr().err


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="u1xsincoexpqrt()+-*/^,. 0123456789e", max_size=80))
def test_parsing_is_total(text):
    try:
        parse_expression(text, ["u1", "x"])
    except ExpressionError:
        pass


def test_tokenize_ends_with_end_token():
    tokens = tokenize("cos(u)")
    assert [t.kind for t in tokens] == ["IDENT", "LPAREN", "IDENT", "RPAREN", "END"]
    assert tokens[-1].offset == 6
