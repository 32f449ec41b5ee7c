"""Expression grammar: parsing, pretty-printing, round trips."""
from __future__ import annotations

import random
import warnings

import pytest

from helpers import random_tree
from wittlinear import (
    Affine,
    ClosedGlue,
    ClosureOrder,
    Empty,
    InvalidStratificationError,
    OpenGlue,
    ParseError,
    Product,
    ProjTimesTorus,
    Stratified,
    TorusCell,
    TwistLabel,
    UnknownTwistWarning,
    as_torus_cell,
    parse_expr,
    pretty,
)


class TestParsing:
    def test_leaves(self):
        assert parse_expr("empty") == Empty()
        assert parse_expr("A^3") == Affine(3)
        assert parse_expr("Gm") == TorusCell(0, 1)
        assert parse_expr("Gm^4") == TorusCell(0, 4)
        assert parse_expr("P^2") == ProjTimesTorus(2, 0)
        assert parse_expr("P^2 @O(3)") == ProjTimesTorus(2, 0, TwistLabel.o(3))
        assert parse_expr("P^1 @O(-2)").twist.o_degree() == -2

    def test_products_associate_left(self):
        got = parse_expr("A^3 * Gm^2")
        assert got == Product(Affine(3), TorusCell(0, 2))
        assert as_torus_cell(got) == (3, 2)
        got = parse_expr("A^1 * A^2 * Gm")
        assert got == Product(Product(Affine(1), Affine(2)), TorusCell(0, 1))

    def test_parentheses_override_association(self):
        got = parse_expr("A^1 * (A^2 * Gm)")
        assert got == Product(Affine(1), Product(Affine(2), TorusCell(0, 1)))

    def test_projective_absorbs_adjacent_torus(self):
        assert parse_expr("P^2 @O(3) * Gm^4") == \
            ProjTimesTorus(2, 4, TwistLabel.o(3))
        assert parse_expr("Gm^2 * P^1") == ProjTimesTorus(1, 2)
        # an affine-thickened torus is not a pure torus and stays a product
        got = parse_expr("P^1 * (A^1 * Gm)")
        assert isinstance(got, Product)

    def test_glue_terms(self):
        assert parse_expr("open(A^1, A^0)") == OpenGlue(Affine(1), Affine(0))
        assert parse_expr("closed(A^0, Gm)") == \
            ClosedGlue(Affine(0), TorusCell(0, 1))

    def test_strat_terms(self):
        got = parse_expr("strat(A^0, A^1; 0<1)")
        assert got == Stratified((Affine(0), Affine(1)), ClosureOrder.chain(2))
        single = parse_expr("strat(Gm^2; )")
        assert single == Stratified((TorusCell(0, 2),), ClosureOrder.discrete(1))

    def test_whitespace_is_free(self):
        assert parse_expr("open( A^1 ,A^0 )") == parse_expr("open(A^1, A^0)")
        assert parse_expr("Gm^2*P^1") == parse_expr("Gm^2 * P^1")


class TestParseErrors:
    def test_empty_input(self):
        with pytest.raises(ParseError, match="end of input"):
            parse_expr("")

    def test_unknown_term(self):
        with pytest.raises(ParseError, match="unknown term"):
            parse_expr("B^2")

    def test_missing_caret(self):
        with pytest.raises(ParseError):
            parse_expr("A 3")

    def test_negative_dimension(self):
        with pytest.raises(ParseError, match="non-negative"):
            parse_expr("A^-1")

    def test_trailing_input(self):
        with pytest.raises(ParseError, match="trailing input"):
            parse_expr("A^1 A^2")

    def test_unexpected_character(self):
        with pytest.raises(ParseError, match="unexpected character"):
            parse_expr("A^1 $")

    def test_line_and_column_are_reported(self):
        try:
            parse_expr("open(A^1,\n   %)")
        except ParseError as e:
            assert e.line == 2
            assert e.col == 4
            assert "line 2" in str(e)
        else:
            raise AssertionError("expected a ParseError")

    def test_unbalanced_parens(self):
        with pytest.raises(ParseError):
            parse_expr("open(A^1, A^0")
        with pytest.raises(ParseError, match="trailing"):
            parse_expr("A^1)")

    def test_strat_closure_errors_are_not_parse_errors(self):
        with pytest.raises(InvalidStratificationError):
            parse_expr("strat(A^0, A^1; 0<1, 1<0)")
        with pytest.raises(InvalidStratificationError):
            parse_expr("strat(A^0; 0<5)")


class TestTwistWarnings:
    def test_opaque_twist_warns(self):
        with pytest.warns(UnknownTwistWarning):
            got = parse_expr("P^2 @L")
        assert got == ProjTimesTorus(2, 0, TwistLabel("L"))

    def test_known_twist_does_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            parse_expr("P^2 @O(3)")


class TestPretty:
    def test_canonical_forms(self):
        assert pretty(Empty()) == "empty"
        assert pretty(Affine(2)) == "A^2"
        assert pretty(TorusCell(0, 1)) == "Gm"
        assert pretty(TorusCell(0, 3)) == "Gm^3"
        assert pretty(TorusCell(2, 1)) == "A^2 * Gm"
        assert pretty(ProjTimesTorus(2, 0)) == "P^2"
        assert pretty(ProjTimesTorus(2, 3, TwistLabel.o(3))) == "P^2 @O(3) * Gm^3"
        assert pretty(OpenGlue(Affine(1), Affine(0))) == "open(A^1, A^0)"
        assert pretty(ClosedGlue(Affine(0), TorusCell(0, 1))) == "closed(A^0, Gm)"

    def test_product_parenthesization(self):
        x = Product(Affine(1), Product(Affine(2), TorusCell(0, 1)))
        assert pretty(x) == "A^1 * (A^2 * Gm)"
        y = Product(Product(Affine(1), Affine(2)), TorusCell(0, 1))
        assert pretty(y) == "A^1 * A^2 * Gm"

    def test_strat_prints_cover_pairs_only(self):
        x = Stratified((Affine(0), Affine(1), Affine(2)), ClosureOrder.chain(3))
        assert pretty(x) == "strat(A^0, A^1, A^2; 0<1, 1<2)"


class TestRoundTrip:
    CORPUS = [
        "empty",
        "A^0",
        "A^3 * Gm^2",
        "Gm",
        "P^2 @O(3) * Gm^4",
        "P^2 @O(-1)",
        "open(A^1, A^0)",
        "open(A^2, open(A^1, A^0))",
        "closed(A^0, Gm)",
        "strat(A^0, A^1; 0<1)",
        "strat(Gm^2, A^0, A^1; 0<1, 1<2)",
        "A^1 * (A^2 * Gm)",
        "open(A^3, Gm^2) * closed(A^0, A^1)",
    ]

    def test_corpus_round_trips(self):
        for text in self.CORPUS:
            tree = parse_expr(text)
            assert parse_expr(pretty(tree)) == tree

    def test_parser_images_are_fixed_points(self):
        # one parse normalizes any printable tree; after that the
        # pretty/parse pair is the identity
        rng = random.Random(4242)
        for _ in range(250):
            t0 = random_tree(rng, rng.randint(0, 4))
            t1 = parse_expr(pretty(t0))
            assert parse_expr(pretty(t1)) == t1

    def test_normalization_is_level_preserving(self):
        # reparsing may refold torus cells into products and back, which
        # must not move any computed level
        rng = random.Random(4243)
        for _ in range(150):
            t0 = random_tree(rng, rng.randint(0, 4))
            t1 = parse_expr(pretty(t0))
            assert t1.range_level() == t0.range_level()
            assert t1.j_linear_level() == t0.j_linear_level()
            assert t1.dim == t0.dim
