import warnings

import pytest
from hypothesis import given, settings, strategies as st

from veltman.formula import (
    BOT,
    And,
    Box,
    Diamond,
    Iff,
    Implies,
    MixedChainWarning,
    Neg,
    Or,
    ParseError,
    Rhd,
    SCHEMAS,
    Var,
    adequate_closure,
    instantiate,
    parse,
    print_formula,
    single_negation,
    subformulas,
)

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_paper_bracketing_example():
    got = parse("A |> B -> A /\\ []C |> B /\\ []C")
    a, b, c = Var("A"), Var("B"), Var("C")
    assert got == Implies(Rhd(a, b), Rhd(And(a, Box(c)), And(b, Box(c))))


def test_parse_atoms():
    assert parse("bot") == BOT
    assert parse("<>p") == Neg(Box(Neg(p)))
    assert parse("~p") == Implies(p, BOT)


def test_parse_precedence():
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse("~p \\/ q") == Or(Neg(p), q)
    assert parse("p /\\ q |> r") == Rhd(And(p, q), r)
    assert parse("[]p -> p <-> q") == Iff(Implies(Box(p), p), q)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse("p |> ")
    assert "position" in str(err.value)
    with pytest.raises(ParseError):
        parse("p -> (q")
    with pytest.raises(ParseError):
        parse("p ? q")


def test_nonassociative_chains_rejected():
    with pytest.raises(ParseError, match="non-associative"):
        parse("p |> q |> r")
    with pytest.raises(ParseError, match="non-associative"):
        parse("p <-> q <-> r")
    # parenthesized versions are fine
    parse("(p |> q) |> r")
    parse("p <-> (q <-> r)")


def test_mixed_chain_warns():
    with pytest.warns(MixedChainWarning):
        parse("p /\\ q \\/ r")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse("(p /\\ q) \\/ r")
        parse("p /\\ q /\\ r")


def test_print_examples():
    assert print_formula(parse("p -> q -> r")) == "p -> q -> r"
    assert print_formula(Rhd(And(p, Box(q)), BOT)) == "p /\\ []q |> bot"
    assert print_formula(parse("(p |> q) |> r")) == "(p |> q) |> r"
    assert print_formula(Diamond(p)) == "<>p"
    assert print_formula(Iff(p, q)) == "p <-> q"
    assert print_formula(Or(And(p, q), r)) == "p /\\ q \\/ r"
    assert print_formula(And(p, Or(q, r))) == "p /\\ (q \\/ r)"


def test_single_negation():
    assert single_negation(Neg(p)) == p
    assert single_negation(p) == Neg(p)
    assert single_negation(Box(p)) == Neg(Box(p))
    assert single_negation(single_negation(Box(p))) == Box(p)


def test_adequate_closure_examples():
    assert adequate_closure({p}) == frozenset({p, Neg(p)})
    assert adequate_closure(set()) == frozenset()
    # hand expansion of the two closure rules to a fixpoint
    got = adequate_closure({Neg(Rhd(p, q))})
    want = {Neg(Rhd(p, q)), Rhd(p, q), p, Neg(p), q, Neg(q)}
    assert got == frozenset(want)


def test_adequate_closure_size_bound():
    seed = {parse("~(p |> q) /\\ []r")}
    closed = adequate_closure(seed)
    n_sub = len(set().union(*(subformulas(f) for f in seed)))
    assert len(closed) <= 2 * n_sub + 1


def test_adequate_closure_idempotent_monotone():
    a = adequate_closure({parse("~(p |> q)")})
    assert adequate_closure(a) == a
    b = adequate_closure({parse("~(p |> q)"), parse("[]r")})
    assert a <= b


def test_schema_table_instantiation():
    got = instantiate("M0", {"A": p, "B": q, "C": r})
    assert got == parse("p |> q -> <>p /\\ []r |> q /\\ []r")
    assert instantiate("J5", {"A": p}) == parse("<>p |> p")
    assert instantiate("W", {"A": p, "B": p}) == parse("p |> p -> p |> p /\\ []~p")
    assert instantiate("M0*", {"A": p, "B": q, "C": r}) == parse(
        "p |> q -> <>p /\\ []r |> q /\\ []r /\\ []~p"
    )


def test_schema_placeholders():
    assert SCHEMAS["J2"].placeholders == ("A", "B", "C")
    assert SCHEMAS["L2"].placeholders == ("A",)
    with pytest.raises(KeyError):
        instantiate("J2", {"A": p, "B": q})


formulas = st.deferred(
    lambda: st.one_of(
        st.sampled_from([p, q, r, BOT]),
        st.builds(Implies, formulas, formulas),
        st.builds(Box, formulas),
        st.builds(Rhd, formulas, formulas),
        st.builds(Neg, formulas),
        st.builds(And, formulas, formulas),
        st.builds(Or, formulas, formulas),
        st.builds(Iff, formulas, formulas),
        st.builds(Diamond, formulas),
    )
)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_print_parse_round_trip(f):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MixedChainWarning)
        assert parse(print_formula(f)) == f


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_closure_is_closed(f):
    closed = adequate_closure({f})
    for g in closed:
        if single_negation(g) != BOT:  # bot itself is never carried
            assert single_negation(g) in closed
        for h in subformulas(g):
            assert h in closed
