import pytest
from hypothesis import given, settings, strategies as st

from ocmc.ctl import (
    AX, EF, EG, EU, EW, EX, And, FalseF, FormulaError, Implies, Not, NotCoreError, Or, Prop, TrueF,
    expand, format_formula, is_core, lud, parse_formula, size, subformulas,
)
from ocmc.ocp import RESERVED_PROP

a, b, c = Prop("a"), Prop("b"), Prop("c")
TT = Prop(RESERVED_PROP)


def test_size_examples():
    assert size(a) == 1
    assert size(Not(a)) == 2
    assert size(EX(a)) == 2
    assert size(EU(a, b)) == 3
    assert size(EW(And(a, b), Not(c))) == 6


def test_lud_examples():
    assert lud(a) == 0
    assert lud(expand(EF(a))) == 1
    assert lud(EU(EU(a, b), c)) == 2
    assert lud(EU(a, EU(b, c))) == 1
    assert lud(EW(Not(EX(EW(a, b))), c)) == 2


def test_measures_reject_sugar():
    with pytest.raises(NotCoreError):
        size(EF(a))
    with pytest.raises(NotCoreError):
        lud(Or(a, b))


def test_expand_examples():
    assert expand(a) == a
    tautology = Not(And(Not(TT), Not(Not(TT))))
    assert expand(EF(a)) == EU(tautology, a)
    assert expand(EG(a)) == EW(a, And(TT, Not(TT)))
    assert expand(Or(a, b)) == Not(And(Not(a), Not(b)))
    assert expand(AX(a)) == Not(EX(Not(a)))
    assert expand(Implies(a, b)) == Not(And(Not(Not(a)), Not(b)))
    assert expand(TrueF()) == Not(TT)
    assert expand(FalseF()) == TT


def test_expand_is_idempotent_on_core():
    f = EU(Not(a), EW(EX(b), And(a, c)))
    assert expand(f) == f
    g = expand(EG(EF(Or(a, AX(b)))))
    assert is_core(g) and expand(g) == g


def test_parse_examples():
    assert parse_formula("E[ a U b ]") == EU(a, b)
    assert parse_formula("!EX a") == Not(EX(a))
    assert parse_formula("E[ a W b ] & c") == And(EW(a, b), c)


def test_precedence_and_associativity():
    assert parse_formula("a | b & c") == Or(a, And(b, c))
    assert parse_formula("a -> b -> c") == Implies(a, Implies(b, c))
    assert parse_formula("a & b & c") == And(And(a, b), c)
    assert parse_formula("!a & b") == And(Not(a), b)
    assert parse_formula("EX a | AX b -> EF c") == Implies(Or(EX(a), AX(b)), EF(c))
    assert parse_formula("EG (a -> false)") == EG(Implies(a, FalseF()))
    assert parse_formula("true") == TrueF()


@pytest.mark.parametrize("text", ["", "a &", "E[ a U b", "E[ a X b ]", "(a", "a b", "EX", "a $ b", "E a"])
def test_syntax_errors_carry_a_position(text):
    with pytest.raises(FormulaError) as info:
        parse_formula(text)
    assert info.value.pos is not None


def test_reserved_proposition():
    with pytest.raises(FormulaError):
        parse_formula("a & _tt")
    assert parse_formula("_tt", allow_reserved=True) == TT


def test_subformulas_post_order():
    f = And(EX(a), b)
    assert list(subformulas(f)) == [a, EX(a), b, f]


UNARY = (Not, EX, AX, EF, EG)
BINARY = (And, Or, Implies, EU, EW)

atoms = st.sampled_from([a, b, c, TrueF(), FalseF(), Prop("x1_0"), Prop("long_name2")])


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from(UNARY), children).map(lambda t: t[0](t[1])),
        st.tuples(st.sampled_from(BINARY), children, children).map(lambda t: t[0](t[1], t[2])),
    )


formulas = st.recursive(atoms, _extend, max_leaves=12)
core_atoms = st.sampled_from([a, b, c])
core_formulas = st.recursive(
    core_atoms,
    lambda ch: st.one_of(
        st.tuples(st.sampled_from((Not, EX)), ch).map(lambda t: t[0](t[1])),
        st.tuples(st.sampled_from((And, EU, EW)), ch, ch).map(lambda t: t[0](t[1], t[2])),
    ),
    max_leaves=8,
)


@settings(max_examples=300)
@given(formulas)
def test_round_trip(f):
    text = format_formula(f)
    assert parse_formula(text) == f
    assert format_formula(parse_formula(text)) == text


@settings(max_examples=200)
@given(formulas)
def test_expansion_is_core(f):
    g = expand(f)
    assert is_core(g)
    assert size(g) >= 1


ef_formulas = st.recursive(
    st.sampled_from([a, b, TrueF()]),
    lambda ch: st.one_of(
        st.tuples(st.sampled_from((Not, EX, EF)), ch).map(lambda t: t[0](t[1])),
        st.tuples(st.sampled_from((And, Or)), ch, ch).map(lambda t: t[0](t[1], t[2])),
    ),
    max_leaves=10,
)


@settings(max_examples=200)
@given(ef_formulas)
def test_ef_fragment_has_lud_at_most_one(f):
    assert lud(expand(f)) <= 1


def _replace_leaf(f, g):
    """Replace the leftmost proposition of ``f`` by ``g``."""
    if isinstance(f, Prop):
        return g
    if isinstance(f, (Not, EX)):
        return type(f)(_replace_leaf(f.arg, g))
    return type(f)(_replace_leaf(f.left, g), f.right)


@settings(max_examples=200)
@given(core_formulas, core_formulas, core_formulas)
def test_measures_monotone_under_substitution(f, small, big_tail):
    big = And(small, big_tail)
    assert size(big) > size(small) and lud(big) >= lud(small)
    assert size(_replace_leaf(f, big)) > size(_replace_leaf(f, small))
    assert lud(_replace_leaf(f, big)) >= lud(_replace_leaf(f, small))
