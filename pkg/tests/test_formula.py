import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsr.formula import (
    BOT, TOP, And, Announce, At, Box, Diamond, Diff, Exists, Implies, Neg, Nominal, Or,
    ParseError, Prop, Remove, Univ, counting_formula, depth, expand, is_core, parse, rho2,
    to_text, two_loop_formula,
)
from mlsr.gen import CORE_OPS, SUGAR_OPS, random_formula
from mlsr.kripke import generate_random
import oracle
from conftest import edgeless, loop_model

p, q = Prop("p"), Prop("q")
ALL_OPS = CORE_OPS + SUGAR_OPS


def test_parse_removal():
    assert parse("<-p>q") == Remove(p, q)


def test_parse_announcement_then_diamond():
    assert parse("<!p><>q") == Announce(p, Diamond("r", q))


def test_parse_two_loop_conjunct():
    assert parse("U(<-T>[]F)") == Univ(Remove(TOP, Box("r", BOT)))


@pytest.mark.parametrize("text, expected", [
    ("p & q | ~p", Or(And(p, q), Neg(p))),
    ("p -> q -> p", Implies(p, Implies(q, p))),
    ("'n", Nominal("n")),
    ("@'n p", At("n", p)),
    ("<u>p", Diamond("u", p)),
    ("D p", Diff(p)),
    ("E p", Exists(p)),
])
def test_parse_misc(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("bad", ["<-p", "p &", "(p", "<!p>", "p q", "", "@p q"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_print_single_removal():
    assert to_text(Remove(TOP, TOP)) == "<-T>T"


def test_print_negated_disjunction():
    assert to_text(Neg(Or(p, q))) == "~(p|q)"


def test_print_nested_removal_round_trip():
    f = Remove(p, Remove(Neg(q), Remove(TOP, Diamond("r", p))))
    text = to_text(f)
    assert parse(text) == f
    assert to_text(parse(text)) == text


def test_expand_diff():
    assert expand(Diff(p)) == Remove(p, TOP)


def test_expand_at():
    n = Nominal("n")
    assert expand(At("n", p)) == Neg(Exists(Neg(Or(Neg(n), p))))


def test_expand_core_atom_is_identity():
    assert expand(p) is p


def test_expand_exists_as_sugar():
    assert expand(Exists(p), exists_as_sugar=True) == Or(p, Remove(p, TOP))
    assert is_core(expand(Univ(p), exists_as_sugar=True))


def test_counting_formula_zero():
    assert counting_formula(0) == TOP


@pytest.mark.parametrize("n, expected", [(3, True), (2, False)])
def test_counting_two_on_small_models(n, expected):
    m = edgeless(n)
    assert all(oracle.holds(m, w, counting_formula(2)) == expected for w in m.worlds)


@pytest.mark.parametrize("n, expected", [(1, False), (2, True), (3, False)])
def test_rho2(n, expected):
    m = edgeless(n)
    assert all(oracle.holds(m, w, rho2()) == expected for w in m.worlds)


def test_two_loop_formula_on_loop():
    m = loop_model()
    assert oracle.holds(m, "a", two_loop_formula())


@settings(max_examples=1000)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_random_formulas(seed):
    rng = random.Random(seed)
    f = random_formula(rng, rng.randint(0, 6), props=("p", "q"), noms=("n", "k"),
                       labels=("r", "u"), ops=ALL_OPS + ("bot",))
    assert depth(f) <= 6
    assert parse(to_text(f)) == f


@settings(max_examples=500)
@given(st.integers(0, 2**32 - 1))
def test_expand_preserves_semantics(seed):
    rng = random.Random(seed)
    m = generate_random(rng.randint(1, 5), ["p", "q"], rng.random(), seed, nominals=["n"])
    f = random_formula(rng, rng.randint(0, 4), noms=("n",), ops=ALL_OPS)
    core = expand(f)
    assert is_core(core)
    for s in m.worlds:
        assert oracle.holds(m, s, f) == oracle.holds(m, s, core)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_both_exists_expansions_agree(seed):
    rng = random.Random(seed)
    m = generate_random(rng.randint(1, 4), ["p", "q"], rng.random(), seed)
    f = random_formula(rng, 3, ops=CORE_OPS + ("univ",))
    a, b = expand(f), expand(f, exists_as_sugar=True)
    assert oracle.extent(m, a) == oracle.extent(m, b)


@pytest.mark.parametrize("k", range(5))
def test_counting_formula_depends_only_on_size(k):
    from mlsr.sweep import Family
    for n in range(1, 6):
        fam = Family(n, props=["p"] if n <= 4 else [])
        ext = fam.all_extents(counting_formula(k))
        want = fam.full if n - 1 >= k else 0
        assert (ext == want).all()
