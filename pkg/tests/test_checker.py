import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsr.checker import check, evaluate, extent, find_countermodel, valid_on
from mlsr.formula import (
    BOT, TOP, Announce, Box, Exists, Iff, Implies, Or, Prop, Remove, parse, two_loop_formula,
)
from mlsr.gen import CORE_OPS, SUGAR_OPS, random_formula
from mlsr.kripke import Model, enumerate_models, generate_random
from mlsr.sweep import Family
import oracle
from conftest import loop_model

p, q = Prop("p"), Prop("q")


def test_remove_then_dead_end_on_loop():
    f = Remove(TOP, Box("r", BOT))
    assert check(loop_model(), "a", f)
    assert oracle.holds(loop_model(), "a", f)


def test_two_loop_formula_holds_on_loop():
    assert check(loop_model(), "a", two_loop_formula())


def _is_two_loop(m: Model) -> bool:
    if len(m.worlds) != 2:
        return False
    a, b = sorted(m.worlds)
    return m.relations["r"] == {(a, b), (b, a)}


def test_two_loop_formula_fails_elsewhere_up_to_three():
    f = two_loop_formula()
    for m in enumerate_models(3):
        for s in m.worlds:
            assert check(m, s, f) == _is_two_loop(m)


def test_validities_on_loop():
    m = Model(frozenset("ab"), {"r": {("a", "b"), ("b", "a")}}, {"p": {"a"}, "q": {"b"}})
    psi, f1, f2 = Prop("p"), Prop("q"), Box("r", p)
    assert valid_on(m, Iff(Remove(psi, Or(f1, f2)), Or(Remove(psi, f1), Remove(psi, f2))))
    alpha = parse("<>q")
    assert valid_on(m, Iff(Exists(alpha), Or(alpha, Remove(alpha, TOP))))
    assert valid_on(m, Implies(Announce(p, q), p))


def test_tautology_has_no_countermodel():
    for bound in range(1, 4):
        assert find_countermodel(parse("p|~p"), bound) is None


def test_removal_needs_second_point():
    cm = find_countermodel(Remove(TOP, TOP), 3)
    assert cm is not None and len(cm.model.worlds) == 1


def test_mix_instance_no_countermodel():
    f = parse("E('n&p)&<!~'n>q -> <-p>q")
    assert find_countermodel(f, 4) is None


def test_countermodel_only_at_four_worlds():
    f = parse("<-T><-T><-T>T -> F")
    assert find_countermodel(f, 3) is None
    cm = find_countermodel(f, 4)
    assert cm is not None and len(cm.model.worlds) == 4
    assert not check(cm.model, cm.point, f)


def test_non_denoting_nominal_is_false():
    m = Model(frozenset("ab"), {"r": set()}, {}, {"n": None})
    assert not any(check(m, s, parse("'n")) for s in m.worlds)
    assert check(m, "a", parse("@'n F"))


def test_trace_has_one_node_per_triple():
    m = loop_model()
    f = parse("<-T>([]F & ~<>T)")
    res = evaluate(m, "a", f, trace=True)
    assert res.value
    seen = []

    def walk(node):
        seen.append((node.formula, node.model, node.point))
        for c in node.children:
            walk(c)
    walk(res.trace)
    assert len(seen) == len(set(seen))
    assert ("<-T>([]F&~<>T)", "{a,b}", "a") in seen


def test_trace_off_by_default():
    assert evaluate(loop_model(), "a", TOP).trace is None


def test_unknown_point_rejected():
    from mlsr.kripke import ModelError
    with pytest.raises(ModelError):
        check(loop_model(), "z", TOP)


FULL = CORE_OPS + SUGAR_OPS


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1))
def test_checker_matches_oracle(seed):
    rng = random.Random(seed)
    m = generate_random(rng.randint(1, 5), ["p", "q"], rng.random(), seed, nominals=["n"])
    f = random_formula(rng, rng.randint(0, 4), noms=("n",), ops=FULL)
    assert extent(m, f) == oracle.extent(m, f)
    assert extent(m, f, cache=True) == oracle.extent(m, f)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_sweep_matches_pointwise(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    fam = Family(n, props=["p"], nominals=["n"] if n < 3 else [])
    f = random_formula(rng, 3, props=("p",), noms=tuple(fam.nominals), ops=FULL)
    ext = fam.all_extents(f)
    for i in rng.sample(range(fam.size), min(40, fam.size)):
        m = fam.model(i)
        got = {fam.worlds[t] for t in range(n) if int(ext[i]) >> t & 1}
        assert got == extent(m, f)
