import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsr.bisim import StateSpace, distinguishing_formula, sr_bisimilar
from mlsr.checker import check
from mlsr.formula import TOP, Diamond, is_core
from mlsr.gen import random_formula
from mlsr.kripke import Model, ModelError, PointedModel, generate_random
from conftest import edgeless, isolated_reflexive, loop_model, universal_pair


def pm(m, s):
    return PointedModel(m, s)


def reflexive_point():
    return Model(frozenset(["a"]), {"r": {("a", "a")}})


def irreflexive_point():
    return Model(frozenset(["a"]), {"r": set()})


def test_reflexive_pair_bisimilar():
    for s in "ab":
        for t in "ab":
            assert sr_bisimilar(pm(isolated_reflexive(), s), pm(universal_pair(), t))
    assert distinguishing_formula(pm(isolated_reflexive(), "a"), pm(universal_pair(), "a")) is None


def test_self_bisimilar():
    m = generate_random(4, ["p"], 0.5, 3)
    for s in m.worlds:
        assert sr_bisimilar(pm(m, s), pm(m, s))


def test_reflexive_vs_irreflexive():
    left, right = pm(reflexive_point(), "a"), pm(irreflexive_point(), "a")
    assert not sr_bisimilar(left, right)
    assert distinguishing_formula(left, right) == Diamond("r", TOP)


def test_edgeless_two_vs_three():
    left, right = pm(edgeless(3), "w0"), pm(edgeless(2), "w0")
    assert not sr_bisimilar(left, right)
    f = distinguishing_formula(left, right)
    assert is_core(f)
    assert check(left.model, left.point, f) and not check(right.model, right.point, f)


def test_cap_enforced():
    big = generate_random(9, [], 0.2, 0)
    with pytest.raises(ModelError):
        sr_bisimilar(pm(big, "w0"), pm(big, "w0"))
    assert sr_bisimilar(pm(big, "w0"), pm(big, "w0"), cap=9)


def test_loop_vs_reflexive_pair():
    assert not sr_bisimilar(pm(loop_model(), "a"), pm(isolated_reflexive(), "a"))


def _rename(m: Model, suffix: str) -> Model:
    ren = {w: w + suffix for w in m.worlds}
    return Model(frozenset(ren.values()),
                 {lbl: {(ren[a], ren[b]) for a, b in pairs} for lbl, pairs in m.relations.items()},
                 {p: {ren[w] for w in ext} for p, ext in m.valuation.items()})


pairs = st.tuples(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4))


@settings(max_examples=150)
@given(pairs)
def test_symmetric_and_witness_verifies(args):
    seed, n1, n2 = args
    rng = random.Random(seed)
    a = generate_random(n1, ["p"], rng.random(), seed)
    b = generate_random(n2, ["p"], rng.random(), seed + 1)
    left, right = pm(a, "w0"), pm(b, f"w{n2 - 1}")
    same = sr_bisimilar(left, right)
    assert same == sr_bisimilar(right, left)
    f = distinguishing_formula(left, right)
    assert (f is None) == same
    if f is not None:
        assert check(a, left.point, f) and not check(b, right.point, f)


@settings(max_examples=100)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_isomorphic_copy_is_bisimilar_and_agrees(seed, n):
    rng = random.Random(seed)
    a = generate_random(n, ["p"], rng.random(), seed)
    b = _rename(a, "x")
    s = f"w{rng.randrange(n)}"
    assert sr_bisimilar(pm(a, s), pm(b, s + "x"))
    for _ in range(20):
        f = random_formula(rng, 3, props=("p",))
        assert check(a, s, f) == check(b, s + "x", f)


def test_state_space_partition_is_stable():
    space = StateSpace([loop_model(), isolated_reflexive()])
    assert space.history[-1] == space.colour
    i, j = space.root(0, "a"), space.root(0, "b")
    assert space.equivalent(i, j)
