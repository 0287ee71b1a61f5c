import numpy as np
import pytest

from mlsr.checker import check
from mlsr.counting import (
    AtLeast, CountingError, Exactly, GlobalStateDescription, all_gsds, all_sds, at_least,
    check_at_least, check_rewrites, consistent, families, global_formula, increment_lhs,
    parse_sd, rewrite_increment, rewrite_pull_out, sd_formula, sd_to_fol,
)
from mlsr.fol import PredApp, fol_eval
from mlsr.formula import TOP, And, Exists, Neg, Prop, Remove
from mlsr.kripke import Model
import oracle

PLUS_P1 = parse_sd("+P1")


def relfree(n, ext):
    ws = [f"w{i}" for i in range(n)]
    return Model(frozenset(ws), {}, {"P1": {ws[i] for i in ext}})


def test_at_least_zero():
    assert at_least(0, PLUS_P1) == TOP


def test_extension_of_two():
    m = relfree(4, [0, 2])
    for w in m.worlds:
        assert check(m, w, at_least(2, PLUS_P1))
        assert not check(m, w, at_least(3, PLUS_P1))
        assert oracle.holds(m, w, at_least(2, PLUS_P1))


def test_single_literal_sd():
    assert sd_formula(PLUS_P1) == Prop("P1")
    assert sd_to_fol(PLUS_P1) == PredApp("P1", "x")


def test_exactly_zero_is_negated_exists():
    gsd = GlobalStateDescription(1, ((PLUS_P1, Exactly(0)), (parse_sd("-P1"), AtLeast(1))))
    assert global_formula(gsd) == And(Neg(Exists(Prop("P1"))), at_least(1, parse_sd("-P1")))


@pytest.mark.parametrize("text", ["", "P1", "+P1+P1", "+1", "+P1*"])
def test_bad_sd(text):
    with pytest.raises(CountingError):
        parse_sd(text)


def test_gsd_needs_every_sd():
    with pytest.raises(CountingError):
        GlobalStateDescription(1, ((PLUS_P1, Exactly(0)),))


def test_pull_out_with_trivial_sd():
    gsd = GlobalStateDescription(0, tuple((sd, AtLeast(0)) for sd in all_sds(["P1"])))
    inner = Prop("P1")
    m = relfree(3, [1, 2])
    lhs = Remove(And(sd_formula(PLUS_P1), global_formula(gsd)), inner)
    for w in m.worlds:
        assert check(m, w, lhs) == check(m, w, rewrite_pull_out(PLUS_P1, gsd, inner)) \
            == check(m, w, Remove(Prop("P1"), inner))


def test_pull_out_no_witness():
    gsd = next(iter(all_gsds(["P1"], 1)))
    m = relfree(3, [])
    lhs = Remove(And(sd_formula(PLUS_P1), global_formula(gsd)), TOP)
    for w in m.worlds:
        assert not check(m, w, lhs)
        assert not check(m, w, rewrite_pull_out(PLUS_P1, gsd, TOP))


def test_increment_example():
    minus = parse_sd("-P1")
    gsd = GlobalStateDescription(2, ((PLUS_P1, Exactly(1)), (minus, AtLeast(0))))
    m = relfree(3, [0, 1])
    lhs = increment_lhs(PLUS_P1, minus, gsd)
    rhs = rewrite_increment(PLUS_P1, minus, gsd)
    assert check(m, "w2", lhs) and check(m, "w2", rhs)
    for w in m.worlds:
        assert check(m, w, lhs) == check(m, w, rhs)


def test_increment_empty_extension():
    minus = parse_sd("-P1")
    gsd = GlobalStateDescription(2, ((PLUS_P1, AtLeast(0)), (minus, AtLeast(0))))
    m = relfree(2, [])
    for w in m.worlds:
        assert not check(m, w, increment_lhs(PLUS_P1, minus, gsd))
        assert not check(m, w, rewrite_increment(PLUS_P1, minus, gsd))


def test_increment_at_least():
    minus = parse_sd("-P1")
    gsd = GlobalStateDescription(2, ((PLUS_P1, AtLeast(2)), (minus, AtLeast(0))))
    rhs = rewrite_increment(PLUS_P1, minus, gsd)
    assert rhs == And(sd_formula(minus), global_formula(gsd.replace(PLUS_P1, AtLeast(3))))
    assert gsd.replace(PLUS_P1, Exactly(2)).threshold == 3


def test_inconsistent_pair_is_false():
    minus = parse_sd("-P1")
    gsd = GlobalStateDescription(1, ((PLUS_P1, AtLeast(0)), (minus, Exactly(0))))
    assert not consistent(minus, gsd)
    m = relfree(2, [0, 1])
    assert not check(m, "w0", increment_lhs(PLUS_P1, minus, gsd))


def test_unguarded_rewrite_fails_only_on_inconsistent_pairs():
    fails = check_rewrites(2, ("P1", "P2"), 2, inner_size=0, guard=False)
    assert fails
    for kind, _, _, sdp, gsd in fails:
        assert kind == "increment"
        assert not consistent(parse_sd(sdp), gsd)


def test_at_least_exhaustive():
    assert check_at_least(4, ("P1", "P2")) == []


def test_rewrites_up_to_three_worlds():
    assert check_rewrites(3, ("P1", "P2"), 2, inner_size=3) == []


def test_monotone():
    for fam in families(4, ("P1", "P2")):
        for sd in all_sds(("P1", "P2")):
            for m in range(5):
                hi, lo = fam.all_extents(at_least(m + 1, sd)), fam.all_extents(at_least(m, sd))
                assert np.all((hi & ~lo) == 0)


def test_sd_translation_matches():
    m = Model(frozenset(["a", "b"]), {}, {"P1": {"a"}, "P2": {"a", "b"}})
    for sd in all_sds(("P1", "P2")):
        for w in m.worlds:
            assert fol_eval(m, {"x": w}, sd_to_fol(sd)) == sd.holds_at(m, w)
