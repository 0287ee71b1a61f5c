import random

import pytest

from mlsr import qbfred
from mlsr.checker import check
from mlsr.formula import RemBox, Remove, subformulas, to_text
from mlsr.kripke import Model, PointedModel
from mlsr.qbfred import (
    DemonDelete, GameSchedule, QbfError, QbfInstance, TravelerMove, brute_eval, build_formula,
    build_model, build_schedule, worked_instance, formula_from_schedule, game_solve,
    instance_sample, size_report,
)


def inst(prefix, clauses):
    return QbfInstance(prefix=tuple(prefix), clauses=tuple(tuple(c) for c in clauses))


EXISTS_X1 = inst([("E", 1)], [[(1, True)]])
FORALL_X1 = inst([("A", 1)], [[(1, True)]])


def three_way(q):
    pm = build_model(q)
    return (brute_eval(q), game_solve(pm, build_schedule(q)),
            check(pm.model, pm.point, build_formula(q), cache=True))


def test_worked_brute_force():
    assert brute_eval(worked_instance())


def test_trivial_instances():
    assert brute_eval(EXISTS_X1)
    assert not brute_eval(FORALL_X1)


def test_worked_model_matches_transcription(golden):
    g = golden("worked_example_transcription.json")
    name = g["letters"]
    m = build_model(worked_instance()).model
    assert m.worlds == frozenset(name.values())
    edges = {(name[a], name[b]) for a, bs in g["edges"].items() for b in bs}
    assert m.relations["r"] == edges
    for p, ws in g["valuation"].items():
        assert m.valuation[p] == {name[w] for w in ws}
    assert {p for p, ext in m.valuation.items() if ext} == set(g["valuation"])


def test_single_existential_gadget():
    m = build_model(EXISTS_X1).model
    assert {w for w in m.worlds if w.startswith("c")} == {"c1"}
    assert m.successors("c1") == {"nx1"}
    assert m.successors("s") == {"a1", "na1"}


def test_existential_first_schedule_starts_with_move():
    assert isinstance(build_schedule(EXISTS_X1).rounds[0], TravelerMove)
    assert isinstance(build_schedule(FORALL_X1).rounds[0], DemonDelete)


def _delta_rounds(q):
    marker = qbfred.one_clause_marker(q.k)
    return [r for r in build_schedule(q).rounds
            if isinstance(r, DemonDelete) and r.restriction == marker]


def test_one_clause_has_no_delta_block():
    assert _delta_rounds(EXISTS_X1) == []
    f = build_formula(EXISTS_X1)
    marker = qbfred.one_clause_marker(1)
    assert not any(isinstance(g, (Remove, RemBox)) and g.pre == marker for g in subformulas(f))


def test_delta_rounds_count():
    assert len(_delta_rounds(worked_instance())) == 2


def test_worked_three_way():
    assert three_way(worked_instance()) == (True, True, True)


def test_worked_false_variant():
    q = worked_instance()
    false_q = QbfInstance(q.prefix, q.clauses[:2] + (((3, True),),))
    assert three_way(false_q) == (False, False, False)


def test_trivial_game():
    m = Model(frozenset(["s", "t"]), {"r": {("s", "t")}}, {"g": {"t"}})
    sched = GameSchedule((TravelerMove(),))
    assert game_solve(PointedModel(m, "s"), sched)
    no_goal = Model(frozenset(["s", "t"]), {"r": {("s", "t")}}, {"g": set()})
    assert not game_solve(PointedModel(no_goal, "s"), sched)


@pytest.mark.parametrize("prefix, clauses", [
    ([("E", 1), ("E", 2)], [[(1, True)]]),
    ([("E", 1)], [[(2, True)]]),
    ([("E", 1), ("A", 1)], [[(1, True)]]),
    ([("E", 1)], []),
    ([("X", 1)], [[(1, True)]]),
])
def test_invalid_instances(prefix, clauses):
    with pytest.raises(QbfError):
        inst(prefix, clauses)


def test_json_round_trip():
    q = worked_instance()
    assert QbfInstance.from_json_obj(q.to_json_obj()) == q
    with pytest.raises(QbfError):
        QbfInstance.loads("[1, 2]")


def test_sample_shape():
    sample = list(instance_sample())
    assert len(sample) >= 200
    assert all(q.n <= 3 and q.k <= 3 for q in sample)
    assert {q.n for q in sample} == {1, 2, 3} and {q.k for q in sample} == {1, 2, 3}


def test_sample_subset_three_way():
    rng = random.Random(5)
    for q in rng.sample(list(instance_sample()), 60):
        b, g, c = three_way(q)
        assert b == g == c, q


def test_sizes_affine():
    for q in instance_sample():
        r = size_report(q)
        assert r["worlds"] <= 11 * q.n + q.k + 2
        assert r["formula_size"] <= 15 * q.n + 30 * q.k


def test_demon_respects_restrictions():
    q = worked_instance()
    pm = build_model(q)
    from mlsr.checker import Evaluator
    ev = Evaluator(pm.model)
    seen = []

    def record(restriction, live, t):
        seen.append(restriction)
        assert t in live
        assert ev.holds(restriction, live, t), (to_text(restriction), t)

    assert game_solve(pm, build_schedule(q), record=record)
    assert seen


def test_literal_shape_misses_early_wins():
    sample = list(instance_sample())
    wrong = 0
    for q in sample:
        pm = build_model(q)
        f = formula_from_schedule(build_schedule(q), win_on_reach=False)
        wrong += check(pm.model, pm.point, f, cache=True) != brute_eval(q)
    assert wrong == sum(brute_eval(q) for q in sample) == 143
