import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlsr import kripke
from mlsr.checker import check
from mlsr.formula import Exists, Nominal
from mlsr.kripke import Model, ModelError, PointedModel, delete, enumerate_models, relativize
from conftest import loop_model


def test_delete_from_loop():
    m = delete(loop_model(), {"b"})
    assert m.worlds == {"a"}
    assert m.relations["r"] == frozenset()


def test_delete_makes_nominal_non_denoting():
    m = Model(frozenset("ab"), {"r": set()}, {}, {"n": "b"})
    assert check(m, "a", Exists(Nominal("n")))
    d = delete(m, {"b"})
    assert d.nominals["n"] is None
    assert not check(d, "a", Exists(Nominal("n")))


def test_delete_unknown_world():
    with pytest.raises(ModelError):
        delete(loop_model(), {"z"})


def test_relativize_cases():
    m = loop_model()
    assert relativize(m, m.worlds) == m
    empty = relativize(m, set())
    assert empty.worlds == frozenset()
    with pytest.raises(ModelError):
        PointedModel(empty, "a")
    single = relativize(m, {"a"})
    assert single.worlds == {"a"} and not single.relations["r"]


def test_generate_single_isolated_world():
    m = kripke.generate_random(1, [], 0.0, 3)
    assert m.worlds == {"w0"} and not m.relations["r"]


def test_generate_is_deterministic():
    a = kripke.generate_random(5, ["p", "q"], 0.4, 11, nominals=["n"])
    b = kripke.generate_random(5, ["p", "q"], 0.4, 11, nominals=["n"])
    assert a == b


def test_generate_golden_snapshot(golden):
    m = kripke.generate_random(4, ["p"], 0.5, 7)
    assert kripke.to_json_obj(m) == golden("random_4_p_0.5_7.json")


@pytest.mark.parametrize("kwargs, count", [
    (dict(max_worlds=1), 2),
    (dict(max_worlds=1, props=["p"]), 4),
    (dict(max_worlds=2, min_worlds=2), 16),
])
def test_enumerate_counts(kwargs, count):
    assert sum(1 for _ in enumerate_models(**kwargs)) == count


def test_model_rejects_dangling_edge():
    with pytest.raises(ModelError):
        Model(frozenset("a"), {"r": {("a", "b")}})


def test_loads_rejects_garbage():
    with pytest.raises(ModelError):
        kripke.loads("{not json")
    with pytest.raises(ModelError):
        kripke.loads('{"relations": {}}')
    with pytest.raises(ModelError):
        kripke.loads('{"worlds": ["a"], "point": "b"}')


seeds = st.integers(0, 10**6)


@given(seeds, st.integers(1, 6))
def test_delete_composes(seed, n):
    import random
    rng = random.Random(seed)
    m = kripke.generate_random(n, ["p"], 0.5, seed, nominals=["n"])
    ws = sorted(m.worlds)
    d1 = set(rng.sample(ws, rng.randint(0, n)))
    d2 = set(rng.sample([w for w in ws if w not in d1], rng.randint(0, n - len(d1))))
    assert delete(delete(m, d1), d2) == delete(m, d1 | d2)


@given(seeds, st.integers(1, 6))
def test_delete_adds_nothing(seed, n):
    m = kripke.generate_random(n, ["p", "q"], 0.5, seed)
    d = delete(m, {f"w{seed % n}"})
    for lbl, pairs in d.relations.items():
        assert pairs <= m.relations[lbl]
    for p, ext in d.valuation.items():
        assert ext <= m.valuation[p]


@given(seeds, st.integers(1, 6))
def test_json_round_trip(seed, n):
    m = kripke.generate_random(n, ["p"], 0.5, seed, labels=["r", "u"], nominals=["n"])
    text = kripke.dumps(m, "w0")
    back, point = kripke.loads(text)
    assert back == m and point == "w0"
    assert kripke.dumps(back, point) == text
