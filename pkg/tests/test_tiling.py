import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsr.checker import valid_on
from mlsr.formula import And, Diamond, Implies, Neg, Or, Prop, Univ, conj
from mlsr.tiling import (
    PeriodicTiling, Tile, TileSet, TilingError, encode, encode_parts, parse_torus,
    random_compatible, torus_model, verify_periodic,
)

t1, t2 = Prop("t1"), Prop("t2")
SOLID = Tile("a", "a", "a", "a")
CHECKER = TileSet([Tile("a", "b", "a", "c"), Tile("a", "c", "a", "b")])


def test_unique_single_tile():
    assert encode_parts(TileSet([SOLID]))["unique"] == Univ(t1)


def test_unique_two_tiles_one_exclusion():
    u = encode_parts(TileSet([SOLID, Tile("b", "b", "b", "b")]))["unique"]
    assert u == Univ(And(Or(t1, t2), Implies(t1, Neg(t2))))


def test_vert_self_matching():
    assert encode_parts(TileSet([SOLID]))["vert"] == Univ(Implies(t1, Diamond("u", t1)))


def test_uniform_torus_shape():
    pt = PeriodicTiling.from_rows(TileSet([SOLID]), [[0, 0], [0, 0]])
    m = torus_model(pt)
    assert len(m.worlds) == 4
    for w in m.worlds:
        up, right = m.successors(w, "u"), m.successors(w, "r")
        assert len(up) == 1 and len(right) == 1 and up != right


def test_mismatch_rejected_by_constructor():
    with pytest.raises(TilingError):
        PeriodicTiling.from_rows(CHECKER, [[0, 0], [0, 0]])


def test_uniform_and_checkerboard_verify():
    assert verify_periodic(TileSet([SOLID]), PeriodicTiling.from_rows(TileSet([SOLID]), [[0, 0], [0, 0]]))
    assert verify_periodic(CHECKER, PeriodicTiling.from_rows(CHECKER, [[0, 1], [0, 1]]))


def test_mismatch_does_not_verify():
    bad = PeriodicTiling.from_rows(CHECKER, [[0, 0], [0, 0]], check=False)
    assert not bad.is_consistent()
    assert not verify_periodic(CHECKER, bad)


def test_mismatch_fails_formula_too():
    bad = PeriodicTiling.from_rows(CHECKER, [[0, 0], [0, 0]], check=False)
    assert not valid_on(torus_model(bad), encode(CHECKER))


@pytest.mark.parametrize("rows", [[[0]], [[0, 0]], [[0], [0]]])
def test_small_torus_rejected(rows):
    with pytest.raises(TilingError):
        PeriodicTiling.from_rows(TileSet([SOLID]), rows)


@pytest.mark.parametrize("text, ok", [("2x3", (2, 3)), ("4X4", (4, 4)), ("3", None), ("axb", None)])
def test_parse_torus(text, ok):
    if ok is None:
        with pytest.raises(TilingError):
            parse_torus(text)
    else:
        assert parse_torus(text) == ok


def test_bad_tile_json():
    with pytest.raises(TilingError):
        TileSet.loads('{"tiles": [{"u": "a"}]}')
    with pytest.raises(TilingError):
        TileSet.loads('{"tiles": []}')


@pytest.mark.parametrize("colours", list(itertools.product("ab", repeat=4)))
@pytest.mark.parametrize("size", [(2, 2), (3, 3)])
def test_single_tile_sets(colours, size):
    tile = Tile(*colours)
    ts = TileSet([tile])
    w, h = size
    rows = [[0] * w for _ in range(h)]
    if tile.u == tile.d and tile.r == tile.l:
        assert verify_periodic(ts, PeriodicTiling.from_rows(ts, rows))
    else:
        with pytest.raises(TilingError):
            PeriodicTiling.from_rows(ts, rows)


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.sampled_from([(2, 2), (3, 3)]))
def test_random_compatible_tilings_verify(seed, size):
    pt = random_compatible(random.Random(seed), *size)
    assert verify_periodic(pt.tiles, pt)


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_functional_relations(seed):
    rng = random.Random(seed)
    pt = random_compatible(rng, rng.choice([2, 3]), rng.choice([2, 3]))
    m = torus_model(pt)
    for w in m.worlds:
        up, right = m.successors(w, "u"), m.successors(w, "r")
        assert len(up) == 1 and len(right) == 1 and up != right
    parts = encode_parts(pt.tiles)
    assert valid_on(m, conj([parts["func_u"], parts["func_r"], parts["conf"]]))


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_encoding_ignores_tile_order(seed):
    rng = random.Random(seed)
    tiles = [Tile(*(rng.choice("abc") for _ in range(4))) for _ in range(rng.randint(1, 5))]
    shuffled = tiles[:]
    rng.shuffle(shuffled)
    assert encode(TileSet(tiles)) == encode(TileSet(shuffled))
