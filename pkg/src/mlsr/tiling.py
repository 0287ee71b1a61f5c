"""Tiling encoding over two relations and periodic tilings as torus models."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .checker import valid_on
from .formula import (
    BOT, TOP, Box, Diamond, Formula, Implies, Neg, Prop, Remove, Univ, conj, disj,
)
from .kripke import Model

UP, RIGHT = "u", "r"


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class Tile:
    u: str
    r: str
    d: str
    l: str

    def key(self) -> tuple:
        return (self.u, self.r, self.d, self.l)


class TileSet:
    """Tiles in input order; letters t1..tn follow a canonical sort so the
    encoding does not depend on how the input was ordered."""

    def __init__(self, tiles):
        tiles = [t if isinstance(t, Tile) else Tile(**t) for t in tiles]
        if not tiles:
            raise TilingError("tile set must be nonempty")
        self.tiles = tiles
        order = sorted(range(len(tiles)), key=lambda i: (tiles[i].key(), i))
        self._rank = {i: r for r, i in enumerate(order)}
        self.canonical = [tiles[i] for i in order]

    def __len__(self) -> int:
        return len(self.tiles)

    def letter(self, i: int) -> str:
        """Proposition letter for input tile ``i``."""
        return f"t{self._rank[i] + 1}"

    @classmethod
    def from_json_obj(cls, obj) -> "TileSet":
        try:
            return cls([Tile(**{k: str(t[k]) for k in "urdl"}) for t in obj["tiles"]])
        except (KeyError, TypeError) as exc:
            raise TilingError(f"malformed tile JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "TileSet":
        try:
            return cls.from_json_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise TilingError(f"invalid JSON: {exc}") from exc


def _t(j: int) -> Prop:
    return Prop(f"t{j + 1}")


def encode_parts(ts: TileSet) -> dict:
    """The six conjuncts, keyed by name."""
    tiles = ts.canonical
    n = len(tiles)
    somewhere = lambda f: Univ(Remove(TOP, f))
    exclusive = [Implies(_t(i), Neg(_t(j))) for i in range(n) for j in range(i + 1, n)]
    return {
        "func_u": somewhere(conj([Box(UP, BOT), Diamond(RIGHT, TOP)])),
        "func_r": somewhere(conj([Box(RIGHT, BOT), Diamond(UP, TOP)])),
        "conf": somewhere(conj([Diamond(RIGHT, Box(UP, BOT)), Diamond(UP, Box(RIGHT, BOT))])),
        "unique": Univ(conj([disj(_t(i) for i in range(n))] + exclusive)),
        "vert": Univ(conj([
            Implies(_t(i), Diamond(UP, disj(_t(j) for j in range(n) if tiles[i].u == tiles[j].d)))
            for i in range(n)])),
        "horiz": Univ(conj([
            Implies(_t(i), Diamond(RIGHT, disj(_t(j) for j in range(n) if tiles[i].r == tiles[j].l)))
            for i in range(n)])),
    }


def encode(ts: TileSet) -> Formula:
    return conj(list(encode_parts(ts).values()))


def _mismatches(ts: TileSet, width: int, height: int, assignment: Mapping) -> list:
    out = []
    for x in range(width):
        for y in range(height):
            here = ts.tiles[assignment[(x, y)]]
            right = ts.tiles[assignment[((x + 1) % width, y)]]
            above = ts.tiles[assignment[(x, (y + 1) % height)]]
            if here.r != right.l:
                out.append(("horizontal", (x, y)))
            if here.u != above.d:
                out.append(("vertical", (x, y)))
    return out


@dataclass(frozen=True)
class PeriodicTiling:
    tiles: TileSet
    width: int
    height: int
    assignment: Mapping   # (column, row) -> input tile index

    def __post_init__(self):
        self._check_shape()
        bad = _mismatches(self.tiles, self.width, self.height, self.assignment)
        if bad:
            kind, cell = bad[0]
            raise TilingError(f"{kind} colour mismatch at cell {cell}")

    def _check_shape(self) -> None:
        if self.width < 2 or self.height < 2:
            raise TilingError("torus dimensions must be at least 2x2")
        cells = {(x, y) for x in range(self.width) for y in range(self.height)}
        if set(self.assignment) != cells:
            raise TilingError("assignment must cover exactly the grid cells")
        for i in self.assignment.values():
            if not 0 <= i < len(self.tiles):
                raise TilingError(f"tile index {i} out of range")

    @classmethod
    def unchecked(cls, tiles: TileSet, width: int, height: int,
                  assignment: Mapping) -> "PeriodicTiling":
        """Build without the colour-matching check (shape is still checked)."""
        obj = object.__new__(cls)
        for k, v in (("tiles", tiles), ("width", width), ("height", height),
                     ("assignment", dict(assignment))):
            object.__setattr__(obj, k, v)
        obj._check_shape()
        return obj

    @classmethod
    def from_rows(cls, tiles: TileSet, rows, check: bool = True) -> "PeriodicTiling":
        """``rows[y][x]`` is the tile index at column x, row y."""
        height = len(rows)
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise TilingError("rows must have equal length")
        assign = {(x, y): int(rows[y][x]) for y in range(height) for x in range(width)}
        if check:
            return cls(tiles, width, height, assign)
        return cls.unchecked(tiles, width, height, assign)

    def is_consistent(self) -> bool:
        return not _mismatches(self.tiles, self.width, self.height, self.assignment)


def cell_name(x: int, y: int) -> str:
    return f"c{x}_{y}"


def torus_model(pt: PeriodicTiling) -> Model:
    w, h = pt.width, pt.height
    if w < 2 or h < 2:
        raise TilingError("torus dimensions must be at least 2x2")
    cells = [(x, y) for x in range(w) for y in range(h)]
    up = frozenset((cell_name(x, y), cell_name(x, (y + 1) % h)) for x, y in cells)
    right = frozenset((cell_name(x, y), cell_name((x + 1) % w, y)) for x, y in cells)
    val: dict = {pt.tiles.letter(i): set() for i in range(len(pt.tiles))}
    for (x, y), i in pt.assignment.items():
        val[pt.tiles.letter(i)].add(cell_name(x, y))
    return Model(frozenset(cell_name(x, y) for x, y in cells), {UP: up, RIGHT: right},
                 {p: frozenset(v) for p, v in val.items()})


def verify_periodic(ts: TileSet, pt: PeriodicTiling) -> bool:
    if pt.tiles is not ts and [t.key() for t in pt.tiles.tiles] != [t.key() for t in ts.tiles]:
        raise TilingError("tiling uses a different tile set")
    if not pt.is_consistent():
        return False
    return valid_on(torus_model(pt), encode(ts))


def parse_torus(text: str) -> tuple:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise TilingError(f"torus size must look like WxH, got {text!r}") from exc


def random_compatible(rng, width: int, height: int,
                      colours: int = 2) -> PeriodicTiling:
    """Draw colours for every edge of the torus, read off the tiles, and
    return the tiling over the resulting tile set."""
    h_edge = {(x, y): rng.randrange(colours) for x in range(width) for y in range(height)}
    v_edge = {(x, y): rng.randrange(colours) for x in range(width) for y in range(height)}
    cell_tiles = {}
    for x in range(width):
        for y in range(height):
            cell_tiles[(x, y)] = Tile(
                u=f"k{v_edge[(x, y)]}", r=f"k{h_edge[(x, y)]}",
                d=f"k{v_edge[(x, (y - 1) % height)]}", l=f"k{h_edge[((x - 1) % width, y)]}")
    distinct = sorted(set(cell_tiles.values()), key=Tile.key)
    ts = TileSet(distinct)
    index = {t: i for i, t in enumerate(distinct)}
    return PeriodicTiling(ts, width, height, {c: index[t] for c, t in cell_tiles.items()})
