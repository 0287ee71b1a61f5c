"""Finite Kripke models with partial nominal denotation."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional


class ModelError(ValueError):
    pass


def _world_key(w: str):
    # w2 sorts before w10
    head = w.rstrip("0123456789")
    tail = w[len(head):]
    return (head, int(tail) if tail else -1, w)


def sort_worlds(ws: Iterable[str]) -> list:
    return sorted(ws, key=_world_key)


@dataclass(frozen=True, eq=False)
class Model:
    worlds: frozenset
    relations: Mapping[str, frozenset] = field(default_factory=dict)
    valuation: Mapping[str, frozenset] = field(default_factory=dict)
    nominals: Mapping[str, Optional[str]] = field(default_factory=dict)

    def __post_init__(self):
        ws = frozenset(self.worlds)
        object.__setattr__(self, "worlds", ws)
        rels = {lbl: frozenset(tuple(e) for e in pairs)
                for lbl, pairs in self.relations.items()}
        vals = {p: frozenset(ext) for p, ext in self.valuation.items()}
        noms = dict(self.nominals)
        for lbl, pairs in rels.items():
            for a, b in pairs:
                if a not in ws or b not in ws:
                    raise ModelError(f"edge {a}->{b} of {lbl!r} leaves the model")
        for p, ext in vals.items():
            if not ext <= ws:
                raise ModelError(f"valuation of {p!r} mentions unknown worlds")
        for n, w in noms.items():
            if w is not None and w not in ws:
                raise ModelError(f"nominal {n!r} denotes unknown world {w!r}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "valuation", vals)
        object.__setattr__(self, "nominals", noms)

    # identity is structural
    def _key(self):
        return (self.worlds,
                tuple(sorted(self.relations.items())),
                tuple(sorted(self.valuation.items())),
                tuple(sorted(self.nominals.items(), key=lambda kv: (kv[0], kv[1] or ""))))

    def __eq__(self, other):
        return isinstance(other, Model) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __len__(self):
        return len(self.worlds)

    @cached_property
    def succ(self) -> dict:
        """label -> world -> frozenset of successors."""
        out = {}
        for lbl, pairs in self.relations.items():
            m: dict = {w: set() for w in self.worlds}
            for a, b in pairs:
                m[a].add(b)
            out[lbl] = {w: frozenset(s) for w, s in m.items()}
        return out

    def successors(self, w: str, label: str = "r") -> frozenset:
        return self.succ.get(label, {}).get(w, frozenset())

    def sorted_worlds(self) -> list:
        return sort_worlds(self.worlds)

    def denotation(self, nominal: str) -> Optional[str]:
        return self.nominals.get(nominal)

    def require_point(self, s: str) -> None:
        if s not in self.worlds:
            raise ModelError(f"point {s!r} is not a world of the model")


@dataclass(frozen=True)
class PointedModel:
    model: Model
    point: str

    def __post_init__(self):
        self.model.require_point(self.point)


def delete(m: Model, d: Iterable[str]) -> Model:
    d = frozenset(d)
    unknown = d - m.worlds
    if unknown:
        raise ModelError(f"cannot delete unknown worlds {sorted(unknown)}")
    keep = m.worlds - d
    return Model(
        keep,
        {lbl: frozenset(e for e in pairs if e[0] in keep and e[1] in keep)
         for lbl, pairs in m.relations.items()},
        {p: ext & keep for p, ext in m.valuation.items()},
        {n: (w if w in keep else None) for n, w in m.nominals.items()},
    )


def relativize(m: Model, keep: Iterable[str]) -> Model:
    keep = frozenset(keep)
    unknown = keep - m.worlds
    if unknown:
        raise ModelError(f"cannot keep unknown worlds {sorted(unknown)}")
    return delete(m, m.worlds - keep)


def generate_random(worlds: int, props: Iterable[str] = (), edge_density: float = 0.5,
                    seed: int = 0, labels: Iterable[str] = ("r",),
                    nominals: Iterable[str] = ()) -> Model:
    """Seeded random model on worlds w0..w{n-1}."""
    if worlds < 1:
        raise ModelError("need at least one world")
    if not 0.0 <= edge_density <= 1.0:
        raise ModelError("edge density must lie in [0, 1]")
    rng = random.Random(seed)
    ws = [f"w{i}" for i in range(worlds)]
    rels = {}
    for lbl in labels:
        rels[lbl] = frozenset((a, b) for a in ws for b in ws
                              if rng.random() < edge_density)
    val = {p: frozenset(w for w in ws if rng.random() < 0.5) for p in props}
    noms = {}
    for n in nominals:
        pick = rng.randrange(worlds + 1)
        noms[n] = ws[pick] if pick < worlds else None
    return Model(frozenset(ws), rels, val, noms)


def enumerate_models(max_worlds: int, props: Iterable[str] = (),
                     labels: Iterable[str] = ("r",), nominals: Iterable[str] = (),
                     min_worlds: int = 1) -> Iterator[Model]:
    """Every model on canonical worlds w0..w{n-1}, min_worlds <= n <= max_worlds."""
    props, labels, nominals = list(props), list(labels), list(nominals)
    for n in range(min_worlds, max_worlds + 1):
        ws = [f"w{i}" for i in range(n)]
        pairs = [(a, b) for a in ws for b in ws]
        subsets = [frozenset(w for i, w in enumerate(ws) if bits >> i & 1)
                   for bits in range(1 << n)]
        edge_sets = [frozenset(e for i, e in enumerate(pairs) if bits >> i & 1)
                     for bits in range(1 << len(pairs))]
        noms = ws + [None]
        for rel_choice in itertools.product(edge_sets, repeat=len(labels)):
            rels = dict(zip(labels, rel_choice))
            for val_choice in itertools.product(subsets, repeat=len(props)):
                val = dict(zip(props, val_choice))
                for nom_choice in itertools.product(noms, repeat=len(nominals)):
                    yield Model(frozenset(ws), rels, val, dict(zip(nominals, nom_choice)))


# -- JSON ------------------------------------------------------------------

def to_json_obj(m: Model, point: Optional[str] = None) -> dict:
    obj = {
        "worlds": sort_worlds(m.worlds),
        "relations": {lbl: sorted([list(e) for e in pairs],
                                  key=lambda e: (_world_key(e[0]), _world_key(e[1])))
                      for lbl, pairs in sorted(m.relations.items())},
        "valuation": {p: sort_worlds(ext) for p, ext in sorted(m.valuation.items())},
        "nominals": {n: w for n, w in sorted(m.nominals.items())},
    }
    if point is not None:
        m.require_point(point)
        obj["point"] = point
    return obj


def dumps(m: Model, point: Optional[str] = None) -> str:
    return json.dumps(to_json_obj(m, point), indent=2, sort_keys=True) + "\n"


def from_json_obj(obj: dict) -> tuple:
    """Returns (model, point or None)."""
    if not isinstance(obj, dict) or "worlds" not in obj:
        raise ModelError("model JSON needs a 'worlds' array")
    try:
        m = Model(
            frozenset(str(w) for w in obj["worlds"]),
            {lbl: frozenset((str(a), str(b)) for a, b in pairs)
             for lbl, pairs in obj.get("relations", {}).items()},
            {p: frozenset(str(w) for w in ext) for p, ext in obj.get("valuation", {}).items()},
            {n: (None if w is None else str(w)) for n, w in obj.get("nominals", {}).items()},
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"malformed model JSON: {exc}") from exc
    point = obj.get("point")
    if point is not None:
        m.require_point(point)
    return m, point


def loads(text: str) -> tuple:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc}") from exc
    return from_json_obj(obj)


def load(path) -> tuple:
    with open(path) as fh:
        return loads(fh.read())


def save(m: Model, path, point: Optional[str] = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(m, point))
