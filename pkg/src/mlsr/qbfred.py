"""QBF to model checking: gadget models, the traveling game and its formula.

World naming (j is a prefix position, i a clause index):

* ``s`` start; ``a1``/``na1`` first-level nodes (marked p1) leading to
  the literal nodes ``x1``/``nx1``.
* exists-module j: choice nodes ``e{j}``/``ne{j}``.
* forall-module j: chain nodes ``h{j}``/``nh{j}`` and level-marked nodes
  ``m{j}``/``nm{j}`` (marked p{j}).
* literal nodes ``x{j}``/``nx{j}``; goal points are ``g_<node>``, the
  goal point hanging off a node and shared with the node below it.
* verification: hubs ``hub``/``nhub`` and clause vertices ``c{i}``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .checker import Evaluator
from .formula import (
    TOP, Diamond, Formula, Neg, Or, Prop, RemBox, conj, disj, size as f_size,
)
from .kripke import Model, PointedModel

GOAL = "g"
BRUTE_CAP = 20


class QbfError(ValueError):
    pass


@dataclass(frozen=True)
class QbfInstance:
    prefix: tuple    # ((quantifier in {"A", "E"}, variable), ...)
    clauses: tuple   # (((variable, polarity), ...), ...)

    def __post_init__(self):
        prefix = tuple((str(q), int(v)) for q, v in self.prefix)
        clauses = tuple(tuple((int(v), bool(pol)) for v, pol in c) for c in self.clauses)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "clauses", clauses)
        if not prefix:
            raise QbfError("empty quantifier prefix")
        seen = set()
        for q, v in prefix:
            if q not in ("A", "E"):
                raise QbfError(f"unknown quantifier {q!r}")
            if v in seen:
                raise QbfError(f"variable {v} quantified twice")
            seen.add(v)
        for (q1, _), (q2, _) in zip(prefix, prefix[1:]):
            if q1 == q2:
                raise QbfError("quantifiers must alternate")
        if not clauses:
            raise QbfError("need at least one clause")
        for c in clauses:
            for v, _ in c:
                if v not in seen:
                    raise QbfError(f"clause mentions unquantified variable {v}")

    @property
    def n(self) -> int:
        return len(self.prefix)

    @property
    def k(self) -> int:
        return len(self.clauses)

    def position(self, var: int) -> int:
        for j, (_, v) in enumerate(self.prefix, start=1):
            if v == var:
                return j
        raise KeyError(var)

    def to_json_obj(self) -> dict:
        return {"prefix": [[q, v] for q, v in self.prefix],
                "clauses": [[[v, pol] for v, pol in c] for c in self.clauses]}

    @classmethod
    def from_json_obj(cls, obj) -> "QbfInstance":
        try:
            return cls(tuple(tuple(x) for x in obj["prefix"]),
                       tuple(tuple(tuple(l) for l in c) for c in obj["clauses"]))
        except (KeyError, TypeError) as exc:
            raise QbfError(f"malformed QBF JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "QbfInstance":
        try:
            return cls.from_json_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise QbfError(f"invalid JSON: {exc}") from exc


def worked_instance() -> QbfInstance:
    """forall x1 exists x2 forall x3 with the three clauses of the worked example."""
    return QbfInstance(
        (("A", 1), ("E", 2), ("A", 3)),
        (((1, False), (2, True)),
         ((1, False), (2, True), (3, False)),
         ((1, True), (2, True), (3, True))),
    )


# -- brute force -----------------------------------------------------------

def brute_eval(q: QbfInstance) -> bool:
    if q.n > BRUTE_CAP:
        raise QbfError(f"brute force is capped at {BRUTE_CAP} variables")

    def sat(assign: dict) -> bool:
        return all(any(assign[v] == pol for v, pol in c) for c in q.clauses)

    def go(i: int, assign: dict) -> bool:
        if i == q.n:
            return sat(assign)
        quant, v = q.prefix[i]
        results = (go(i + 1, {**assign, v: b}) for b in (True, False))
        return any(results) if quant == "E" else all(results)

    return go(0, {})


# -- gadget model ----------------------------------------------------------

def build_model(q: QbfInstance) -> PointedModel:
    edges: set = set()
    goals: set = set()
    marks: dict = {}

    def edge(a, b):
        edges.add((a, b))

    def goal_of(node):
        g = f"g_{node}"
        goals.add(g)
        return g

    # initial module
    marks["p1"] = {"a1", "na1"}
    for side in ("", "n"):
        a, x = f"{side}a1", f"{side}x1"
        edge("s", a)
        edge(a, goal_of(a))
        edge(a, x)
        edge(x, goal_of(a))
        edge(x, goal_of(x))
    for j in range(2, q.n + 1):
        quant = q.prefix[j - 1][0]
        px, pnx = f"x{j - 1}", f"nx{j - 1}"
        if quant == "E":
            for top in (px, pnx):
                edge(top, f"e{j}")
                edge(top, f"ne{j}")
            for side in ("", "n"):
                c, x = f"{side}e{j}", f"{side}x{j}"
                edge(c, goal_of(c))
                edge(c, x)
                edge(x, goal_of(c))
                edge(x, goal_of(x))
        else:
            edge(px, f"h{j}")
            edge(pnx, f"nh{j}")
            marks[f"p{j}"] = {f"m{j}", f"nm{j}"}
            for chain in (f"h{j}", f"nh{j}"):
                edge(chain, f"m{j}")
                edge(chain, f"nm{j}")
            for side in ("", "n"):
                mk, x = f"{side}m{j}", f"{side}x{j}"
                edge(mk, goal_of(mk))
                edge(mk, x)
                edge(x, goal_of(mk))
                edge(x, goal_of(x))
    # verification module
    n = q.n
    edge(f"x{n}", "hub")
    edge(f"nx{n}", "nhub")
    clause_names = [f"c{i}" for i in range(1, q.k + 1)]
    for hub in ("hub", "nhub"):
        for c in clause_names:
            edge(hub, c)
    for c, lits in zip(clause_names, q.clauses):
        for v, pol in lits:
            j = q.position(v)
            edge(c, f"nx{j}" if pol else f"x{j}")
    worlds = {w for e in edges for w in e} | {"s"}
    valuation = {GOAL: frozenset(goals)}
    for name, ext in marks.items():
        valuation[name] = frozenset(ext)
    for i, c in enumerate(clause_names, start=1):
        valuation[f"c{i}"] = frozenset({c})
    return PointedModel(Model(frozenset(worlds), {"r": frozenset(edges)}, valuation), "s")


# -- schedule --------------------------------------------------------------

@dataclass(frozen=True)
class DemonDelete:
    restriction: Formula


@dataclass(frozen=True)
class TravelerMove:
    pass


@dataclass(frozen=True)
class GameSchedule:
    rounds: tuple
    quantifier_rounds: int = 0   # Demon/Traveler pairs before the clause phase
    goal: str = GOAL


def one_clause_marker(k: int) -> Formula:
    """Exactly one of c1..ck holds."""
    cs = [Prop(f"c{i}") for i in range(1, k + 1)]
    return disj(conj([c] + [Neg(d) for d in cs if d is not c]) for c in cs)


def build_schedule(q: QbfInstance) -> GameSchedule:
    move, free = TravelerMove(), DemonDelete(TOP)
    rounds: list = []
    pairs = 0
    if q.prefix[0][0] == "A":
        rounds += [DemonDelete(Prop("p1")), move]
        pairs += 1
    else:
        rounds.append(move)
    rounds += [free, move]
    pairs += 1
    for j in range(2, q.n + 1):
        if q.prefix[j - 1][0] == "E":
            rounds += [free, move, free, move]
            pairs += 2
        else:
            rounds += [free, move, DemonDelete(Prop(f"p{j}")), move, free, move]
            pairs += 3
    rounds += [free, move]
    pairs += 1
    delta = one_clause_marker(q.k)
    rounds += [DemonDelete(delta)] * (q.k - 1)
    rounds += [move, move, free, move]
    return GameSchedule(tuple(rounds), pairs)


def formula_from_schedule(sched: GameSchedule, win_on_reach: bool = True) -> Formula:
    """Demon rounds become [-rho], Traveler moves become diamonds.

    With ``win_on_reach`` every move but the last is <>(g | rest), so a
    Traveler who steps onto a goal point early has won; without it the
    bare <>rest shape is produced.
    """
    g = Prop(sched.goal)
    out: Optional[Formula] = None
    for rnd in reversed(sched.rounds):
        if isinstance(rnd, TravelerMove):
            if out is None:
                out = Diamond("r", g)
            else:
                out = Diamond("r", Or(g, out) if win_on_reach else out)
        else:
            if out is None:
                raise QbfError("schedule must end with a Traveler move")
            out = RemBox(rnd.restriction, out)
    if out is None:
        raise QbfError("empty schedule")
    return out


def build_formula(q: QbfInstance) -> Formula:
    return formula_from_schedule(build_schedule(q))


# -- the game --------------------------------------------------------------

def game_solve(pm: PointedModel, sched: GameSchedule,
               record: Optional[Callable] = None) -> bool:
    """Does Traveler have a winning strategy?

    Demon deletes a point other than Traveler's position satisfying the
    round's restriction (if there is none, Demon is stuck and loses).
    Traveler moves along a surviving edge and wins on standing
    on a goal point; with no legal move Traveler loses.  ``record`` is called
    with (restriction, surviving worlds, deleted point) for every Demon
    move explored.
    """
    m = pm.model
    ev = Evaluator(m, cache=True)
    goal = m.valuation.get(sched.goal, frozenset())
    rounds = sched.rounds
    memo: dict = {}

    def solve(r: int, live: frozenset, pos: str) -> bool:
        if r == len(rounds):
            return False
        key = (r, live, pos)
        if key in memo:
            return memo[key]
        rnd = rounds[r]
        if isinstance(rnd, TravelerMove):
            out = False
            for t in sorted(m.successors(pos)):
                if t in live and (t in goal or solve(r + 1, live, t)):
                    out = True
                    break
        else:
            out = True
            for t in sorted(live):
                if t == pos or not ev.holds(rnd.restriction, live, t):
                    continue
                if record is not None:
                    record(rnd.restriction, live, t)
                if not solve(r + 1, live - {t}, pos):
                    out = False
                    break
        memo[key] = out
        return out

    return solve(0, m.worlds, pm.point)


# -- enumeration -----------------------------------------------------------

def alternating_prefixes(n: int) -> list:
    out = []
    for first in ("A", "E"):
        qs = [first if i % 2 == 0 else ("E" if first == "A" else "A") for i in range(n)]
        out.append(tuple((qq, i + 1) for i, qq in enumerate(qs)))
    return out


def all_clauses(n: int) -> list:
    """Every nonempty clause over variables 1..n (each variable at most once)."""
    out = []
    for signs in itertools.product((None, True, False), repeat=n):
        lits = tuple((v + 1, s) for v, s in enumerate(signs) if s is not None)
        if lits:
            out.append(lits)
    return out


def instance_sample(max_n: int = 3, max_k: int = 3, limit_per_shape: int = 40,
                    seed: int = 0) -> Iterator[QbfInstance]:
    """Enumerated instances: every clause set while small, a seeded
    sample of clause sets once the number of combinations grows."""
    import random

    rng = random.Random(seed)
    for n in range(1, max_n + 1):
        clauses = all_clauses(n)
        for prefix in alternating_prefixes(n):
            for k in range(1, max_k + 1):
                combos = list(itertools.combinations(clauses, k))
                if len(combos) > limit_per_shape:
                    combos = rng.sample(combos, limit_per_shape)
                for cs in combos:
                    yield QbfInstance(prefix, cs)


def size_report(q: QbfInstance) -> dict:
    pm = build_model(q)
    return {"n": q.n, "k": q.k, "worlds": len(pm.model.worlds),
            "formula_size": f_size(build_formula(q))}
