"""SR-bisimulation by partition refinement.

States are triples (model index, surviving worlds, point).  Two states
end up in the same block iff they agree on proposition letters, match
each other's successors (per relation label) inside their own submodels,
and match each other's single-point removals: for every removable point
on one side there is one on the other side in the same block whose
removal leaves the two evaluation points in the same block again.

The greatest SR-bisimulation on a disjoint union is an equivalence
relation (identity, converse and composition of SR-bisimulations are
SR-bisimulations), so refining the trivial partition reaches it.  The
round-by-round history doubles as the source of distinguishing formulas.
"""
from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

from .formula import TOP, Diamond, Formula, Neg, Prop, Remove, conj, expand
from .kripke import Model, ModelError, PointedModel

DEFAULT_CAP = 8


class StateSpace:
    def __init__(self, models: Sequence[Model], cap: int = DEFAULT_CAP):
        for m in models:
            if not m.worlds:
                raise ModelError("bisimulation needs nonempty models")
            if len(m.worlds) > cap:
                raise ModelError(f"model has {len(m.worlds)} worlds, cap is {cap}")
        self.models = list(models)
        self.props = sorted({p for m in models for p in m.valuation})
        self.labels = sorted({lbl for m in models for lbl in m.relations})
        self.states: list = []
        self.index: dict = {}
        for mi, m in enumerate(self.models):
            ws = sorted(m.worlds)
            for k in range(len(ws), 0, -1):
                for live in combinations(ws, k):
                    live = frozenset(live)
                    for s in sorted(live):
                        self.index[(mi, live, s)] = len(self.states)
                        self.states.append((mi, live, s))
        self._build()
        self.history = self._refine()

    def _build(self) -> None:
        self.atoms, self.succ, self.removals = [], [], []
        for mi, live, s in self.states:
            m = self.models[mi]
            self.atoms.append(tuple(s in m.valuation.get(p, ()) for p in self.props))
            self.succ.append(tuple(
                tuple(self.index[(mi, live, t)] for t in sorted(m.successors(s, lbl)) if t in live)
                for lbl in self.labels))
            self.removals.append(tuple(
                (self.index[(mi, live, u)], self.index[(mi, live - {u}, s)])
                for u in sorted(live) if u != s))

    def _refine(self) -> list:
        colour = _renumber(self.atoms)
        history = [colour]
        while True:
            sigs = []
            for i in range(len(self.states)):
                modal = tuple(frozenset(colour[j] for j in succ) for succ in self.succ[i])
                rem = frozenset((colour[u], colour[d]) for u, d in self.removals[i])
                sigs.append((colour[i], modal, rem))
            new = _renumber(sigs)
            if max(new, default=-1) == max(colour, default=-1):
                return history
            colour = new
            history.append(colour)

    @property
    def colour(self) -> list:
        return self.history[-1]

    def root(self, mi: int, s: str) -> int:
        return self.index[(mi, self.models[mi].worlds, s)]

    def equivalent(self, i: int, j: int) -> bool:
        return self.colour[i] == self.colour[j]

    # -- distinguishing formulas -------------------------------------

    def distinguish(self, i: int, j: int) -> Optional[Formula]:
        """A formula true at state i and false at state j, or None."""
        if self.equivalent(i, j):
            return None
        memo: dict = {}
        return self._delta(i, j, memo)

    def _split_round(self, i: int, j: int) -> int:
        for r, col in enumerate(self.history):
            if col[i] != col[j]:
                return r
        raise AssertionError("states are not separated")

    def _delta(self, i: int, j: int, memo: dict) -> Formula:
        key = (i, j)
        if key in memo:
            return memo[key]
        r = self._split_round(i, j)
        if r == 0:
            out = self._atomic(i, j)
        else:
            out = self._step(i, j, self.history[r - 1], memo)
        memo[key] = out
        return out

    def _atomic(self, i: int, j: int) -> Formula:
        for p, a, b in zip(self.props, self.atoms[i], self.atoms[j]):
            if a != b:
                return Prop(p) if a else Neg(Prop(p))
        raise AssertionError("atoms agree")

    def _step(self, i: int, j: int, prev: list, memo: dict) -> Formula:
        for lbl, si, sj in zip(self.labels, self.succ[i], self.succ[j]):
            cj = {prev[b] for b in sj}
            for a in si:
                if prev[a] not in cj:
                    return Diamond(lbl, _conj_unique(self._delta(a, b, memo) for b in sj))
            ci = {prev[a] for a in si}
            for b in sj:
                if prev[b] not in ci:
                    return Neg(Diamond(lbl, _conj_unique(self._delta(b, a, memo) for a in si)))
        pairs_i = {(prev[u], prev[d]) for u, d in self.removals[i]}
        pairs_j = {(prev[v], prev[e]) for v, e in self.removals[j]}
        for u, d in self.removals[i]:
            if (prev[u], prev[d]) not in pairs_j:
                return self._removal(u, d, self.removals[j], prev, memo)
        for v, e in self.removals[j]:
            if (prev[v], prev[e]) not in pairs_i:
                return Neg(self._removal(v, e, self.removals[i], prev, memo))
        raise AssertionError("signatures agree")

    def _removal(self, u: int, d: int, others, prev: list, memo: dict) -> Formula:
        chi = _conj_unique(self._delta(u, v, memo) for v, _ in others if prev[v] != prev[u])
        psi = _conj_unique(self._delta(d, e, memo) for v, e in others if prev[v] == prev[u])
        return Remove(chi, psi)


def _renumber(sigs: list) -> list:
    ids: dict = {}
    return [ids.setdefault(s, len(ids)) for s in sigs]


def _conj_unique(parts) -> Formula:
    seen = []
    for p in parts:
        if p not in seen:
            seen.append(p)
    return conj(seen) if seen else TOP


def sr_bisimilar(pm: PointedModel, pn: PointedModel, cap: int = DEFAULT_CAP) -> bool:
    space = StateSpace([pm.model, pn.model], cap)
    return space.equivalent(space.root(0, pm.point), space.root(1, pn.point))


def distinguishing_formula(pm: PointedModel, pn: PointedModel,
                           cap: int = DEFAULT_CAP) -> Optional[Formula]:
    """A core formula true at ``pm`` and false at ``pn``; None if bisimilar."""
    space = StateSpace([pm.model, pn.model], cap)
    f = space.distinguish(space.root(0, pm.point), space.root(1, pn.point))
    return None if f is None else expand(f)
