"""Model checking under point-deletion semantics.

Submodels are never materialised: an evaluation state is the original
model together with the frozenset of surviving worlds.  Deleting a point
or announcing a formula just shrinks that set, and a nominal whose world
has gone simply stops matching any surviving point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .formula import (
    And, AnnBox, Announce, At, Bot, Box, Diamond, Diff, Exists, Formula, Iff,
    Implies, Neg, Nominal, Or, Prop, RemBox, Remove, Top, Univ, labels as f_labels,
    nominals as f_nominals, props as f_props, to_text,
)
from .kripke import Model, ModelError, PointedModel, sort_worlds


@dataclass
class TraceNode:
    formula: str
    model: str
    point: str
    value: bool
    children: list

    def to_obj(self) -> dict:
        return {"formula": self.formula, "model": self.model, "point": self.point,
                "value": self.value, "children": [c.to_obj() for c in self.children]}

    def count(self) -> int:
        return 1 + sum(c.count() for c in self.children)


@dataclass
class CheckResult:
    value: bool
    trace: Optional[TraceNode] = None

    def __bool__(self):
        return self.value


def fingerprint(live: Iterable[str]) -> str:
    return "{" + ",".join(sort_worlds(live)) + "}"


class Evaluator:
    """Recursive evaluator over one fixed model."""

    def __init__(self, model: Model, cache: bool = False, trace: bool = False):
        self.model = model
        # fixed iteration order keeps traces and short-circuiting reproducible
        self.order = sort_worlds(model.worlds)
        rank = {w: i for i, w in enumerate(self.order)}
        self.succ = {lbl: {w: tuple(sorted(ts, key=rank.__getitem__)) for w, ts in m.items()}
                     for lbl, m in model.succ.items()}
        self.val = model.valuation
        self.noms = model.nominals
        self.cache: Optional[dict] = {} if cache else None
        self.tracing = trace
        self._frames: list = []
        self.last: Optional[TraceNode] = None

    def holds(self, f: Formula, live: frozenset, s: str) -> bool:
        if self.tracing:
            return self._traced(f, live, s)
        if self.cache is None:
            return self._eval(f, live, s)
        key = (id(f), live, s)
        hit = self.cache.get(key)
        if hit is None:
            hit = self._eval(f, live, s)
            self.cache[key] = hit
        return hit

    def _traced(self, f, live, s) -> bool:
        node = TraceNode(to_text(f), fingerprint(live), s, False, [])
        if self._frames:
            self._frames[-1].append(node)
        self._frames.append(node.children)
        try:
            node.value = self._eval(f, live, s)
        finally:
            self._frames.pop()
        self.last = node
        return node.value

    def _live(self, live: frozenset) -> list:
        return [t for t in self.order if t in live]

    def extent(self, f: Formula, live: frozenset) -> frozenset:
        return frozenset(t for t in self._live(live) if self.holds(f, live, t))

    def _eval(self, f: Formula, live: frozenset, s: str) -> bool:
        h = self.holds
        if isinstance(f, Prop):
            return s in self.val.get(f.name, ())
        if isinstance(f, Nominal):
            return self.noms.get(f.name) == s
        if isinstance(f, Top):
            return True
        if isinstance(f, Bot):
            return False
        if isinstance(f, Neg):
            return not h(f.sub, live, s)
        if isinstance(f, Or):
            return h(f.left, live, s) or h(f.right, live, s)
        if isinstance(f, And):
            return h(f.left, live, s) and h(f.right, live, s)
        if isinstance(f, Implies):
            return (not h(f.left, live, s)) or h(f.right, live, s)
        if isinstance(f, Iff):
            return h(f.left, live, s) == h(f.right, live, s)
        if isinstance(f, Diamond):
            succ = self.succ.get(f.label, {}).get(s, ())
            return any(t in live and h(f.sub, live, t) for t in succ)
        if isinstance(f, Box):
            succ = self.succ.get(f.label, {}).get(s, ())
            return all(t not in live or h(f.sub, live, t) for t in succ)
        if isinstance(f, Remove):
            return any(t != s and h(f.pre, live, t) and h(f.post, live - {t}, s)
                       for t in self._live(live))
        if isinstance(f, RemBox):
            return all(t == s or not h(f.pre, live, t) or h(f.post, live - {t}, s)
                       for t in self._live(live))
        if isinstance(f, Diff):
            return any(t != s and h(f.sub, live, t) for t in self._live(live))
        if isinstance(f, Announce):
            if not h(f.pre, live, s):
                return False
            return h(f.post, self.extent(f.pre, live), s)
        if isinstance(f, AnnBox):
            if not h(f.pre, live, s):
                return True
            return h(f.post, self.extent(f.pre, live), s)
        if isinstance(f, Exists):
            return any(h(f.sub, live, t) for t in self._live(live))
        if isinstance(f, Univ):
            return all(h(f.sub, live, t) for t in self._live(live))
        if isinstance(f, At):
            w = self.noms.get(f.nominal)
            return w is None or w not in live or h(f.sub, live, w)
        raise TypeError(f"not a formula: {f!r}")


def evaluate(m: Model, s: str, f: Formula, trace: bool = False,
             cache: bool = False) -> CheckResult:
    m.require_point(s)
    ev = Evaluator(m, cache=cache, trace=trace)
    value = ev.holds(f, m.worlds, s)
    return CheckResult(value, ev.last if trace else None)


def check(m: Model, s: str, f: Formula, cache: bool = False) -> bool:
    m.require_point(s)
    return Evaluator(m, cache=cache).holds(f, m.worlds, s)


def extent(m: Model, f: Formula, cache: bool = False) -> frozenset:
    """All worlds of ``m`` at which ``f`` holds."""
    return Evaluator(m, cache=cache).extent(f, m.worlds)


def valid_on(m: Model, f: Formula) -> bool:
    if not m.worlds:
        raise ModelError("validity on the empty model is not defined here")
    ev = Evaluator(m)
    return all(ev.holds(f, m.worlds, s) for s in m.worlds)


def find_countermodel(f: Formula, max_worlds: int, labels: Optional[Iterable[str]] = None,
                      props: Optional[Iterable[str]] = None,
                      nominals: Optional[Iterable[str]] = None) -> Optional[PointedModel]:
    """Bounded search for a pointed model falsifying ``f``.

    Signature defaults to what occurs in ``f``.  Returns the first
    countermodel in enumeration order (fewest worlds first) or None.
    Absence proves nothing beyond the bound.
    """
    from . import sweep

    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    labels = sorted(f_labels(f)) if labels is None else list(labels)
    props = sorted(f_props(f)) if props is None else list(props)
    nominals = sorted(f_nominals(f)) if nominals is None else list(nominals)
    for n in range(1, max_worlds + 1):
        fam = sweep.Family(n, props, labels, nominals)
        hit = fam.first_failure(f)
        if hit is not None:
            return hit
    return None
