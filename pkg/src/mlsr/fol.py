"""First-order target language and the standard translation.

The translation keeps track of the points removed so far (as variables
that every later quantifier must avoid) and of the announcements made so
far (as guards that every later quantifier must satisfy).  ``fol_eval``
is a plain Tarskian evaluator used as an independent oracle for the
modal checker.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .formula import (
    Announce, Diamond, Exists as MExists, Formula, Neg as MNeg, Nominal, Or as MOr,
    Prop, Remove, Top, expand,
)
from .kripke import Model


class FolError(ValueError):
    pass


class Fol:
    __slots__ = ()

    def __str__(self) -> str:
        return fol_text(self)


@dataclass(frozen=True)
class PredApp(Fol):
    pred: str
    var: str


@dataclass(frozen=True)
class NomApp(Fol):
    nominal: str
    var: str


@dataclass(frozen=True)
class RelApp(Fol):
    label: str
    left: str
    right: str


@dataclass(frozen=True)
class Eq(Fol):
    left: str
    right: str


@dataclass(frozen=True)
class FNeg(Fol):
    sub: Fol


@dataclass(frozen=True)
class FAnd(Fol):
    args: tuple


@dataclass(frozen=True)
class FOr(Fol):
    args: tuple


@dataclass(frozen=True)
class FExists(Fol):
    var: str
    body: Fol


def f_and(*parts: Fol) -> Fol:
    flat = []
    for p in parts:
        flat.extend(p.args if isinstance(p, FAnd) else (p,))
    return flat[0] if len(flat) == 1 else FAnd(tuple(flat))


def f_forall(var: str, body: Fol) -> Fol:
    return FNeg(FExists(var, FNeg(body)))


# -- translation -----------------------------------------------------------

Guard = Optional[Callable[[str], Fol]]


class _Translator:
    def __init__(self, start: int = 1):
        self.counter = start

    def fresh(self) -> str:
        v = f"v{self.counter}"
        self.counter += 1
        return v

    def domain(self, z: str, removed: tuple, guard: Guard) -> list:
        parts = [FNeg(Eq(z, x)) for x in removed]
        if guard is not None:
            parts.append(guard(z))
        return parts

    def tr(self, f: Formula, y: str, removed: tuple, guard: Guard) -> Fol:
        if isinstance(f, Prop):
            return PredApp(f.name, y)
        if isinstance(f, Nominal):
            return NomApp(f.name, y)
        if isinstance(f, Top):
            return Eq(y, y)
        if isinstance(f, MNeg):
            return FNeg(self.tr(f.sub, y, removed, guard))
        if isinstance(f, MOr):
            return FOr((self.tr(f.left, y, removed, guard),
                        self.tr(f.right, y, removed, guard)))
        if isinstance(f, Diamond):
            z = self.fresh()
            return FExists(z, f_and(RelApp(f.label, y, z),
                                    *self.domain(z, removed, guard),
                                    self.tr(f.sub, z, removed, guard)))
        if isinstance(f, Remove):
            z = self.fresh()
            return FExists(z, f_and(FNeg(Eq(z, y)),
                                    *self.domain(z, removed, guard),
                                    self.tr(f.pre, z, removed, guard),
                                    self.tr(f.post, y, removed + (z,), guard)))
        if isinstance(f, MExists):
            z = self.fresh()
            return FExists(z, f_and(*self.domain(z, removed, guard),
                                    self.tr(f.sub, z, removed, guard)))
        if isinstance(f, Announce):
            pre = f.pre

            def inner(z: str, _pre=pre, _removed=removed, _guard=guard) -> Fol:
                return self.tr(_pre, z, _removed, _guard)

            if guard is None:
                new_guard = inner
            else:
                def new_guard(z: str, _g=guard, _i=inner) -> Fol:
                    return f_and(_g(z), _i(z))
            return f_and(self.tr(pre, y, removed, guard),
                         self.tr(f.post, y, removed, new_guard))
        raise TypeError(f"unexpected node {f!r}")


def translate(f: Formula, var: str = "y") -> Fol:
    """Translate into FOL with one free variable ``var``."""
    return _Translator().tr(expand(f), var, (), None)


# -- evaluation ------------------------------------------------------------

def free_vars(f: Fol) -> set:
    if isinstance(f, (PredApp, NomApp)):
        return {f.var}
    if isinstance(f, RelApp):
        return {f.left, f.right}
    if isinstance(f, Eq):
        return {f.left, f.right}
    if isinstance(f, FNeg):
        return free_vars(f.sub)
    if isinstance(f, (FAnd, FOr)):
        out = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, FExists):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a FOL formula: {f!r}")


def fol_eval(m: Model, assignment: Mapping[str, str], f: Fol) -> bool:
    missing = free_vars(f) - set(assignment)
    if missing:
        raise FolError(f"unbound free variables: {sorted(missing)}")
    for v, w in assignment.items():
        if w not in m.worlds:
            raise FolError(f"variable {v} assigned to unknown world {w!r}")
    domain = sorted(m.worlds)
    rels = m.relations
    val = m.valuation
    noms = m.nominals

    def ev(g: Fol, env: dict) -> bool:
        if isinstance(g, PredApp):
            return env[g.var] in val.get(g.pred, ())
        if isinstance(g, NomApp):
            return noms.get(g.nominal) == env[g.var]
        if isinstance(g, RelApp):
            return (env[g.left], env[g.right]) in rels.get(g.label, ())
        if isinstance(g, Eq):
            return env[g.left] == env[g.right]
        if isinstance(g, FNeg):
            return not ev(g.sub, env)
        if isinstance(g, FAnd):
            return all(ev(a, env) for a in g.args)
        if isinstance(g, FOr):
            return any(ev(a, env) for a in g.args)
        if isinstance(g, FExists):
            saved = env.get(g.var)
            try:
                for w in domain:
                    env[g.var] = w
                    if ev(g.body, env):
                        return True
                return False
            finally:
                if saved is None:
                    env.pop(g.var, None)
                else:
                    env[g.var] = saved
        raise TypeError(f"not a FOL formula: {g!r}")

    return ev(f, dict(assignment))


def translation_equivalent(m: Model, s: str, f: Formula) -> bool:
    from .checker import check

    m.require_point(s)
    return check(m, s, f) == fol_eval(m, {"y": s}, translate(f))


# -- size and binding ------------------------------------------------------

def fol_size(f: Fol) -> int:
    if isinstance(f, (PredApp, NomApp, RelApp, Eq)):
        return 1
    if isinstance(f, FNeg):
        return 1 + fol_size(f.sub)
    if isinstance(f, (FAnd, FOr)):
        return len(f.args) - 1 + sum(fol_size(a) for a in f.args)
    if isinstance(f, FExists):
        return 1 + fol_size(f.body)
    raise TypeError(f"not a FOL formula: {f!r}")


def bound_vars(f: Fol) -> list:
    """Every binding occurrence, in order (duplicates kept)."""
    out = []

    def walk(g):
        if isinstance(g, FNeg):
            walk(g.sub)
        elif isinstance(g, (FAnd, FOr)):
            for a in g.args:
                walk(a)
        elif isinstance(g, FExists):
            out.append(g.var)
            walk(g.body)

    walk(f)
    return out


# -- text form -------------------------------------------------------------
# Prefix s-expressions:
#   (P p x) (N n x) (R r x y) (= x y) (not f) (and f ...) (or f ...)
#   (exists x f) and, on input only, (forall x f).

def fol_text(f: Fol) -> str:
    if isinstance(f, PredApp):
        return f"(P {f.pred} {f.var})"
    if isinstance(f, NomApp):
        return f"(N {f.nominal} {f.var})"
    if isinstance(f, RelApp):
        return f"(R {f.label} {f.left} {f.right})"
    if isinstance(f, Eq):
        return f"(= {f.left} {f.right})"
    if isinstance(f, FNeg):
        return f"(not {fol_text(f.sub)})"
    if isinstance(f, FAnd):
        return "(and " + " ".join(fol_text(a) for a in f.args) + ")"
    if isinstance(f, FOr):
        return "(or " + " ".join(fol_text(a) for a in f.args) + ")"
    if isinstance(f, FExists):
        return f"(exists {f.var} {fol_text(f.body)})"
    raise TypeError(f"not a FOL formula: {f!r}")


_SEXP_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def parse_fol(text: str) -> Fol:
    toks = [m.group(1) for m in _SEXP_TOKEN.finditer(text) if m.group(1)]
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks):
            raise FolError("unexpected end of FOL input")
        if toks[pos] != "(":
            raise FolError(f"expected '(' but found {toks[pos]!r}")
        pos += 1
        if pos >= len(toks):
            raise FolError("unexpected end of FOL input")
        head = toks[pos]
        pos += 1
        args = []
        while pos < len(toks) and toks[pos] != ")":
            args.append(expr() if toks[pos] == "(" else _atom())
        if pos >= len(toks):
            raise FolError("missing ')'")
        pos += 1
        return _build(head, args)

    def _atom():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    out = expr()
    if pos != len(toks):
        raise FolError("trailing tokens after FOL formula")
    return out


def _build(head: str, args: list) -> Fol:
    def names(k):
        if len(args) != k or not all(isinstance(a, str) for a in args):
            raise FolError(f"({head} ...) expects {k} names")
        return args

    def subs(lo):
        if len(args) < lo or not all(isinstance(a, Fol) for a in args):
            raise FolError(f"({head} ...) expects at least {lo} formulas")
        return args

    if head == "P":
        return PredApp(*names(2))
    if head == "N":
        return NomApp(*names(2))
    if head == "R":
        return RelApp(*names(3))
    if head == "=":
        return Eq(*names(2))
    if head == "not":
        return FNeg(subs(1)[0]) if len(args) == 1 else _bad(head)
    if head == "and":
        a = subs(1)
        return a[0] if len(a) == 1 else FAnd(tuple(a))
    if head == "or":
        a = subs(1)
        return a[0] if len(a) == 1 else FOr(tuple(a))
    if head in ("exists", "forall"):
        if len(args) != 2 or not isinstance(args[0], str) or not isinstance(args[1], Fol):
            raise FolError(f"({head} x f) expected")
        return FExists(args[0], args[1]) if head == "exists" else f_forall(args[0], args[1])
    raise FolError(f"unknown FOL head {head!r}")


def _bad(head):
    raise FolError(f"({head} ...) has the wrong arity")
