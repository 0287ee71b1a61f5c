"""Seeded random formula generation for property tests and sweeps."""
from __future__ import annotations

import random
from typing import Sequence

from .formula import (
    TOP, And, AnnBox, Announce, At, Bot, Box, Diamond, Diff, Exists, Formula, Iff,
    Implies, Neg, Nominal, Or, Prop, RemBox, Remove, Univ,
)

CORE_OPS = ("neg", "or", "dia", "ann", "rem", "ex")
SUGAR_OPS = ("and", "imp", "iff", "box", "annbox", "rembox", "univ", "diff", "at")


def random_formula(rng: random.Random, depth: int, props: Sequence[str] = ("p", "q"),
                   noms: Sequence[str] = (), labels: Sequence[str] = ("r",),
                   ops: Sequence[str] = CORE_OPS, leaf_bias: float = 0.25) -> Formula:
    """A random formula of depth at most ``depth`` over the given operators."""
    if depth <= 0 or rng.random() < leaf_bias:
        pool = [Prop(p) for p in props] + [Nominal(n) for n in noms] + [TOP]
        if "bot" in ops:
            pool.append(Bot())
        return rng.choice(pool)
    op = rng.choice([o for o in ops if o != "bot"])
    sub = lambda: random_formula(rng, depth - 1, props, noms, labels, ops, leaf_bias)  # noqa: E731
    if op == "neg":
        return Neg(sub())
    if op == "or":
        return Or(sub(), sub())
    if op == "and":
        return And(sub(), sub())
    if op == "imp":
        return Implies(sub(), sub())
    if op == "iff":
        return Iff(sub(), sub())
    if op == "dia":
        return Diamond(rng.choice(labels), sub())
    if op == "box":
        return Box(rng.choice(labels), sub())
    if op == "ann":
        return Announce(sub(), sub())
    if op == "annbox":
        return AnnBox(sub(), sub())
    if op == "rem":
        return Remove(sub(), sub())
    if op == "rembox":
        return RemBox(sub(), sub())
    if op == "ex":
        return Exists(sub())
    if op == "univ":
        return Univ(sub())
    if op == "diff":
        return Diff(sub())
    if op == "at":
        return At(rng.choice(noms) if noms else "n", sub())
    raise ValueError(f"unknown operator {op!r}")
