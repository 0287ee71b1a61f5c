"""Cardinality thresholds and state descriptions over relation-free models."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .fol import FAnd, FNeg, Fol, PredApp
from .formula import BOT, TOP, And, Exists, Formula, Neg, Prop, Remove, conj
from .sweep import Family


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class LocalStateDescription:
    """Sign of every declared predicate, in declaration order."""
    signs: tuple   # ((predicate, bool), ...)

    @property
    def predicates(self) -> tuple:
        return tuple(p for p, _ in self.signs)

    def holds_at(self, model, w: str) -> bool:
        return all((w in model.valuation.get(p, ())) == s for p, s in self.signs)

    def __str__(self) -> str:
        return "".join(("+" if s else "-") + p for p, s in self.signs)


_SD_TOKEN = re.compile(r"([+-])([A-Za-z_][A-Za-z0-9_]*)")


def parse_sd(text: str) -> LocalStateDescription:
    """Parse e.g. "+P1-P2"."""
    text = text.replace(" ", "")
    pos, signs = 0, []
    for m in _SD_TOKEN.finditer(text):
        if m.start() != pos:
            break
        signs.append((m.group(2), m.group(1) == "+"))
        pos = m.end()
    if pos != len(text) or not signs:
        raise CountingError(f"cannot read state description {text!r}")
    if len({p for p, _ in signs}) != len(signs):
        raise CountingError("predicate repeated in state description")
    return LocalStateDescription(tuple(signs))


def all_sds(preds: Sequence[str]) -> list:
    return [LocalStateDescription(tuple(zip(preds, bits)))
            for bits in itertools.product((True, False), repeat=len(preds))]


def sd_formula(sd: LocalStateDescription) -> Formula:
    return conj([Prop(p) if s else Neg(Prop(p)) for p, s in sd.signs])


def sd_to_fol(sd: LocalStateDescription, var: str = "x") -> Fol:
    lits = [PredApp(p, var) if s else FNeg(PredApp(p, var)) for p, s in sd.signs]
    return lits[0] if len(lits) == 1 else FAnd(tuple(lits))


def at_least(m: int, sd: LocalStateDescription) -> Formula:
    """True anywhere in a model with at least m points satisfying sd."""
    if m < 0:
        raise CountingError("m must be non-negative")
    if m == 0:
        return TOP
    f: Formula = Exists(sd_formula(sd))
    for _ in range(m - 1):
        f = Remove(sd_formula(sd), f)
    return f


@dataclass(frozen=True)
class Count:
    exact: bool   # Exactly(m) if true, AtLeast(m) otherwise
    m: int

    def formula(self, sd: LocalStateDescription) -> Formula:
        if self.exact:
            if self.m == 0:
                return Neg(Exists(sd_formula(sd)))
            return And(at_least(self.m, sd), Neg(at_least(self.m + 1, sd)))
        return at_least(self.m, sd)

    def admits(self, n: int) -> bool:
        return n == self.m if self.exact else n >= self.m

    def incremented(self) -> "Count":
        return Count(self.exact, self.m + 1)

    def __str__(self) -> str:
        return f"{'Exactly' if self.exact else 'AtLeast'}({self.m})"


def Exactly(m: int) -> Count:
    return Count(True, m)


def AtLeast(m: int) -> Count:
    return Count(False, m)


@dataclass(frozen=True)
class GlobalStateDescription:
    threshold: int
    entries: tuple   # ((LocalStateDescription, Count), ...)

    def __post_init__(self):
        sds = [sd for sd, _ in self.entries]
        if len(set(sds)) != len(sds):
            raise CountingError("one entry per local state description")
        preds = {sd.predicates for sd in sds}
        if len(preds) > 1:
            raise CountingError("entries disagree on the declared predicates")
        if preds and len(sds) != 2 ** len(next(iter(preds))):
            raise CountingError("every local state description needs an entry")

    def count(self, sd: LocalStateDescription) -> Count:
        return dict(self.entries)[sd]

    def replace(self, sd: LocalStateDescription, c: Count) -> "GlobalStateDescription":
        entries = tuple((k, c if k == sd else v) for k, v in self.entries)
        top = max([self.threshold] + [v.m + 1 for _, v in entries if v.exact])
        return GlobalStateDescription(top, entries)

    def holds_in(self, model) -> bool:
        return all(c.admits(sum(sd.holds_at(model, w) for w in model.worlds))
                   for sd, c in self.entries)


def all_gsds(preds: Sequence[str], threshold: int) -> Iterator[GlobalStateDescription]:
    sds = all_sds(preds)
    options = [Exactly(m) for m in range(threshold)] + [AtLeast(threshold)]
    for combo in itertools.product(options, repeat=len(sds)):
        yield GlobalStateDescription(threshold, tuple(zip(sds, combo)))


def global_formula(gsd: GlobalStateDescription) -> Formula:
    return conj([c.formula(sd) for sd, c in gsd.entries
                 if not (not c.exact and c.m == 0)])


def rewrite_pull_out(sd: LocalStateDescription, gsd: GlobalStateDescription,
                     inner: Formula) -> Formula:
    """Equivalent of <-(sd & SD)>inner with the global part pulled out."""
    return And(global_formula(gsd), Remove(sd_formula(sd), inner))


def consistent(sd_prime: LocalStateDescription, gsd: GlobalStateDescription) -> bool:
    """Can sd' & SD hold at all?  Not if SD says no point satisfies sd'."""
    return gsd.count(sd_prime) != Exactly(0)


def rewrite_increment(sd_i: LocalStateDescription, sd_prime: LocalStateDescription,
                      gsd: GlobalStateDescription, guard: bool = True) -> Formula:
    """Equivalent of <-sd_i>(sd' & SD): the i-th count goes up by one.

    When sd' & SD is contradictory the left side is unsatisfiable and the
    result is F; ``guard=False`` skips that case split (the bare rewrite
    then fails when the current point is the only sd_i point).
    """
    if guard and not consistent(sd_prime, gsd):
        return BOT
    bumped = gsd.replace(sd_i, gsd.count(sd_i).incremented())
    return And(sd_formula(sd_prime), global_formula(bumped))


def increment_lhs(sd_i, sd_prime, gsd) -> Formula:
    return Remove(sd_formula(sd_i), And(sd_formula(sd_prime), global_formula(gsd)))


# -- exhaustive verification ----------------------------------------------

def families(max_worlds: int = 4, preds: Sequence[str] = ("P1", "P2")) -> list:
    return [Family(n, props=preds, labels=()) for n in range(1, max_worlds + 1)]


def _ext(fam: Family, f: Formula) -> np.ndarray:
    return fam.all_extents(f)


def _counts(fam: Family, sd: LocalStateDescription) -> np.ndarray:
    ext = _ext(fam, sd_formula(sd))
    return np.unpackbits(ext[:, None], axis=1).sum(axis=1)


def check_at_least(max_worlds: int = 4, preds: Sequence[str] = ("P1", "P2"),
                   max_m: int = 5) -> list:
    """Every failure of at_least against exact counting (empty list = pass)."""
    fails = []
    for p_count in range(1, len(preds) + 1):
        ps = tuple(preds[:p_count])
        for fam in families(max_worlds, ps):
            for sd in all_sds(ps):
                counts = _counts(fam, sd)
                for m in range(max_m + 1):
                    ext = _ext(fam, at_least(m, sd))
                    want = np.where(counts >= m, fam.full, 0).astype(np.uint8)
                    bad = np.nonzero(ext != want)[0]
                    if len(bad):
                        fails.append(("at_least", fam.n, str(sd), m, int(bad[0])))
    return fails


def inner_sample(preds: Sequence[str], threshold: int, size: int = 12,
                 seed: int = 0) -> list:
    import random

    rng = random.Random(seed)
    gsds = list(all_gsds(preds, threshold))
    sds = all_sds(preds)
    return [(rng.choice(sds), rng.choice(gsds)) for _ in range(size)]


def check_rewrites(max_worlds: int = 4, preds: Sequence[str] = ("P1", "P2"),
                   threshold: int = 2, inner_size: int = 12, seed: int = 0,
                   guard: bool = True) -> list:
    """Failures of the two rewrite equivalences over all relation-free
    models in scope (empty list = pass)."""
    fails = []
    fams = families(max_worlds, preds)
    sds = all_sds(preds)
    gsds = list(all_gsds(preds, threshold))
    inners = inner_sample(preds, threshold, inner_size, seed)
    for fam in fams:
        for sd in sds:
            for gsd in gsds:
                for sdp, gsdp in inners:
                    inner = And(sd_formula(sdp), global_formula(gsdp))
                    lhs = Remove(And(sd_formula(sd), global_formula(gsd)), inner)
                    rhs = rewrite_pull_out(sd, gsd, inner)
                    if not np.array_equal(_ext(fam, lhs), _ext(fam, rhs)):
                        fails.append(("pull_out", fam.n, str(sd), gsd, str(sdp), gsdp))
        for sd_i in sds:
            for sdp in sds:
                for gsd in gsds:
                    lhs = increment_lhs(sd_i, sdp, gsd)
                    rhs = rewrite_increment(sd_i, sdp, gsd, guard=guard)
                    if not np.array_equal(_ext(fam, lhs), _ext(fam, rhs)):
                        fails.append(("increment", fam.n, str(sd_i), str(sdp), gsd))
    return fails
