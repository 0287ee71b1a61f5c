"""Derivation checker for the Hilbert system with announcement and removal.

A derivation is a list of lines, each a formula with a justification.
Formulas are compared after desugaring (``expand``), so abbreviations
such as U, [], -> and & are definitional.  The tautology schema accepts
any formula that is a propositional tautology when maximal modal
subformulas are treated as atoms.

The module also carries a proof builder with the usual derived routines
(monotonicity of diamonds, double-negation congruence, the stripped and
basic forms of the mix and paste rules) and uses it to produce the
corpus of worked derivations.
"""
from __future__ import annotations

import dataclasses
import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .checker import Evaluator
from .formula import (
    BOT, TOP, And, Announce, AnnBox, Box, Diamond, Exists, Formula, Iff, Implies,
    Neg, Nominal, Or, Prop, RemBox, Remove, Top, Univ, expand, labels as f_labels,
    nominals as f_nominals, parse, props as f_props, to_text,
)
from .kripke import Model, PointedModel, generate_random

FORMULA_METAS = ("phi", "psi", "alpha", "sigma")
NOMINAL_METAS = ("n", "m", "k")
PROP_METAS = ("p",)
HOLE = Prop("_")
DEFAULT_LABEL = "r"

SCHEMAS = {
    "Taut": "phi",
    "K-box": "[](phi->psi)->([]phi->[]psi)",
    "K-U": "U(phi->psi)->(U phi->U psi)",
    "K-ann": "[!alpha](phi->psi)->([!alpha]phi->[!alpha]psi)",
    "K-rem": "[-alpha](phi->psi)->([-alpha]phi->[-alpha]psi)",
    "U-T": "U phi->phi",
    "U-4": "U phi->U U phi",
    "U-B": "phi->U E phi",
    "U-Box": "U phi->[]phi",
    "PAL-atom": "<!phi>p<->phi&p",
    "PAL-nom": "<!phi>'n<->phi&'n",
    "PAL-top": "<!phi>T<->phi",
    "PAL-neg": "<!phi>~psi<->phi&~<!phi>psi",
    "PAL-or": "<!phi>(psi|alpha)<->(<!phi>psi|<!phi>alpha)",
    "PAL-dia": "<!phi><>psi<->phi&<><!phi>psi",
    "PAL-comp": "<!phi><!psi>alpha<-><!(phi&[!phi]psi)>alpha",
    "PAL-E": "<!phi>E psi<->phi&E<!phi>psi",
    "Truth": "<!T>phi<->phi",
    "H": "E('n&phi)->U('n->phi)",
    "Mix": "E('n&alpha)&<!~'n>phi-><-alpha>phi",
}
LABELLED = {"K-box", "U-Box", "PAL-dia"}


class ProofError(ValueError):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


# -- generic tree utilities -------------------------------------------------

def transform(f: Formula, fn: Callable[[Formula], Optional[Formula]]) -> Formula:
    """Bottom-up rebuild; ``fn`` may return a replacement for a node."""
    hit = fn(f)
    if hit is not None:
        return hit
    changes = {}
    for fld in dataclasses.fields(f):
        v = getattr(f, fld.name)
        if isinstance(v, Formula):
            nv = transform(v, fn)
            if nv is not v:
                changes[fld.name] = nv
    return dataclasses.replace(f, **changes) if changes else f


def relabel(f: Formula, label: str) -> Formula:
    if label == DEFAULT_LABEL:
        return f
    return transform(f, lambda g: dataclasses.replace(g, label=label,
                                                      sub=relabel(g.sub, label))
                     if isinstance(g, (Diamond, Box)) else None)


def _atoms(core: Formula, out: list) -> list:
    if isinstance(core, Neg):
        _atoms(core.sub, out)
    elif isinstance(core, Or):
        _atoms(core.left, out)
        _atoms(core.right, out)
    elif not isinstance(core, Top) and core not in out:
        out.append(core)
    return out


def propositional_atoms(f: Formula) -> list:
    return _atoms(expand(f), [])


_TAUT_CACHE: dict = {}


def is_tautology(f: Formula) -> bool:
    """Propositional validity with maximal modal subformulas as atoms."""
    core = expand(f)
    hit = _TAUT_CACHE.get(core)
    if hit is not None:
        return hit
    atoms = _atoms(core, [])
    index = {a: i for i, a in enumerate(atoms)}

    def tree(g):
        if isinstance(g, Neg):
            return ("not", tree(g.sub))
        if isinstance(g, Or):
            return ("or", tree(g.left), tree(g.right))
        if isinstance(g, Top):
            return True
        return index[g]

    def simp(t, var, val):
        if t is True or t is False:
            return t
        if isinstance(t, int):
            return val if t == var else t
        if t[0] == "not":
            s = simp(t[1], var, val)
            return (not s) if isinstance(s, bool) else ("not", s)
        a = simp(t[1], var, val)
        if a is True:
            return True
        b = simp(t[2], var, val)
        if b is True:
            return True
        if a is False:
            return b
        if b is False:
            return a
        return ("or", a, b)

    def first_var(t):
        if isinstance(t, bool):
            return None
        if isinstance(t, int):
            return t
        for sub in t[1:]:
            v = first_var(sub)
            if v is not None:
                return v
        return None

    def valid(t) -> bool:
        if isinstance(t, bool):
            return t
        v = first_var(t)
        return valid(simp(t, v, True)) and valid(simp(t, v, False))

    out = valid(tree(core))
    _TAUT_CACHE[core] = out
    return out


# -- schemas ------------------------------------------------------------------

def schema_template(name: str, label: str = DEFAULT_LABEL) -> Formula:
    if name not in SCHEMAS:
        raise ProofError("schema", f"unknown axiom schema {name!r}")
    t = parse(SCHEMAS[name])
    return relabel(t, label) if name in LABELLED else t


def metavariables(template: Formula) -> set:
    return ({p for p in f_props(template) if p in FORMULA_METAS + PROP_METAS}
            | {n for n in f_nominals(template) if n in NOMINAL_METAS})


def _coerce(value) -> Formula:
    return parse(value) if isinstance(value, str) else value


def instantiate(name: str, subst: dict, label: str = DEFAULT_LABEL) -> Formula:
    template = schema_template(name, label)
    metas = metavariables(template)
    subst = {k: _coerce(v) for k, v in subst.items()}
    missing = metas - set(subst)
    if missing:
        raise ProofError("schema", f"{name}: missing metavariables {sorted(missing)}")
    extra = set(subst) - metas
    if extra:
        raise ProofError("schema", f"{name}: unknown metavariables {sorted(extra)}")
    for k, v in subst.items():
        if k in NOMINAL_METAS and not isinstance(v, Nominal):
            raise ProofError("schema", f"{name}: {k} must be a nominal")
        if k in PROP_METAS and not isinstance(v, Prop):
            raise ProofError("schema", f"{name}: {k} must be a proposition letter")

    def fill(g):
        if isinstance(g, Prop) and g.name in metas:
            return subst[g.name]
        if isinstance(g, Nominal) and g.name in metas:
            return subst[g.name]
        return None

    out = transform(template, fill)
    if name == "Taut" and not is_tautology(out):
        raise ProofError("taut", f"not a propositional tautology: {to_text(out)}")
    return out


# -- matching -----------------------------------------------------------------

def match(pattern: Formula, target: Formula, binds: Optional[dict] = None,
          formula_metas=FORMULA_METAS, nominal_metas=()) -> Optional[dict]:
    """One-way matching of core formulas; metavariables bind subtrees."""
    binds = {} if binds is None else binds
    if isinstance(pattern, Prop) and pattern.name in formula_metas:
        prev = binds.get(pattern.name)
        if prev is None:
            binds[pattern.name] = target
            return binds
        return binds if prev == target else None
    if isinstance(pattern, Nominal) and pattern.name in nominal_metas:
        if not isinstance(target, Nominal):
            return None
        prev = binds.get(pattern.name)
        if prev is None:
            binds[pattern.name] = target
            return binds
        return binds if prev == target else None
    if type(pattern) is not type(target):
        return None
    for fld in dataclasses.fields(pattern):
        a, b = getattr(pattern, fld.name), getattr(target, fld.name)
        if isinstance(a, Formula):
            if match(a, b, binds, formula_metas, nominal_metas) is None:
                return None
        elif a != b:
            return None
    return binds


def _fill(template: Formula, binds: dict) -> Formula:
    return transform(template, lambda g: binds.get(g.name)
                     if isinstance(g, (Prop, Nominal)) and g.name in binds else None)


def _split_imp(core: Formula) -> Optional[tuple]:
    if isinstance(core, Or) and isinstance(core.left, Neg):
        return core.left.sub, core.right
    return None


_IFF_PATTERN = expand(Iff(Prop("phi"), Prop("psi")))


def _split_iff(core: Formula) -> Optional[tuple]:
    b = match(_IFF_PATTERN, core)
    return None if b is None else (b["phi"], b["psi"])


def _nominal(value) -> Nominal:
    f = _coerce(value)
    if not isinstance(f, Nominal):
        raise ProofError("shape", f"expected a nominal, got {value!r}")
    return f


def _fresh(nom: Nominal, *forms: Formula) -> bool:
    return all(nom.name not in f_nominals(f) for f in forms)


def _count_holes(f: Formula) -> int:
    if f == HOLE:
        return 1
    return sum(_count_holes(getattr(f, fld.name)) for fld in dataclasses.fields(f)
               if isinstance(getattr(f, fld.name), Formula))


# -- justifications ---------------------------------------------------------------

def derive(prev: list, by: dict) -> Formula:
    """Core formula licensed by ``by`` given earlier core lines ``prev``
    (1-based references).  Raises ProofError on any violation."""
    kind = by.get("kind")

    def ref(i) -> Formula:
        if not isinstance(i, int) or not 1 <= i <= len(prev):
            raise ProofError("reference", f"line reference {i!r} does not point to an earlier line")
        return prev[i - 1]

    if kind == "axiom":
        return expand(instantiate(by.get("name"), by.get("subst", {}),
                                  by.get("label", DEFAULT_LABEL)))
    if kind == "mp":
        src = by.get("from")
        if not isinstance(src, (list, tuple)) or len(src) != 2:
            raise ProofError("shape", "mp needs from: [antecedent line, implication line]")
        a, imp = ref(src[0]), ref(src[1])
        parts = _split_imp(imp)
        if parts is None or parts[0] != a:
            raise ProofError("shape", "mp: second line is not an implication from the first")
        return parts[1]
    if kind == "re":
        eq = _split_iff(ref(by.get("from")))
        if eq is None:
            raise ProofError("shape", "re: premise is not an equivalence")
        ctx = _coerce(by.get("context", "_"))
        if _count_holes(ctx) != 1:
            raise ProofError("shape", "re: context needs exactly one hole '_'")
        left = transform(ctx, lambda g: eq[0] if g == HOLE else None)
        right = transform(ctx, lambda g: eq[1] if g == HOLE else None)
        if by.get("flip"):
            left, right = right, left
        return expand(Iff(left, right))
    if kind == "nec":
        body = ref(by.get("from"))
        fam = by.get("family")
        if fam == "box":
            return expand(Box(by.get("label", DEFAULT_LABEL), body))
        if fam == "U":
            return expand(Univ(body))
        if fam in ("ann", "rem"):
            if "param" not in by:
                raise ProofError("shape", f"nec {fam} needs a param formula")
            param = _coerce(by["param"])
            return expand(AnnBox(param, body) if fam == "ann" else RemBox(param, body))
        raise ProofError("shape", f"unknown necessitation family {fam!r}")
    if kind == "name":
        m = _nominal(by.get("nominal"))
        parts = _split_imp(ref(by.get("from")))
        if parts is None or parts[0] != m:
            raise ProofError("shape", f"name: premise is not of the form {to_text(m)}->phi")
        if not _fresh(m, parts[1]):
            raise ProofError("freshness", f"name: {to_text(m)} occurs in the conclusion")
        return parts[1]
    if kind == "paste":
        n, m = _nominal(by.get("n")), _nominal(by.get("m"))
        nabla = by.get("nabla")
        if nabla == "dia":
            step = lambda x: Diamond(by.get("label", DEFAULT_LABEL), x)
        elif nabla == "E":
            step = Exists
        else:
            raise ProofError("shape", "paste: nabla must be 'dia' or 'E'")
        phi, sigma = Prop("phi"), Prop("sigma")
        pattern = expand(Implies(And(Exists(And(n, step(m))), Exists(And(m, phi))), sigma))
        b = match(pattern, ref(by.get("from")))
        if b is None:
            raise ProofError("shape", "paste: premise does not have the pasting shape")
        if m == n or not _fresh(m, b["phi"], b["sigma"]):
            raise ProofError("freshness", f"paste: {to_text(m)} is not fresh")
        return expand(Implies(Exists(And(n, step(b["phi"]))), b["sigma"]))
    if kind == "mix":
        k = _nominal(by.get("k"))
        n = Nominal("n")
        phi, alpha, psi, sigma = (Prop(x) for x in ("phi", "alpha", "psi", "sigma"))
        pattern = expand(Implies(
            Exists(And(n, Announce(phi, And(Exists(And(k, alpha)), Announce(Neg(k), psi))))),
            sigma))
        b = match(pattern, ref(by.get("from")), nominal_metas=("n",))
        if b is None:
            raise ProofError("shape", "mix: premise does not have the mixing shape")
        if b["n"] == k or not _fresh(k, b["phi"], b["alpha"], b["psi"], b["sigma"]):
            raise ProofError("freshness", f"mix: {to_text(k)} is not fresh")
        return expand(Implies(Exists(And(b["n"], Announce(b["phi"], Remove(b["alpha"], b["psi"])))),
                              b["sigma"]))
    raise ProofError("shape", f"unknown justification kind {kind!r}")


@dataclass
class Line:
    formula: Optional[Formula]
    by: dict


@dataclass
class Derivation:
    lines: list = field(default_factory=list)
    title: str = ""

    def to_json_obj(self) -> dict:
        out = []
        for ln in self.lines:
            item = {}
            if ln.formula is not None:
                item["formula"] = to_text(ln.formula)
            item["by"] = {k: (to_text(v) if isinstance(v, Formula) else v)
                          for k, v in ln.by.items()}
            if "subst" in ln.by:
                item["by"]["subst"] = {k: to_text(_coerce(v)) for k, v in ln.by["subst"].items()}
            out.append(item)
        obj = {"lines": out}
        if self.title:
            obj["title"] = self.title
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1) + "\n"

    @classmethod
    def from_json_obj(cls, obj) -> "Derivation":
        try:
            lines = []
            for item in obj["lines"]:
                by = dict(item["by"])
                f = parse(item["formula"]) if item.get("formula") is not None else None
                lines.append(Line(f, by))
        except (KeyError, TypeError) as exc:
            raise ProofError("shape", f"malformed derivation JSON: {exc}") from exc
        return cls(lines, obj.get("title", ""))

    @classmethod
    def loads(cls, text: str) -> "Derivation":
        try:
            return cls.from_json_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ProofError("shape", f"invalid JSON: {exc}") from exc


@dataclass
class CheckReport:
    ok: bool
    line: Optional[int] = None
    kind: str = ""
    message: str = ""
    theorem: Optional[Formula] = None

    def __bool__(self) -> bool:
        return self.ok


def check_derivation(d: Derivation) -> CheckReport:
    prev: list = []
    shown = None
    if not d.lines:
        return CheckReport(False, None, "shape", "empty derivation")
    for i, ln in enumerate(d.lines, start=1):
        try:
            got = derive(prev, ln.by)
        except ProofError as exc:
            return CheckReport(False, i, exc.kind, str(exc))
        except Exception as exc:   # malformed parameters inside a justification
            return CheckReport(False, i, "shape", f"{type(exc).__name__}: {exc}")
        if ln.formula is not None and expand(ln.formula) != got:
            return CheckReport(False, i, "mismatch",
                               f"stated formula differs from what the justification yields: "
                               f"{to_text(got)}")
        prev.append(got)
        shown = ln.formula if ln.formula is not None else got
    return CheckReport(True, None, "", "", shown)


# -- soundness spot check ------------------------------------------------------------

@dataclass
class SpotCheck:
    ok: bool
    trials: int
    countermodel: Optional[PointedModel] = None

    def __bool__(self) -> bool:
        return self.ok


def soundness_spotcheck(theorem: Formula, trials: int = 500, seed: int = 0,
                        max_worlds: int = 5, variants_cap: int = 64) -> SpotCheck:
    """Model-check ``theorem`` on random models, trying every denotation
    of its nominals (up to ``variants_cap`` per model)."""
    rng = random.Random(seed)
    props = sorted(f_props(theorem))
    labels = sorted(f_labels(theorem)) or [DEFAULT_LABEL]
    noms = sorted(f_nominals(theorem))
    for t in range(trials):
        n = rng.randint(1, max_worlds)
        base = generate_random(n, props, rng.random(), rng.randrange(1 << 30), labels=labels)
        worlds = sorted(base.worlds)
        variants = list(itertools.product(worlds + [None], repeat=len(noms)))
        if len(variants) > variants_cap:
            variants = rng.sample(variants, variants_cap)
        for choice in variants:
            m = Model(base.worlds, base.relations, base.valuation, dict(zip(noms, choice)))
            ev = Evaluator(m, cache=True)
            for w in worlds:
                if not ev.holds(theorem, m.worlds, w):
                    return SpotCheck(False, t + 1, PointedModel(m, w))
    return SpotCheck(True, trials)


# -- proof builder ---------------------------------------------------------------------

def _dn_normal(f: Formula) -> Formula:
    def strip(g):
        if isinstance(g, Neg) and isinstance(g.sub, Neg):
            return transform(g.sub.sub, strip)
        return None
    return transform(f, strip)


class Builder:
    """Appends checked lines; every method returns a 1-based line number."""

    def __init__(self, title: str = ""):
        self.title = title
        self.lines: list = []
        self.core: list = []
        self.index: dict = {}

    # basic steps

    def add(self, by: dict, formula: Optional[Formula] = None) -> int:
        got = derive(self.core, by)
        if formula is not None and expand(formula) != got:
            raise ProofError("mismatch", f"claimed {to_text(formula)} but got {to_text(got)}")
        if got in self.index:
            return self.index[got]
        self.lines.append(Line(formula, by))
        self.core.append(got)
        self.index[got] = len(self.core)
        return len(self.core)

    def f(self, i: int) -> Formula:
        ln = self.lines[i - 1]
        return ln.formula if ln.formula is not None else self.core[i - 1]

    def axiom(self, name: str, label: str = DEFAULT_LABEL, **subst) -> int:
        by = {"kind": "axiom", "name": name, "subst": subst}
        if label != DEFAULT_LABEL:
            by["label"] = label
        return self.add(by, instantiate(name, subst, label))

    def taut(self, g: Formula) -> int:
        return self.add({"kind": "axiom", "name": "Taut", "subst": {"phi": g}}, g)

    def mp(self, i: int, j: int, claim: Optional[Formula] = None) -> int:
        if claim is None:
            imp = self.f(j)
            claim = imp.right if isinstance(imp, Implies) else None
        return self.add({"kind": "mp", "from": [i, j]}, claim)

    def re(self, i: int, context: Formula, flip: bool = False) -> int:
        eq = self.f(i)
        claim = None
        if isinstance(eq, Iff):
            left = transform(context, lambda g: eq.left if g == HOLE else None)
            right = transform(context, lambda g: eq.right if g == HOLE else None)
            claim = Iff(right, left) if flip else Iff(left, right)
        by = {"kind": "re", "from": i, "context": context}
        if flip:
            by["flip"] = True
        return self.add(by, claim)

    def nec(self, i: int, family: str, param: Optional[Formula] = None,
            label: str = DEFAULT_LABEL) -> int:
        body = self.f(i)
        by = {"kind": "nec", "from": i, "family": family}
        if family == "box":
            claim = Box(label, body)
            if label != DEFAULT_LABEL:
                by["label"] = label
        elif family == "U":
            claim = Univ(body)
        else:
            by["param"] = param
            claim = AnnBox(param, body) if family == "ann" else RemBox(param, body)
        return self.add(by, claim)

    def name(self, i: int, m: Nominal) -> int:
        imp = self.f(i)
        return self.add({"kind": "name", "from": i, "nominal": m},
                        imp.right if isinstance(imp, Implies) else None)

    def paste(self, i: int, n: Nominal, m: Nominal, nabla: str,
              claim: Optional[Formula] = None) -> int:
        return self.add({"kind": "paste", "from": i, "n": n, "m": m, "nabla": nabla}, claim)

    def mix(self, i: int, k: Nominal, claim: Optional[Formula] = None) -> int:
        return self.add({"kind": "mix", "from": i, "k": k}, claim)

    # propositional reasoning

    def prop(self, goal: Formula, *premises: int) -> int:
        """``goal`` from premises by propositional logic, after identifying
        modal atoms that differ only by double negations."""
        chain = goal
        for i in reversed(premises):
            chain = Implies(self.f(i), chain)
        if not is_tautology(chain):
            extra = self._dn_bridges([goal] + [self.f(i) for i in premises])
            if not extra:
                raise ProofError("taut", f"not propositionally derivable: {to_text(goal)}")
            return self.prop(goal, *premises, *extra)
        j = self.taut(chain)
        for i in premises:
            j = self.mp(i, j)
        return j

    def _dn_bridges(self, forms: list) -> list:
        atoms: list = []
        for g in forms:
            _atoms(expand(g), atoms)
        groups: dict = {}
        for a in atoms:
            groups.setdefault(_dn_normal(a), []).append(a)
        out = []
        for members in groups.values():
            rep = members[0]
            for other in members[1:]:
                out.append(self.congruence(other, rep))
        return out

    def congruence(self, a: Formula, b: Formula) -> int:
        """a<->b for core modal atoms equal up to double negations."""
        if type(a) is not type(b):
            raise ProofError("taut", "atoms of different shape")
        names = [fld.name for fld in dataclasses.fields(a)
                 if isinstance(getattr(a, fld.name), Formula)]
        steps = []
        cur = a
        for nm in names:
            x, y = getattr(cur, nm), getattr(b, nm)
            if x == y:
                continue
            inner = self.prop(Iff(x, y))
            ctx = dataclasses.replace(cur, **{nm: HOLE})
            steps.append(self.re(inner, ctx))
            cur = dataclasses.replace(cur, **{nm: y})
        return self.prop(Iff(a, b), *steps)

    # modal monotonicity

    def box_mono(self, i: int, family: str, param: Optional[Formula] = None,
                 label: str = DEFAULT_LABEL) -> int:
        imp = self.f(i)
        a, b = imp.left, imp.right
        n = self.nec(i, family, param, label)
        if family == "box":
            k = self.axiom("K-box", label=label, phi=a, psi=b)
        elif family == "U":
            k = self.axiom("K-U", phi=a, psi=b)
        elif family == "ann":
            k = self.axiom("K-ann", alpha=param, phi=a, psi=b)
        else:
            k = self.axiom("K-rem", alpha=param, phi=a, psi=b)
        return self.mp(n, k)

    def dia_mono(self, i: int, family: str, param: Optional[Formula] = None,
                 label: str = DEFAULT_LABEL) -> int:
        """From A->B infer <op>A-><op>B."""
        imp = self.f(i)
        a, b = imp.left, imp.right
        contra = self.prop(Implies(Neg(b), Neg(a)), i)
        boxed = self.box_mono(contra, family, param, label)
        wrap = {"box": lambda x: Diamond(label, x), "U": Exists,
                "ann": lambda x: Announce(param, x), "rem": lambda x: Remove(param, x)}[family]
        return self.prop(Implies(wrap(a), wrap(b)), boxed)

    def e_mono(self, i: int) -> int:
        return self.dia_mono(i, "U")

    def e_intro(self, chi: Formula) -> int:
        """chi -> E chi."""
        t = self.axiom("U-T", phi=Neg(chi))
        return self.prop(Implies(chi, Exists(chi)), t)

    def e_refute(self, i: int) -> int:
        """From chi -> F infer E chi -> F."""
        chi = self.f(i).left
        neg = self.prop(Neg(chi), i)
        u = self.nec(neg, "U")
        return self.prop(Implies(Exists(chi), BOT), u)

    def e_or_split(self, a: Formula, b: Formula) -> int:
        """E(a|b) -> Ea|Eb."""
        t = self.taut(Implies(Neg(a), Implies(Neg(b), Neg(Or(a, b)))))
        first = self.box_mono(t, "U")
        k = self.axiom("K-U", phi=Neg(b), psi=Neg(Or(a, b)))
        return self.prop(Implies(Exists(Or(a, b)), Or(Exists(a), Exists(b))), first, k)

    def nominal_collapse(self, n: Nominal, chi: Formula) -> int:
        """n -> (E(n & chi) <-> chi)."""
        h = self.axiom("H", n=n, phi=chi)
        t = self.axiom("U-T", phi=Implies(n, chi))
        e = self.e_intro(And(n, chi))
        return self.prop(Implies(n, Iff(Exists(And(n, chi)), chi)), h, t, e)

    # derived rules

    def stripped_mix(self, i: int, k: Nominal, n: Nominal) -> int:
        """From <!phi>(E(k&alpha)&<!~k>psi) -> sigma infer <!phi><-alpha>psi -> sigma."""
        imp = self.f(i)
        ann, sigma = imp.left, imp.right
        phi, body = ann.pre, ann.post
        alpha, psi = body.left.sub.right, body.right.post
        a = self.prop(Implies(And(n, ann), sigma), i)
        c1 = self.nominal_collapse(n, ann)
        b = self.prop(Implies(Exists(And(n, ann)), Implies(n, sigma)), a, c1)
        target = Announce(phi, Remove(alpha, psi))
        d = self.mix(b, k, Implies(Exists(And(n, target)), Implies(n, sigma)))
        c2 = self.nominal_collapse(n, target)
        g = self.prop(Implies(n, Implies(target, sigma)), d, c2)
        return self.name(g, n)

    def basic_mix(self, i: int, k: Nominal, n: Nominal) -> int:
        """From (E(k&alpha)&<!~k>psi) -> sigma infer <-alpha>psi -> sigma."""
        imp = self.f(i)
        body, sigma = imp.left, imp.right
        alpha, psi = body.left.sub.right, body.right.post
        t1 = self.axiom("Truth", phi=body)
        a = self.prop(Implies(Announce(TOP, body), sigma), i, t1)
        s = self.stripped_mix(a, k, n)
        t2 = self.axiom("Truth", phi=Remove(alpha, psi))
        return self.prop(Implies(Remove(alpha, psi), sigma), s, t2)

    def basic_paste(self, i: int, k: Nominal, n: Nominal) -> int:
        """From E(k&phi) -> sigma infer E phi -> sigma."""
        imp = self.f(i)
        phi, sigma = imp.left.sub.right, imp.right
        l2 = self.prop(Implies(imp.left, Implies(n, sigma)), i)
        l3 = self.prop(Implies(And(Exists(And(n, Exists(k))), imp.left), Implies(n, sigma)), l2)
        l4 = self.paste(l3, n, k, "E", Implies(Exists(And(n, Exists(phi))), Implies(n, sigma)))
        l5 = self.prop(Implies(And(n, Exists(And(n, Exists(phi)))), sigma), l4)
        c = self.nominal_collapse(n, Exists(phi))
        l6 = self.prop(Implies(And(n, Exists(phi)), sigma), l5, c)
        l7 = self.prop(Implies(n, Implies(Exists(phi), sigma)), l6)
        return self.name(l7, n)

    def announced_true(self, phi: Formula, alpha: Formula) -> int:
        """<!phi>alpha -> phi."""
        t = self.taut(Implies(alpha, TOP))
        mono = self.dia_mono(t, "ann", phi)
        top = self.axiom("PAL-top", phi=phi)
        return self.prop(Implies(Announce(phi, alpha), phi), mono, top)

    def derivation(self) -> Derivation:
        return Derivation(list(self.lines), self.title)


# -- corpus -------------------------------------------------------------------------

P, Q = Prop("p"), Prop("q")
N, K = Nominal("n"), Nominal("k")


def observation() -> Derivation:
    """'n -> ~<-'n>T."""
    b = Builder("observation")
    h = b.axiom("H", n=N, phi=K)
    t = b.axiom("U-T", phi=Implies(N, K))
    swap = b.e_mono(b.taut(Implies(And(K, N), And(N, K))))
    top = b.axiom("PAL-top", phi=Neg(K))
    x = And(Exists(And(K, N)), Announce(Neg(K), TOP))
    l6 = b.prop(Implies(And(N, x), BOT), h, t, swap, top)
    truth = b.axiom("Truth", phi=x)
    l8 = b.prop(Implies(And(N, Announce(TOP, x)), BOT), l6, truth)
    premise = b.e_refute(l8)
    mixed = b.mix(premise, K, Implies(Exists(And(N, Announce(TOP, Remove(N, TOP)))), BOT))
    truth2 = b.axiom("Truth", phi=Remove(N, TOP))
    eq = b.re(truth2, And(N, HOLE))
    inner = b.re(eq, Exists(HOLE))
    no_e = b.prop(Neg(Exists(And(N, Remove(N, TOP)))), mixed, inner)
    intro = b.e_intro(And(N, Remove(N, TOP)))
    b.prop(Implies(N, Neg(Remove(N, TOP))), no_e, intro)
    return b.derivation()


def announce_implies_pre() -> Derivation:
    """<!p>q -> p."""
    b = Builder("announce_implies_pre")
    b.announced_true(P, Q)
    return b.derivation()


def stripped_mix_instance() -> Derivation:
    """<!p><-q>T -> p, via the stripped mix rule."""
    b = Builder("stripped_mix")
    body = And(Exists(And(K, Q)), Announce(Neg(K), TOP))
    premise = b.announced_true(P, body)
    b.stripped_mix(premise, K, N)
    return b.derivation()


def basic_mix_instance() -> Derivation:
    """<-p>q -> E p, via the basic mix rule."""
    b = Builder("basic_mix")
    mono = b.e_mono(b.taut(Implies(And(K, P), P)))
    body = And(Exists(And(K, P)), Announce(Neg(K), Q))
    premise = b.prop(Implies(body, Exists(P)), mono)
    b.basic_mix(premise, K, N)
    return b.derivation()


def basic_paste_instance() -> Derivation:
    """E(p&q) -> E p, via the basic paste rule."""
    b = Builder("basic_paste")
    phi = And(P, Q)
    mono = b.e_mono(b.taut(Implies(And(K, phi), P)))
    b.basic_paste(mono, K, N)
    return b.derivation()


def remove_split_or() -> Derivation:
    """<-(p|q)><>p -> <-p><>p | <-q><>p."""
    b = Builder("remove_split_or")
    psi = Diamond("r", P)
    sigma = Or(Remove(P, psi), Remove(Q, psi))
    spread = b.e_mono(b.taut(Implies(And(K, Or(P, Q)), Or(And(K, P), And(K, Q)))))
    split = b.e_or_split(And(K, P), And(K, Q))
    mix_p = b.axiom("Mix", n=K, alpha=P, phi=psi)
    mix_q = b.axiom("Mix", n=K, alpha=Q, phi=psi)
    body = And(Exists(And(K, Or(P, Q))), Announce(Neg(K), psi))
    premise = b.prop(Implies(body, sigma), spread, split, mix_p, mix_q)
    b.basic_mix(premise, K, N)
    return b.derivation()


ALPHA_III = Diamond("r", P)


def exists_to_remove(alpha: Formula = ALPHA_III) -> Derivation:
    """E alpha -> alpha | <-alpha>T."""
    b = Builder("exists_to_remove")
    h = b.axiom("H", n=K, phi=alpha)
    t = b.axiom("U-T", phi=Implies(K, alpha))
    top = b.axiom("PAL-top", phi=Neg(K))
    mix = b.axiom("Mix", n=K, alpha=alpha, phi=TOP)
    premise = b.prop(Implies(Exists(And(K, alpha)), Or(alpha, Remove(alpha, TOP))),
                     h, t, top, mix)
    b.basic_paste(premise, K, N)
    return b.derivation()


def remove_to_exists(alpha: Formula = ALPHA_III) -> Derivation:
    """<-alpha>T -> E alpha."""
    b = Builder("remove_to_exists")
    mono = b.e_mono(b.taut(Implies(And(K, alpha), alpha)))
    body = And(Exists(And(K, alpha)), Announce(Neg(K), TOP))
    premise = b.prop(Implies(body, Exists(alpha)), mono)
    b.basic_mix(premise, K, N)
    return b.derivation()


CORPUS = {
    "observation": observation,
    "stripped_mix": stripped_mix_instance,
    "basic_mix": basic_mix_instance,
    "basic_paste": basic_paste_instance,
    "announce_implies_pre": announce_implies_pre,
    "remove_split_or": remove_split_or,
    "exists_to_remove": exists_to_remove,
    "remove_to_exists": remove_to_exists,
}


def corpus() -> dict:
    return {name: build() for name, build in CORPUS.items()}


def conclusion(d: Derivation) -> Formula:
    ln = d.lines[-1]
    if ln.formula is not None:
        return ln.formula
    return check_derivation(d).theorem


# -- mutations -------------------------------------------------------------------------

def alter_connective(f: Formula) -> Optional[Formula]:
    """Change the first binary connective met in pre-order."""
    swaps = {Implies: And, And: Or, Or: And, Iff: Implies}
    found = [False]

    def fn(g):
        if found[0]:
            return g
        t = type(g)
        if t in swaps:
            found[0] = True
            return swaps[t](g.left, g.right)
        return None

    out = transform(f, fn)
    return out if found[0] else None


def _refs(by: dict) -> list:
    src = by.get("from")
    if src is None:
        return []
    return list(src) if isinstance(src, (list, tuple)) else [src]


def mutations(d: Derivation) -> list:
    """Single-line mutants as (description, derivation) pairs."""
    out = []
    for idx, ln in enumerate(d.lines):
        def with_line(new: Line):
            lines = list(d.lines)
            lines[idx] = new
            return Derivation(lines, d.title)

        if ln.formula is not None:
            alt = alter_connective(ln.formula)
            if alt is not None:
                out.append((f"line {idx + 1}: connective", with_line(Line(alt, ln.by))))
        refs = _refs(ln.by)
        if ln.by.get("kind") == "mp" and refs[0] != refs[1]:
            by = dict(ln.by, **{"from": [refs[1], refs[0]]})
            out.append((f"line {idx + 1}: swapped mp premises", with_line(Line(ln.formula, by))))
        elif len(refs) == 1:
            shifted = refs[0] - 1 if refs[0] > 1 else refs[0] + 1
            by = dict(ln.by, **{"from": shifted})
            out.append((f"line {idx + 1}: premise index shifted", with_line(Line(ln.formula, by))))
        fresh_key = {"name": "nominal", "paste": "m", "mix": "k"}.get(ln.by.get("kind"))
        if fresh_key is not None:
            old = _coerce(ln.by[fresh_key])
            for other in sorted(_line_nominals(d) - {old.name}):
                by = dict(ln.by, **{fresh_key: Nominal(other)})
                out.append((f"line {idx + 1}: stale nominal {other}", with_line(Line(ln.formula, by))))
                break
    return out


def _line_nominals(d: Derivation) -> set:
    out = set()
    for ln in d.lines:
        if ln.formula is not None:
            out |= f_nominals(ln.formula)
    return out


def rename_nominal(d: Derivation, old: str, new: str) -> Derivation:
    """Rename a nominal everywhere (formulas, substitutions, parameters)."""
    def ren(v):
        if isinstance(v, str):
            v = parse(v) if v.startswith("'") or any(c in v for c in "()&|~<[") else v
        if isinstance(v, Formula):
            return transform(v, lambda g: Nominal(new) if g == Nominal(old) else None)
        if isinstance(v, dict):
            return {k: ren(x) for k, x in v.items()}
        return v

    lines = []
    for ln in d.lines:
        by = {k: (ren(v) if k not in ("kind", "name", "family", "nabla", "from", "label", "flip")
                  else v) for k, v in ln.by.items()}
        lines.append(Line(ren(ln.formula) if ln.formula is not None else None, by))
    return Derivation(lines, d.title)
