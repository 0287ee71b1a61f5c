"""Concrete instances of valid principles, plus one known non-validity.

Instances are kept small (one proposition letter, at most one nominal)
so that the exhaustive search over all models with up to four worlds
stays affordable.
"""
from __future__ import annotations

from .formula import (
    BOT, TOP, And, Announce, Box, Diamond, Exists, Formula, Iff, Implies, Neg,
    Nominal, Or, Prop, Remove, conj,
)
from .hilbert import SCHEMAS, instantiate

p = Prop("p")
n = Nominal("n")
dp = Diamond("r", p)
bp = Box("r", p)

AXIOM_INSTANCES = {
    "Taut": {"phi": Or(dp, Neg(dp))},
    "K-box": {"phi": p, "psi": dp},
    "K-U": {"phi": p, "psi": dp},
    "K-ann": {"alpha": dp, "phi": p, "psi": dp},
    "K-rem": {"alpha": p, "phi": dp, "psi": p},
    "U-T": {"phi": dp},
    "U-4": {"phi": dp},
    "U-B": {"phi": dp},
    "U-Box": {"phi": p},
    "PAL-atom": {"phi": dp, "p": p},
    "PAL-nom": {"phi": dp, "n": n},
    "PAL-top": {"phi": dp},
    "PAL-neg": {"phi": dp, "psi": bp},
    "PAL-or": {"phi": dp, "psi": p, "alpha": dp},
    "PAL-dia": {"phi": p, "psi": dp},
    "PAL-comp": {"phi": dp, "psi": p, "alpha": dp},
    "PAL-E": {"phi": dp, "psi": Neg(p)},
    "Truth": {"phi": dp},
    "H": {"n": n, "phi": dp},
    "Mix": {"n": n, "alpha": p, "phi": dp},
}


def _announce_all(pres, body: Formula) -> Formula:
    for a in reversed(pres):
        body = Announce(a, body)
    return body


def precondition(pres) -> Formula:
    """phi1 & <!phi1>phi2 & <!phi1><!phi2>phi3 & ..."""
    return conj([_announce_all(pres[:i], pres[i]) for i in range(len(pres))])


def _iterated(pres) -> dict:
    a, b = dp, Neg(p)
    ann = lambda body: _announce_all(pres, body)
    pre = precondition(pres)
    return {
        "update top": Iff(ann(TOP), pre),
        "update atom": Iff(ann(p), And(pre, p)),
        "update nominal": Iff(ann(n), And(pre, n)),
        "update negation": Iff(ann(Neg(a)), And(pre, Neg(ann(a)))),
        "update conjunction": Iff(ann(And(a, b)), And(ann(a), ann(b))),
        "update diamond": Iff(ann(Diamond("r", a)), And(pre, Diamond("r", ann(a)))),
    }


def valid_corpus() -> dict:
    out = {f"axiom {name}": instantiate(name, subst) for name, subst in AXIOM_INSTANCES.items()}
    assert set(AXIOM_INSTANCES) == set(SCHEMAS)
    out["distribution over removed disjunction"] = Iff(
        Remove(Or(dp, Neg(p)), dp), Or(Remove(dp, dp), Remove(Neg(p), dp)))
    out["distribution over remaining disjunction"] = Iff(
        Remove(p, Or(dp, Neg(p))), Or(Remove(p, dp), Remove(p, Neg(p))))
    out["announced formulas are true"] = Implies(Announce(dp, p), dp)
    out["removal distributes over a disjunctive target"] = Iff(
        Remove(Or(p, dp), bp), Or(Remove(p, bp), Remove(dp, bp)))
    out["removal captures E"] = Iff(Exists(dp), Or(dp, Remove(dp, TOP)))
    for name, f in _iterated([dp, p]).items():
        out[f"{name} (two updates)"] = f
    out["update top (three updates)"] = _iterated([dp, p, Diamond("r", TOP)])["update top"]
    out["nominal negation"] = Iff(Exists(And(n, Neg(dp))),
                                  And(Exists(n), Neg(Exists(And(n, dp)))))
    out["nominal collapse"] = Implies(n, Iff(Exists(And(n, dp)), dp))
    out["nominals name one point"] = Implies(n, Neg(Remove(n, TOP)))
    return out


def update_order_nonequivalence() -> Formula:
    """<!a><-phi>psi <-> a & <-<!a>phi><!a>psi for a=<>p, phi=[]F, psi=T."""
    a, phi, psi = dp, Box("r", BOT), TOP
    return Iff(Announce(a, Remove(phi, psi)), And(a, Remove(Announce(a, phi), Announce(a, psi))))
