"""Command-line entry point.

Exit codes: 0 success / true, 1 false, 2 usage error, 3 invalid input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import counting, hilbert, kripke, qbfred, tiling
from .bisim import StateSpace
from .checker import Evaluator, check, evaluate
from .fol import FolError, fol_eval, fol_text, translate
from .formula import ParseError, expand, parse, to_text

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

INPUT_ERRORS = (kripke.ModelError, ParseError, FolError, qbfred.QbfError, tiling.TilingError,
                hilbert.ProofError, counting.CountingError, json.JSONDecodeError,
                FileNotFoundError, IsADirectoryError, KeyError, ValueError)


class Output:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, text: str, obj: dict) -> None:
        if self.as_json:
            self.stream.write(json.dumps(obj, sort_keys=True) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_pointed(path: str, point=None) -> kripke.PointedModel:
    m, s = kripke.loads(_read(path))
    s = point or s
    if s is None:
        raise kripke.ModelError(f"{path}: no point given in the file or on the command line")
    m.require_point(s)
    return kripke.PointedModel(m, s)


def _formula(args) -> object:
    if args.formula is not None:
        return parse(args.formula)
    if getattr(args, "formula_file", None):
        return parse(_read(args.formula_file).strip())
    raise ParseError("no formula given", 0)


def _exit(flag: bool) -> int:
    return EXIT_TRUE if flag else EXIT_FALSE


# -- subcommands ---------------------------------------------------------------

def cmd_check(args, out: Output) -> int:
    pm = _load_pointed(args.model, args.point)
    f = _formula(args)
    res = evaluate(pm.model, pm.point, f, trace=args.trace, cache=not args.trace)
    obj = {"formula": to_text(f), "point": pm.point, "value": res.value}
    text = f"{to_text(f)} at {pm.point}: {str(res.value).lower()}"
    if args.trace and res.trace is not None:
        obj["trace"] = res.trace.to_obj()
        text += "\n" + _trace_text(res.trace)
    out.emit(text, obj)
    return _exit(res.value)


def _trace_text(node, depth: int = 0) -> str:
    lines = [f"{'  ' * depth}{node.formula} @ {node.point} in {node.model}: "
             f"{str(node.value).lower()}"]
    for c in node.children:
        lines.append(_trace_text(c, depth + 1))
    return "\n".join(lines)


def cmd_translate(args, out: Output) -> int:
    f = _formula(args)
    t = translate(f, args.var)
    out.emit(fol_text(t), {"formula": to_text(f), "var": args.var, "fol": fol_text(t)})
    return EXIT_TRUE


def cmd_fol_check(args, out: Output) -> int:
    pm = _load_pointed(args.model, args.point)
    f = _formula(args)
    modal = check(pm.model, pm.point, f, cache=True)
    first_order = fol_eval(pm.model, {"y": pm.point}, translate(f))
    agree = modal == first_order
    out.emit(f"modal: {str(modal).lower()}  first-order: {str(first_order).lower()}  "
             f"agree: {str(agree).lower()}",
             {"modal": modal, "fol": first_order, "agree": agree})
    return _exit(agree)


def cmd_bisim(args, out: Output) -> int:
    left = _load_pointed(args.left, args.left_point)
    right = _load_pointed(args.right, args.right_point)
    space = StateSpace([left.model, right.model], args.cap)
    i, j = space.root(0, left.point), space.root(1, right.point)
    same = space.equivalent(i, j)
    obj = {"bisimilar": same}
    text = f"sr-bisimilar: {str(same).lower()}"
    if args.witness and not same:
        w = expand(space.distinguish(i, j))
        obj["witness"] = to_text(w)
        obj["witness_left"] = check(left.model, left.point, w, cache=True)
        obj["witness_right"] = check(right.model, right.point, w, cache=True)
        text += f"\nwitness: {to_text(w)}"
    out.emit(text, obj)
    return _exit(same)


def _load_qbf(path: str) -> qbfred.QbfInstance:
    return qbfred.QbfInstance.loads(_read(path))


def cmd_qbf_encode(args, out: Output) -> int:
    q = _load_qbf(args.qbf)
    pm = qbfred.build_model(q)
    f = qbfred.build_formula(q)
    if args.out_model:
        kripke.save(pm.model, args.out_model, pm.point)
    if args.out_formula:
        Path(args.out_formula).write_text(to_text(f) + "\n")
    sched = qbfred.build_schedule(q)
    obj = {"worlds": len(pm.model.worlds), "point": pm.point, "formula": to_text(f),
           "rounds": len(sched.rounds), "quantifier_rounds": sched.quantifier_rounds}
    out.emit(f"worlds: {obj['worlds']}\nformula: {obj['formula']}", obj)
    return EXIT_TRUE


def cmd_qbf_solve(args, out: Output) -> int:
    q = _load_qbf(args.qbf)
    if args.method == "brute":
        value = qbfred.brute_eval(q)
    elif args.method == "game":
        value = qbfred.game_solve(qbfred.build_model(q), qbfred.build_schedule(q))
    else:
        pm = qbfred.build_model(q)
        value = check(pm.model, pm.point, qbfred.build_formula(q), cache=True)
    out.emit(f"{args.method}: {str(value).lower()}", {"method": args.method, "value": value})
    return _exit(value)


def cmd_qbf_verify(args, out: Output) -> int:
    q = _load_qbf(args.qbf)
    pm = qbfred.build_model(q)
    brute = qbfred.brute_eval(q)
    game = qbfred.game_solve(pm, qbfred.build_schedule(q))
    model_check = check(pm.model, pm.point, qbfred.build_formula(q), cache=True)
    agree = brute == game == model_check
    obj = {"brute": brute, "game": game, "check": model_check, "agree": agree}
    out.emit(f"brute force: {str(brute).lower()}\ngame: {str(game).lower()}\n"
             f"model check: {str(model_check).lower()}\n3-way agreement: {str(agree).lower()}", obj)
    return _exit(agree)


def cmd_tile_encode(args, out: Output) -> int:
    ts = tiling.TileSet.loads(_read(args.tiles))
    f = tiling.encode(ts)
    letters = {ts.letter(i): i for i in range(len(ts))}
    out.emit(to_text(f), {"formula": to_text(f), "letters": letters})
    return EXIT_TRUE


def cmd_tile_verify(args, out: Output) -> int:
    ts = tiling.TileSet.loads(_read(args.tiles))
    w, h = tiling.parse_torus(args.torus)
    obj = json.loads(_read(args.assign))
    rows = obj["rows"] if isinstance(obj, dict) else obj
    pt = tiling.PeriodicTiling.from_rows(ts, rows, check=False)
    if (pt.width, pt.height) != (w, h):
        raise tiling.TilingError(f"assignment is {pt.width}x{pt.height}, expected {w}x{h}")
    ok = tiling.verify_periodic(ts, pt)
    out.emit(f"periodic tiling satisfies the encoding: {str(ok).lower()}",
             {"consistent": pt.is_consistent(), "verified": ok})
    return _exit(ok)


def cmd_proof_check(args, out: Output) -> int:
    d = hilbert.Derivation.loads(_read(args.derivation))
    rep = hilbert.check_derivation(d)
    obj = {"ok": rep.ok, "lines": len(d.lines)}
    if not rep.ok:
        obj.update(line=rep.line, error=rep.kind, message=rep.message)
        out.emit(f"rejected at line {rep.line} ({rep.kind}): {rep.message}", obj)
        return EXIT_FALSE
    thm = rep.theorem
    obj["theorem"] = to_text(thm)
    text = f"accepted: {to_text(thm)} ({len(d.lines)} lines)"
    ok = True
    if args.soundness_trials:
        spot = hilbert.soundness_spotcheck(thm, args.soundness_trials, args.seed)
        obj["soundness"] = {"ok": spot.ok, "trials": spot.trials}
        text += f"\nsoundness spot check over {spot.trials} models: {str(spot.ok).lower()}"
        if not spot.ok:
            cm = spot.countermodel
            obj["soundness"]["countermodel"] = kripke.to_json_obj(cm.model, cm.point)
        ok = spot.ok
    out.emit(text, obj)
    return _exit(ok)


def cmd_count_atleast(args, out: Output) -> int:
    if args.m < 0:
        raise counting.CountingError("--m must be non-negative")
    sd = counting.parse_sd(args.sd)
    f = counting.at_least(args.m, sd)
    out.emit(to_text(f), {"m": args.m, "sd": str(sd), "formula": to_text(f)})
    return EXIT_TRUE


def cmd_count_verify(args, out: Output) -> int:
    preds = tuple(p for p in args.preds.split(",") if p)
    a = counting.check_at_least(args.max_worlds, preds)
    r = counting.check_rewrites(args.max_worlds, preds, args.threshold, seed=args.seed)
    pull = [x for x in r if x[0] == "pull_out"]
    inc = [x for x in r if x[0] == "increment"]
    obj = {"at_least_failures": len(a), "pull_out_failures": len(pull),
           "increment_failures": len(inc), "ok": not (a or r)}
    out.emit(f"at_least failures: {len(a)}\npull-out failures: {len(pull)}\n"
             f"increment failures: {len(inc)}", obj)
    return _exit(obj["ok"])


def cmd_gen_model(args, out: Output) -> int:
    props = [p for p in args.props.split(",") if p]
    labels = [x for x in args.labels.split(",") if x]
    noms = [x for x in args.nominals.split(",") if x]
    if args.worlds < 1:
        raise kripke.ModelError("--worlds must be positive")
    if not 0.0 <= args.density <= 1.0:
        raise kripke.ModelError("--density must lie in [0, 1]")
    m = kripke.generate_random(args.worlds, props, args.density, args.seed,
                               labels=labels, nominals=noms)
    text = kripke.dumps(m, "w0")
    if args.out:
        Path(args.out).write_text(text)
    if args.json or not args.out:
        sys.stdout.write(text)
    return EXIT_TRUE


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for any randomness")

    p = argparse.ArgumentParser(prog="mlsr", description="Modal logic of stepwise removal toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def formula_args(sp):
        sp.add_argument("--formula", help="formula text")
        sp.add_argument("--formula-file", help="file holding the formula")

    c = sub.add_parser("check", parents=[common], help="model-check a formula")
    c.add_argument("--model", required=True)
    c.add_argument("--point")
    formula_args(c)
    c.add_argument("--trace", action="store_true", help="print the evaluation tree")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("translate", parents=[common], help="first-order translation")
    formula_args(t)
    t.add_argument("--var", default="y")
    t.set_defaults(func=cmd_translate)

    fc = sub.add_parser("fol-check", parents=[common], help="compare checker with translation")
    fc.add_argument("--model", required=True)
    fc.add_argument("--point")
    formula_args(fc)
    fc.set_defaults(func=cmd_fol_check)

    b = sub.add_parser("bisim", parents=[common], help="SR-bisimilarity of two pointed models")
    b.add_argument("--left", required=True)
    b.add_argument("--right", required=True)
    b.add_argument("--left-point")
    b.add_argument("--right-point")
    b.add_argument("--witness", action="store_true", help="print a distinguishing formula")
    b.add_argument("--cap", type=int, default=8, help="largest model size accepted")
    b.set_defaults(func=cmd_bisim)

    q = sub.add_parser("qbf", help="QBF reduction").add_subparsers(dest="qbf_command", required=True)
    qe = q.add_parser("encode", parents=[common])
    qe.add_argument("--qbf", required=True)
    qe.add_argument("--out-model")
    qe.add_argument("--out-formula")
    qe.set_defaults(func=cmd_qbf_encode)
    qs = q.add_parser("solve", parents=[common])
    qs.add_argument("--qbf", required=True)
    qs.add_argument("--method", choices=["brute", "game", "check"], default="brute")
    qs.set_defaults(func=cmd_qbf_solve)
    qv = q.add_parser("verify", parents=[common])
    qv.add_argument("--qbf", required=True)
    qv.set_defaults(func=cmd_qbf_verify)

    ti = sub.add_parser("tile", help="tiling encoding").add_subparsers(dest="tile_command",
                                                                      required=True)
    te = ti.add_parser("encode", parents=[common])
    te.add_argument("--tiles", required=True)
    te.set_defaults(func=cmd_tile_encode)
    tv = ti.add_parser("verify", parents=[common])
    tv.add_argument("--tiles", required=True)
    tv.add_argument("--torus", required=True, help="WxH")
    tv.add_argument("--assign", required=True, help='JSON {"rows": [[tile index, ...], ...]}')
    tv.set_defaults(func=cmd_tile_verify)

    pr = sub.add_parser("proof", help="derivation checker").add_subparsers(dest="proof_command",
                                                                          required=True)
    pc = pr.add_parser("check", parents=[common])
    pc.add_argument("derivation")
    pc.add_argument("--soundness-trials", type=int, default=0)
    pc.set_defaults(func=cmd_proof_check)

    co = sub.add_parser("count", help="counting encodings").add_subparsers(dest="count_command",
                                                                          required=True)
    ca = co.add_parser("atleast", parents=[common])
    ca.add_argument("--m", type=int, required=True)
    ca.add_argument("--sd", required=True,
                    help='state description such as "+P1-P2" (write --sd=-P1 when it starts with -)')
    ca.set_defaults(func=cmd_count_atleast)
    cv = co.add_parser("verify", parents=[common])
    cv.add_argument("--max-worlds", type=int, default=4)
    cv.add_argument("--preds", default="P1,P2")
    cv.add_argument("--threshold", type=int, default=2)
    cv.set_defaults(func=cmd_count_verify)

    g = sub.add_parser("gen-model", parents=[common], help="random model as JSON")
    g.add_argument("--worlds", type=int, required=True)
    g.add_argument("--props", default="p")
    g.add_argument("--labels", default="r")
    g.add_argument("--nominals", default="")
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_model)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    out = Output(getattr(args, "json", False))
    try:
        return args.func(args, out)
    except INPUT_ERRORS as exc:
        msg = str(exc) or type(exc).__name__
        if out.as_json:
            print(json.dumps({"error": type(exc).__name__, "message": msg}, sort_keys=True))
        else:
            print(f"mlsr: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
