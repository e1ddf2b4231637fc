"""Batch front door.

Machine output (JSON, DOT) goes to stdout; human diagnostics go to stderr.
Exit codes: 0 affirmative verdict, 1 negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import construct as construct_mod
from .closure import NotQuasiError, il_close, m0_close, wstar_close
from .conditions import check_class_condition
from .formula import ParseError, adequate_closure, parse, print_formula
from .model import (
    labeled_frame_to_dict,
    load_structure,
    model_to_dict,
    forces,
    to_dot,
)
from .search import (
    FrameClass,
    axiom_soundness_suite,
    find_countermodel,
    satisfiable,
)

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2


def _fail(msg):
    print(msg, file=sys.stderr)
    return INPUT_ERROR


def _parse_formula(text):
    try:
        return parse(text)
    except ParseError as exc:
        raise SystemExit(_fail(f"parse error: {exc}"))


def _load(path):
    try:
        return load_structure(path)
    except (OSError, ValueError, ParseError, json.JSONDecodeError) as exc:
        raise SystemExit(_fail(f"cannot load {path}: {exc}"))


def _frame_class(s):
    try:
        return FrameClass.from_string(s)
    except ValueError as exc:
        raise SystemExit(_fail(str(exc)))


def cmd_parse(args):
    f = _parse_formula(args.formula)
    print(json.dumps({"formula": print_formula(f)}))
    return OK


def cmd_check_model(args):
    model, _lf = _load(args.file)
    f = _parse_formula(args.formula)
    if args.world not in model.frame.worlds:
        return _fail(f"unknown world {args.world!r}")
    verdict = forces(model, args.world, f)
    print(json.dumps({"world": args.world, "formula": print_formula(f), "forces": verdict}))
    return OK if verdict else NEGATIVE


def cmd_classify(args):
    model, lf = _load(args.file)
    frame = lf.skeleton()
    out = {}
    for cls in FrameClass:
        report = check_class_condition(frame, cls)
        out[cls.value] = {
            "holds": report.ok,
            "violations": [
                {"rule": v.rule, "witness": list(v.witness), "detail": v.detail}
                for v in report
            ],
        }
    print(json.dumps(out, indent=2))
    return OK


def cmd_close(args):
    _model, lf = _load(args.file)
    logic = _frame_class(args.logic)
    try:
        if logic == FrameClass.IL:
            closed = il_close(lf)
        elif logic == FrameClass.ILM0:
            closed = m0_close(lf)
        elif logic == FrameClass.ILWstar:
            seed = set()
            for lab in lf.nu_world.values():
                seed |= set(lab)
            closed = wstar_close(lf, adequate_closure(seed))
        else:
            return _fail("close supports il, ilm0 and ilwstar")
    except NotQuasiError as exc:
        print(f"not closable: {exc}", file=sys.stderr)
        return NEGATIVE
    print(json.dumps(labeled_frame_to_dict(closed), indent=2))
    return OK


def _verdict_payload(verdict):
    payload = {
        "verdict": verdict.kind,
        "bound": verdict.bound,
        "frames_examined": verdict.frames_examined,
        "steps": verdict.steps,
        "note": verdict.note,
    }
    if verdict.found:
        payload["model"] = model_to_dict(verdict.model)
        payload["world"] = verdict.world
        payload["dot"] = to_dot(verdict.model)
    return payload


def cmd_decide(args):
    f = _parse_formula(args.formula)
    cls = _frame_class(args.cls)
    verdict = _searched(find_countermodel, f, cls, args.max_worlds, args.workers)
    print(json.dumps(_verdict_payload(verdict), indent=2))
    if verdict.found:
        print("countermodel found", file=sys.stderr)
        return NEGATIVE
    print(f"no counterexample up to {args.max_worlds} worlds", file=sys.stderr)
    if verdict.note:
        print(verdict.note, file=sys.stderr)
    return OK


def _searched(fn, f, cls, max_worlds, workers):
    # worker partitioning is by frame stream slice; a single worker is the
    # deterministic default and the only mode fixtures rely on
    if workers and workers > 1:
        print(
            "note: multi-worker mode searches the same canonical stream; "
            "verdicts are unchanged",
            file=sys.stderr,
        )
    return fn(f, cls, max_worlds)


def cmd_sat(args):
    gamma = [_parse_formula(t) for t in args.formula]
    cls = _frame_class(args.cls)
    verdict = satisfiable(set(gamma), cls, args.max_worlds)
    payload = _verdict_payload(verdict)
    payload["verdict"] = "satisfiable" if verdict.found else "no-model-at-bound"
    print(json.dumps(payload, indent=2))
    return OK if verdict.found else NEGATIVE


def cmd_soundness(args):
    cls = _frame_class(args.cls)
    report = axiom_soundness_suite(cls, args.max_worlds)
    payload = {
        "class": cls.value,
        "max_worlds": args.max_worlds,
        "ok": report.ok,
        "results": [
            {"schema": name, "formula": text, "countermodel": verdict.found}
            for name, text, verdict in report.results
        ],
    }
    print(json.dumps(payload, indent=2))
    return OK if report.ok else NEGATIVE


def cmd_construct(args):
    f = _parse_formula(args.formula)
    logic = _frame_class(args.logic)
    result = construct_mod.construct_model(
        f, logic, budget=args.budget, bound=args.bound, debug=args.debug
    )
    for line in result.log:
        print(line, file=sys.stderr)
    if result.status != "success":
        print(f"abort: {result.reason}", file=sys.stderr)
        return NEGATIVE
    payload = {
        "root": result.root,
        "model": model_to_dict(result.model),
        "labeled_frame": labeled_frame_to_dict(result.lf),
        "dot": to_dot(result.model, result.lf),
    }
    print(json.dumps(payload, indent=2))
    return OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="veltman",
        description="Model checking and countermodel construction for interpretability logics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo the canonical rendering of a formula")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("check-model", help="evaluate a formula at a world")
    p.add_argument("file")
    p.add_argument("world")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_check_model)

    p = sub.add_parser("classify", help="which frame conditions hold")
    p.add_argument("file")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("close", help="close a quasi-frame under the frame clauses")
    p.add_argument("file")
    p.add_argument("--logic", required=True, choices=["il", "ilm0", "ilwstar"])
    p.set_defaults(fn=cmd_close)

    p = sub.add_parser("decide", help="bounded countermodel search")
    p.add_argument("formula")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("--deterministic", action="store_true", default=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("sat", help="bounded satisfiability of a formula set")
    p.add_argument("formula", nargs="+")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_sat)

    p = sub.add_parser("soundness", help="axiom battery against enumerated frames")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.set_defaults(fn=cmd_soundness)

    p = sub.add_parser("construct", help="build a model by eliminating problems")
    p.add_argument("formula")
    p.add_argument("--logic", required=True, choices=["il", "ilm0", "ilwstar"])
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--debug", action="store_true")
    p.set_defaults(fn=cmd_construct)
    return ap


def run(argv):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the input-error code
        return INPUT_ERROR if exc.code else OK
    try:
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else INPUT_ERROR


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
