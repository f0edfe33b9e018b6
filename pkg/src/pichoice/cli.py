"""Command line front end.

Exit codes: 0 success, 1 a check reported a violation, 2 bad input,
3 precondition failed (e.g. unstable start), 4 axiom gate failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import axioms as ax
from .choice import ChoiceCorrespondence, UtilityBacked
from .core import DEFAULT_CAP
from .errors import (
    CapExceeded,
    InvalidTable,
    NoValidCandidate,
    NotPI,
    NotStableInput,
    OracleInconsistent,
    ParseError,
    PichoiceError,
    UnknownId,
)
from .matching import Market, constrained_efficient, deferred_acceptance
from .rationalize import CycleWitness, rationalize_pi, sarp_check
from .serialize import dumps, load_matching, load_object, parse_weight, read_json
from .tiebreak import CallStats, choose_pi_lad, choose_tiebroken

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_PRECONDITION, EXIT_GATE = 0, 1, 2, 3, 4
ALL_CHECKS = ("pi", "lad", "sub", "irc", "gmatroid", "bridging", "rationalizable", "ordinal_concave", "mnat")


class Gate(Exception):
    pass


def _render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, str) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_inline(x)}" if not isinstance(x, dict)
                         else f"{pad}-\n{_render(x, indent + 1)}" for x in obj)
    return pad + _inline(obj)


def _inline(v) -> str:
    if isinstance(v, list):
        if all(isinstance(x, str) for x in v):
            return "{" + ", ".join(v) + "}"
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_inline(x)}" for k, x in v.items())
    return "none" if v is None else str(v)


def _emit(args, obj) -> None:
    print(_render(obj) if args.pretty else dumps(obj))


def _corr(obj) -> ChoiceCorrespondence:
    if not isinstance(obj, ChoiceCorrespondence):
        raise ParseError("expected a choice correspondence, got a market")
    return obj


def _market(obj) -> Market:
    if not isinstance(obj, Market):
        raise ParseError("expected a market file")
    return obj


def _axiom_report(c: ChoiceCorrespondence, checks, args) -> dict:
    out = {}
    for name in checks:
        if name == "pi":
            v = ax.check_pi_corr(c, args.n_random, args.seed, args.cap).to_json()
        elif name == "lad":
            v = ax.check_lad_corr(c, args.n_random, args.seed, args.cap).to_json()
        elif name == "sub":
            a, b = ax.check_sc1(c, args.cap), ax.check_sc2(c, args.cap)
            v = (a if a.violated else b).to_json()
            v["axiom"] = "sub"
        elif name == "irc":
            v = ax.check_irc_corr(c, args.cap).to_json()
        elif name == "gmatroid":
            v = {"axiom": "gmatroid", "status": ax.HOLDS}
            for x in c.ground.subsets():
                g = ax.check_gmatroid(c.enumerate(x), c.ground)
                if g.violated:
                    v = {**g.to_json(), "pool": sorted(c.ground.names(x))}
                    break
        elif name == "bridging":
            acc = ax.check_acceptant_corr(c, args.cap)
            if acc.violated:
                v = {"axiom": "bridging", "status": "not-applicable", "reason": "not acceptant"}
            else:
                b = ax.check_bridging(c, acc.witness["q"], args.cap)
                v = {"axiom": "bridging", "status": b.status, "rows": len(b.rows)}
                if b.violated:
                    v = b.to_json()
        elif name == "rationalizable":
            r = sarp_check(c, args.cap)
            v = {"axiom": "rationalizable", "status": ax.HOLDS}
            if isinstance(r, CycleWitness):
                v.update(r.to_json())
                v["status"] = ax.VIOLATED
        elif name in ("ordinal_concave", "mnat"):
            if not isinstance(c, UtilityBacked):
                v = {"axiom": name, "status": "not-applicable", "reason": "no utility function"}
            else:
                fn = ax.check_ordinal_concavity if name == "ordinal_concave" else ax.check_mnat
                v = fn(c.utility).to_json()
        else:
            raise ParseError(f"unknown check {name!r}; known: {', '.join(ALL_CHECKS)}")
        out[name] = v
    return out


def _checks(args) -> list[str]:
    if args.checks == "all":
        return list(ALL_CHECKS)
    return [s.strip() for s in args.checks.split(",") if s.strip()]


def cmd_axioms(args) -> int:
    obj = load_object(args.file)
    checks = _checks(args)
    if isinstance(obj, Market):
        report = {s: _axiom_report(c, checks, args) for s, c in zip(obj.schools, obj.corr)}
        violated = any(v["status"] == ax.VIOLATED for r in report.values() for v in r.values())
    else:
        report = _axiom_report(obj, checks, args)
        violated = any(v["status"] == ax.VIOLATED for v in report.values())
    _emit(args, report)
    return EXIT_VIOLATED if violated else EXIT_OK


def cmd_choose(args) -> int:
    c = _corr(load_object(args.file))
    gs = c.ground
    x = gs.parse_key(args.X) if args.X not in ("", "{}", "-") else 0
    out = {"X": sorted(gs.names(x)), "choices": [sorted(gs.names(y)) for y in c.enumerate(x, args.cap)]}
    if args.weight:
        w = parse_weight(gs, args.weight)
        st = CallStats()
        res = {"weight": w.to_json()}
        try:
            a1 = choose_tiebroken(c, w, x, st, trust_pi=True)
            res["algorithm1"] = sorted(gs.names(a1))
            res["membership_calls"] = st.membership_calls
        except OracleInconsistent as e:
            a1 = None
            res["algorithm1"] = f"inconsistent: {e}"
        try:
            pl = choose_pi_lad(c, w, x, st)
            res["pi_lad"] = sorted(gs.names(pl))
            res["candidate_evals"] = st.candidate_evals
        except NoValidCandidate as e:
            pl = None
            res["pi_lad"] = f"inconsistent: {e}"
        best = choose_tiebroken(c, w, x, trust_pi=False)
        res["argmax"] = sorted(gs.names(best))
        res["agree"] = a1 == best and (pl is None or pl == best)
        out["tiebroken"] = res
    _emit(args, out)
    return EXIT_OK


def _weights(mk: Market, ref):
    if not ref:
        return None
    data = read_json(ref)
    return {s: parse_weight(mk.students, v) for s, v in data.items()}


def _gate(mk: Market, args, lad: bool) -> None:
    if args.assume_pi_lad:
        return
    for s, c in zip(mk.schools, mk.corr):
        for v in ([ax.check_pi_corr(c, args.n_random, args.seed)]
                  + ([ax.check_lad_corr(c, args.n_random, args.seed)] if lad else [])):
            if v.violated:
                raise Gate(f"school {s}: {v.axiom} violated {dumps(v.to_json())}")


def cmd_da(args) -> int:
    mk = _market(load_object(args.file))
    _gate(mk, args, lad=False)
    mu = deferred_acceptance(mk, _weights(mk, args.weights))
    _emit(args, mu.to_json(mk))
    return EXIT_OK


def _start(mk: Market, args):
    if args.start == "da":
        return deferred_acceptance(mk, _weights(mk, args.weights))
    if args.start.startswith("builtin:"):
        from .instances import instance_matching

        return instance_matching(mk, mk.name, args.start.split(":", 1)[1])
    return load_matching(mk, args.start)


def cmd_efficient(args) -> int:
    mk = _market(load_object(args.file))
    _gate(mk, args, lad=True)
    mu0 = _start(mk, args)
    mu, trace = constrained_efficient(mk, mu0)
    if args.trace:
        Path(args.trace).write_text(dumps(trace, pretty=True) + "\n")
    _emit(args, {**mu.to_json(mk), "steps": len(trace)})
    return EXIT_OK


def cmd_rationalize(args) -> int:
    c = _corr(load_object(args.file))
    gs = c.ground
    r = sarp_check(c, args.cap)
    if isinstance(r, CycleWitness):
        _emit(args, r.to_json())
        return EXIT_VIOLATED
    from .rationalize import utility_from_order

    u = utility_from_order(r)
    out = {"status": "rationalizable", "method": "revealed-order",
           "utility": {gs.key(x): str(u(x)[0]) for x in gs.subsets()}}
    try:
        t = rationalize_pi(c, args.cap)
        out["closure_utility"] = {gs.key(x): str(t(x)[0]) for x in gs.subsets()}
    except NotPI:
        out["closure_utility"] = None
    _emit(args, out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run

    checks = run(args.id)
    _emit(args, {"instance": args.id, "checks": [c.to_json() for c in checks],
                 "passed": sum(c.passed for c in checks), "total": len(checks)})
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pichoice", description="Path-independent choice correspondences and matching.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n-random", type=int, default=32, help="random UM weights beyond the signed permutations")
    common.add_argument("--cap", type=int, default=ax.TRIPLE_CAP, help="ground-set size limit for exhaustive checks")
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("axioms", parents=[common], help="run axiom verifiers")
    a.add_argument("file", help="instance id or JSON file")
    a.add_argument("--checks", default="pi,lad", help=f"comma list or 'all' ({', '.join(ALL_CHECKS)})")
    a.set_defaults(fn=cmd_axioms)

    c = sub.add_parser("choose", parents=[common], help="enumerate C(X) and the tie-broken choice")
    c.add_argument("file")
    c.add_argument("X", help="comma-separated members, '-' for the empty set")
    c.add_argument("--weight", help="'a=1/2,b=-1' or canonical 'a,b,c;+,-,+'")
    c.set_defaults(fn=cmd_choose, cap=DEFAULT_CAP)

    d = sub.add_parser("da", parents=[common], help="deferred acceptance")
    d.add_argument("file")
    d.add_argument("--weights", help="JSON file {school: weight}")
    d.add_argument("--assume-pi-lad", action="store_true", help="skip the PI gate (unsafe)")
    d.set_defaults(fn=cmd_da)

    e = sub.add_parser("efficient", parents=[common], help="constrained-efficient improvement of a stable matching")
    e.add_argument("file")
    e.add_argument("--start", default="da", help="'da', a matching JSON file, or 'builtin:<name>' for registry markets")
    e.add_argument("--weights", help="JSON file {school: weight} for the DA start")
    e.add_argument("--trace", help="write the improvement trace to this file")
    e.add_argument("--assume-pi-lad", action="store_true", help="skip the PI and LAD gates (unsafe)")
    e.set_defaults(fn=cmd_efficient)

    r = sub.add_parser("rationalize", parents=[common], help="build a rationalizing utility or a cycle witness")
    r.add_argument("file")
    r.set_defaults(fn=cmd_rationalize)

    g = sub.add_parser("reproduce", parents=[common], help="run a golden suite")
    g.add_argument("id", help="table1, ex4.1, ex4.2, ex4.3, appD, admission or all")
    g.set_defaults(fn=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, UnknownId, CapExceeded, InvalidTable, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NotStableInput as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (Gate, NotPI) as e:
        print(f"axiom gate failed: {e}", file=sys.stderr)
        return EXIT_GATE
    except PichoiceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
