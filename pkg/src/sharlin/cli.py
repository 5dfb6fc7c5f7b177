"""Command line front end.

Subcommands: ``eval`` (domain operations on inline elements), ``analyze``
(goal-dependent analysis of a program file), ``verify`` (randomized
correctness / optimality suites), ``equiv`` (matcher equivalence suites)
and ``diff`` (matching vs re-unification precision report).

Exit codes: 0 ok, 1 usage or parse error, 2 I/O error, 3 verification
counterexample. Reports are byte-deterministic for fixed seeds; timing is
never part of a report. A config file of ``key=value`` lines can supply
defaults for any long flag; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .analyzer import (
    DOMAINS,
    AnalysisRequest,
    ParseError,
    analyze,
    parse_goal,
    parse_injection,
    parse_program,
)
from .oracle import (
    DOMAIN_TAGS,
    TrialConfig,
    check_equivalences,
    render_report,
    run_correctness,
    run_optimality,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _IoError(str(exc)) from exc


class _IoError(Exception):
    pass


def _operand(text: str) -> str:
    if text.startswith("@"):
        return _read_file(text[1:]).strip()
    return text


def _load_config(path: str) -> dict:
    out = {}
    for ln, raw in enumerate(_read_file(path).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {ln}: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _build_parser() -> _Parser:
    parser = _Parser(prog="sharlin")
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one domain operation")
    p_eval.add_argument(
        "--domain", required=True, choices=sorted(DOMAINS) + ["concrete"]
    )
    p_eval.add_argument(
        "--op", required=True, choices=("match", "union", "project", "alpha")
    )
    p_eval.add_argument(
        "operands", nargs="+",
        help="elements inline or @file; project takes element and {vars}",
    )

    p_an = sub.add_parser("analyze", help="goal-dependent analysis")
    p_an.add_argument("--program", required=True, help="program file")
    p_an.add_argument("--goal", required=True)
    p_an.add_argument("--call", required=True, help="abstract call substitution")
    p_an.add_argument("--domain", required=True, choices=sorted(DOMAINS))
    p_an.add_argument("--mode", default="matching", choices=("matching", "mgu"))
    p_an.add_argument("--inject", help="forward trace injection file")
    p_an.add_argument("--cap", type=int, default=3)
    p_an.add_argument("--max-passes", type=int, default=64)
    p_an.add_argument("--trace", action="store_true")

    p_ver = sub.add_parser("verify", help="randomized theorem suites")
    p_ver.add_argument("kind", choices=("correctness", "optimality"))
    p_ver.add_argument("--domain", default="all", choices=("all",) + DOMAIN_TAGS)
    p_ver.add_argument("--trials", type=int, default=1000)
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument("--max-vars", type=int, default=4)
    p_ver.add_argument("--depth", type=int, default=2)
    p_ver.add_argument("--cap", type=int, default=3)
    p_ver.add_argument("--jobs", type=int, default=1)
    p_ver.add_argument("--json", action="store_true")

    p_eq = sub.add_parser("equiv", help="matcher equivalence suites")
    p_eq.add_argument("--trials", type=int, default=1000)
    p_eq.add_argument("--seed", type=int, default=42)
    p_eq.add_argument("--max-vars", type=int, default=5)
    p_eq.add_argument("--jobs", type=int, default=1)
    p_eq.add_argument("--json", action="store_true")

    p_diff = sub.add_parser("diff", help="matching vs mgu precision report")
    p_diff.add_argument("--program", required=True)
    p_diff.add_argument("--goal", required=True)
    p_diff.add_argument("--call", required=True)
    p_diff.add_argument("--domain", required=True, choices=sorted(DOMAINS))
    p_diff.add_argument("--inject", help="forward trace injection file")
    p_diff.add_argument("--cap", type=int, default=3)

    return parser


def _eval_concrete(args):
    from .existential import UNDEFINED, ematch, parse_existential

    if args.op != "match":
        raise ValueError("the concrete domain only supports the match operation")
    if len(args.operands) != 2:
        raise ValueError("match takes two operands")
    c1 = parse_existential(_operand(args.operands[0]))
    c2 = parse_existential(_operand(args.operands[1]))
    result = ematch(c1, c2)
    return "undefined" if result is UNDEFINED else result


def _eval_alpha(args):
    from .existential import parse_existential
    from .shlin_omega import alpha_omega, parse_omega
    from .shlin2 import alpha2, parse_two
    from .shlin_sl import alpha_sl

    if len(args.operands) != 1:
        raise ValueError("alpha takes one operand")
    text = _operand(args.operands[0])
    if args.domain == "omega":
        return alpha_omega(parse_existential(text))
    if args.domain == "two":
        return alpha2(parse_omega(text))
    return alpha_sl(parse_two(text))


def _cmd_eval(args) -> int:
    try:
        if args.domain == "concrete":
            result = _eval_concrete(args)
        elif args.op == "alpha":
            result = _eval_alpha(args)
        else:
            ops = DOMAINS[args.domain]
            if args.op in ("match", "union"):
                if len(args.operands) != 2:
                    raise ValueError(f"{args.op} takes two operands")
                e1 = ops.parse(_operand(args.operands[0]))
                e2 = ops.parse(_operand(args.operands[1]))
                result = ops.match(e1, e2) if args.op == "match" else ops.union(e1, e2)
            else:
                if len(args.operands) != 2:
                    raise ValueError("project takes an element and a {v1,v2} variable set")
                e1 = ops.parse(_operand(args.operands[0]))
                spec = _operand(args.operands[1]).strip()
                if not (spec.startswith("{") and spec.endswith("}")):
                    raise ValueError(f"bad variable set {spec!r}")
                inner = spec[1:-1].strip()
                variables = [v.strip() for v in inner.split(",")] if inner else []
                result = ops.project(e1, variables)
    except _IoError as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 1
    print(result)
    return 0


def _make_request(args) -> AnalysisRequest:
    program = parse_program(_read_file(args.program))
    goal = parse_goal(args.goal)
    ops = DOMAINS[args.domain]
    call = ops.parse(args.call)
    injection = None
    if getattr(args, "inject", None):
        injection = parse_injection(_read_file(args.inject), args.domain)
    return AnalysisRequest(
        program=program,
        goal=goal,
        call=call,
        domain=args.domain,
        mode=getattr(args, "mode", "matching"),
        cap=args.cap,
        max_passes=getattr(args, "max_passes", 64),
        injection=injection,
    )


def _cmd_analyze(args) -> int:
    try:
        req = _make_request(args)
        result = analyze(req)
    except _IoError as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValueError) as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 1
    print(result.answer)
    if args.trace:
        print(f"# passes={result.passes} table={result.table_size}")
        for step in result.trace:
            print(
                f"# depth={step.depth} clause={step.clause_index} goal={step.goal}\n"
                f"#   call   {step.call}\n"
                f"#   full   {step.full}\n"
                f"#   entry  {step.entry}\n"
                f"#   exit   {step.exit}\n"
                f"#   answer {step.answer}"
            )
    return 0


def _chunks(total: int, jobs: int):
    size = (total + jobs - 1) // jobs
    lo = 0
    while lo < total:
        yield lo, min(lo + size, total)
        lo += size


def _merge(reports: list[dict]) -> dict:
    out = dict(reports[0])
    out["trials"] = sum(r["trials"] for r in reports)
    out["failures"] = [f for r in reports for f in r["failures"]]
    if out["kind"] == "correctness":
        out["defined"] = sum(r["defined"] for r in reports)
        out["domains"] = {
            d: sum(r["domains"][d] for r in reports) for d in reports[0]["domains"]
        }
    elif out["kind"] == "optimality":
        out["groups"] = sum(r["groups"] for r in reports)
    else:
        out["checks"] = {
            c: sum(r["checks"][c] for r in reports) for c in reports[0]["checks"]
        }
    return out


def _corr_worker(payload):
    cfg, domains, lo, hi = payload
    return run_correctness(TrialConfig(**cfg), domains, lo, hi)


def _opt_worker(payload):
    cfg, domain, lo, hi = payload
    return run_optimality(TrialConfig(**cfg), domain, lo, hi)


def _equiv_worker(payload):
    cfg, lo, hi = payload
    return check_equivalences(TrialConfig(**cfg), lo, hi)


def _run_parallel(worker, payloads):
    if len(payloads) == 1:
        return [worker(payloads[0])]
    with ProcessPoolExecutor(max_workers=len(payloads)) as pool:
        return list(pool.map(worker, payloads))


def _emit(report: dict, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report, sort_keys=True))
    else:
        sys.stdout.write(render_report(report))
    return 0 if not report["failures"] else 3


def _cmd_verify(args) -> int:
    cfg = dict(
        seed=args.seed,
        trials=args.trials,
        max_term_depth=args.depth,
        max_vars=args.max_vars,
        multiplicity_cap=args.cap,
    )
    domains = DOMAIN_TAGS if args.domain == "all" else (args.domain,)
    jobs = max(1, args.jobs)
    if args.kind == "correctness":
        payloads = [(cfg, domains, lo, hi) for lo, hi in _chunks(args.trials, jobs)]
        report = _merge(_run_parallel(_corr_worker, payloads))
        return _emit(report, args.json)
    status = 0
    reports = []
    for domain in domains:
        payloads = [(cfg, domain, lo, hi) for lo, hi in _chunks(args.trials, jobs)]
        report = _merge(_run_parallel(_opt_worker, payloads))
        reports.append(report)
    for report in reports:
        status = max(status, _emit(report, args.json))
    return status


def _cmd_equiv(args) -> int:
    cfg = dict(seed=args.seed, trials=args.trials, max_vars=args.max_vars)
    jobs = max(1, args.jobs)
    payloads = [(cfg, lo, hi) for lo, hi in _chunks(args.trials, jobs)]
    report = _merge(_run_parallel(_equiv_worker, payloads))
    return _emit(report, args.json)


def _cmd_diff(args) -> int:
    try:
        req = _make_request(args)
        ops = DOMAINS[args.domain]
        match_result = analyze(req)
        mgu_req = AnalysisRequest(
            program=req.program,
            goal=req.goal,
            call=req.call,
            domain=req.domain,
            mode="mgu",
            cap=req.cap,
            max_passes=req.max_passes,
            injection=req.injection,
        )
        mgu_result = analyze(mgu_req)
    except _IoError as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValueError) as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 1
    print(f"matching: {match_result.answer}")
    print(f"mgu:      {mgu_result.answer}")
    extra = sorted(ops.groups_of(mgu_result.answer) - ops.groups_of(match_result.answer))
    print("difference: {" + ", ".join(extra) + "}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args, _ = parser.parse_known_args(argv)
    if args.config:
        try:
            defaults = _load_config(args.config)
        except _IoError as exc:
            print(f"sharlin: {exc}", file=sys.stderr)
            return 2
        except ValueError as exc:
            print(f"sharlin: {exc}", file=sys.stderr)
            return 1
        for sub_action in parser._subparsers._group_actions:  # noqa: SLF001
            for sub in sub_action.choices.values():
                known = {a.dest for a in sub._actions}  # noqa: SLF001
                sub.set_defaults(**{k: _coerce(v) for k, v in defaults.items() if k in known})
    args = parser.parse_args(argv)
    handlers = {
        "eval": _cmd_eval,
        "analyze": _cmd_analyze,
        "verify": _cmd_verify,
        "equiv": _cmd_equiv,
        "diff": _cmd_diff,
    }
    try:
        return handlers[args.command](args)
    except _IoError as exc:
        print(f"sharlin: {exc}", file=sys.stderr)
        return 2


def _coerce(value: str):
    if value.isdigit() or (value.startswith("-") and value[1:].isdigit()):
        return int(value)
    if value in ("true", "false"):
        return value == "true"
    return value


if __name__ == "__main__":
    sys.exit(main())
