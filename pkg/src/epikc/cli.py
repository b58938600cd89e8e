"""Command-line front end.

Exit codes: 0 success (UNSAT and NO PLAN included), 2 usage or parse error,
3 disagreement with the semantic oracle under ``--check-oracle``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

from . import k45 as K
from . import oracle as O
from . import prop
from . import sdnf as S
from .families import FAMILIES, bench, fit_affine
from .formula import ParseError, conj, parse, substitute, to_str, variables
from .formula import TOP, BOT
from .planner import SearchStats, load_task, plan, plan_depth, plan_lines, plan_to_json, validate_plan
from .prop import CapabilityError

EXIT_OK, EXIT_USAGE, EXIT_ORACLE = 0, 2, 3


@dataclass
class CliConfig:
    logic: str = "kn"
    l0: str = prop.TERM
    form: str = "sdnf"
    oracle_bound: int = O.DEFAULT_BOUND
    check_oracle: bool = False
    json: bool = False

    def __post_init__(self):
        if self.oracle_bound < 1:
            raise ValueError("oracle bound must be >= 1")


class OracleDisagreement(Exception):
    pass


def _cfg(ns) -> CliConfig:
    bound = ns.oracle_bound
    if bound is None:
        bound = int(os.environ.get("EPIKC_ORACLE_BOUND", O.DEFAULT_BOUND))
    return CliConfig(ns.logic, ns.l0, getattr(ns, "form", "sdnf"), bound, ns.check_oracle, ns.json)


def _compile(f, cfg: CliConfig):
    if cfg.logic == "k45n":
        return K.compile_asdnf(f, cfg.l0)
    return S.compile_sdnf(f, cfg.l0)


def _compile_goal(f, cfg: CliConfig):
    if cfg.logic == "k45n":
        return K.compile_ascnf(f, cfg.l0)
    return S.compile_scnf(f, cfg.l0)


def _check(ok: bool, what: str):
    if not ok:
        raise OracleDisagreement(what)


def _equiv(f, g, cfg: CliConfig) -> bool:
    return O.equiv(f, g, cfg.logic, cfg.oracle_bound)


def _emit(cfg: CliConfig, human: str, payload: dict):
    print(human)
    if cfg.json:
        print(json.dumps(payload, sort_keys=True))


def _stats(x) -> dict:
    items = x.disjuncts if isinstance(x, S.Sdnf) else x.conjuncts
    return {"terms": len(items), "size": S.size(x), "dag_size": S.dag_size(x), "depth": S.depth(x)}


def cmd_compile(ns, cfg: CliConfig) -> int:
    f = parse(ns.formula)
    x = _compile(f, cfg) if cfg.form == "sdnf" else _compile_goal(f, cfg)
    g = S.to_formula(x) if isinstance(x, S.Sdnf) else S.scnf_to_formula(x)
    if cfg.check_oracle:
        _check(_equiv(f, g, cfg), "compiled form is not equivalent to the input")
    st = _stats(x)
    human = f"{to_str(g)}\n# {cfg.form} terms={st['terms']} size={st['size']} dag_size={st['dag_size']} depth={st['depth']}"
    _emit(cfg, human, {"form": cfg.form, "stats": st, "compiled": S.to_json(x)})
    return EXIT_OK


def cmd_sat(ns, cfg: CliConfig) -> int:
    f = parse(ns.formula)
    x = _compile(f, cfg)
    result = K.sat_k45(x) if cfg.logic == "k45n" else S.sat(x)
    payload = {"sat": result}
    if cfg.check_oracle:
        witness = (O.sat_tableau_kn(f) if cfg.logic == "kn"
                   else O.sat_bounded(f, cfg.oracle_bound, "k45n"))
        if witness is not None:
            _check(O.model_check(witness, witness.actual, f), "oracle witness fails model checking")
            payload["witness"] = witness.to_json()
        _check((witness is not None) == result, "satisfiability disagrees with the oracle")
    _emit(cfg, "SAT" if result else "UNSAT", payload)
    return EXIT_OK


def cmd_entails(ns, cfg: CliConfig) -> int:
    f, g = parse(ns.kb), parse(ns.goal)
    x, c = _compile(f, cfg), _compile_goal(g, cfg)
    result = K.entails_scnf_k45(x, c) if cfg.logic == "k45n" else S.entails_scnf(x, c)
    if cfg.check_oracle:
        _check(result == O.entails(f, g, cfg.logic, cfg.oracle_bound), "entailment disagrees with the oracle")
    _emit(cfg, "ENTAILED" if result else "NOT ENTAILED", {"entails": result})
    return EXIT_OK


def _var_list(text: str | None) -> list[str]:
    return [v.strip() for v in (text or "").split(",") if v.strip()]


def cmd_forget(ns, cfg: CliConfig) -> int:
    f = parse(ns.formula)
    q = _var_list(ns.vars)
    x = _compile(f, cfg)
    y = K.forget_k45(x, q) if cfg.logic == "k45n" else S.forget(x, q)
    y = S.simplify(y)
    g = S.to_formula(y)
    if cfg.check_oracle:
        _check(O.entails(f, g, cfg.logic, cfg.oracle_bound), "input does not entail the forgetting result")
        _check(not (variables(g) & set(q)), "forgotten variables remain")
    _emit(cfg, to_str(g), {"result": to_str(g), "compiled": S.to_json(y)})
    return EXIT_OK


def cmd_condition(ns, cfg: CliConfig) -> int:
    f = parse(ns.formula)
    t = parse(ns.term)
    lits = prop.from_formula(t, prop.TERM)
    if lits.data is None or not isinstance(lits.data, tuple):
        raise ValueError("--term must be a satisfiable conjunction of literals")
    x = _compile(f, cfg)
    y = K.condition_k45(x, lits) if cfg.logic == "k45n" else S.condition(x, lits)
    g = S.to_formula(y)
    if cfg.check_oracle:
        expected = substitute(f, {v: (TOP if pol else BOT) for v, pol in lits.data})
        _check(_equiv(g, expected, cfg), "conditioning disagrees with substitution")
    _emit(cfg, to_str(g), {"result": to_str(g), "compiled": S.to_json(y)})
    return EXIT_OK


def cmd_conjoin(ns, cfg: CliConfig) -> int:
    f, g = parse(ns.left), parse(ns.right)
    x, y = _compile(f, cfg), _compile(g, cfg)
    z = K.conjoin_k45(x, y) if cfg.logic == "k45n" else S.conjoin(x, y)
    h = S.to_formula(z)
    if cfg.check_oracle:
        _check(_equiv(h, conj(f, g), cfg), "conjunction disagrees with the oracle")
    _emit(cfg, to_str(h), {"result": to_str(h), "stats": _stats(z), "compiled": S.to_json(z)})
    return EXIT_OK


def cmd_plan(ns, cfg: CliConfig) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("default" if ns.trace else "ignore")
        task = load_task(ns.task, cfg.l0)
    stats = SearchStats()
    tree = plan(task, ns.depth_limit, stats, keep_trace=ns.trace)
    if ns.trace:
        for budget, kb in stats.trace:
            print(f"# budget={budget} kb={kb}", file=sys.stderr)
    if tree is None:
        _emit(cfg, f"NO PLAN (limit {ns.depth_limit})", {"plan": None, "limit": ns.depth_limit})
        return EXIT_OK
    if cfg.check_oracle:
        _check(validate_plan(task, tree), "plan failed validation")
    human = "\n".join(plan_lines(tree)) + f"\n# depth={plan_depth(tree)} nodes={stats.nodes}"
    _emit(cfg, human, {"plan": plan_to_json(tree), "depth": plan_depth(tree)})
    return EXIT_OK


def cmd_bench(ns, cfg: CliConfig) -> int:
    rows = bench(ns.family, range(ns.start, ns.stop + 1), cfg.l0)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "stes", "size", "dag_size", "seconds"])
    for r in rows:
        w.writerow([r.n, r.stes, r.size, r.dag_size, f"{r.seconds:.6f}"])
    if len(rows) >= 2:
        xs = [r.n for r in rows]
        for name in ("size", "dag_size"):
            slope, icpt, r2 = fit_affine(xs, [getattr(r, name) for r in rows])
            print(f"# fit {name}: slope={slope:.4f} intercept={icpt:.4f} r2={r2:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--logic", choices=["kn", "k45n"], default="kn")
    common.add_argument("--l0", choices=["term", "dnf"], default="term")
    common.add_argument("--check-oracle", action="store_true",
                        help="cross-verify against the semantic oracle (exit 3 on disagreement)")
    common.add_argument("--oracle-bound", type=int, default=None,
                        help="world bound for the K45 oracle (default: $EPIKC_ORACLE_BOUND or 4)")
    common.add_argument("--json", action="store_true", help="also print a JSON line")

    p = argparse.ArgumentParser(prog="epikc", description="Compile and query K_n / K45_n knowledge bases.")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("compile", parents=[common], help="compile a formula")
    c.add_argument("formula")
    c.add_argument("--form", choices=["sdnf", "scnf"], default="sdnf")
    c.set_defaults(fn=cmd_compile)

    c = sub.add_parser("sat", parents=[common], help="satisfiability")
    c.add_argument("formula")
    c.set_defaults(fn=cmd_sat)

    c = sub.add_parser("entails", parents=[common], help="does KB entail GOAL")
    c.add_argument("kb")
    c.add_argument("goal")
    c.set_defaults(fn=cmd_entails)

    c = sub.add_parser("forget", parents=[common], help="forget variables")
    c.add_argument("formula")
    c.add_argument("--vars", required=True, help="comma-separated variable names")
    c.set_defaults(fn=cmd_forget)

    c = sub.add_parser("condition", parents=[common], help="condition on a term")
    c.add_argument("formula")
    c.add_argument("--term", required=True, help="conjunction of literals, e.g. 'p & ~q'")
    c.set_defaults(fn=cmd_condition)

    c = sub.add_parser("conjoin", parents=[common], help="conjoin two compiled formulas")
    c.add_argument("left")
    c.add_argument("right")
    c.set_defaults(fn=cmd_conjoin)

    c = sub.add_parser("plan", parents=[common], help="solve a planning task file")
    c.add_argument("task")
    c.add_argument("--depth-limit", type=int, default=6)
    c.add_argument("--trace", action="store_true", help="dump each search node's KB to stderr")
    c.set_defaults(fn=cmd_plan)

    c = sub.add_parser("bench", parents=[common], help="size benchmark for a formula family")
    c.add_argument("family", choices=sorted(FAMILIES))
    c.add_argument("--start", type=int, default=0)
    c.add_argument("--stop", type=int, default=12)
    c.set_defaults(fn=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _cfg(ns)
        return ns.fn(ns, cfg)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CapabilityError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OracleDisagreement as e:
        print(f"oracle disagreement: {e}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
