"""Multi-agent epistemic planning over compiled knowledge bases.

Knowledge bases are SDNFs; preconditions and goals are SCNFs so every
entailment test is a polytime :func:`~epikc.sdnf.entails_scnf` call.
Ontic actions are public and deterministic; sensing splits the KB into the
positive and the negative outcome.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

from . import sdnf as S
from .formula import TOP, Box, Formula, Var, conj, disj, iff, neg, parse, to_str, variables
from .prop import TERM
from .sdnf import Scnf, Sdnf

log = logging.getLogger(__name__)

PRIME = "'"


def primed(name: str) -> str:
    return name + PRIME


def unprimed(name: str) -> str:
    return name[:-len(PRIME)] if name.endswith(PRIME) else name


@dataclass(frozen=True)
class Effect:
    """``var' ≡ pos ∨ (var ∧ ¬neg)``."""
    var: str
    pos: Formula
    neg: Formula


@dataclass(frozen=True)
class OnticAction:
    name: str
    pre: Scnf
    eff: tuple[Effect, ...] = ()

    def __post_init__(self):
        names = [e.var for e in self.eff]
        if len(names) != len(set(names)):
            raise ValueError(f"{self.name}: a variable has two effect triples")
        for e in self.eff:
            if any(v.endswith(PRIME) for v in variables(e.pos) | variables(e.neg)):
                raise ValueError(f"{self.name}: effect conditions must be unprimed")


@dataclass(frozen=True)
class EpistemicAction:
    name: str
    pre: Scnf
    pos: Formula
    neg: Formula


@dataclass
class EpistemicTask:
    agents: tuple[str, ...]
    vars: frozenset[str]
    ontic: list[OnticAction]
    epistemic: list[EpistemicAction]
    initial: Sdnf
    goal: Scnf
    l0: str = TERM


# -- plan trees ---------------------------------------------------------------

@dataclass(frozen=True)
class Done:
    """Leaf: the goal is entailed, or the branch is impossible."""
    reason: str = "goal"


@dataclass(frozen=True)
class OnticStep:
    action: str
    child: "PlanTree"


@dataclass(frozen=True)
class SenseStep:
    action: str
    pos: "PlanTree"
    neg: "PlanTree"


PlanTree = Union[Done, OnticStep, SenseStep]


def plan_depth(t: PlanTree) -> int:
    """Longest number of actions on a branch."""
    if isinstance(t, Done):
        return 0
    if isinstance(t, OnticStep):
        return 1 + plan_depth(t.child)
    return 1 + max(plan_depth(t.pos), plan_depth(t.neg))


def plan_to_json(t: PlanTree) -> dict:
    if isinstance(t, Done):
        return {"type": "done", "reason": t.reason}
    if isinstance(t, OnticStep):
        return {"type": "ontic", "action": t.action, "next": plan_to_json(t.child)}
    return {"type": "sense", "action": t.action, "pos": plan_to_json(t.pos), "neg": plan_to_json(t.neg)}


def plan_from_json(obj: dict) -> PlanTree:
    kind = obj["type"]
    if kind == "done":
        return Done(obj.get("reason", "goal"))
    if kind == "ontic":
        return OnticStep(obj["action"], plan_from_json(obj["next"]))
    if kind == "sense":
        return SenseStep(obj["action"], plan_from_json(obj["pos"]), plan_from_json(obj["neg"]))
    raise ValueError(f"unknown plan node type {kind!r}")


def plan_lines(t: PlanTree, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(t, Done):
        return [pad + ("done" if t.reason == "goal" else f"done ({t.reason})")]
    if isinstance(t, OnticStep):
        return [pad + t.action] + plan_lines(t.child, indent)
    return ([pad + t.action, pad + "+ if positive:"] + plan_lines(t.pos, indent + 1)
            + [pad + "- if negative:"] + plan_lines(t.neg, indent + 1))


# -- progression ----------------------------------------------------------------

def everyone_knows(f: Formula, agents: Sequence[str], k: int) -> Formula:
    """The depth-``k`` everyone-knowledge of ``f``."""
    if k < 1:
        raise ValueError("everyone knowledge needs k >= 1")
    if not agents:
        raise ValueError("everyone knowledge needs at least one agent")
    layer = conj(*(Box(a, f) for a in agents))
    for _ in range(k - 1):
        layer = conj(layer, *(Box(a, layer) for a in agents))
    return layer


def effect_formula(a: OnticAction) -> Formula:
    return conj(*(iff(Var(primed(e.var)), disj(e.pos, conj(Var(e.var), neg(e.neg)))) for e in a.eff))


def progress_ontic(kb: Sdnf, a: OnticAction, agents: Sequence[str], l0: str = TERM) -> Sdnf:
    eff = effect_formula(a)
    if eff == TOP:
        return kb
    k = max(S.depth(kb), 1)
    psi = S.conjoin(kb, S.compile_sdnf(everyone_knows(eff, agents, k), l0))
    # every variable the action talks about, primed or not, loses its old value
    q = {unprimed(v) for v in variables(eff)}
    eta = S.forget(psi, q)
    sigma = {v: unprimed(v) for v in S.variables(eta) if v.endswith(PRIME)}
    return S.simplify(S.rename_vars(eta, sigma))


def progress_epistemic(kb: Sdnf, a: EpistemicAction, l0: str = TERM) -> tuple[Sdnf, Sdnf]:
    pos = S.conjoin(kb, S.compile_sdnf(a.pos, l0))
    negative = S.conjoin(kb, S.compile_sdnf(a.neg, l0))
    return S.simplify(pos), S.simplify(negative)


def applicable(kb: Sdnf, a: OnticAction | EpistemicAction) -> bool:
    return S.entails_scnf(kb, a.pre)


# -- search ---------------------------------------------------------------------------

@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    trace: list[tuple[int, str]] = field(default_factory=list)


class _Search:
    def __init__(self, task: EpistemicTask, keep_trace: bool = False):
        self.task = task
        self.stats = SearchStats()
        self.keep_trace = keep_trace
        self.failed: dict[Sdnf, int] = {}
        self.ontic_cache: dict[tuple[Sdnf, str], Sdnf | None] = {}
        self.sense_cache: dict[tuple[Sdnf, str], tuple[Sdnf, Sdnf] | None] = {}

    def successors_ontic(self, kb: Sdnf, a: OnticAction) -> Sdnf | None:
        key = (kb, a.name)
        if key not in self.ontic_cache:
            ok = applicable(kb, a)
            self.ontic_cache[key] = progress_ontic(kb, a, self.task.agents, self.task.l0) if ok else None
        return self.ontic_cache[key]

    def successors_sense(self, kb: Sdnf, a: EpistemicAction):
        key = (kb, a.name)
        if key not in self.sense_cache:
            ok = applicable(kb, a)
            self.sense_cache[key] = progress_epistemic(kb, a, self.task.l0) if ok else None
        return self.sense_cache[key]

    def run(self, kb: Sdnf, budget: int, path: frozenset) -> tuple[PlanTree | None, bool]:
        """Returns the plan (or None) and whether the answer is path-independent.

        A failure caused by cutting a cycle depends on the current path, so
        only failures without such cuts enter the failure memo.
        """
        self.stats.nodes += 1
        if self.keep_trace:
            self.stats.trace.append((budget, to_str(S.to_formula(kb))))
        if not S.sat(kb):
            return Done("impossible"), True
        if S.entails_scnf(kb, self.task.goal):
            return Done("goal"), True
        if budget == 0:
            return None, True
        if self.failed.get(kb, -1) >= budget:
            self.stats.memo_hits += 1
            return None, True
        path = path | {kb}
        clean = True
        for a in self.task.ontic:
            nxt = self.successors_ontic(kb, a)
            if nxt is None:
                continue
            if nxt in path:
                clean = False
                continue
            sub, c = self.run(nxt, budget - 1, path)
            clean &= c
            if sub is not None:
                return OnticStep(a.name, sub), True
        for a in self.task.epistemic:
            nxt = self.successors_sense(kb, a)
            if nxt is None:
                continue
            pos_kb, neg_kb = nxt
            if pos_kb in path or neg_kb in path:
                clean = False
                continue
            pos, c = self.run(pos_kb, budget - 1, path)
            clean &= c
            if pos is None:
                continue
            negative, c = self.run(neg_kb, budget - 1, path)
            clean &= c
            if negative is not None:
                return SenseStep(a.name, pos, negative), True
        if clean:
            self.failed[kb] = max(self.failed.get(kb, -1), budget)
        return None, clean


def plan(task: EpistemicTask, depth_limit: int, stats: SearchStats | None = None,
         keep_trace: bool = False) -> PlanTree | None:
    """Iterative-deepening AND-OR search; None means no plan within the limit."""
    search = _Search(task, keep_trace)
    result = None
    for budget in range(depth_limit + 1):
        result, _ = search.run(task.initial, budget, frozenset())
        if result is not None:
            break
    if stats is not None:
        stats.nodes = search.stats.nodes
        stats.memo_hits = search.stats.memo_hits
        stats.trace = search.stats.trace
    return result


def validate_plan(task: EpistemicTask, tree: PlanTree, kb: Sdnf | None = None) -> bool:
    """Replay ``tree`` from ``kb`` (default: the initial KB)."""
    kb = task.initial if kb is None else kb
    if isinstance(tree, Done):
        return not S.sat(kb) or S.entails_scnf(kb, task.goal)
    if isinstance(tree, OnticStep):
        a = next((x for x in task.ontic if x.name == tree.action), None)
        if a is None or not applicable(kb, a):
            return False
        return validate_plan(task, tree.child, progress_ontic(kb, a, task.agents, task.l0))
    a = next((x for x in task.epistemic if x.name == tree.action), None)
    if a is None or not applicable(kb, a):
        return False
    pos, negative = progress_epistemic(kb, a, task.l0)
    return validate_plan(task, tree.pos, pos) and validate_plan(task, tree.neg, negative)


# -- task files -----------------------------------------------------------------

def _scnf_from_text(text: str, roster, l0: str, compiled: list[str], what: str) -> Scnf:
    f = parse(text, roster)
    if f != TOP:
        compiled.append(what)
    return S.compile_scnf(f, l0)


def load_task(src: str | Path | dict, l0: str = TERM) -> EpistemicTask:
    """Build a task from the JSON task format (a path, JSON text, or a dict)."""
    if isinstance(src, dict):
        obj = src
    else:
        p = Path(src) if not str(src).lstrip().startswith("{") else None
        obj = json.loads(p.read_text() if p is not None else str(src))
    roster = list(obj["agents"])
    compiled: list[str] = []
    ontic = [
        OnticAction(
            a["name"],
            _scnf_from_text(a.get("pre", "true"), roster, l0, compiled, f"pre({a['name']})"),
            tuple(Effect(e["var"], parse(e.get("pos", "false"), roster),
                         parse(e.get("neg", "false"), roster)) for e in a.get("eff", [])),
        )
        for a in obj.get("ontic", [])
    ]
    epistemic = [
        EpistemicAction(
            a["name"],
            _scnf_from_text(a.get("pre", "true"), roster, l0, compiled, f"pre({a['name']})"),
            parse(a["pos"], roster), parse(a["neg"], roster))
        for a in obj.get("epistemic", [])
    ]
    goal = _scnf_from_text(obj.get("goal", "true"), roster, l0, compiled, "goal")
    if compiled:
        warnings.warn(f"compiled {len(compiled)} precondition/goal formulas into SCNF; "
                      "this step is not polytime", stacklevel=2)
    initial = S.compile_sdnf(parse(obj.get("initial", "true"), roster), l0)
    return EpistemicTask(tuple(roster), frozenset(obj.get("vars", [])), ontic, epistemic, initial, goal, l0)


# -- the rooms-and-boxes domain -----------------------------------------------------

ROOMS = (1, 2, 3, 4)
BOXES = ("b1", "b2")


def at(agent: str, room: int) -> str:
    return f"at_{agent}_r{room}"


def box_in(box: str, room: int) -> str:
    return f"in_{box}_r{room}"


KNOWS_WHETHER_GOAL = "([i]in_b1_r2 | [i]~in_b1_r2) & ([j]in_b2_r3 | [j]~in_b2_r3)"
STRICT_GOAL = "[i]in_b1_r2 & [j]in_b2_r3"


def rooms_task_json(goal: str = KNOWS_WHETHER_GOAL, agents: Sequence[str] = ("i", "j")) -> dict:
    """Four rooms in a row, two boxes, two agents who each know only their own room."""
    ontic = []
    for ag in agents:
        ontic.append({
            "name": f"right({ag})",
            "pre": f"[{ag}](" + " | ".join(at(ag, r) for r in ROOMS[:-1]) + ")",
            "eff": [{"var": at(ag, r + 1), "pos": at(ag, r), "neg": "true"} for r in ROOMS[:-1]],
        })
        ontic.append({
            "name": f"left({ag})",
            "pre": f"[{ag}](" + " | ".join(at(ag, r) for r in ROOMS[1:]) + ")",
            "eff": [{"var": at(ag, r - 1), "pos": at(ag, r), "neg": "true"} for r in ROOMS[1:]],
        })
    epistemic = [
        {"name": f"sense({ag},{b},r{r})", "pre": f"[{ag}]{at(ag, r)}",
         "pos": f"[{ag}]{box_in(b, r)}", "neg": f"[{ag}]~{box_in(b, r)}"}
        for ag in agents for b in BOXES for r in ROOMS
    ]
    variables_ = [at(a, r) for a in agents for r in ROOMS] + [box_in(b, r) for b in BOXES for r in ROOMS]
    return {
        "agents": list(agents),
        "vars": variables_,
        "ontic": ontic,
        "epistemic": epistemic,
        "initial": f"[{agents[0]}]{at(agents[0], 1)} & [{agents[1]}]{at(agents[1], 4)}",
        "goal": goal,
    }
