"""Semantic ground truth for K_n and K45_n.

* :func:`model_check` -- the inductive satisfaction relation on explicit
  pointed Kripke models.
* :func:`sat_tableau_kn` -- a plain modal tableau for K_n, returning a
  witness model.
* :func:`sat_bounded` -- exhaustive search over small pointed models.  For
  K45_n every per-agent relation is transitive and euclidean; for K_n the
  search ranges over tree-shaped frames (K_n has the tree model property).
  Complete only relative to the world bound.

Nothing here is optimised beyond what keeps the test corpus desk-sized; the
tableau deliberately has no caching.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .formula import (
    And, Bot, Box, Dia, Formula, Not, Or, Top, Var, agents, conj, is_propositional, to_nnf, variables,
)

DEFAULT_BOUND = 4


def default_bound() -> int:
    return int(os.environ.get("EPIKC_ORACLE_BOUND", DEFAULT_BOUND))


@dataclass
class KripkeModel:
    worlds: list[int]
    relations: dict[str, set[tuple[int, int]]]
    valuation: dict[int, frozenset[str]]
    actual: int = 0

    def __post_init__(self):
        ws = set(self.worlds)
        if self.actual not in ws:
            raise ValueError("actual world not in model")
        for a, rel in self.relations.items():
            for s, t in rel:
                if s not in ws or t not in ws:
                    raise ValueError(f"relation {a} leaves the model")

    def successors(self, agent: str, w: int) -> list[int]:
        return sorted(t for s, t in self.relations.get(agent, ()) if s == w)

    def to_json(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "relations": {a: sorted([s, t] for s, t in rel) for a, rel in sorted(self.relations.items())},
            "valuation": {str(w): sorted(v) for w, v in sorted(self.valuation.items())},
            "actual": self.actual,
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "KripkeModel":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            worlds=list(obj["worlds"]),
            relations={a: {(s, t) for s, t in rel} for a, rel in obj["relations"].items()},
            valuation={int(w): frozenset(v) for w, v in obj["valuation"].items()},
            actual=obj["actual"],
        )


def is_transitive(rel: set[tuple[int, int]]) -> bool:
    return all((s, u) in rel for s, t in rel for t2, u in rel if t == t2)


def is_euclidean(rel: set[tuple[int, int]]) -> bool:
    return all((t, u) in rel for s, t in rel for s2, u in rel if s == s2)


def is_k45(m: KripkeModel) -> bool:
    return all(is_transitive(r) and is_euclidean(r) for r in m.relations.values())


def model_check(m: KripkeModel, w: int, f: Formula) -> bool:
    """``M, w |= f``."""
    if w not in m.valuation and w not in m.worlds:
        raise KeyError(f"unknown world {w}")
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Var):
        return f.name in m.valuation.get(w, ())
    if isinstance(f, Not):
        return not model_check(m, w, f.arg)
    if isinstance(f, And):
        return all(model_check(m, w, a) for a in f.args)
    if isinstance(f, Or):
        return any(model_check(m, w, a) for a in f.args)
    if isinstance(f, Box):
        return all(model_check(m, t, f.arg) for t in m.successors(f.agent, w))
    if isinstance(f, Dia):
        return any(model_check(m, t, f.arg) for t in m.successors(f.agent, w))
    raise TypeError(f"not a formula: {f!r}")


# -- K_n tableau --------------------------------------------------------------

@dataclass
class _Node:
    true_vars: frozenset[str]
    children: list[tuple[str, "_Node"]] = field(default_factory=list)


def _complement(f: Formula) -> Formula:
    return f.arg if isinstance(f, Not) else Not(f)


def _expand(todo: list[Formula], done: set[Formula], ors: list[Formula]) -> _Node | None:
    """Saturate a branch; ``todo`` holds NNF formulas still to process."""
    while todo:
        f = todo.pop()
        if f in done:
            continue
        if isinstance(f, Bot):
            return None
        if isinstance(f, Top):
            continue
        done.add(f)
        if isinstance(f, And):
            todo.extend(f.args)
        elif isinstance(f, Or):
            ors.append(f)
        elif isinstance(f, (Var, Not)):
            if _complement(f) in done:
                return None
    # branch on the first disjunction not yet satisfied on this branch
    for k, f in enumerate(ors):
        if any(a in done for a in f.args):
            continue
        rest = ors[k + 1:]
        for a in f.args:
            r = _expand([a], set(done), list(rest))
            if r is not None:
                return r
        return None
    node = _Node(frozenset(g.name for g in done if isinstance(g, Var)))
    for g in sorted(done, key=str):
        if isinstance(g, Dia):
            boxed = [h.arg for h in done if isinstance(h, Box) and h.agent == g.agent]
            child = _expand([g.arg] + boxed, set(), [])
            if child is None:
                return None
            node.children.append((g.agent, child))
    return node


def _node_to_model(root: _Node) -> KripkeModel:
    worlds: list[int] = []
    rel: dict[str, set[tuple[int, int]]] = {}
    val: dict[int, frozenset[str]] = {}

    def walk(n: _Node) -> int:
        w = len(worlds)
        worlds.append(w)
        val[w] = n.true_vars
        for agent, c in n.children:
            t = walk(c)
            rel.setdefault(agent, set()).add((w, t))
        return w

    walk(root)
    return KripkeModel(worlds, rel, val, 0)


def sat_tableau_kn(f: Formula) -> KripkeModel | None:
    """A satisfying pointed model of ``f`` in K_n, or None."""
    node = _expand([to_nnf(f)], set(), [])
    return None if node is None else _node_to_model(node)


# -- bounded model enumeration --------------------------------------------------

@lru_cache(maxsize=None)
def k45_relations(n: int) -> tuple[frozenset[tuple[int, int]], ...]:
    """All transitive, euclidean relations on ``range(n)``, in a fixed order."""
    pairs = [(s, t) for s in range(n) for t in range(n)]
    out = []
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if is_transitive(rel) and is_euclidean(rel):
            out.append(frozenset(rel))
    return tuple(out)


def _reachable(n: int, rels: Sequence[Iterable[tuple[int, int]]]) -> bool:
    seen = {0}
    stack = [0]
    succ: dict[int, set[int]] = {}
    for rel in rels:
        for s, t in rel:
            succ.setdefault(s, set()).add(t)
    while stack:
        w = stack.pop()
        for t in succ.get(w, ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return len(seen) == n


def _canonical(n: int, rels: Sequence[frozenset]) -> bool:
    """True if ``rels`` is the least relabelling among those fixing world 0."""
    key = tuple(tuple(sorted(r)) for r in rels)
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm
        k2 = tuple(tuple(sorted((p[s], p[t]) for s, t in r)) for r in rels)
        if k2 < key:
            return False
    return True


@lru_cache(maxsize=None)
def frames(n: int, agent_names: tuple[str, ...], logic: str) -> tuple[tuple[frozenset, ...], ...]:
    """Point-generated frames with ``n`` worlds (root 0), up to isomorphism."""
    if logic == "k45n":
        out = []
        for rels in itertools.product(k45_relations(n), repeat=len(agent_names)):
            if _reachable(n, rels) and _canonical(n, rels):
                out.append(rels)
        return tuple(out)
    if logic == "kn":
        # trees: world w > 0 hangs below a parent p < w via one agent
        out = []
        choices = [[(p, a) for p in range(w) for a in range(len(agent_names))] for w in range(1, n)]
        for edges in itertools.product(*choices):
            rels = [set() for _ in agent_names]
            for w, (p, a) in enumerate(edges, start=1):
                rels[a].add((p, w))
            out.append(tuple(frozenset(r) for r in rels))
        return tuple(out)
    raise ValueError(f"unknown logic {logic!r}")


def _bit_masks(nbits: int) -> list[int]:
    total = 1 << nbits
    full = (1 << total) - 1
    masks = []
    for b in range(nbits):
        half = 1 << b
        block = ((1 << half) - 1) << half
        period = (1 << (2 * half)) - 1
        masks.append(full // period * block)
    return masks


class _Evaluator:
    """Truth of formulas at every world, for all valuations at once.

    A valuation of ``n`` worlds over ``vars`` is an integer index; the truth of
    a formula at a world is an int whose bit ``v`` says whether it holds under
    valuation ``v``.
    """

    def __init__(self, n: int, var_names: Sequence[str]):
        self.n = n
        self.vars = list(var_names)
        self.nbits = n * len(self.vars)
        masks = _bit_masks(self.nbits)
        self.full = (1 << (1 << self.nbits)) - 1
        self.var_mask = {
            (w, v): masks[w * len(self.vars) + k]
            for w in range(n) for k, v in enumerate(self.vars)}

    def eval(self, f: Formula, succ: dict[str, list[list[int]]], memo: dict) -> list[int]:
        hit = memo.get(f)
        if hit is not None:
            return hit
        n, full = self.n, self.full
        if isinstance(f, Top):
            r = [full] * n
        elif isinstance(f, Bot):
            r = [0] * n
        elif isinstance(f, Var):
            r = [self.var_mask[(w, f.name)] for w in range(n)]
        elif isinstance(f, Not):
            r = [full ^ x for x in self.eval(f.arg, succ, memo)]
        elif isinstance(f, And):
            r = [full] * n
            for a in f.args:
                sub = self.eval(a, succ, memo)
                r = [x & y for x, y in zip(r, sub)]
        elif isinstance(f, Or):
            r = [0] * n
            for a in f.args:
                sub = self.eval(a, succ, memo)
                r = [x | y for x, y in zip(r, sub)]
        elif isinstance(f, (Box, Dia)):
            sub = self.eval(f.arg, succ, memo)
            box = isinstance(f, Box)
            r = []
            for w in range(n):
                acc = full if box else 0
                for t in succ[f.agent][w]:
                    acc = acc & sub[t] if box else acc | sub[t]
                r.append(acc)
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = r
        return r

    def model(self, index: int, rels, agent_names) -> KripkeModel:
        val = {w: frozenset(v for k, v in enumerate(self.vars)
                            if index >> (w * len(self.vars) + k) & 1)
               for w in range(self.n)}
        relations = {a: set(r) for a, r in zip(agent_names, rels)}
        return KripkeModel(list(range(self.n)), relations, val, 0)


def _search(fs: Sequence[Formula], max_worlds: int, logic: str, mode: str):
    """Shared driver.  ``mode='sat'`` looks for a model of ``fs[0]``;
    ``mode='diff'`` looks for a model where ``fs[0]`` and ``fs[1]`` differ."""
    names = sorted(set().union(*(agents(f) for f in fs)))
    vs = sorted(set().union(*(variables(f) for f in fs)))
    agent_key = tuple(names) if names else ("_",)
    for n in range(1, max_worlds + 1):
        ev = _Evaluator(n, vs)
        for rels in frames(n, agent_key, logic):
            succ = {a: [sorted(t for s, t in r if s == w) for w in range(n)]
                    for a, r in zip(agent_key, rels)}
            memo: dict = {}
            if mode == "sat":
                hits = ev.eval(fs[0], succ, memo)[0]
            else:
                hits = ev.eval(fs[0], succ, memo)[0] ^ ev.eval(fs[1], succ, memo)[0]
            if hits:
                index = (hits & -hits).bit_length() - 1
                return ev.model(index, rels, agent_key)
        if not names:
            break  # without modalities one world is enough
    return None


def sat_bounded(f: Formula, max_worlds: int = DEFAULT_BOUND, logic: str = "k45n") -> KripkeModel | None:
    """First model of ``f`` with at most ``max_worlds`` worlds, or None."""
    if max_worlds < 1:
        raise ValueError("max_worlds must be >= 1")
    return _search([f], max_worlds, logic, "sat")


def sat_bounded_k45(f: Formula, max_worlds: int = DEFAULT_BOUND) -> KripkeModel | None:
    return sat_bounded(f, max_worlds, "k45n")


def distinguishing_model(f: Formula, g: Formula, max_worlds: int = DEFAULT_BOUND,
                         logic: str = "k45n") -> KripkeModel | None:
    """A bounded pointed model on which ``f`` and ``g`` disagree, or None."""
    return _search([f, g], max_worlds, logic, "diff")


# -- derived queries ------------------------------------------------------------

def satisfiable(f: Formula, logic: str = "kn", bound: int | None = None) -> bool:
    if logic == "kn":
        return sat_tableau_kn(f) is not None
    return sat_bounded(f, bound or default_bound(), logic) is not None


def entails(f: Formula, g: Formula, logic: str = "kn", bound: int | None = None) -> bool:
    return not satisfiable(And((f, Not(g))), logic, bound)


def equiv(f: Formula, g: Formula, logic: str = "kn", bound: int | None = None) -> bool:
    """Logical equivalence; bound-relative for ``k45n``."""
    if logic == "kn":
        return entails(f, g, "kn") and entails(g, f, "kn")
    return distinguishing_model(f, g, bound or default_bound(), logic) is None


def valid(f: Formula, logic: str = "kn", bound: int | None = None) -> bool:
    return not satisfiable(Not(f), logic, bound)


def check_separability(t: Formula, pool: Iterable[Formula], logic: str = "kn",
                       bound: int | None = None) -> bool:
    """Pool-restricted logical separability of the epistemic term ``t``.

    Every pool formula entailed by ``t`` must be entailed by the merged
    propositional part or by a single modal conjunct.
    """
    items = list(t.args) if isinstance(t, And) else [t]
    props = [c for c in items if is_propositional(c)]
    candidates = ([conj(*props)] if props else []) + [c for c in items if not is_propositional(c)]
    for eta in pool:
        if entails(t, eta, logic, bound):
            if not any(entails(c, eta, logic, bound) for c in candidates):
                return False
    return True
