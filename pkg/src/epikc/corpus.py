"""Formula generators: seeded random corpora and exhaustive small pools."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import (
    BOT, TOP, And, Bot, Box, Dia, Formula, Not, Or, Top, Var, _Modal, conj, depth, disj,
    is_propositional, size, to_nnf, to_str,
)


@dataclass(frozen=True)
class CorpusConfig:
    max_size: int = 12
    vars: tuple[str, ...] = ("p", "q", "r", "s")
    agents: tuple[str, ...] = ("i", "j")
    max_depth: int = 3
    constant_rate: float = 0.05


def _gen(rng: random.Random, budget: int, dep: int, cfg: CorpusConfig) -> Formula:
    """A formula of size exactly ``budget``."""
    if budget <= 1:
        if rng.random() < cfg.constant_rate:
            return rng.choice((TOP, BOT))
        return Var(rng.choice(cfg.vars))
    ops = ["not", "and", "or"] if budget >= 3 else ["not"]
    if dep > 0:
        ops += ["box", "dia"]
    op = rng.choice(ops)
    if op == "not":
        return Not(_gen(rng, budget - 1, dep, cfg))
    if op in ("box", "dia"):
        cls = Box if op == "box" else Dia
        return cls(rng.choice(cfg.agents), _gen(rng, budget - 1, dep - 1, cfg))
    left = rng.randint(1, budget - 2)
    a = _gen(rng, left, dep, cfg)
    b = _gen(rng, budget - 1 - left, dep, cfg)
    return (And if op == "and" else Or)((a, b))


def random_formula(rng: random.Random, cfg: CorpusConfig = CorpusConfig()) -> Formula:
    while True:
        f = _gen(rng, rng.randint(1, cfg.max_size), cfg.max_depth, cfg)
        if size(f) <= cfg.max_size and depth(f) <= cfg.max_depth:
            return f


def corpus(n: int, seed: int = 0, cfg: CorpusConfig = CorpusConfig(),
           min_size: int = 1) -> list[Formula]:
    """``n`` random formulas, reproducible from ``seed``."""
    rng = random.Random(seed)
    out: list[Formula] = []
    while len(out) < n:
        f = random_formula(rng, cfg)
        if size(f) >= min_size:
            out.append(f)
    return out


# -- normalisation --------------------------------------------------------------

def normalize(f: Formula) -> Formula:
    """An equivalent (in every normal modal logic) canonical-ish form.

    NNF, constant folding, sorted and deduplicated arguments of ∧/∨, and the
    K-valid identities □⊤ = ⊤, ◇⊥ = ⊥.
    """
    return _norm(to_nnf(f))


def _norm(f: Formula) -> Formula:
    if isinstance(f, (And, Or)):
        args = [_norm(a) for a in f.args]
        flat: set[Formula] = set()
        for a in args:
            flat.update(a.args if type(a) is type(f) else (a,))
        ordered = sorted(flat, key=_order_key)
        if isinstance(f, And):
            if any(isinstance(a, Not) and a.arg in flat for a in ordered):
                return BOT
            return conj(*ordered)
        if any(isinstance(a, Not) and a.arg in flat for a in ordered):
            return TOP
        return disj(*ordered)
    if isinstance(f, Box):
        b = _norm(f.arg)
        return TOP if isinstance(b, Top) else Box(f.agent, b)
    if isinstance(f, Dia):
        b = _norm(f.arg)
        return BOT if isinstance(b, Bot) else Dia(f.agent, b)
    return f


def _order_key(f: Formula):
    return (size(f), to_str(f))


# -- exhaustive pools -------------------------------------------------------------

def enumerate_formulas(vars: Sequence[str], agents: Sequence[str], max_size: int,
                       constants: bool = True) -> dict[int, list[Formula]]:
    """Every AST of each size up to ``max_size`` (binary ∧/∨ before flattening),
    keyed by size, deduplicated structurally."""
    atoms: list[Formula] = [Var(v) for v in sorted(vars)]
    if constants:
        atoms += [TOP, BOT]
    levels: dict[int, list[Formula]] = {1: list(dict.fromkeys(atoms))}
    for s in range(2, max_size + 1):
        out: dict[Formula, None] = {}
        for g in levels[s - 1]:
            out[Not(g)] = None
            for a in agents:
                out[Box(a, g)] = None
                out[Dia(a, g)] = None
        for ls in range(1, s - 1):
            rs = s - 1 - ls
            for x in levels[ls]:
                for y in levels[rs]:
                    out[And((x, y))] = None
                    out[Or((x, y))] = None
        levels[s] = list(out)
    return levels


def formula_pool(vars: Iterable[str], agents: Sequence[str], max_size: int = 5,
                 dedupe: bool = True) -> list[Formula]:
    """All formulas of size ≤ ``max_size`` over the vocabulary, optionally
    collapsed modulo :func:`normalize` (which preserves equivalence)."""
    levels = enumerate_formulas(sorted(vars), agents, max_size)
    every = [f for s in sorted(levels) for f in levels[s]]
    if not dedupe:
        return every
    seen: dict[Formula, None] = {}
    for f in every:
        seen.setdefault(normalize(f), None)
    return list(seen)


def is_basic(f: Formula) -> bool:
    """Propositional formula or epistemic literal."""
    return is_propositional(f) or isinstance(f, _Modal)


def basic_pool(vars: Iterable[str], agents: Sequence[str], max_size: int = 5) -> list[Formula]:
    return [f for f in formula_pool(vars, agents, max_size) if is_basic(f)]
