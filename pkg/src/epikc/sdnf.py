"""Separability-based normal forms: STE/SDNF and their duals SCL/SCNF.

An :class:`Ste` is ``alpha & AND_i ([i]beta_i & AND_j <i>gamma_ij)`` where
``alpha`` is a propositional value of the chosen backend and every
``beta_i``/``gamma_ij`` is itself an :class:`Sdnf`.  Each ``gamma_ij`` is
stored already conjoined with ``beta_i``, so ``gamma_ij |= beta_i`` holds by
construction.  :class:`Scl`/:class:`Scnf` mirror this on the clause side.

Agents absent from a term carry no constraint.  Compiled values share
substructure freely; every function here is pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from . import prop
from .formula import (
    TOP, And, Box, Dia, Formula, Not, Or, conj, disj, is_propositional, to_nnf,
)
from .formula import depth as formula_depth
from .formula import parse as parse_formula
from .formula import size as formula_size
from .prop import CLAUSE, DNF, TERM, PropRepr


class CaptureError(ValueError):
    """A renaming target already occurs in the formula."""


# -- data ---------------------------------------------------------------------

def _cached_hash(obj, *fields):
    object.__setattr__(obj, "_h", hash(fields))


@dataclass(frozen=True, eq=True)
class AgentPart:
    """The ``[i]beta`` / ``<i>gamma`` block of one agent inside an STE."""

    box: "Sdnf | None"
    diamonds: tuple["Sdnf", ...] = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.box, self.diamonds)

    def __hash__(self):
        return self._h


@dataclass(frozen=True, eq=True)
class Ste:
    alpha: PropRepr
    parts: tuple[tuple[str, AgentPart], ...] = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.alpha, self.parts)

    def __hash__(self):
        return self._h

    def part(self, agent: str) -> AgentPart | None:
        for a, p in self.parts:
            if a == agent:
                return p
        return None

    def __str__(self):
        return str(ste_formula(self))


@dataclass(frozen=True, eq=True)
class Sdnf:
    disjuncts: tuple[Ste, ...] = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.disjuncts)

    def __hash__(self):
        return self._h

    def __str__(self):
        return str(to_formula(self))


@dataclass(frozen=True, eq=True)
class ClausePart:
    """The ``<i>beta`` / ``[i]gamma`` block of one agent inside an SCL."""

    diamond: "Scnf | None"
    boxes: tuple["Scnf", ...] = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.diamond, self.boxes)

    def __hash__(self):
        return self._h


@dataclass(frozen=True, eq=True)
class Scl:
    alpha: PropRepr
    parts: tuple[tuple[str, ClausePart], ...] = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.alpha, self.parts)

    def __hash__(self):
        return self._h

    def part(self, agent: str) -> ClausePart | None:
        for a, p in self.parts:
            if a == agent:
                return p
        return None

    def __str__(self):
        return str(scl_formula(self))


@dataclass(frozen=True, eq=True)
class Scnf:
    conjuncts: tuple[Scl, ...] = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.conjuncts)

    def __hash__(self):
        return self._h

    def __str__(self):
        return str(scnf_to_formula(self))


def sdnf_true(l0: str = TERM) -> Sdnf:
    return Sdnf((Ste(prop.true_of(l0)),))


SDNF_FALSE = Sdnf(())
SCNF_TRUE = Scnf(())


def scnf_false(l0p: str = CLAUSE) -> Scnf:
    return Scnf((Scl(prop.false_of(l0p)),))


def backend(x: Sdnf | Scnf) -> str | None:
    """Backend kind of the propositional parts, or None for an empty form."""
    items = x.disjuncts if isinstance(x, Sdnf) else x.conjuncts
    for s in items:
        return s.alpha.kind
    return None


# -- rendering ----------------------------------------------------------------

def ste_formula(s: Ste, _memo=None) -> Formula:
    memo = {} if _memo is None else _memo
    items = [prop.to_formula(s.alpha)]
    for agent, p in s.parts:
        if p.box is not None:
            items.append(Box(agent, to_formula(p.box, memo)))
        for g in p.diamonds:
            items.append(Dia(agent, to_formula(g, memo)))
    return conj(*items)


def to_formula(x: Sdnf, _memo=None) -> Formula:
    """The SDNF as a plain formula; shared sub-forms render to shared nodes."""
    memo = {} if _memo is None else _memo
    key = id(x)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    f = disj(*(ste_formula(s, memo) for s in x.disjuncts))
    memo[key] = (x, f)
    return f


def scl_formula(c: Scl, _memo=None) -> Formula:
    memo = {} if _memo is None else _memo
    items = [prop.to_formula(c.alpha)]
    for agent, p in c.parts:
        if p.diamond is not None:
            items.append(Dia(agent, scnf_to_formula(p.diamond, memo)))
        for g in p.boxes:
            items.append(Box(agent, scnf_to_formula(g, memo)))
    return disj(*items)


def scnf_to_formula(x: Scnf, _memo=None) -> Formula:
    memo = {} if _memo is None else _memo
    key = id(x)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    f = conj(*(scl_formula(c, memo) for c in x.conjuncts))
    memo[key] = (x, f)
    return f


def size(x: Sdnf | Scnf) -> int:
    """Tree size of the rendered formula."""
    if isinstance(x, Scnf):
        return formula_size(scnf_to_formula(x))
    return formula_size(to_formula(x))


def dag_size(x: Sdnf | Scnf) -> int:
    """Size with every structurally distinct subformula counted once."""
    f = scnf_to_formula(x) if isinstance(x, Scnf) else to_formula(x)
    seen: set[Formula] = set()
    n = 0
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        kids = g.children
        n += max(len(kids) - 1, 1) if kids else 1
        stack.extend(kids)
    return n


def repr_size(x: Sdnf | Scnf) -> int:
    """Size of the stored structure: literal slots of every propositional
    part plus one per modal operator, each empty form counting 1."""

    def form(y) -> int:
        items = y.disjuncts if isinstance(y, Sdnf) else y.conjuncts
        if not items:
            return 1
        return sum(item(s) for s in items)

    def item(s) -> int:
        n = prop.payload_size(s.alpha)
        for _, p in s.parts:
            n += sum(1 + form(c) for c in _part_children(p))
        return n

    return form(x)


def depth(x: Sdnf | Scnf) -> int:
    f = scnf_to_formula(x) if isinstance(x, Scnf) else to_formula(x)
    return formula_depth(f)


def variables(x: Sdnf | Scnf) -> frozenset[str]:
    out: set[str] = set()
    seen: set[int] = set()

    def walk(y):
        if id(y) in seen:
            return
        seen.add(id(y))
        items = y.disjuncts if isinstance(y, Sdnf) else y.conjuncts
        for s in items:
            out.update(prop.variables(s.alpha))
            for _, p in s.parts:
                for sub in _part_children(p):
                    walk(sub)

    walk(x)
    return frozenset(out)


def _part_children(p) -> Iterator:
    if isinstance(p, AgentPart):
        if p.box is not None:
            yield p.box
        yield from p.diamonds
    else:
        if p.diamond is not None:
            yield p.diamond
        yield from p.boxes


def iter_stes(x: Sdnf) -> Iterator[Ste]:
    """Every STE occurring anywhere in ``x`` (each shared one once)."""
    seen: set[int] = set()
    stack = [x]
    while stack:
        y = stack.pop()
        if id(y) in seen:
            continue
        seen.add(id(y))
        for s in y.disjuncts:
            yield s
            for _, p in s.parts:
                stack.extend(_part_children(p))


# -- compilation --------------------------------------------------------------

_COMPILE_MEMO: dict[tuple[Formula, str], Sdnf] = {}


def clear_memo() -> None:
    _COMPILE_MEMO.clear()


def _epistemic_terms(f: Formula) -> list[list[Formula]]:
    """Distribute over an NNF formula whose atoms are maximal propositional
    subformulas and modal literals."""
    if isinstance(f, (Box, Dia)) or is_propositional(f):
        return [[f]]
    if isinstance(f, Or):
        out = []
        for a in f.args:
            out.extend(_epistemic_terms(a))
        return out
    if isinstance(f, And):
        acc: list[list[Formula]] = [[]]
        for a in f.args:
            sub = _epistemic_terms(a)
            acc = [t1 + t2 for t1 in acc for t2 in sub]
        return acc
    raise TypeError(f"unexpected node in NNF: {f!r}")


def _compile(f: Formula, l0: str) -> Sdnf:
    key = (f, l0)
    hit = _COMPILE_MEMO.get(key)
    if hit is not None:
        return hit
    if is_propositional(f):
        res = Sdnf(tuple(Ste(a) for a in prop.cover(f, l0)))
    else:
        stes: list[Ste] = []
        for t in _epistemic_terms(f):
            props: list[Formula] = []
            boxes: dict[str, list[Formula]] = {}
            dias: dict[str, list[Formula]] = {}
            for b in t:
                if isinstance(b, Box):
                    boxes.setdefault(b.agent, []).append(b.arg)
                elif isinstance(b, Dia):
                    dias.setdefault(b.agent, []).append(b.arg)
                else:
                    props.append(b)
            parts = []
            for agent in sorted(set(boxes) | set(dias)):
                if agent in boxes:
                    beta = conj(*boxes[agent])
                    box = _compile(beta, l0)
                else:
                    beta, box = TOP, None
                dmds = tuple(_compile(conj(g, beta), l0) for g in dias.get(agent, ()))
                parts.append((agent, AgentPart(box, dmds)))
            parts = tuple(parts)
            for a in prop.cover(conj(*props), l0):
                stes.append(Ste(a, parts))
        res = Sdnf(tuple(stes))
    _COMPILE_MEMO[key] = res
    return res


def compile_sdnf(f: Formula, l0: str = TERM) -> Sdnf:
    """Equivalent SDNF over backend ``l0`` (``term`` or ``dnf``).

    NNF first, then recursion on modal depth: distribute to epistemic terms,
    merge the propositional part and each agent's boxes, and push the merged
    box into every diamond of the same agent.
    """
    if l0 not in (TERM, DNF):
        raise ValueError(f"SDNF backend must be term or dnf, not {l0!r}")
    return _compile(to_nnf(f), l0)


def compile_scnf(f: Formula, l0: str = TERM) -> Scnf:
    """Equivalent SCNF over the dual of ``l0`` (clauses for ``term``)."""
    return negate_to_scnf(compile_sdnf(Not(f), l0))


# -- satisfiability -----------------------------------------------------------

def sat(x: Sdnf) -> bool:
    """Satisfiability by recursion on the separable structure.

    A term is satisfiable iff its propositional part and every diamond body
    is; box bodies never need checking.
    """
    return _sat(x, {})


def _sat(x: Sdnf, memo: dict[int, bool]) -> bool:
    key = id(x)
    if key in memo:
        return memo[key]
    r = any(_sat_ste(s, memo) for s in x.disjuncts)
    memo[key] = r
    return r


def _sat_ste(s: Ste, memo) -> bool:
    if not prop.p_sat(s.alpha):
        return False
    for _, p in s.parts:
        for g in p.diamonds:
            if not _sat(g, memo):
                return False
    return True


def sat_ste(s: Ste) -> bool:
    return _sat_ste(s, {})


# -- negation duality ---------------------------------------------------------

def negate_ste(s: Ste, _memo=None) -> Scl:
    memo = {} if _memo is None else _memo
    parts = tuple(
        (a, ClausePart(
            None if p.box is None else negate_to_scnf(p.box, memo),
            tuple(negate_to_scnf(g, memo) for g in p.diamonds)))
        for a, p in s.parts)
    return Scl(prop.p_negate_dual(s.alpha), parts)


def negate_scl(c: Scl, _memo=None) -> Ste:
    memo = {} if _memo is None else _memo
    parts = tuple(
        (a, AgentPart(
            None if p.diamond is None else negate_to_sdnf(p.diamond, memo),
            tuple(negate_to_sdnf(g, memo) for g in p.boxes)))
        for a, p in c.parts)
    return Ste(prop.p_negate_dual(c.alpha), parts)


def negate_to_scnf(x: Sdnf, _memo=None) -> Scnf:
    """SCNF equivalent to the negation of ``x``; linear, sharing-preserving."""
    memo = {} if _memo is None else _memo
    hit = memo.get(id(x))
    if hit is not None:
        return hit[1]
    r = Scnf(tuple(negate_ste(s, memo) for s in x.disjuncts))
    memo[id(x)] = (x, r)
    return r


def negate_to_sdnf(x: Scnf, _memo=None) -> Sdnf:
    memo = {} if _memo is None else _memo
    hit = memo.get(id(x))
    if hit is not None:
        return hit[1]
    r = Sdnf(tuple(negate_scl(c, memo) for c in x.conjuncts))
    memo[id(x)] = (x, r)
    return r


# -- conjunction / disjunction ------------------------------------------------

def conjoin_ste(s: Ste, t: Ste) -> Ste:
    alpha = prop.p_conjoin(s.alpha, t.alpha)
    agents = sorted({a for a, _ in s.parts} | {a for a, _ in t.parts})
    parts = []
    for a in agents:
        p1, p2 = s.part(a), t.part(a)
        if p1 is None:
            parts.append((a, p2))
            continue
        if p2 is None:
            parts.append((a, p1))
            continue
        b1, b2 = p1.box, p2.box
        if b1 is None:
            box = b2
        elif b2 is None:
            box = b1
        else:
            box = conjoin(b1, b2)
        # each diamond absorbs the other side's box
        dmds = tuple(g if b2 is None else conjoin(g, b2) for g in p1.diamonds)
        dmds += tuple(g if b1 is None else conjoin(b1, g) for g in p2.diamonds)
        parts.append((a, AgentPart(box, dmds)))
    return Ste(alpha, tuple(parts))


def conjoin(x: Sdnf, y: Sdnf) -> Sdnf:
    """SDNF equivalent to ``x & y`` by pairwise STE products."""
    return Sdnf(tuple(conjoin_ste(s, t) for s in x.disjuncts for t in y.disjuncts))


def disjoin(xs: Iterable[Sdnf]) -> Sdnf:
    out: list[Ste] = []
    for x in xs:
        out.extend(x.disjuncts)
    return Sdnf(tuple(out))


# -- entailment ---------------------------------------------------------------

def entails_scl(x: Sdnf, c: Scl) -> bool:
    """``x |= c``: negate ``c`` into an STE, conjoin, test satisfiability."""
    neg = negate_scl(c)
    memo: dict[int, bool] = {}
    return not any(_sat_ste(conjoin_ste(s, neg), memo) for s in x.disjuncts)


def entails_scnf(x: Sdnf, g: Scnf) -> bool:
    return all(entails_scl(x, c) for c in g.conjuncts)


# -- forgetting, conditioning, renaming ----------------------------------------

def forget(x: Sdnf, q: Iterable[str]) -> Sdnf:
    """SDNF equivalent to the result of forgetting ``q`` in ``x``.

    Componentwise propositional forgetting.  Unsatisfiable STEs are replaced
    by the false term first: the componentwise rule is only sound for
    satisfiable separable terms.
    """
    q = frozenset(q)
    if not q:
        return x
    return _forget(x, q, {}, {})


def _forget(x: Sdnf, q, memo, satmemo) -> Sdnf:
    hit = memo.get(id(x))
    if hit is not None:
        return hit[1]
    out = []
    for s in x.disjuncts:
        if not _sat_ste(s, satmemo):
            out.append(Ste(prop.false_of(s.alpha.kind)))
            continue
        parts = tuple(
            (a, AgentPart(None if p.box is None else _forget(p.box, q, memo, satmemo),
                          tuple(_forget(g, q, memo, satmemo) for g in p.diamonds)))
            for a, p in s.parts)
        out.append(Ste(prop.p_forget(s.alpha, q), parts))
    r = Sdnf(tuple(out))
    memo[id(x)] = (x, r)
    return r


def _map_alpha(x, fn, memo):
    """Rebuild an SDNF/SCNF applying ``fn`` to every propositional part."""
    hit = memo.get(id(x))
    if hit is not None:
        return hit[1]
    if isinstance(x, Sdnf):
        items = []
        for s in x.disjuncts:
            parts = tuple(
                (a, AgentPart(None if p.box is None else _map_alpha(p.box, fn, memo),
                              tuple(_map_alpha(g, fn, memo) for g in p.diamonds)))
                for a, p in s.parts)
            items.append(Ste(fn(s.alpha), parts))
        r = Sdnf(tuple(items))
    else:
        items = []
        for c in x.conjuncts:
            parts = tuple(
                (a, ClausePart(None if p.diamond is None else _map_alpha(p.diamond, fn, memo),
                               tuple(_map_alpha(g, fn, memo) for g in p.boxes)))
                for a, p in c.parts)
            items.append(Scl(fn(c.alpha), parts))
        r = Scnf(tuple(items))
    memo[id(x)] = (x, r)
    return r


def condition(x, tau):
    """Condition every propositional component on the satisfiable term ``tau``.

    Works on both SDNF and SCNF.
    """
    if isinstance(tau, PropRepr):
        if tau.kind != TERM or tau.data is None:
            raise ValueError("conditioning needs a satisfiable term")
    else:
        tau = prop.term(tau)
        if tau.data is None:
            raise ValueError("conditioning term is inconsistent")
    if not tau.data:
        return x
    return _map_alpha(x, lambda a: prop.p_condition(a, tau), {})


def rename_vars(x, sigma: Mapping[str, str]):
    """Substitute variable names throughout; refuses to capture."""
    sigma = {k: v for k, v in sigma.items() if k != v}
    if not sigma:
        return x
    if len(set(sigma.values())) != len(sigma):
        raise ValueError("renaming is not injective")
    present = variables(x)
    for v in sigma.values():
        if v in present and v not in sigma:
            raise CaptureError(f"renaming target {v!r} already occurs")
    return _map_alpha(x, lambda a: prop.p_rename(a, sigma), {})


# -- simplification -------------------------------------------------------------

def simplify(x: Sdnf) -> Sdnf:
    """Equivalence-preserving cleanup.

    Drops unsatisfiable and duplicate terms, removes ``[i]true`` blocks,
    and merges terms whose modal parts coincide by resolving/subsuming
    their propositional parts.  Not used by compilation itself.
    """
    return _simplify(x, {}, {})


def _is_true_sdnf(x: Sdnf) -> bool:
    return any(not s.parts and s.alpha.is_constant_true for s in x.disjuncts)


def _merge_terms(terms: list[PropRepr]) -> list[PropRepr]:
    kind = terms[0].kind
    if kind == DNF:
        merged = prop.dnf(t for x in terms for t in x.data)
        return [merged]
    sets = [frozenset(t.data) for t in terms if t.data is not None]
    changed = True
    while changed:
        changed = False
        # subsumption
        keep = []
        for i, a in enumerate(sets):
            if any((b < a) or (b == a and j < i) for j, b in enumerate(sets)):
                changed = True
                continue
            keep.append(a)
        sets = keep
        # resolution on a single clashing literal
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                a, b = sets[i], sets[j]
                if len(a) != len(b):
                    continue
                diff = a ^ b
                if len(diff) == 2:
                    (n1, p1), (n2, p2) = sorted(diff)
                    if n1 == n2 and p1 != p2:
                        sets[i] = a & b
                        del sets[j]
                        changed = True
                        break
            if changed:
                break
    return [PropRepr(TERM, tuple(sorted(s))) for s in sets]


def _simplify(x: Sdnf, memo, satmemo) -> Sdnf:
    hit = memo.get(id(x))
    if hit is not None:
        return hit[1]
    groups: dict[tuple, list[PropRepr]] = {}
    order: list[tuple] = []
    for s in x.disjuncts:
        parts = []
        dead = False
        for a, p in s.parts:
            box = None if p.box is None else _simplify(p.box, memo, satmemo)
            dmds = []
            for g in p.diamonds:
                g2 = _simplify(g, memo, satmemo)
                if not g2.disjuncts:
                    dead = True
                if g2 not in dmds:
                    dmds.append(g2)
            if box is not None and _is_true_sdnf(box):
                box = None
            if box is None and not dmds:
                continue
            parts.append((a, AgentPart(box, tuple(dmds))))
        if dead or not prop.p_sat(s.alpha):
            continue
        key = tuple(parts)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(s.alpha)
    stes = []
    for key in order:
        for a in _merge_terms(groups[key]):
            st = Ste(a, key)
            if not key and a.is_constant_true:
                stes = [st]
                break
            stes.append(st)
        else:
            continue
        break
    r = Sdnf(tuple(stes))
    memo[id(x)] = (x, r)
    return r


# -- JSON -----------------------------------------------------------------------

def to_json(x: Sdnf | Scnf) -> dict:
    """Structured form; ``alpha`` fields are formulas in the surface syntax."""

    def enc_sdnf(y: Sdnf):
        return {"disjuncts": [
            {"alpha": str(prop.to_formula(s.alpha)),
             "agents": {a: {"box": None if p.box is None else enc_sdnf(p.box),
                            "diamonds": [enc_sdnf(g) for g in p.diamonds]}
                        for a, p in s.parts}}
            for s in y.disjuncts]}

    def enc_scnf(y: Scnf):
        return {"conjuncts": [
            {"alpha": str(prop.to_formula(c.alpha)),
             "agents": {a: {"diamond": None if p.diamond is None else enc_scnf(p.diamond),
                            "boxes": [enc_scnf(g) for g in p.boxes]}
                        for a, p in c.parts}}
            for c in y.conjuncts]}

    body = enc_scnf(x) if isinstance(x, Scnf) else enc_sdnf(x)
    body["l0"] = backend(x)
    return body


def from_json(obj: dict | str, l0: str | None = None) -> Sdnf | Scnf:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = l0 or obj.get("l0") or (TERM if "disjuncts" in obj else CLAUSE)

    def dec_sdnf(o):
        stes = []
        for d in o["disjuncts"]:
            parts = tuple(sorted(
                (a, AgentPart(None if p["box"] is None else dec_sdnf(p["box"]),
                              tuple(dec_sdnf(g) for g in p["diamonds"])))
                for a, p in d["agents"].items()))
            stes.append(Ste(prop.from_formula(parse_formula(d["alpha"]), kind), parts))
        return Sdnf(tuple(stes))

    def dec_scnf(o):
        cls = []
        for d in o["conjuncts"]:
            parts = tuple(sorted(
                (a, ClausePart(None if p["diamond"] is None else dec_scnf(p["diamond"]),
                               tuple(dec_scnf(g) for g in p["boxes"])))
                for a, p in d["agents"].items()))
            cls.append(Scl(prop.from_formula(parse_formula(d["alpha"]), kind), parts))
        return Scnf(tuple(cls))

    return dec_sdnf(obj) if "disjuncts" in obj else dec_scnf(obj)
