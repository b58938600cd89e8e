"""Pluggable propositional sublanguages.

A :class:`PropRepr` is a propositional value in one of four backends:

* ``term``   -- a conjunction of literals (or the inconsistent term)
* ``clause`` -- a disjunction of literals (or the valid clause)
* ``dnf``    -- a list of consistent terms (empty list is false)
* ``cnf``    -- a list of non-valid clauses (empty list is true)

``term``/``clause`` and ``dnf``/``cnf`` are dual pairs: :func:`p_negate_dual`
maps a value to the dual backend's representation of its negation in linear
time.  Literals are ``(name, polarity)`` pairs kept in sorted tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .formula import (
    BOT, TOP, And, Bot, Formula, Not, Or, Top, Var, conj, disj, is_propositional, to_nnf,
)

Lit = tuple[str, bool]
Lits = tuple[Lit, ...]

TERM, CLAUSE, DNF, CNF = "term", "clause", "dnf", "cnf"
DUAL = {TERM: CLAUSE, CLAUSE: TERM, DNF: CNF, CNF: DNF}


class CapabilityError(Exception):
    """The backend does not support the requested query or transformation."""


@dataclass(frozen=True)
class SublangCapabilities:
    CO: bool
    and_BC: bool
    FO: bool
    CD: bool


CAPABILITIES = {
    TERM: SublangCapabilities(CO=True, and_BC=True, FO=True, CD=True),
    DNF: SublangCapabilities(CO=True, and_BC=True, FO=True, CD=True),
    CLAUSE: SublangCapabilities(CO=True, and_BC=False, FO=True, CD=True),
    CNF: SublangCapabilities(CO=False, and_BC=True, FO=False, CD=True),
}


def _require(kind: str, cap: str, op: str):
    if not getattr(CAPABILITIES[kind], cap):
        raise CapabilityError(f"{op}: backend {kind!r} lacks {cap}")


@dataclass(frozen=True)
class PropRepr:
    """Tagged propositional value.

    ``data`` is a sorted literal tuple for ``term``/``clause`` (``None`` for
    the inconsistent term / valid clause) and a tuple of literal tuples for
    ``dnf``/``cnf``.
    """

    kind: str
    data: Lits | None | tuple[Lits, ...]

    def __str__(self) -> str:
        return str(to_formula(self))

    @property
    def is_constant_true(self) -> bool:
        k, d = self.kind, self.data
        return ((k == TERM and d == ()) or (k == CLAUSE and d is None)
                or (k == DNF and () in d) or (k == CNF and d == ()))

    @property
    def is_constant_false(self) -> bool:
        k, d = self.kind, self.data
        return ((k == TERM and d is None) or (k == CLAUSE and d == ())
                or (k == DNF and d == ()) or (k == CNF and () in d))


def _norm_lits(lits: Iterable[Lit]) -> Lits | None:
    """Sorted, deduplicated literals; ``None`` if complementary."""
    s = set(lits)
    for name, pol in s:
        if (name, not pol) in s:
            return None
    return tuple(sorted(s))


def term(lits: Iterable[Lit] = ()) -> PropRepr:
    return PropRepr(TERM, _norm_lits(lits))


def clause(lits: Iterable[Lit] = ()) -> PropRepr:
    # complementary literals make the clause valid, which is also None
    return PropRepr(CLAUSE, _norm_lits(lits))


def dnf(terms: Iterable[Iterable[Lit]]) -> PropRepr:
    out = []
    for t in terms:
        n = _norm_lits(t)
        if n is not None and n not in out:
            out.append(n)
    return PropRepr(DNF, tuple(out))


def cnf(clauses: Iterable[Iterable[Lit]]) -> PropRepr:
    out = []
    for c in clauses:
        n = _norm_lits(c)
        if n is not None and n not in out:
            out.append(n)
    return PropRepr(CNF, tuple(out))


BOTTOM_TERM = PropRepr(TERM, None)
TOP_CLAUSE = PropRepr(CLAUSE, None)


def true_of(kind: str) -> PropRepr:
    return {TERM: PropRepr(TERM, ()), CLAUSE: TOP_CLAUSE,
            DNF: PropRepr(DNF, ((),)), CNF: PropRepr(CNF, ())}[kind]


def false_of(kind: str) -> PropRepr:
    return {TERM: BOTTOM_TERM, CLAUSE: PropRepr(CLAUSE, ()),
            DNF: PropRepr(DNF, ()), CNF: PropRepr(CNF, ((),))}[kind]


# -- conversions --------------------------------------------------------------

def _lit_formula(lit: Lit) -> Formula:
    return Var(lit[0]) if lit[1] else Not(Var(lit[0]))


def _lits_formula(lits: Lits, conjunctive: bool) -> Formula:
    parts = [_lit_formula(l) for l in lits]
    if not parts:
        return TOP if conjunctive else BOT
    if len(parts) == 1:
        return parts[0]
    return And(parts) if conjunctive else Or(parts)


def to_formula(x: PropRepr) -> Formula:
    k, d = x.kind, x.data
    if k == TERM:
        return BOT if d is None else _lits_formula(d, True)
    if k == CLAUSE:
        return TOP if d is None else _lits_formula(d, False)
    if k == DNF:
        return disj(*(_lits_formula(t, True) for t in d)) if d else BOT
    return conj(*(_lits_formula(c, False) for c in d)) if d else TOP


def _dnf_terms(f: Formula) -> list[Lits]:
    """Naive DNF by distribution; contradictory products are dropped."""
    if isinstance(f, Var):
        return [((f.name, True),)]
    if isinstance(f, Not):
        return [((f.arg.name, False),)]
    if isinstance(f, Top):
        return [()]
    if isinstance(f, Bot):
        return []
    if isinstance(f, Or):
        out: list[Lits] = []
        for a in f.args:
            for t in _dnf_terms(a):
                if t not in out:
                    out.append(t)
        return out
    if isinstance(f, And):
        acc: list[Lits] = [()]
        for a in f.args:
            nxt: list[Lits] = []
            for t1 in acc:
                for t2 in _dnf_terms(a):
                    t = _norm_lits(t1 + t2)
                    if t is not None and t not in nxt:
                        nxt.append(t)
            acc = nxt
            if not acc:
                break
        return acc
    raise TypeError(f"not propositional NNF: {f}")


def cover(f: Formula, kind: str) -> list[PropRepr]:
    """Backend values whose disjunction is equivalent to propositional ``f``.

    ``term`` splits into one term per DNF disjunct; ``dnf`` returns a single
    value.  Clause-side kinds are covered conjunctively (one clause per CNF
    conjunct), i.e. the list is read as a conjunction.
    """
    if not is_propositional(f):
        raise ValueError("cover() needs a propositional formula")
    if kind in (TERM, DNF):
        terms = _dnf_terms(to_nnf(f))
        if kind == DNF:
            return [PropRepr(DNF, tuple(terms))]
        return [PropRepr(TERM, t) for t in terms]
    # CNF of f is the negation of the DNF of ~f
    terms = _dnf_terms(to_nnf(Not(f)))
    clauses = [tuple((n, not p) for n, p in t) for t in terms]
    if kind == CNF:
        return [PropRepr(CNF, tuple(clauses))]
    return [PropRepr(CLAUSE, c) for c in clauses]


def from_formula(f: Formula, kind: str) -> PropRepr:
    """Single backend value equivalent to ``f``; fails if none exists."""
    parts = cover(f, kind)
    if kind in (DNF, CNF):
        return parts[0]
    if kind == TERM:
        if not parts:
            return BOTTOM_TERM
        if len(parts) == 1:
            return parts[0]
    else:
        if not parts:
            return TOP_CLAUSE
        if len(parts) == 1:
            return parts[0]
    raise ValueError(f"{f} is not expressible as a single {kind}")


def size(x: PropRepr) -> int:
    from .formula import size as fsize
    return fsize(to_formula(x))


def payload_size(x: PropRepr) -> int:
    """Stored literal slots: literals per term/clause, an empty one counting 1."""
    k, d = x.kind, x.data
    if d is None:
        return 1
    if k in (TERM, CLAUSE):
        return max(len(d), 1)
    return sum(max(len(ls), 1) for ls in d)


def variables(x: PropRepr) -> frozenset[str]:
    k, d = x.kind, x.data
    if d is None:
        return frozenset()
    if k in (TERM, CLAUSE):
        return frozenset(n for n, _ in d)
    return frozenset(n for ls in d for n, _ in ls)


# -- queries and transformations ----------------------------------------------

def p_sat(x: PropRepr) -> bool:
    """Consistency check (CO)."""
    _require(x.kind, "CO", "p_sat")
    k, d = x.kind, x.data
    if k == TERM:
        return d is not None
    if k == CLAUSE:
        return d is None or len(d) > 0
    return len(d) > 0  # DNF terms are consistent by construction


def p_conjoin(x: PropRepr, y: PropRepr) -> PropRepr:
    """Bounded conjunction (and-BC) within one backend."""
    if x.kind != y.kind:
        raise ValueError(f"backend mismatch: {x.kind} vs {y.kind}")
    _require(x.kind, "and_BC", "p_conjoin")
    k = x.kind
    if k == TERM:
        if x.data is None or y.data is None:
            return BOTTOM_TERM
        return PropRepr(TERM, _norm_lits(x.data + y.data))
    if k == DNF:
        return dnf(t1 + t2 for t1 in x.data for t2 in y.data)
    return cnf(itertools.chain(x.data, y.data))


def p_disjoin(x: PropRepr, y: PropRepr) -> PropRepr:
    """Bounded disjunction on the clause side (dual of :func:`p_conjoin`)."""
    if x.kind != y.kind:
        raise ValueError(f"backend mismatch: {x.kind} vs {y.kind}")
    return p_negate_dual(p_conjoin(p_negate_dual(x), p_negate_dual(y)))


def p_forget(x: PropRepr, q: Iterable[str]) -> PropRepr:
    """Strongest consequence of ``x`` not mentioning ``q`` (FO)."""
    _require(x.kind, "FO", "p_forget")
    q = frozenset(q)
    k, d = x.kind, x.data
    if k == TERM:
        if d is None:
            return x
        return PropRepr(TERM, tuple(l for l in d if l[0] not in q))
    if k == CLAUSE:
        if d is None:
            return x
        if any(l[0] in q for l in d):
            return TOP_CLAUSE
        return x
    return dnf(tuple(l for l in t if l[0] not in q) for t in d)


def _check_tau(tau: PropRepr | Iterable[Lit]) -> Lits:
    if isinstance(tau, PropRepr):
        if tau.kind != TERM:
            raise ValueError("conditioning needs a term")
        if tau.data is None:
            raise ValueError("conditioning term is inconsistent")
        return tau.data
    lits = _norm_lits(tau)
    if lits is None:
        raise ValueError("conditioning term is inconsistent")
    return lits


def _cond_lits(lits: Lits, tau: dict[str, bool], conjunctive: bool) -> Lits | None:
    """Condition a literal set; None means it collapsed to the absorbing value."""
    out = []
    for name, pol in lits:
        if name in tau:
            if (tau[name] == pol) != conjunctive:
                return None
        else:
            out.append((name, pol))
    return tuple(out)


def p_condition(x: PropRepr, tau) -> PropRepr:
    """Replace the variables of the satisfiable term ``tau`` by constants (CD)."""
    _require(x.kind, "CD", "p_condition")
    t = dict(_check_tau(tau))
    k, d = x.kind, x.data
    if k in (TERM, CLAUSE):
        if d is None:
            return x
        return PropRepr(k, _cond_lits(d, t, k == TERM))
    kept = []
    for ls in d:
        r = _cond_lits(ls, t, k == DNF)
        if r is not None and r not in kept:
            kept.append(r)
    return PropRepr(k, tuple(kept))


def p_negate_dual(x: PropRepr) -> PropRepr:
    """Negation into the dual backend, linear time."""
    k, d = x.kind, x.data
    dk = DUAL[k]
    if k in (TERM, CLAUSE):
        if d is None:
            return PropRepr(dk, None)
        return PropRepr(dk, tuple(sorted((n, not p) for n, p in d)))
    return PropRepr(dk, tuple(tuple(sorted((n, not p) for n, p in ls)) for ls in d))


def p_rename(x: PropRepr, sigma: Mapping[str, str]) -> PropRepr:
    k, d = x.kind, x.data
    if d is None:
        return x
    if k in (TERM, CLAUSE):
        return PropRepr(k, _norm_lits((sigma.get(n, n), p) for n, p in d))
    ctor = dnf if k == DNF else cnf
    return ctor(tuple((sigma.get(n, n), p) for n, p in ls) for ls in d)


def p_entails_term(x: PropRepr, y: PropRepr) -> bool:
    """``x |= y`` for two terms (used by simplification only)."""
    if x.data is None:
        return True
    if y.data is None:
        return False
    return set(y.data) <= set(x.data)


def evaluate(x: PropRepr, assignment: Mapping[str, bool]) -> bool:
    """Truth value under a total assignment of ``x``'s variables."""
    k, d = x.kind, x.data

    def lits_true(ls, conjunctive):
        vals = (assignment[n] == p for n, p in ls)
        return all(vals) if conjunctive else any(vals)

    if k == TERM:
        return d is not None and lits_true(d, True)
    if k == CLAUSE:
        return d is None or lits_true(d, False)
    if k == DNF:
        return any(lits_true(t, True) for t in d)
    return all(lits_true(c, False) for c in d)
