"""K45_n support: the alternating agent operator property and ASDNF/ASCNF.

In K45_n every i-successor of a world sees exactly the same i-successors,
so a formula headed by an i-modality has one truth value across all
i-successors.  The four rewrite rules below exploit that to lift such
formulas out of an enclosing i-box; :func:`alternate` applies them bottom-up
until no modality of an agent sits directly inside one of the same agent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from . import sdnf as S
from .formula import (
    BOT, TOP, And, Bot, Box, Dia, Formula, Not, Or, Top, Var, _Modal, conj, disj, is_nnf,
    neg, size, to_nnf,
)
from .prop import TERM
from .sdnf import Scl, Scnf, Sdnf


class AlternationError(ValueError):
    """Raised when an operation needs alternating input or output and did not get it."""


@dataclass(frozen=True)
class AlternationReport:
    alternating: bool
    first_violation: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.alternating


def is_alternating(f: Formula) -> AlternationReport:
    """Check that no i-modality occurs directly inside another i-modality.

    ``first_violation`` is the child-index path (pre-order) to the first
    offending modality.
    """

    def walk(g: Formula, enclosing: str | None, path: tuple[int, ...]):
        if isinstance(g, _Modal):
            if g.agent == enclosing:
                return path
            return walk(g.arg, g.agent, path + (0,))
        for k, c in enumerate(g.children):
            hit = walk(c, enclosing, path + (k,))
            if hit is not None:
                return hit
        return None

    hit = walk(f, None, ())
    return AlternationReport(hit is None, hit)


def sdnf_is_alternating(x: Sdnf | Scnf) -> bool:
    """Structural alternation check on a compiled form, without rendering it."""
    memo: dict[tuple[int, str | None], bool] = {}

    def form(y, enclosing) -> bool:
        key = (id(y), enclosing)
        if key not in memo:
            items = y.disjuncts if isinstance(y, Sdnf) else y.conjuncts
            memo[key] = all(item(s, enclosing) for s in items)
        return memo[key]

    def item(s, enclosing) -> bool:
        for agent, part in s.parts:
            if agent == enclosing:
                return False
            subs = [part.box, *part.diamonds] if isinstance(s, S.Ste) else [part.diamond, *part.boxes]
            if not all(form(c, agent) for c in subs if c is not None):
                return False
        return True

    return form(x, None)


# -- the rewrite rules ---------------------------------------------------------

Rule = Callable[[str, Formula, Formula, Formula], tuple[Formula, Formula]]


def rule1(i, phi, psi, eta):
    return (Box(i, disj(phi, conj(Box(i, psi), eta))),
            conj(disj(Box(i, phi), Box(i, psi)), Box(i, disj(phi, eta))))


def rule2(i, phi, psi, eta):
    return (Box(i, disj(phi, conj(Dia(i, psi), eta))),
            conj(disj(Box(i, phi), Dia(i, psi)), Box(i, disj(phi, eta))))


def rule3(i, phi, psi, eta):
    return (Box(i, conj(phi, disj(Box(i, psi), eta))),
            conj(Box(i, phi), disj(Box(i, psi), Box(i, eta))))


def rule4(i, phi, psi, eta):
    return (Box(i, conj(phi, disj(Dia(i, psi), eta))),
            conj(Box(i, phi), disj(Box(i, eta), Dia(i, psi))))


RULES: dict[str, Rule] = {"rule1": rule1, "rule2": rule2, "rule3": rule3, "rule4": rule4}


# -- alternate -------------------------------------------------------------------

def _is_atom_of(f: Formula, i: str) -> bool:
    return isinstance(f, _Modal) and f.agent == i


def _has_top_i(f: Formula, i: str) -> bool:
    """Does ``f`` contain an i-modality outside every modality?"""
    if isinstance(f, _Modal):
        return f.agent == i
    return any(_has_top_i(c, i) for c in f.children)


def _cnf_layers(f: Formula, i: str) -> list[tuple[list[Formula], list[Formula]]]:
    """``f`` as a conjunction of clauses; each clause is split into its
    i-modal atoms and its i-free disjuncts."""
    if not _has_top_i(f, i):
        return [([], [f])]
    if _is_atom_of(f, i):
        return [([f], [])]
    if isinstance(f, And):
        out = []
        for a in f.args:
            out.extend(_cnf_layers(a, i))
        return out
    if isinstance(f, Or):
        acc: list[tuple[list[Formula], list[Formula]]] = [([], [])]
        for a in f.args:
            acc = [(x1 + x2, y1 + y2) for x1, y1 in acc for x2, y2 in _cnf_layers(a, i)]
        return acc
    raise AlternationError(f"input not in NNF: {f}")


def _dnf_layers(f: Formula, i: str) -> list[tuple[list[Formula], list[Formula]]]:
    """``f`` as a disjunction of terms; each term split into i-modal atoms and
    i-free conjuncts."""
    if not _has_top_i(f, i):
        return [([], [f])]
    if _is_atom_of(f, i):
        return [([f], [])]
    if isinstance(f, Or):
        out = []
        for a in f.args:
            out.extend(_dnf_layers(a, i))
        return out
    if isinstance(f, And):
        acc: list[tuple[list[Formula], list[Formula]]] = [([], [])]
        for a in f.args:
            acc = [(x1 + x2, y1 + y2) for x1, y1 in acc for x2, y2 in _dnf_layers(a, i)]
        return acc
    raise AlternationError(f"input not in NNF: {f}")


def _lifted_disjunction(i: str, atoms: list[Formula], rest: Formula) -> Formula:
    """``atoms ∨ □_i rest`` with the K45 identities □_i⊤ = ⊤ and
    □_i⊥ ∨ □_iψ = □_iψ applied."""
    if isinstance(rest, Top):
        return TOP
    if isinstance(rest, Bot) and any(isinstance(a, Box) for a in atoms):
        return disj(*atoms)
    return disj(*atoms, Box(i, rest))


def _box_cnf(i: str, body: Formula) -> Formula:
    # rules 3 and 4 (with φ the remaining clauses) peel one atom at a time:
    # □(A ∨ η) = A ∨ □η once A is an i-atom; □ distributes over ∧.
    clauses = []
    for atoms, rest in _cnf_layers(body, i):
        clauses.append(_lifted_disjunction(i, atoms, disj(*rest)))
    return conj(*clauses)


def _box_dnf(i: str, terms: list[tuple[list[Formula], list[Formula]]]) -> Formula:
    # rules 1 and 2: □(φ ∨ (A ∧ η)) = (□φ ∨ A) ∧ □(φ ∨ η)
    for k, (atoms, rest) in enumerate(terms):
        if atoms:
            a, more = atoms[0], atoms[1:]
            others = terms[:k] + terms[k + 1:]
            left = _box_dnf(i, others) if others else Box(i, BOT)
            lifted = TOP if left is TOP else (
                disj(*([] if left == Box(i, BOT) and isinstance(a, Box) else [left]), a))
            right = _box_dnf(i, others + [(more, rest)])
            return conj(lifted, right)
    body = disj(*(conj(*rest) for _, rest in terms))
    return _lifted_disjunction(i, [], body)


def _box(i: str, body: Formula) -> Formula:
    if not _has_top_i(body, i):
        return TOP if isinstance(body, Top) else Box(i, body)
    a = _box_cnf(i, body)
    b = _box_dnf(i, _dnf_layers(body, i))
    return a if size(a) <= size(b) else b


def _alt(f: Formula, memo: dict) -> Formula:
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, (Top, Bot, Var, Not)):
        r = f
    elif isinstance(f, And):
        r = conj(*(_alt(a, memo) for a in f.args))
    elif isinstance(f, Or):
        r = disj(*(_alt(a, memo) for a in f.args))
    elif isinstance(f, Box):
        r = _box(f.agent, _alt(f.arg, memo))
    elif isinstance(f, Dia):
        body = _alt(f.arg, memo)
        r = to_nnf(neg(_box(f.agent, to_nnf(neg(body)))))
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = r
    return r


def alternate(f: Formula) -> Formula:
    """A K45_n-equivalent NNF formula with the alternating agent operator property."""
    if not is_nnf(f):
        raise AlternationError("alternate expects a formula in NNF")
    if is_alternating(f):
        return f
    return _alt(f, {})


# -- compilation and queries ---------------------------------------------------

def _require(x, what: str):
    if not sdnf_is_alternating(x):
        raise AlternationError(f"{what} is not alternating")
    return x


def compile_asdnf(f: Formula, l0: str = TERM) -> Sdnf:
    return _require(S.compile_sdnf(alternate(to_nnf(f)), l0), "compiled ASDNF")


def compile_ascnf(f: Formula, l0: str = TERM) -> Scnf:
    g = alternate(to_nnf(f))
    return _require(S.negate_to_scnf(S.compile_sdnf(to_nnf(neg(g)), l0)), "compiled ASCNF")


def sat_k45(x: Sdnf) -> bool:
    """Term-wise satisfiability of an ASDNF; rejects non-alternating input."""
    _require(x, "input")
    return S.sat(x)


def conjoin_k45(x: Sdnf, y: Sdnf) -> Sdnf:
    _require(x, "left operand")
    _require(y, "right operand")
    return _require(S.conjoin(x, y), "conjoin result")


def forget_k45(x: Sdnf, q: Iterable[str]) -> Sdnf:
    _require(x, "input")
    return _require(S.forget(x, q), "forget result")


def condition_k45(x: Sdnf, tau) -> Sdnf:
    _require(x, "input")
    return _require(S.condition(x, tau), "condition result")


def entails_scl_k45(x: Sdnf, c: Scl) -> bool:
    _require(x, "knowledge base")
    _require(Scnf((c,)), "clause")
    return S.entails_scl(x, c)


def entails_scnf_k45(x: Sdnf, g: Scnf) -> bool:
    _require(x, "knowledge base")
    _require(g, "goal")
    return S.entails_scnf(x, g)
