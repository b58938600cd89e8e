import itertools

import pytest
from hypothesis import given

from epikc import oracle as O
from epikc.corpus import basic_pool
from epikc.formula import BOT, Var, parse, to_nnf

from conftest import formulas

BOX_CONFLICT = parse("[i](p|q) & [i](~p|q) & <i>~q")


def model(worlds, rel, val, actual=0):
    return O.KripkeModel(worlds, {"i": set(rel)}, {w: frozenset(v) for w, v in val.items()}, actual)


def test_model_check_single_world():
    m = model([0], [], {0: {"p"}})
    assert O.model_check(m, 0, Var("p"))
    assert O.model_check(m, 0, parse("[i]false"))


def test_model_check_two_worlds():
    m = model([0, 1], [(0, 1)], {0: set(), 1: {"q"}})
    assert O.model_check(m, 0, parse("[i]q"))
    assert not O.model_check(m, 0, parse("<i>~q"))


def test_model_validation_and_json():
    with pytest.raises(ValueError):
        model([0], [(0, 1)], {0: set()})
    m = model([0, 1], [(0, 1)], {0: {"p"}, 1: set()})
    assert O.KripkeModel.from_json(m.to_json()) == m


def _all_models(n_worlds, vs):
    pairs = [(s, t) for s in range(n_worlds) for t in range(n_worlds)]
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        for vals in itertools.product(itertools.product([False, True], repeat=len(vs)), repeat=n_worlds):
            val = {w: {v for v, b in zip(vs, vals[w]) if b} for w in range(n_worlds)}
            yield model(list(range(n_worlds)), rel, val)


def test_box_clause_conflict_false_on_all_small_models():
    for n in (1, 2, 3):
        for m in _all_models(n, ["p", "q"]):
            assert not any(O.model_check(m, w, BOX_CONFLICT) for w in m.worlds)


def test_tableau_examples():
    assert O.sat_tableau_kn(parse("<i>false")) is None
    assert O.sat_tableau_kn(BOX_CONFLICT) is None
    f = parse("<i>(p & [i]~p)")
    m = O.sat_tableau_kn(f)
    assert m is not None and len(m.worlds) == 2
    assert O.model_check(m, m.actual, f)


def test_bounded_k45_examples():
    assert O.sat_bounded_k45(parse("<i>(p & [i]~p)"), 4) is None
    m = O.sat_bounded_k45(Var("p"), 1)
    assert m is not None and len(m.worlds) == 1
    assert O.sat_bounded_k45(parse("[i]p & <i>~p"), 4) is None
    # K_n-satisfiable, K45-unsatisfiable: 4 fails
    assert O.satisfiable(parse("[i]p & <i><i>~p"), "kn")
    assert not O.satisfiable(parse("[i]p & <i><i>~p"), "k45n", 4)


def test_k45_relations_are_transitive_euclidean():
    for n in range(1, 4):
        for rel in O.k45_relations(n):
            assert O.is_transitive(set(rel)) and O.is_euclidean(set(rel))


def test_bounded_witnesses_are_k45():
    for text in ["<i>p & <i>~p", "<i>[j]p & [i]<j>~q", "<i><j>p & ~p"]:
        m = O.sat_bounded_k45(parse(text), 3)
        assert m is not None and O.is_k45(m) and O.model_check(m, 0, parse(text))


def test_equiv_examples():
    f = parse("[i]p & <j>q")
    assert O.equiv(f, f)
    assert O.equiv(parse("~[i]p"), parse("<i>~p"))
    assert O.equiv(BOX_CONFLICT, BOT)
    assert O.equiv(parse("[i][i]p"), parse("[i]p"), "k45n", 3)
    assert not O.equiv(parse("[i][i]p"), parse("[i]p"), "kn")


@given(formulas(max_leaves=5))
def test_tableau_witness_is_a_model(f):
    m = O.sat_tableau_kn(f)
    if m is not None:
        assert O.model_check(m, m.actual, f)


@given(formulas(max_leaves=4))
def test_tableau_agrees_with_tree_enumeration(f):
    bound = sum(1 for g in _subformulas_nnf(f) if g.__class__.__name__ == "Dia") * max(1, _depth(f)) + 1
    bounded = O.sat_bounded(f, min(bound, 4), "kn")
    tab = O.sat_tableau_kn(f)
    if bounded is not None:
        assert tab is not None
    if bound <= 4:
        assert (bounded is None) == (tab is None)


def _subformulas_nnf(f):
    from epikc.formula import subformulas
    return list(subformulas(to_nnf(f)))


def _depth(f):
    from epikc.formula import depth
    return depth(f)


def test_separability_examples():
    pool = basic_pool({"q"}, ["i"], 5)
    psi = parse("[i]q & <i>false")
    assert O.check_separability(psi, pool)
    phi = parse("[i](p|q) & [i](~p|q) & <i>~q")
    assert not O.check_separability(phi, [parse("<i>false")] + basic_pool({"p", "q"}, ["i"], 3))
    assert O.check_separability(parse("[i]p"), pool)
