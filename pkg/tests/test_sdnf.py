import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epikc import oracle as O
from epikc import prop
from epikc import sdnf as S
from epikc.corpus import basic_pool
from epikc.families import phi, prop42
from epikc.formula import (
    BOT, TOP, And, Box, Dia, Not, Var, is_propositional, parse, substitute,
)
from epikc.prop import DNF, TERM

from conftest import formulas

BOX_CONFLICT = parse("[i](p|q) & [i](~p|q) & <i>~q")


def F(x):
    return S.to_formula(x) if isinstance(x, S.Sdnf) else S.scnf_to_formula(x)


def test_box_clause_conflict_unsat():
    x = S.compile_sdnf(BOX_CONFLICT)
    assert len(x.disjuncts) == 1
    assert not S.sat(x)


def test_compile_examples():
    x = S.compile_sdnf(parse("p | q"))
    assert [s.alpha for s in x.disjuncts] == [prop.term([("p", True)]), prop.term([("q", True)])]
    assert S.sat(S.compile_sdnf(parse("[i]false")))
    assert S.sat(S.compile_sdnf(parse("<i>(p & [i]~p)")))


def test_compile_scnf_examples():
    c = S.compile_scnf(parse("p & q"))
    assert len(c.conjuncts) == 2 and O.equiv(F(c), parse("p & q"))
    c = S.compile_scnf(parse("<i>p"))
    assert len(c.conjuncts) == 1 and c.conjuncts[0].part("i").diamond is not None
    assert O.equiv(F(S.compile_scnf(BOX_CONFLICT)), BOT)


def test_gamma_carries_beta():
    x = S.compile_sdnf(parse("[i]p & <i>q"))
    (ste,) = x.disjuncts
    (g,) = ste.part("i").diamonds
    assert O.entails(F(g), Var("p"))
    assert O.equiv(F(x), parse("[i]p & <i>(q & p)"))


def test_prop42_counts():
    for n, want in ((1, 2), (2, 4), (3, 8)):
        assert len(S.compile_sdnf(prop42(n)).disjuncts) >= want


def test_prop42_by_pairwise_conjoin():
    parts = prop42(3).args
    acc = S.compile_sdnf(parts[0])
    for p in parts[1:]:
        acc = S.conjoin(acc, S.compile_sdnf(p))
    assert len(acc.disjuncts) >= 8


def test_phi_sizes_dnf_backend():
    for k in range(6):
        assert S.size(S.compile_sdnf(phi(k), DNF)) == 3 * (k + 1) + 2 * k


def test_memo_is_transparent():
    f = parse("([i](p|q) & <i>r) | [j]p")
    a = S.compile_sdnf(f)
    S.clear_memo()
    b = S.compile_sdnf(f)
    assert a == b


def test_compile_rejects_clause_backend():
    with pytest.raises(ValueError):
        S.compile_sdnf(Var("p"), prop.CLAUSE)


def test_negation_examples():
    assert S.negate_to_scnf(S.SDNF_FALSE) == S.SCNF_TRUE
    c = S.negate_to_scnf(S.compile_sdnf(parse("[i]p")))
    (cl,) = c.conjuncts
    assert cl.part("i").diamond is not None
    assert O.equiv(F(c), parse("<i>~p"))


def test_conjoin_examples():
    x, y = S.compile_sdnf(parse("[i]p")), S.compile_sdnf(parse("<i>q"))
    assert O.equiv(F(S.conjoin(x, y)), parse("[i]p & <i>(q & p)"))
    assert O.equiv(F(S.conjoin(x, S.sdnf_true())), F(x))


def test_disjoin_examples():
    x = S.compile_sdnf(parse("[i]p | q"))
    assert S.disjoin([S.SDNF_FALSE, x]) == x
    assert S.disjoin([x]) == x
    y = S.compile_sdnf(parse("<j>r"))
    assert O.equiv(F(S.disjoin([x, y])), parse("[i]p | q | <j>r"))


def test_entails_examples():
    kb = S.compile_sdnf(parse("[i]q & <i>false"))
    (c,) = S.compile_scnf(parse("<i>~q")).conjuncts
    assert S.entails_scl(kb, c)
    assert S.entails_scnf(S.compile_sdnf(Var("p")), S.SCNF_TRUE)
    assert S.entails_scnf(S.compile_sdnf(BOX_CONFLICT), S.compile_scnf(Var("r")))


def test_forget_examples():
    x = S.forget(S.compile_sdnf(parse("[i]p")), {"p"})
    assert "p" not in S.variables(x)
    assert O.equiv(F(x), TOP)
    y = S.compile_sdnf(parse("[i]p & <j>q"))
    assert S.forget(y, set()) == y


def test_forget_propagates_unsat_terms():
    # an unsatisfiable term must not leak a weaker consequence
    x = S.forget(S.compile_sdnf(parse("[i]q & <i>~q & r")), {"q"})
    assert not S.sat(x)


def test_condition_examples():
    x = S.condition(S.compile_sdnf(parse("p & [i]p")), [("p", True)])
    assert O.equiv(F(x), TOP)
    y = S.compile_sdnf(parse("[i](p | q)"))
    assert S.condition(y, []) == y
    with pytest.raises(ValueError):
        S.condition(y, [("p", True), ("p", False)])


def test_rename_examples():
    x = S.compile_sdnf(parse("[i]at_i_r2' & [j]at_j_r4"))
    y = S.rename_vars(x, {"at_i_r2'": "at_i_r2"})
    assert O.equiv(F(y), parse("[i]at_i_r2 & [j]at_j_r4"))
    assert S.rename_vars(x, {}) == x
    z = S.rename_vars(S.rename_vars(x, {"at_j_r4": "a"}), {"a": "b"})
    assert z == S.rename_vars(x, {"at_j_r4": "b"})
    with pytest.raises(S.CaptureError):
        S.rename_vars(x, {"at_i_r2'": "at_j_r4"})


def test_json_round_trip():
    for text in ["[i](p|q) & <i>~q & r", "p | <j>[i]q", "true", "false"]:
        x = S.compile_sdnf(parse(text))
        back = S.from_json(json.loads(json.dumps(S.to_json(x))))
        assert O.equiv(F(back), F(x))
        c = S.compile_scnf(parse(text))
        back = S.from_json(S.to_json(c))
        assert O.equiv(F(back), F(c))


def test_capability_error_surfaces():
    x = S.Sdnf((S.Ste(prop.cnf([[("p", True)]])),))
    with pytest.raises(prop.CapabilityError):
        S.sat(x)


# -- properties ------------------------------------------------------------------

small = formulas(vars=("p", "q", "r"), max_leaves=6)


@given(small, st.sampled_from([TERM, DNF]))
def test_compile_equivalent(f, l0):
    x = S.compile_sdnf(f, l0)
    assert O.equiv(f, F(x))
    assert S.sat(x) == (O.sat_tableau_kn(f) is not None)


@given(small)
def test_compile_scnf_equivalent(f):
    assert O.equiv(f, F(S.compile_scnf(f)))


@given(small)
def test_shape_invariants(f):
    for ste in S.iter_stes(S.compile_sdnf(f)):
        agents = [a for a, _ in ste.parts]
        assert len(agents) == len(set(agents))


@given(small)
def test_modularity(f):
    for ste in S.iter_stes(S.compile_sdnf(f)):
        expect = prop.p_sat(ste.alpha) and all(
            S.sat(g) for _, part in ste.parts for g in part.diamonds)
        assert S.sat_ste(ste) == expect


@given(small)
def test_negation_duality(f):
    x = S.compile_sdnf(f)
    assert O.equiv(F(S.negate_to_scnf(x)), Not(F(x)))


@given(small, small)
def test_conjoin_equivalent(f, g):
    x, y = S.compile_sdnf(f), S.compile_sdnf(g)
    z = S.conjoin(x, y)
    assert O.equiv(F(z), And((F(x), F(y))))
    assert S.repr_size(z) <= 2 * S.repr_size(x) ** 2 * S.repr_size(y) ** 2


@given(small, small)
def test_entails_scl_agrees(f, g):
    x = S.compile_sdnf(f)
    for c in S.compile_scnf(g).conjuncts:
        assert S.entails_scl(x, c) == O.entails(f, S.scl_formula(c))


@given(small, st.sets(st.sampled_from(["p", "q", "r"]), max_size=2))
def test_forget_entailed_and_q_free(f, qs):
    x = S.compile_sdnf(f)
    y = S.forget(x, qs)
    assert not (S.variables(y) & qs)
    assert O.entails(f, F(y))


@given(small, st.dictionaries(st.sampled_from(["p", "q", "r"]), st.booleans(), max_size=2))
def test_condition_is_substitution(f, tau):
    x = S.condition(S.compile_sdnf(f), list(tau.items()))
    want = substitute(f, {v: TOP if b else BOT for v, b in tau.items()})
    assert O.equiv(F(x), want)


@given(small)
def test_simplify_preserves_equivalence(f):
    x = S.compile_sdnf(f)
    assert O.equiv(F(S.simplify(x)), F(x))


@settings(max_examples=15)
@given(formulas(vars=("p", "q"), agents=("i",), max_leaves=4))
def test_separable_term_sat_decomposes(f):
    pool = basic_pool({"p", "q"}, ["i"], 3)
    for ste in S.iter_stes(S.compile_sdnf(f)):
        if not S.sat_ste(ste):
            continue
        t = S.ste_formula(ste)
        alpha = prop.to_formula(ste.alpha)
        for eta in pool:
            if is_propositional(eta):
                assert O.entails(t, eta) == O.entails(alpha, eta)
            elif isinstance(eta, Box):
                part = ste.part(eta.agent)
                beta = TOP if part is None or part.box is None else F(part.box)
                assert O.entails(t, eta) == O.entails(beta, eta.arg)
            elif isinstance(eta, Dia):
                part = ste.part(eta.agent)
                gammas = [] if part is None else [F(g) for g in part.diamonds]
                assert O.entails(t, eta) == any(O.entails(g, eta.arg) for g in gammas)


def test_compiled_terms_are_separable():
    pool = basic_pool({"p", "q"}, ["i"], 4)
    for f in [parse("[i](p|q) & <i>~q & <i>p"), parse("[i]p & <i>q & ~p")]:
        for ste in S.iter_stes(S.compile_sdnf(f)):
            assert O.check_separability(S.ste_formula(ste), pool)
