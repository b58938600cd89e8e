
from hypothesis import given

from epikc import oracle as O
from epikc.corpus import (
    CorpusConfig, basic_pool, corpus, enumerate_formulas, formula_pool, is_basic, normalize,
)
from epikc.families import fit_affine, phi, prop42
from epikc.formula import agents, depth, parse, size, variables

from conftest import formulas


def test_corpus_respects_limits():
    cfg = CorpusConfig()
    fs = corpus(300, seed=5)
    assert fs == corpus(300, seed=5)
    for f in fs:
        assert size(f) <= cfg.max_size and depth(f) <= cfg.max_depth
        assert variables(f) <= set(cfg.vars) and agents(f) <= set(cfg.agents)
    assert len({size(f) for f in fs}) == cfg.max_size


def test_enumeration_counts():
    # atoms: p, true, false; one agent
    levels = enumerate_formulas(["p"], ["i"], 3)
    assert len(levels[1]) == 3
    assert len(levels[2]) == 9
    assert all(size(f) == s for s, fs in levels.items() for f in fs)


def test_pool_contents():
    pool = formula_pool(["p"], ["i"], 3)
    assert parse("[i]p") in pool and parse("~p") in pool
    assert all(is_basic(f) for f in basic_pool(["p"], ["i"], 3))


@given(formulas(max_leaves=6))
def test_normalize_preserves_equivalence(f):
    assert O.equiv(f, normalize(f))


def test_families():
    assert size(phi(0)) == 3 and all(size(phi(k)) == 3 + 5 * k for k in range(6))
    assert len(prop42(3).args) == 3
    slope, icpt, r2 = fit_affine([0, 1, 2, 3], [3, 8, 13, 18])
    assert (round(slope, 6), round(icpt, 6), round(r2, 6)) == (5, 3, 1)
