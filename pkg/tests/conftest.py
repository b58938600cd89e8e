import itertools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from epikc import prop
from epikc.formula import BOT, TOP, And, Box, Dia, Not, Or, Var

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

VARS = ("p", "q", "r")
AGENTS = ("i", "j")


def formulas(vars=VARS, agents=AGENTS, max_leaves=6, modal=True):
    """Hypothesis strategy for small K_n formulas."""
    leaves = st.sampled_from([Var(v) for v in vars] + [TOP, BOT])

    def extend(children):
        opts = [
            children.map(Not),
            st.tuples(children, children).map(And),
            st.tuples(children, children).map(Or),
        ]
        if modal:
            opts += [
                st.tuples(st.sampled_from(agents), children).map(lambda t: Box(*t)),
                st.tuples(st.sampled_from(agents), children).map(lambda t: Dia(*t)),
            ]
        return st.one_of(*opts)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def literal_sets(vars=VARS, max_size=3):
    lit = st.tuples(st.sampled_from(vars), st.booleans())
    return st.lists(lit, max_size=max_size)


def assignments(vs):
    vs = sorted(vs)
    for bits in itertools.product([False, True], repeat=len(vs)):
        yield dict(zip(vs, bits))


def truth_table_equiv(x, y, vs=VARS):
    """Two PropReprs agree on every assignment of ``vs``."""
    return all(prop.evaluate(x, a) == prop.evaluate(y, a) for a in assignments(vs))


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
