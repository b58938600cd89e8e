"""Parameterised formula families used for size benchmarks."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from . import sdnf as S
from .formula import Box, Dia, Formula, Var, conj, disj
from .prop import TERM


def prop42(n: int, agent: str = "i") -> Formula:
    """⋀_j [(□p_j ∧ ◇p_j) ∨ (□p'_j ∧ ◇p'_j)]: every SDNF needs 2^n terms."""
    parts = []
    for j in range(1, n + 1):
        p, pp = Var(f"p{j}"), Var(f"p{j}'")
        parts.append(disj(conj(Box(agent, p), Dia(agent, p)), conj(Box(agent, pp), Dia(agent, pp))))
    return conj(*parts)


def phi(k: int, agent: str = "i") -> Formula:
    """φ_0 = p ∨ q, φ_k = φ_0 ∧ □φ_{k-1}; size 3 + 5k."""
    base = disj(Var("p"), Var("q"))
    f = base
    for _ in range(k):
        f = conj(base, Box(agent, f))
    return f


FAMILIES = {"prop42": prop42, "phik": phi}


@dataclass(frozen=True)
class BenchRow:
    family: str
    n: int
    stes: int
    size: int
    dag_size: int
    seconds: float


def bench(family: str, ns, l0: str = TERM) -> list[BenchRow]:
    build = FAMILIES[family]
    rows = []
    for n in ns:
        f = build(n)
        S.clear_memo()
        t0 = time.perf_counter()
        x = S.compile_sdnf(f, l0)
        dt = time.perf_counter() - t0
        rows.append(BenchRow(family, n, len(x.disjuncts), S.size(x), S.dag_size(x), dt))
    return rows


def fit_affine(xs, ys) -> tuple[float, float, float]:
    """Least-squares slope, intercept and R²."""
    slope, intercept = statistics.linear_regression(xs, ys)
    mean = statistics.fmean(ys)
    ss_tot = sum((y - mean) ** 2 for y in ys)
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    r2 = 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot
    return slope, intercept, r2
