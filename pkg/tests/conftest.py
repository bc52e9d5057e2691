from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
import pytest

from logroot.corpus import build_example, example, perturbed_example, random_extremal
from logroot.equation import new_problem
from logroot.errors import LogRootError
from logroot.solver import SolveParams, solve

# acceptance outcomes, filled in by tests/test_acceptance.py
CRITERIA: dict[int, tuple[bool, str]] = {}

# every built-in family at the sizes the suite exercises
CORPUS_SPECS = (
    [("ex1", {"n": n}) for n in range(1, 7)]
    + [("ex2", {"m": m}) for m in range(1, 5)]
    + [("ex3-explicit", {"n": n}) for n in range(1, 4)]
    + [("ex4", {"m": m}) for m in (1, 2)]
    + [("ex5", {"m": m}) for m in (1, 2)]
)
PERTURBED = [(2, 1), (3, 2)]
N_EXTREMAL = 20
N_RANDOM = 200


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@lru_cache(maxsize=None)
def solved_example(id_: str, **params):
    spec = example(id_, **params)
    prob = build_example(spec)
    return spec, prob, solve(prob, SolveParams(dynamics=True))


@lru_cache(maxsize=None)
def extremal_specs():
    rng = np.random.default_rng(20240607)
    specs = []
    while len(specs) < N_EXTREMAL:
        spec = random_extremal(rng)
        if spec is not None:
            specs.append(spec)
    return tuple(specs)


@lru_cache(maxsize=None)
def corpus_runs():
    """(label, spec, problem, report with dynamics) for the whole corpus."""
    runs = []
    for id_, prm in CORPUS_SPECS:
        spec, prob, rep = solved_example(id_, **prm)
        runs.append((f"{id_} {prm}", spec, prob, rep))
    for m, n in PERTURBED:
        spec, prob = perturbed_example(m, n)
        runs.append((f"ex3 m={m} n={n}", spec, prob, solve(prob, SolveParams(dynamics=True))))
    for i, spec in enumerate(extremal_specs()):
        prob = build_example(spec)
        runs.append((f"ex6 #{i}", spec, prob, solve(prob, SolveParams(dynamics=True))))
    return tuple(runs)


def random_problem(rng: np.random.Generator, max_degree: int = 4):
    """Coprime (p, q) with degrees <= max_degree and coefficients in the unit box."""
    while True:
        m, n = (int(x) for x in rng.integers(0, max_degree + 1, 2))
        if m == 0 and n == 0:
            continue
        p = rng.uniform(-1, 1, m + 1) + 1j * rng.uniform(-1, 1, m + 1)
        q = rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1)
        try:
            return new_problem(p, q)
        except LogRootError:
            continue


@lru_cache(maxsize=None)
def random_runs():
    """N_RANDOM problems for which 0 is a regular value, with their reports."""
    rng = np.random.default_rng(12345)
    runs = []
    while len(runs) < N_RANDOM:
        prob = random_problem(rng)
        rep = solve(prob)
        if rep.N_degenerate:
            continue
        runs.append((prob, rep))
    return tuple(runs)


def nearest(points, z) -> float:
    return min((abs(p - z) for p in points), default=math.inf)


@pytest.fixture(scope="session")
def corpus():
    return corpus_runs()


@pytest.fixture(scope="session")
def random_reports():
    return random_runs()
