"""Named example families with known solution counts.

Each family is an equation log|z| + q(z)/p(z) = 0 written in (p, q) form,
usually a small base case composed with z -> z**k.  Families ex1, ex2,
ex3-explicit, ex4 and ex5 reach the upper bound 3d + 2m on the number of
solutions for their (m, n) ratio; ex6 builds problems that reach the lower
bound d.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .equation import Problem, new_problem
from .errors import BadParams, HypothesisFailed, LogRootError
from .poly import ComplexPoly, roots

LN2 = math.log(2.0)
DEFAULT_A = 0.015
DEFAULT_B = 0.00185
DEFAULT_ETA = 1e-3
HYPOTHESIS_MARGIN = 1e-2
C_CAP = 2**20

IDS = ("ex1", "ex2", "ex3", "ex3-explicit", "ex4", "ex5", "ex6")


@dataclass
class ExampleSpec:
    id: str
    params: dict = field(default_factory=dict)
    expected_count: int = 0
    expected_points: list = field(default_factory=list)


def _z(k: int) -> ComplexPoly:
    return ComplexPoly([0.0] * k + [1.0])


def _positive_int(params: dict, key: str) -> int:
    val = params.get(key, 1)
    if isinstance(val, float) and val.is_integer():
        val = int(val)
    if not isinstance(val, (int, np.integer)) or isinstance(val, bool) or val < 1:
        raise BadParams(f"{key} must be a positive integer, got {val!r}")
    return int(val)


# points printed for the base cases, stored with every digit given
_EX1 = [(1.0, 1e-10), (0.5, 1e-10), (-0.191666, 1e-5)]
_EX2 = [(1 / 16, 1e-10), (1 / 8, 1e-10), (1 / 4, 1e-10), (-1.471293, 1e-5), (-0.0106199, 1e-5)]
_TRI = [(1.0, 1e-10), (2.0, 1e-10), (0.5, 1e-10), (-11.770347, 1e-5), (-0.0849592, 1e-5)]
_EX4 = [
    (-58.249375, 1e-5),
    (-20.915701, 1e-5),
    (-0.0826000, 1e-5),
    (0.466285, 1e-5),
    (1.0, 1e-10),
    (1.780021, 1e-5),
    (complex(-5.705306, 10.732819), 1e-4),
    (complex(-5.705306, -10.732819), 1e-4),
]
# two of the printed values carry a dropped minus sign (xi_4 and xi_{8,9});
# the true roots are stored here
_EX5 = [
    (-198.8150, 1e-3),
    (-176.4617, 1e-3),
    (-17.8054, 1e-3),
    (-0.08289, 1e-3),
    (0.4704, 1e-3),
    (1.0, 1e-10),
    (1.8020, 1e-3),
    (complex(-8.6167, 10.2654), 1e-3),
    (complex(-8.6167, -10.2654), 1e-3),
    (complex(-234.2803, 43.6244), 1e-3),
    (complex(-234.2803, -43.6244), 1e-3),
]


def example(id: str, **params) -> ExampleSpec:
    """ExampleSpec for a family id with defaults filled in."""
    if id not in IDS:
        raise BadParams(f"unknown example id {id!r}; expected one of {', '.join(IDS)}")
    params = dict(params)
    if id == "ex1":
        n = _positive_int(params, "n")
        return ExampleSpec(id, {"n": n}, 3 * n, list(_EX1) if n == 1 else [])
    if id == "ex2":
        m = _positive_int(params, "m")
        return ExampleSpec(id, {"m": m}, 5 * m, list(_EX2) if m == 1 else [])
    if id == "ex3-explicit":
        n = _positive_int(params, "n")
        return ExampleSpec(id, {"n": n}, 5 * n, list(_TRI) if n == 1 else [])
    if id == "ex3":
        m = _positive_int(params, "m")
        n = int(params.get("n", m))
        if not 0 <= n <= m:
            raise BadParams(f"ex3 needs 0 <= n <= m, got n={n}, m={m}")
        eta = float(params.get("eta", DEFAULT_ETA))
        seed = int(params.get("seed", 0))
        return ExampleSpec(id, {"m": m, "n": n, "eta": eta, "seed": seed}, 5 * m, [])
    if id == "ex4":
        m = _positive_int(params, "m")
        a = float(params.get("a", DEFAULT_A))
        pts = list(_EX4) if m == 1 and a == DEFAULT_A else []
        return ExampleSpec(id, {"m": m, "a": a}, 8 * m, pts)
    if id == "ex5":
        m = _positive_int(params, "m")
        a = float(params.get("a", DEFAULT_A))
        b = float(params.get("b", DEFAULT_B))
        pts = list(_EX5) if m == 1 and (a, b) == (DEFAULT_A, DEFAULT_B) else []
        return ExampleSpec(id, {"m": m, "a": a, "b": b}, 11 * m, pts)
    # ex6
    required = ("p0", "q0", "delta", "phi", "c")
    missing = [k for k in required if k not in params]
    if missing:
        raise BadParams(f"ex6 needs parameters {', '.join(missing)}; see extremal_example()")
    d = max(ComplexPoly(params["p0"]).degree, ComplexPoly(params["q0"]).degree)
    return ExampleSpec(id, params, d, [])


def build_example(spec: ExampleSpec) -> Problem:
    """Problem for an ExampleSpec."""
    prm = spec.params
    if spec.id == "ex1":
        n = prm["n"]
        return new_problem(ComplexPoly([1.0]), (1 - _z(n)) * (2 * LN2 / n))
    if spec.id == "ex2":
        m = prm["m"]
        return new_problem((_z(m) * 8 + 1) * m, ComplexPoly([6 * LN2]))
    if spec.id == "ex3-explicit":
        n = prm["n"]
        return new_problem((_z(n) + 1) * n, (_z(n) - 1) * (-3 * LN2))
    if spec.id == "ex3":
        m, n = prm["m"], prm["n"]
        rng = np.random.default_rng(prm["seed"])
        r = ComplexPoly(rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1))
        return new_problem((_z(m) * 8 + 1) * m, (1 + r * prm["eta"]) * (6 * LN2))
    if spec.id in ("ex4", "ex5"):
        m, a = prm["m"], prm["a"]
        u = _z(m)
        q = (1 - (u - 1) * a) * (u - 1) * (-3 * LN2)
        if spec.id == "ex5":
            q = q * (1 + (u - 1) * prm["b"])
        return new_problem((u + 1) * m, q)
    if spec.id == "ex6":
        return lower_extremal(
            ComplexPoly(prm["p0"]), ComplexPoly(prm["q0"]), prm["delta"], prm["phi"], prm["c"]
        )
    raise BadParams(f"unknown example id {spec.id!r}")


def perturbed_example(m: int, n: int, eta: float = DEFAULT_ETA, seed: int = 0, max_halvings: int = 20):
    """ex3 with eta halved until the solver sees all 5m solutions."""
    from .solver import solve

    for _ in range(max_halvings + 1):
        spec = example("ex3", m=m, n=n, eta=eta, seed=seed)
        prob = build_example(spec)
        if solve(prob).N == spec.expected_count:
            return spec, prob
        eta *= 0.5
    raise BadParams(f"no eta >= {eta:g} reproduces {5 * m} solutions")


# --------------------------------------------------------------------------
# lower-bound construction


def _disk_samples(radial: int = 48, angular: int = 256) -> np.ndarray:
    r = np.linspace(0.0, 1.0, radial + 1)
    t = np.linspace(0.0, 2 * np.pi, angular, endpoint=False)
    pts = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    rim = np.exp(1j * np.linspace(0.0, 2 * np.pi, 8 * angular, endpoint=False))
    return np.concatenate([pts, rim])


_SAMPLES = _disk_samples()


def _hypothesis_margin(p: ComplexPoly, q: ComplexPoly) -> tuple[float, complex]:
    """Smallest |Im F| / |F| over the closed unit disk and at infinity, with its location."""
    for poly in (p, q):
        if poly.degree >= 1:
            inside = [r for r in roots(poly) if abs(r) <= 1.0]
            if inside:
                return 0.0, inside[0]
    with np.errstate(all="ignore"):
        F = q(_SAMPLES) / p(_SAMPLES)
        ratio = np.abs(F.imag) / np.abs(F)
    ratio = np.where(np.isfinite(ratio), ratio, 0.0)
    i = int(np.argmin(ratio))
    worst, where = float(ratio[i]), complex(_SAMPLES[i])
    if p.degree == q.degree:
        lim = q.lead / p.lead
        r_inf = abs(lim.imag) / abs(lim)
        if r_inf < worst:
            worst, where = r_inf, complex(math.inf, 0.0)
    return worst, where


def _scaled_pair(p0: ComplexPoly, q0: ComplexPoly, delta: float, phi: float):
    return p0.scale_variable(delta), q0.scale_variable(delta) * cmath.exp(1j * phi)


def lower_extremal(
    p0: ComplexPoly,
    q0: ComplexPoly,
    delta: float,
    phi: float,
    c: float,
    margin: float = HYPOTHESIS_MARGIN,
) -> Problem:
    """Problem p(z) log|z| + c q(z) = 0 with p = p0(delta z), q = e^{i phi} q0(delta z).

    The rotation acts on q alone so that F = q/p itself turns; F must stay off
    the real axis on the closed unit disk and at infinity (unless F(inf) is 0 or
    infinite).  HypothesisFailed carries the worst sample when it does not.
    """
    p0 = p0 if isinstance(p0, ComplexPoly) else ComplexPoly(p0)
    q0 = q0 if isinstance(q0, ComplexPoly) else ComplexPoly(q0)
    if p0.is_zero or q0.is_zero or p0(0j) == 0 or q0(0j) == 0:
        raise BadParams("p0 and q0 must not vanish at 0")
    if not (delta > 0 and c > 0):
        raise BadParams("delta and c must be positive")
    p, q = _scaled_pair(p0, q0, delta, phi)
    worst, where = _hypothesis_margin(p, q)
    if worst <= margin:
        raise HypothesisFailed(f"q/p comes within {worst:.3g} of the real axis", where)
    return new_problem(p, q * c)


def search_phi(p0: ComplexPoly, q0: ComplexPoly, delta: float, samples: int = 360) -> tuple[float, float]:
    """Rotation angle with the widest hypothesis margin on a uniform grid."""
    best = (-1.0, 0.0)
    for phi in np.linspace(0.0, np.pi, samples, endpoint=False):
        p, q = _scaled_pair(p0, q0, delta, float(phi))
        worst, _ = _hypothesis_margin(p, q)
        if worst > best[0]:
            best = (worst, float(phi))
    return best[1], best[0]


def extremal_example(
    p0: ComplexPoly,
    q0: ComplexPoly,
    margin: float = HYPOTHESIS_MARGIN,
    min_delta: float = 1.0 / 64,
) -> ExampleSpec:
    """Tune delta, phi, then double c until the problem has exactly d solutions."""
    from .solver import solve

    p0 = p0 if isinstance(p0, ComplexPoly) else ComplexPoly(p0)
    q0 = q0 if isinstance(q0, ComplexPoly) else ComplexPoly(q0)
    delta = 1.0
    while True:
        phi, worst = search_phi(p0, q0, delta)
        if worst > margin:
            break
        delta *= 0.5
        if delta < min_delta:
            raise HypothesisFailed("no rotation clears the real axis", complex(math.nan))
    d = max(p0.degree, q0.degree)
    c = 1.0
    while c <= C_CAP:
        prob = lower_extremal(p0, q0, delta, phi, c, margin)
        if solve(prob).N == d:
            params = {"p0": list(p0.coeffs), "q0": list(q0.coeffs), "delta": delta, "phi": phi, "c": c}
            return ExampleSpec("ex6", params, d, [])
        c *= 2.0
    raise BadParams(f"no c <= {C_CAP} gives exactly {d} solutions")


def random_extremal(rng: np.random.Generator, max_degree: int = 4) -> Optional[ExampleSpec]:
    """Extremal example from random p0, q0 with coefficients in the unit box."""
    while True:
        m, n = (int(x) for x in rng.integers(0, max_degree + 1, 2))
        if m or n:
            break
    p0 = ComplexPoly(rng.uniform(-1, 1, m + 1) + 1j * rng.uniform(-1, 1, m + 1))
    q0 = ComplexPoly(rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1))
    try:
        return extremal_example(p0, q0)
    except LogRootError:
        return None
