"""Finding, classifying and counting all solutions of g(z) = w."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .curves import TraceParams, TraceResult, all_crossings, certificate, trace
from .equation import (
    DEGENERATE_TOL,
    Orientation,
    Problem,
    classify_jet,
    eval_g_array,
    jet_g,
)
from .errors import (
    ArgJumpTooLarge,
    AtSingularity,
    CertificateShort,
    Diverged,
    HitSingularity,
    Inconsistent,
    TooCloseToZero,
)

log = logging.getLogger(__name__)


@dataclass
class Solution:
    z: complex
    residual: float
    orientation: Orientation
    source: str
    newton_iters: int
    winding: Optional[int] = None


@dataclass
class SolveParams:
    trace: TraceParams = field(default_factory=TraceParams)
    solve_tol: float = 1e-10
    merge_radius: float = 1e-6
    newton_max_iters: int = 50
    degenerate_tol: float = DEGENERATE_TOL
    escalations: int = 3
    grid_start: int = 64
    grid_max: int = 1024
    threads: int = 1
    certificate: bool = True
    dynamics: bool = False
    dynamics_seed: int = 0
    seed_jitter: float = 0.0
    jitter_seed: int = 0
    perturb_eps: float = 1e-6
    perturb_degenerate: bool = True


@dataclass
class SolveReport:
    problem: Problem
    solutions: list
    N: int
    N_plus: int
    N_minus: int
    N_degenerate: int
    d: int
    m: int
    n: int
    degree_winding: Optional[int]
    bounds_ok: tuple
    certificate_count: int
    certificate_points: list
    status: str
    box_radius: float
    escalations: int = 0
    completeness: str = "curve-complete"
    dynamics_check: Optional[object] = None
    perturbed_counts: Optional[dict] = None
    notes: list = field(default_factory=list)
    trace: Optional[TraceResult] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


# --------------------------------------------------------------------------
# planar Newton


def _newton_delta(jet) -> complex:
    r = -jet.value
    return (jet.dz.conjugate() * r - jet.dzbar * r.conjugate()) / jet.jacobian


def refine_newton(
    prob: Problem,
    z0: complex,
    tol: float = 1e-10,
    max_iters: int = 50,
    source: str = "",
    degenerate_tol: float = DEGENERATE_TOL,
) -> Solution:
    """Planar Newton on g - w in the Wirtinger frame.

    Each step solves g_z * dz + g_zbar * conj(dz) = -(g - w); the step is
    halved (up to 20 times) whenever the residual would grow.
    """
    try:
        jet = jet_g(prob, z0)
    except AtSingularity as exc:
        raise HitSingularity(str(exc)) from exc
    z = complex(z0)
    res = abs(jet.value)
    iters = 0
    for iters in range(1, max_iters + 1):
        if jet.jacobian == 0.0 or not math.isfinite(res):
            break
        delta = _newton_delta(jet)
        lam = 1.0
        accepted = False
        for _ in range(21):
            cand = z + lam * delta
            try:
                cjet = jet_g(prob, cand)
            except AtSingularity:
                lam *= 0.5
                continue
            cres = abs(cjet.value)
            if cres < res or (cres == 0.0):
                z, jet, res = cand, cjet, cres
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break
        if res < 1e-3 * tol or abs(lam * delta) <= 4e-16 * abs(z):
            break
    if not (res < tol):
        raise Diverged(f"Newton from {z0!r} stopped at residual {res:.3e}")
    return Solution(z, res, classify_jet(jet, degenerate_tol), source, iters)


# --------------------------------------------------------------------------
# winding numbers

Contour = Union[Sequence[complex], np.ndarray, Callable[[np.ndarray], np.ndarray]]


def circle(center: complex, radius: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda s: center + radius * np.exp(2j * np.pi * s)


def _param(contour: Contour) -> Callable[[np.ndarray], np.ndarray]:
    if callable(contour):
        return contour
    pts = np.asarray(list(contour) + [contour[0]], dtype=complex)
    k = len(pts) - 1

    def gamma(s):
        x = np.asarray(s) * k
        i = np.minimum(np.floor(x).astype(int), k - 1)
        frac = x - i
        return pts[i] + (pts[i + 1] - pts[i]) * frac

    return gamma


def winding_number(
    prob: Problem,
    contour: Contour,
    quad_tol: float = 0.5,
    margin: float = 1e-12,
    start_points: int = 256,
    max_points: int = 1 << 20,
) -> int:
    """Winding number of g - w along a closed contour (counter-clockwise positive).

    Samples are refined until no consecutive pair differs in argument by more
    than `quad_tol` radians.
    """
    gamma = _param(contour)
    s = np.linspace(0.0, 1.0, start_points + 1)
    vals = eval_g_array(prob, gamma(s)) - prob.w
    while True:
        if not np.all(np.isfinite(vals)):
            raise TooCloseToZero("contour passes through a singularity of g")
        if np.min(np.abs(vals)) <= margin:
            raise TooCloseToZero("contour passes too close to a zero of g - w")
        darg = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(darg) > quad_tol
        if not bad.any():
            break
        if len(s) * 2 > max_points:
            raise ArgJumpTooLarge("argument refinement cap reached")
        idx = np.nonzero(bad)[0]
        mids = 0.5 * (s[idx] + s[idx + 1])
        mvals = eval_g_array(prob, gamma(mids)) - prob.w
        s = np.insert(s, idx + 1, mids)
        vals = np.insert(vals, idx + 1, mvals)
    total = float(np.sum(darg)) / (2 * math.pi)
    k = round(total)
    if abs(total - k) > 0.25:
        raise ArgJumpTooLarge(f"winding total {total:.3f} is not near an integer")
    return int(k)


def _sort_key(sol: Solution):
    return (round(sol.z.real, 9), round(sol.z.imag, 9), sol.residual)


def _dedupe(sols: list[Solution], merge_radius: float) -> list[Solution]:
    kept: list[Solution] = []
    for s in sorted(sols, key=lambda s: (s.residual, s.z.real, s.z.imag)):
        if any(abs(s.z - k.z) <= merge_radius * (1.0 + abs(s.z)) for k in kept):
            continue
        kept.append(s)
    return sorted(kept, key=_sort_key)


def _grid_seeds(prob: Problem, radius: float, res: int, limit: int = 4000) -> list[complex]:
    xs = np.linspace(-radius, radius, res + 1)
    X, Y = np.meshgrid(xs, xs)
    V = eval_g_array(prob, X + 1j * Y) - prob.w
    re, im = V.real, V.imag
    corners = lambda A: np.stack([A[:-1, :-1], A[1:, :-1], A[:-1, 1:], A[1:, 1:]])  # noqa: E731
    cre, cim = corners(re), corners(im)
    with np.errstate(invalid="ignore"):
        hit = (cre.min(0) < 0) & (cre.max(0) > 0) & (cim.min(0) < 0) & (cim.max(0) > 0)
    iy, ix = np.nonzero(hit)
    centres = (0.5 * (xs[ix] + xs[ix + 1]) + 1j * 0.5 * (xs[iy] + xs[iy + 1]))
    return [complex(c) for c in centres[:limit]]


def _local_winding(prob: Problem, sol: Solution, others: list[Solution]) -> Optional[int]:
    dists = [abs(sol.z)] + [abs(sol.z - a) for a in prob.pole_list]
    dists += [abs(sol.z - o.z) for o in others if o is not sol]
    radius = min(0.3 * min(dists), 0.1 * (1.0 + abs(sol.z)))
    try:
        return winding_number(prob, circle(sol.z, radius))
    except (TooCloseToZero, ArgJumpTooLarge) as exc:
        log.warning("local winding failed at %r: %s", sol.z, exc)
        return None


def _global_winding(prob: Problem, sols: list[Solution], R: float) -> Optional[int]:
    pts = [s.z for s in sols]
    singular = [0j] + [a for a, _ in prob.distinct_poles]
    small = 0
    try:
        for c in singular:
            if c == 0j and any(abs(a) <= 1e-12 for a, _ in prob.distinct_poles):
                continue
            near = [abs(c - x) for x in pts] + [abs(c - o) for o in singular if o != c]
            radius = 0.5 * min(near) if near else 1.0
            small += winding_number(prob, circle(c, radius))
        extent = max([abs(x) for x in pts + singular] + [1.0])
        big_r = max(R, 2.0 * extent)
        result = None
        for _ in range(5):
            big = winding_number(prob, circle(0j, big_r))
            result = big - small
            if result == prob.d:
                break
            big_r *= 2.0
        return result
    except (TooCloseToZero, ArgJumpTooLarge) as exc:
        log.warning("global winding failed: %s", exc)
        return None


def _refine_all(prob: Problem, seeds: list[tuple[complex, str]], params: SolveParams) -> list[Solution]:
    def one(seed):
        z0, src = seed
        try:
            return refine_newton(prob, z0, params.solve_tol, params.newton_max_iters, src, params.degenerate_tol)
        except Diverged:
            return None

    if params.threads > 1:
        with ThreadPoolExecutor(params.threads) as pool:
            out = list(pool.map(one, seeds))
    else:
        out = [one(s) for s in seeds]
    return [s for s in out if s is not None]


def solve(prob: Problem, params: SolveParams | None = None, strict: bool = False) -> SolveReport:
    """Find all solutions of g(z) = w and verify the count topologically."""
    params = params or SolveParams()
    tparams = replace(params.trace, threads=params.threads)
    rng = np.random.default_rng(params.jitter_seed)
    notes: list[str] = []
    report_parts = None
    for attempt in range(params.escalations + 1):
        tr = trace(prob, tparams)
        crossings = all_crossings(tr)
        seeds = [(c.z, f"curve:{c.arc}:{c.kind}") for c in crossings]
        if params.seed_jitter > 0:
            seeds = [
                (z + params.seed_jitter * abs(z) * complex(*rng.uniform(-1, 1, 2)), src) for z, src in seeds
            ]
        if attempt > 0:
            res = min(params.grid_start * 4 ** (attempt - 1), params.grid_max)
            seeds += [(z, "grid-fallback") for z in _grid_seeds(prob, tr.R, res)]
        sols = _dedupe(_refine_all(prob, seeds, params), params.merge_radius)
        for s in sols:
            s.winding = _local_winding(prob, s, sols)
        n_plus = sum(s.orientation == Orientation.POSITIVE for s in sols)
        n_minus = sum(s.orientation == Orientation.NEGATIVE for s in sols)
        n_deg = len(sols) - n_plus - n_minus
        W = _global_winding(prob, sols, tr.R)
        local_ok = all(
            s.winding == {Orientation.POSITIVE: 1, Orientation.NEGATIVE: -1}[s.orientation]
            for s in sols
            if s.orientation != Orientation.DEGENERATE
        )
        degree_ok = n_deg > 0 or n_plus - n_minus == prob.d
        consistent = local_ok and degree_ok and W == prob.d and tr.complete
        report_parts = (tr, sols, n_plus, n_minus, n_deg, W)
        if consistent:
            break
        notes.append(
            f"attempt {attempt}: local_ok={local_ok} degree_ok={degree_ok} winding={W} trace_complete={tr.complete}"
        )
        tparams = replace(tparams, step_factor=tparams.step_factor / 2, trace_tol=tparams.trace_tol / 2)
    tr, sols, n_plus, n_minus, n_deg, W = report_parts

    N = len(sols)
    bounds = (N >= prob.d, N <= 3 * prob.d + 2 * prob.m)
    cert_points = []
    if params.certificate:
        try:
            cert_points, _ = certificate(prob, tr, params.merge_radius)
        except CertificateShort as exc:
            notes.append(str(exc))
            cert_points, _ = certificate(prob, tr, params.merge_radius, strict=False)
            consistent = False
    status = "ok" if consistent and all(bounds) else "inconsistent"
    report = SolveReport(
        problem=prob,
        solutions=sols,
        N=N,
        N_plus=n_plus,
        N_minus=n_minus,
        N_degenerate=n_deg,
        d=prob.d,
        m=prob.m,
        n=prob.n,
        degree_winding=W,
        bounds_ok=bounds,
        certificate_count=len(cert_points),
        certificate_points=cert_points,
        status=status,
        box_radius=tr.R,
        escalations=attempt,
        notes=notes,
        trace=tr,
    )
    if n_deg > 0 and params.perturb_degenerate:
        shifted = solve(
            prob.with_w(prob.w + 1j * params.perturb_eps),
            replace(params, perturb_degenerate=False, dynamics=False, certificate=False),
        )
        report.perturbed_counts = {
            "w": [shifted.problem.w.real, shifted.problem.w.imag],
            "N": shifted.N,
            "N_plus": shifted.N_plus,
            "N_minus": shifted.N_minus,
            "N_degenerate": shifted.N_degenerate,
        }
    if params.dynamics:
        from .dynamics import cross_check

        report.dynamics_check = cross_check(prob, report, seed=params.dynamics_seed)
        if not report.dynamics_check.fatou_ok:
            report.status = "inconsistent"
    if strict and report.status != "ok":
        raise Inconsistent("winding/degree consistency checks failed", report)
    return report
