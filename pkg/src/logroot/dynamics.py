"""Attracting fixed points of the antiholomorphic map z -> conj(h(z)).

Sense-reversing solutions of g = w are attracting fixed points of
conj(h), h(z) = exp(-f(z) + w) / z, and every attracting basin contains a
singular value.  Iterating from the critical values therefore recovers all
of them, which gives an independent check on the solver's N^- count.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .equation import Orientation, Problem, eval_h, h_critical_points, h_prime
from .errors import AtSingularity

log = logging.getLogger(__name__)

MAX_ITERS = 100_000
FIX_TOL = 1e-10
NEUTRAL_BAND = 1e-6
REPLICAS = 5
REL_PERTURB = 1e-3
CYCLE_WINDOW = 64


@dataclass
class FixedPointRecord:
    z: complex
    multiplier_modulus: float
    seed: complex
    iterations: int


@dataclass
class DynamicsCheck:
    n_minus: int
    fixed_points: list
    fatou_ok: bool
    recovered: list
    indeterminate: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def singular_values(prob: Problem) -> list[complex]:
    """Finite critical values h(c); 0 and infinity are left out."""
    out = []
    dropped = 0
    for c in h_critical_points(prob):
        try:
            v = eval_h(prob, c)
        except AtSingularity:
            dropped += 1
            continue
        if math.isfinite(v.real) and math.isfinite(v.imag):
            out.append(v)
        else:
            dropped += 1
    if dropped:
        log.warning("dropped %d non-finite critical values", dropped)
    return out


def _default_escape(prob: Problem) -> float:
    pts = [abs(a) for a in prob.pole_list] + [abs(c) for c in h_critical_points(prob)]
    return 100.0 * (1.0 + max(pts, default=0.0))


def _iterate(prob: Problem, starts: np.ndarray, max_iters: int, fix_tol: float, escape: float):
    """Iterate all starts at once; returns (limits, iterations), NaN for failures."""
    z = np.asarray(starts, dtype=complex).copy()
    prev = np.full_like(z, np.nan)
    limits = np.full_like(z, np.nan)
    iters = np.zeros(len(z), dtype=int)
    alive = np.arange(len(z))
    ring = np.full((len(z), CYCLE_WINDOW), np.nan, dtype=complex)
    poles = np.array(prob.pole_list, dtype=complex)
    w = prob.w
    with np.errstate(all="ignore"):
        for k in range(max_iters + 1):
            if len(alive) == 0:
                break
            cur = z[alive]
            bad = ~np.isfinite(cur) | (np.abs(cur) <= 1e-9) | (np.abs(cur) > escape)
            if len(poles):
                bad |= np.min(np.abs(cur[:, None] - poles[None, :]), axis=1) <= 1e-9 * (1 + np.abs(poles).max())
            expo = -2.0 * prob.q(cur) / prob.p(cur) + w
            bad |= expo.real > 700
            nxt = np.conj(np.exp(expo) / cur)
            bad |= ~np.isfinite(nxt)
            step = np.abs(nxt - cur)
            conv = ~bad & (step <= fix_tol * (1.0 + np.abs(cur)))
            # a genuine 2-cycle keeps its two points apart; an orbit that spirals
            # into a fixed point with negative multiplier also returns close to
            # prev, so only macroscopic jumps count
            scale = 1.0 + np.abs(cur)
            cyc = ~bad & ~conv & (np.abs(nxt - prev[alive]) <= fix_tol * scale) & (step > 1e-6 * scale)
            ring[alive, k % CYCLE_WINDOW] = nxt
            if k >= CYCLE_WINDOW and k % CYCLE_WINDOW == 0:
                # longer attracting cycles: the latest point recurs inside the window
                back = np.abs(ring[alive] - nxt[:, None])
                back[:, k % CYCLE_WINDOW] = np.inf
                cyc |= ~bad & ~conv & (back.min(axis=1) <= fix_tol * scale) & (step > 1e-6 * scale)
            done = alive[conv]
            limits[done] = nxt[conv]
            iters[done] = k
            prev[alive] = cur
            z[alive] = nxt
            alive = alive[~(bad | conv | cyc)]
    return limits, iters


def iterate_to_fixed_point(
    prob: Problem,
    z0: complex,
    max_iters: int = MAX_ITERS,
    fix_tol: float = FIX_TOL,
    escape_radius: float | None = None,
) -> Optional[FixedPointRecord]:
    escape = escape_radius or _default_escape(prob)
    limits, iters = _iterate(prob, np.array([z0]), max_iters, fix_tol, escape)
    return _record(prob, complex(limits[0]), complex(z0), int(iters[0]), fix_tol)


def _record(prob: Problem, z: complex, seed: complex, iters: int, fix_tol: float) -> Optional[FixedPointRecord]:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return None
    try:
        hz = eval_h(prob, z)
        mult = abs(h_prime(prob, z))
    except AtSingularity:
        return None
    if abs(hz.conjugate() - z) > 100 * fix_tol * (1.0 + abs(z)):
        return None
    return FixedPointRecord(z, mult, seed, iters)


def attracting_fixed_points(
    prob: Problem,
    seed: int = 0,
    replicas: int = REPLICAS,
    max_iters: int = MAX_ITERS,
    fix_tol: float = FIX_TOL,
    escape_radius: float | None = None,
    merge_radius: float = 1e-6,
    diagnostics: dict | None = None,
) -> list[FixedPointRecord]:
    """Attracting fixed points of conj(h) reached from the singular values."""
    escape = escape_radius or _default_escape(prob)
    rng = np.random.default_rng(seed)
    starts: list[complex] = []
    groups: list[int] = []
    for gi, v in enumerate(singular_values(prob)):
        # conj(v) is the critical value of conj(h) itself; v is kept as well
        for base in (v.conjugate(), v):
            starts.append(base)
            groups.append(gi)
            for _ in range(replicas):
                jitter = complex(*rng.uniform(-1.0, 1.0, 2)) * REL_PERTURB
                starts.append(base * (1.0 + jitter))
                groups.append(gi)
    if not starts:
        return []
    limits, iters = _iterate(prob, np.array(starts), max_iters, fix_tol, escape)
    found: list[FixedPointRecord] = []
    indeterminate: list[FixedPointRecord] = []
    per_group: dict[int, set] = {}
    for start, gi, lim, it in zip(starts, groups, limits, iters):
        rec = _record(prob, complex(lim), start, int(it), fix_tol)
        key = None
        if rec is not None:
            if abs(rec.multiplier_modulus - 1.0) <= NEUTRAL_BAND:
                indeterminate.append(rec)
            elif rec.multiplier_modulus < 1.0:
                match = next((f for f in found if abs(f.z - rec.z) <= merge_radius * (1 + abs(rec.z))), None)
                if match is None:
                    found.append(rec)
                    match = rec
                key = id(match)
        per_group.setdefault(gi, set()).add(key)
    if diagnostics is not None:
        diagnostics["indeterminate"] = indeterminate
        diagnostics["disagreements"] = [g for g, keys in per_group.items() if len(keys) > 1]
    return sorted(found, key=lambda r: (round(r.z.real, 9), round(r.z.imag, 9)))


def cross_check(prob: Problem, report, seed: int = 0, merge_radius: float = 1e-6) -> DynamicsCheck:
    """Compare the solver's sense-reversing solutions with the attracting fixed points."""
    diag: dict = {}
    escape = max(10.0 * report.box_radius, _default_escape(prob))
    escape = max(escape, 10.0 * max((abs(s.z) for s in report.solutions), default=0.0))
    fps = attracting_fixed_points(prob, seed=seed, escape_radius=escape, diagnostics=diag)
    negatives = [s for s in report.solutions if s.orientation == Orientation.NEGATIVE]
    recovered = [any(abs(s.z - f.z) <= merge_radius * (1 + abs(s.z)) for f in fps) for s in negatives]
    n_minus = len(fps)
    notes = []
    ok = all(recovered)
    if not ok:
        notes.append("a sense-reversing solution was not reached from any singular value")
    if n_minus > prob.d + prob.m:
        ok = False
        notes.append(f"n_minus={n_minus} exceeds d+m={prob.d + prob.m}")
    if report.N_minus > n_minus:
        ok = False
        notes.append("N_minus exceeds n_minus")
    if report.N_degenerate == 0 and report.N != 2 * report.N_minus + prob.d:
        ok = False
        notes.append("N != 2 N_minus + d")
    if report.N > 2 * (prob.d + prob.m) + prob.d:
        ok = False
        notes.append("N exceeds 3d + 2m")
    if diag.get("disagreements"):
        notes.append(f"perturbed replicas disagreed for singular values {diag['disagreements']}")
    return DynamicsCheck(
        n_minus=n_minus,
        fixed_points=fps,
        fatou_ok=ok,
        recovered=recovered,
        indeterminate=diag.get("indeterminate", []),
        disagreements=diag.get("disagreements", []),
        notes=notes,
    )
