"""Tracing the level set {Im F = Im(w)/2} of F = q/p on the Riemann sphere.

Every solution of g(z) = w lies on this level set, because
Im g = 2 Im F.  The set is a graph whose vertices are the poles of F
(curve ends), the critical points of F with the right critical value
(junctions), the origin (where log|z| blows up) and infinity.  Arcs between
vertices are traced by a predictor-corrector scheme along which Re F grows
strictly; arcs are then chained through junctions into the d curves running
from pole to pole, and G = Re F + log|z| - Re(w)/2 is scanned for sign
changes along them.

Near infinity the tracer switches to the chart u = 1/z, in which F is the
rational function u**(m-n) * rev(q)(u) / rev(p)(u).
"""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .equation import Problem, eval_g
from .errors import AtSingularity, CertificateShort
from .poly import ComplexPoly, cluster_roots, roots, series_divide

log = logging.getLogger(__name__)

INF = "inf"


@dataclass
class TraceParams:
    trace_tol: float = 1e-9
    step_factor: float = 0.05
    max_step: float = 0.1
    min_step: float = 1e-14
    real_tol: float = 1e-9
    vertex_radius: float = 1e-3
    max_steps: int = 20000
    max_turn: float = 0.3
    tangency_tol: float = 1e-6
    merge_radius: float = 1e-6
    perturbation: float = 1e-6
    threads: int = 1


@dataclass(frozen=True)
class Junction:
    location: complex
    multiplicity: int
    alpha: float
    branch_angles: tuple
    value: float
    at_infinity: bool = False


@dataclass
class Curve:
    samples: np.ndarray
    f_values: np.ndarray
    endpoint_start: object
    endpoint_end: object
    passes_infinity: bool
    arcs: list
    complete: bool = True


@dataclass
class Crossing:
    z: complex
    t: float
    kind: str  # "-+", "+-", "tangent" or "pole-segment"
    arc: int
    residual: float = math.nan


@dataclass
class Arc:
    start: int
    start_angle: float
    end: Optional[int]
    end_angle: float
    charts: list = field(default_factory=list)
    zetas: list = field(default_factory=list)
    ts: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.end is not None

    def z(self, i: int) -> complex:
        zeta = self.zetas[i]
        if self.charts[i] == 0:
            return zeta
        return complex(math.inf, 0.0) if zeta == 0 else 1.0 / zeta


@dataclass
class _Vertex:
    kind: str  # "pole" or "junction"
    chart: int
    location: complex
    order: int
    alpha: float
    radius: float
    value: float = math.nan
    g_value: float = math.nan
    pole_index: object = None
    is_origin: bool = False
    is_infinity: bool = False

    def out_angles(self) -> list[float]:
        k = self.order
        if self.kind == "pole":
            # c / s**k real negative: F climbs from -inf leaving the pole
            return [(self.alpha - math.pi - 2 * math.pi * j) / k for j in range(k)]
        return [(2 * math.pi * j - self.alpha) / k for j in range(k)]


class _Chart:
    def __init__(self, index: int, num: ComplexPoly, den: ComplexPoly, level: float):
        self.index = index
        self.num = num
        self.den = den
        self.level = level
        self.specials = np.zeros(0, dtype=complex)
        self.max_step = math.inf

    def eval(self, zeta: complex) -> tuple[complex, complex]:
        n, dn = self.num.value_and_derivative(zeta)
        d, dd = self.den.value_and_derivative(zeta)
        phi = n / d - 1j * self.level
        dphi = (dn * d - n * dd) / (d * d)
        return phi, dphi

    def to_z(self, zeta: complex) -> complex:
        if self.index == 0:
            return zeta
        return complex(math.inf, 0.0) if zeta == 0 else 1.0 / zeta

    def from_z(self, z: complex) -> complex:
        return z if self.index == 0 else 1.0 / z

    def step_cap(self, zeta: complex, factor: float) -> float:
        cap = self.max_step * (1.0 + abs(zeta)) if self.index == 0 else self.max_step
        if len(self.specials):
            cap = min(cap, factor * float(np.min(np.abs(self.specials - zeta))))
        return cap


@dataclass
class TraceResult:
    problem: Problem
    params: TraceParams
    level: float
    R: float
    vertices: list
    junctions: list
    arcs: list
    curves: list
    chaining_ok: bool
    perturbed: bool = False
    curve_trace: Optional["TraceResult"] = None

    @property
    def complete(self) -> bool:
        return all(a.complete for a in self.arcs) and self.chaining_ok and self.end_counts_ok

    @property
    def end_counts_ok(self) -> bool:
        ins = [0] * len(self.vertices)
        outs = [0] * len(self.vertices)
        for a in self.arcs:
            outs[a.start] += 1
            if a.end is not None:
                ins[a.end] += 1
        for i, v in enumerate(self.vertices):
            if ins[i] != v.order or outs[i] != v.order:
                return False
        return True


# --------------------------------------------------------------------------
# chart and vertex construction


def _charts(prob: Problem, level: float) -> tuple[_Chart, _Chart]:
    m, n = prob.m, prob.n
    rq = prob.q.reversed(n)
    rp = prob.p.reversed(m)
    u = ComplexPoly([0, 1])
    if m >= n:
        num1 = rq * _power(u, m - n)
        den1 = rp
    else:
        num1 = rq
        den1 = rp * _power(u, n - m)
    return _Chart(0, prob.q, prob.p, level), _Chart(1, num1, den1, level)


def _power(u: ComplexPoly, k: int) -> ComplexPoly:
    out = ComplexPoly([1.0])
    for _ in range(k):
        out = out * u
    return out


def _taylor_F(chart: _Chart, a: complex, order: int) -> list[complex]:
    return series_divide(chart.num.taylor(a, order), chart.den.taylor(a, order), order)


def _multiplicity(coeffs: list[complex], rho: float, tol: float = 1e-7) -> int:
    mags = [abs(c) * rho**k for k, c in enumerate(coeffs)][1:]
    top = max(mags) if mags else 0.0
    for k, mag in enumerate(mags, start=1):
        if mag > tol * top:
            return k
    return len(coeffs) - 1


def _critical_points(chart: _Chart) -> list[tuple[complex, int]]:
    dnum = chart.num.derivative() * chart.den - chart.num * chart.den.derivative()
    if dnum.is_zero or dnum.degree == 0:
        return []
    return cluster_roots(roots(dnum))


def _on_level(value: complex, level: float, tol: float) -> bool:
    return abs(value.imag - level) <= tol * (1.0 + abs(value))


def _isolation(loc: complex, others, cap: float) -> float:
    best = cap
    for o in others:
        dist = abs(o - loc)
        if dist > 1e-7 * (1.0 + abs(loc)):
            best = min(best, dist)
    return best


def _junction_vertex(chart: _Chart, loc: complex, mult_hint: int, iso: float, params: TraceParams):
    # the origin and infinity arrive without a hint, so cover every possible order
    order = max(mult_hint + 2, chart.num.degree + chart.den.degree + 1, 3)
    coeffs = _taylor_F(chart, loc, order)
    L = _multiplicity(coeffs, iso)
    alpha = math.atan2(coeffs[L].imag, coeffs[L].real)
    # at a junction of order L the level set splits only by |c_L| r^L, so the
    # ball must be wide enough for that to stand clear of the trace tolerance
    resolvable = (1e3 * params.trace_tol * (1.0 + abs(coeffs[0])) / abs(coeffs[L])) ** (1.0 / L)
    radius = min(max(params.vertex_radius * iso, resolvable), 0.25 * iso)
    return _Vertex(
        kind="junction",
        chart=chart.index,
        location=loc,
        order=L,
        alpha=alpha,
        radius=radius,
        value=coeffs[0].real,
    )


def _build_vertices(prob: Problem, charts, params: TraceParams):
    c0, c1 = charts
    level = c0.level
    poles0 = list(prob.distinct_poles)
    crit0 = _critical_points(c0)
    zeros_q = list(roots(prob.q)) if prob.n >= 1 else []
    specials = [a for a, _ in poles0] + [c for c, _ in crit0] + zeros_q + [0j]
    R = 10.0 * (1.0 + max(abs(s) for s in specials))
    c0.specials = np.array([a for a, _ in poles0] + [c for c, _ in crit0] + [0j], dtype=complex)
    c1.specials = np.array([0j], dtype=complex)
    c1.max_step = 0.2 / R

    vertices: list[_Vertex] = []
    for idx, (a, k) in enumerate(poles0):
        iso = _isolation(a, specials, 1.0 + abs(a))
        lead = prob.p.taylor(a, k)[k]
        c = prob.q(a) / lead
        vertices.append(
            _Vertex("pole", 0, a, k, math.atan2(c.imag, c.real), params.vertex_radius * iso, pole_index=idx)
        )

    origin_done = any(abs(a) <= 1e-12 for a, _ in poles0)
    for loc, mult in crit0:
        val = c0.num(loc) / c0.den(loc)
        if not _on_level(val, level, params.real_tol):
            continue
        iso = _isolation(loc, specials, 1.0 + abs(loc))
        v = _junction_vertex(c0, loc, mult, iso, params)
        if abs(loc) <= 1e-7 * iso:
            v.is_origin = True
            v.location = 0j
            origin_done = True
            v.g_value = -math.inf
        else:
            v.g_value = v.value + math.log(abs(loc)) - prob.w.real / 2
        vertices.append(v)
    if not origin_done:
        val = prob.q(0j) / prob.p(0j)
        if _on_level(val, level, params.real_tol):
            iso = _isolation(0j, specials, 1.0)
            v = _junction_vertex(c0, 0j, 0, iso, params)
            v.is_origin = True
            v.g_value = -math.inf
            vertices.append(v)

    # infinity, seen from the u-chart
    iso_inf = 1.0 / R
    if prob.n > prob.m:
        k = prob.n - prob.m
        c = prob.q.lead / prob.p.lead
        vertices.append(
            _Vertex("pole", 1, 0j, k, math.atan2(c.imag, c.real), params.vertex_radius * iso_inf, pole_index=INF, is_infinity=True)
        )
    else:
        val = prob.F_at_infinity
        if _on_level(val, level, params.real_tol):
            v = _junction_vertex(c1, 0j, 0, iso_inf, params)
            v.is_infinity = True
            v.g_value = math.inf
            vertices.append(v)
    return vertices, R


def junctions(prob: Problem, real_tol: float = 1e-9) -> list[Junction]:
    """Critical points of F whose critical value lies on the traced level."""
    params = TraceParams(real_tol=real_tol)
    level = prob.w.imag / 2
    charts = _charts(prob, level)
    vertices, _ = _build_vertices(prob, charts, params)
    out = []
    for v in vertices:
        if v.kind != "junction" or v.order < 2:
            continue
        angles = sorted(((math.pi * j - v.alpha) / v.order) % (2 * math.pi) for j in range(2 * v.order))
        loc = complex(math.inf, 0) if v.is_infinity else v.location
        out.append(Junction(loc, v.order, v.alpha, tuple(angles), v.value, v.is_infinity))
    return out


# --------------------------------------------------------------------------
# arc tracing


def _correct(chart: _Chart, zeta: complex, tol: float, iters: int = 6):
    phi, dphi = chart.eval(zeta)
    for _ in range(iters):
        if not (math.isfinite(phi.real) and math.isfinite(phi.imag)) or dphi == 0:
            return None
        if abs(phi.imag) <= tol * (1.0 + abs(phi)):
            return zeta, phi, dphi
        zeta = zeta - 1j * phi.imag / dphi
        phi, dphi = chart.eval(zeta)
    if math.isfinite(abs(phi)) and dphi != 0 and abs(phi.imag) <= tol * (1.0 + abs(phi)):
        return zeta, phi, dphi
    return None


def _trace_arc(charts, vertices, R, start: int, angle: float, params: TraceParams) -> Arc:
    v = vertices[start]
    chart = charts[v.chart]
    arc = Arc(start=start, start_angle=angle, end=None, end_angle=math.nan)
    first = _correct(chart, v.location + v.radius * complex(math.cos(angle), math.sin(angle)), params.trace_tol)
    if first is None:
        log.warning("could not seed arc at vertex %d angle %.6f", start, angle)
        return arc
    zeta, phi, dphi = first
    arc.charts.append(chart.index)
    arc.zetas.append(zeta)
    arc.ts.append(phi.real)
    direction = dphi.conjugate() / abs(dphi)
    h = chart.step_cap(zeta, params.step_factor)
    for _ in range(params.max_steps):
        cap = chart.step_cap(zeta, params.step_factor)
        h = min(2.0 * h, cap)
        while True:
            pred = zeta + h * direction
            got = _correct(chart, pred, params.trace_tol)
            if got is not None:
                nz, nphi, ndphi = got
                ndir = ndphi.conjugate() / abs(ndphi)
                turn = abs(math.atan2((ndir * direction.conjugate()).imag, (ndir * direction.conjugate()).real))
                if abs(nz - pred) <= 0.25 * h and nphi.real > phi.real and turn <= params.max_turn:
                    break
            h *= 0.5
            if h < params.min_step * (1.0 + abs(zeta)):
                log.warning("trace stalled near %r (chart %d)", chart.to_z(zeta), chart.index)
                return arc
        zeta, phi, dphi, direction = nz, nphi, ndphi, ndir
        arc.charts.append(chart.index)
        arc.zetas.append(zeta)
        arc.ts.append(phi.real)

        if chart.index == 0 and abs(zeta) > R:
            chart = charts[1]
            zeta = 1.0 / zeta
            phi, dphi = chart.eval(zeta)
            direction = dphi.conjugate() / abs(dphi)
            h = chart.step_cap(zeta, params.step_factor)
        elif chart.index == 1 and abs(zeta) > 2.0 / R:
            chart = charts[0]
            zeta = 1.0 / zeta
            phi, dphi = chart.eval(zeta)
            direction = dphi.conjugate() / abs(dphi)
            h = chart.step_cap(zeta, params.step_factor)

        for idx, vert in enumerate(vertices):
            if vert.chart != chart.index:
                continue
            if abs(zeta - vert.location) < 0.5 * vert.radius:
                arc.end = idx
                off = zeta - vert.location
                arc.end_angle = math.atan2(off.imag, off.real)
                return arc
    log.warning("trace exceeded %d steps", params.max_steps)
    return arc


def _angle_gap(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def _chain(vertices, arcs):
    """Link arcs through junctions; return (list of arc-index chains, ok flag)."""
    outgoing: dict[int, list[int]] = {}
    for i, a in enumerate(arcs):
        outgoing.setdefault(a.start, []).append(i)
    successor: dict[int, int] = {}
    ok = True
    for idx, v in enumerate(vertices):
        if v.kind != "junction":
            continue
        incoming = [i for i, a in enumerate(arcs) if a.end == idx]
        outs = outgoing.get(idx, [])
        used = set()
        for i in incoming:
            target = arcs[i].end_angle + math.pi / v.order
            best = min(outs, key=lambda j: _angle_gap(arcs[j].start_angle, target), default=None)
            if best is None or best in used or _angle_gap(arcs[best].start_angle, target) > math.pi / (2 * v.order):
                ok = False
                continue
            used.add(best)
            successor[i] = best
    chains = []
    for i, a in enumerate(arcs):
        if vertices[a.start].kind != "pole":
            continue
        chain = [i]
        seen = {i}
        while chain[-1] in successor:
            nxt = successor[chain[-1]]
            if nxt in seen:
                ok = False
                break
            chain.append(nxt)
            seen.add(nxt)
        chains.append(chain)
    covered = {i for c in chains for i in c}
    if len(covered) != len(arcs):
        ok = False
    return chains, ok


def _build_curve(vertices, arcs, chain) -> Curve:
    zs: list[complex] = []
    ts: list[float] = []
    passes_inf = False
    complete = True
    for pos, ai in enumerate(chain):
        a = arcs[ai]
        if pos > 0:
            v = vertices[a.start]
            zs.append(complex(math.inf, 0.0) if v.is_infinity else v.location)
            ts.append(v.value)
            passes_inf |= v.is_infinity
        for i in range(len(a.ts)):
            if ts and a.ts[i] <= ts[-1]:
                continue
            zs.append(a.z(i))
            ts.append(a.ts[i])
            passes_inf |= a.charts[i] == 1
        complete &= a.complete
    last = arcs[chain[-1]]
    start_v = vertices[arcs[chain[0]].start]
    end = vertices[last.end].pole_index if last.end is not None and vertices[last.end].kind == "pole" else None
    if end is None:
        complete = False
    passes_inf |= start_v.is_infinity or (last.end is not None and vertices[last.end].is_infinity)
    return Curve(
        samples=np.array(zs, dtype=complex),
        f_values=np.array(ts, dtype=float),
        endpoint_start=start_v.pole_index,
        endpoint_end=end,
        passes_infinity=passes_inf,
        arcs=list(chain),
        complete=complete,
    )


def trace(prob: Problem, params: TraceParams | None = None, level: float | None = None) -> TraceResult:
    """Trace every arc of {Im F = level} and chain the arcs into curves.

    `level` defaults to Im(w)/2, the level carrying the solutions of g = w.
    """
    params = params or TraceParams()
    level = prob.w.imag / 2 if level is None else level
    charts = _charts(prob, level)
    vertices, R = _build_vertices(prob, charts, params)
    seeds = [(i, ang) for i, v in enumerate(vertices) for ang in v.out_angles()]

    def run(seed):
        return _trace_arc(charts, vertices, R, seed[0], seed[1], params)

    if params.threads > 1:
        with ThreadPoolExecutor(params.threads) as pool:
            arcs = list(pool.map(run, seeds))
    else:
        arcs = [run(s) for s in seeds]
    chains, ok = _chain(vertices, arcs)
    curves = [_build_curve(vertices, arcs, c) for c in chains]
    curves.sort(key=lambda c: (_endpoint_key(c.endpoint_start), float(np.angle(c.samples[0] - _pole_loc(prob, c.endpoint_start))) if len(c.samples) else 0.0))
    juncs = [
        Junction(
            complex(math.inf, 0) if v.is_infinity else v.location,
            v.order,
            v.alpha,
            tuple(sorted(((math.pi * j - v.alpha) / v.order) % (2 * math.pi) for j in range(2 * v.order))),
            v.value,
            v.is_infinity,
        )
        for v in vertices
        if v.kind == "junction" and v.order >= 2
    ]
    result = TraceResult(prob, params, level, R, vertices, juncs, arcs, curves, ok)
    if not ok:
        log.info("junction matching ambiguous; assembling curves from a perturbed level")
        scale = 1.0 + max((abs(v.value) for v in vertices if v.kind == "junction"), default=0.0)
        shifted = trace_perturbed(prob, replace(params), level + params.perturbation * scale)
        result.curves = shifted.curves
        result.perturbed = True
        result.curve_trace = shifted
        result.chaining_ok = shifted.chaining_ok
    return result


def trace_perturbed(prob: Problem, params: TraceParams, level: float) -> TraceResult:
    """Plain trace at a level chosen off the critical values, used for chaining only."""
    charts = _charts(prob, level)
    vertices, R = _build_vertices(prob, charts, params)
    seeds = [(i, ang) for i, v in enumerate(vertices) for ang in v.out_angles()]
    arcs = [_trace_arc(charts, vertices, R, i, ang, params) for i, ang in seeds]
    chains, ok = _chain(vertices, arcs)
    curves = [_build_curve(vertices, arcs, c) for c in chains]
    return TraceResult(prob, params, level, R, vertices, [], arcs, curves, ok)


def _endpoint_key(ep) -> tuple:
    return (1, 0) if ep == INF else (0, ep if ep is not None else -1)


def _pole_loc(prob: Problem, ep) -> complex:
    if ep == INF or ep is None:
        return 0j
    return prob.distinct_poles[ep][0]


# --------------------------------------------------------------------------
# G along arcs


def _G(prob: Problem, t: float, z: complex) -> float:
    return t + math.log(abs(z)) - prob.w.real / 2


def _newton_on_level(chart: _Chart, zeta: complex, t: float, iters: int = 12) -> complex:
    target = complex(t, 0.0)
    for _ in range(iters):
        phi, dphi = chart.eval(zeta)
        if dphi == 0 or not math.isfinite(abs(phi)):
            break
        step = (phi - target) / dphi
        zeta = zeta - step
        if abs(step) <= 1e-15 * (1.0 + abs(zeta)):
            break
    return zeta


class _ArcView:
    """Evaluate points of one arc as a function of the F-value parameter t."""

    def __init__(self, trace_result: TraceResult, index: int):
        self.tr = trace_result
        self.arc = trace_result.arcs[index]
        self.index = index
        self.charts = _charts(trace_result.problem, trace_result.level)
        self.ts = np.array(self.arc.ts)

    def point(self, t: float) -> complex:
        arc = self.arc
        i = int(np.searchsorted(self.ts, t) - 1)
        i = min(max(i, 0), len(self.ts) - 2)
        chart = self.charts[arc.charts[i]]
        za = arc.zetas[i]
        zb = chart.from_z(self.charts[arc.charts[i + 1]].to_z(arc.zetas[i + 1]))
        ta, tb = arc.ts[i], arc.ts[i + 1]
        guess = za + (zb - za) * ((t - ta) / (tb - ta))
        return chart.to_z(_newton_on_level(chart, guess, t))

    def vertex_point(self, t: float, at_start: bool) -> complex:
        arc = self.arc
        v = self.tr.vertices[arc.start if at_start else arc.end]
        chart = self.charts[v.chart]
        i = 0 if at_start else len(arc.ts) - 1
        zs = chart.from_z(self.charts[arc.charts[i]].to_z(arc.zetas[i]))
        frac = (t - v.value) / (arc.ts[i] - v.value)
        frac = min(max(frac, 0.0), 1.0) ** (1.0 / v.order)
        guess = v.location + (zs - v.location) * frac
        if frac == 0.0:
            return chart.to_z(guess)
        return chart.to_z(_newton_on_level(chart, guess, t))

    def G(self, t: float) -> float:
        return _G(self.tr.problem, t, self.point(t))


def _bisect(fun, a: float, b: float, fa: float, fb: float, iters: int = 200) -> float:
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = fun(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def arc_crossings(trace_result: TraceResult, index: int, params: TraceParams | None = None) -> list[Crossing]:
    """Sign changes of G along one arc, plus tangential near-zeros."""
    params = params or trace_result.params
    prob = trace_result.problem
    view = _ArcView(trace_result, index)
    arc = view.arc
    if not arc.ts:
        return []
    zs = [arc.z(i) for i in range(len(arc.ts))]
    Gs = [_G(prob, t, z) if math.isfinite(abs(z)) else math.inf for t, z in zip(arc.ts, zs)]
    out: list[Crossing] = []

    def add(t, z, kind):
        try:
            res = abs(eval_g(prob, z) - prob.w)
        except AtSingularity:
            return
        out.append(Crossing(z, t, kind, index, res))

    # start segment
    vs = trace_result.vertices[arc.start]
    if vs.kind == "pole":
        if Gs[0] > 0:
            add(arc.ts[0], zs[0], "pole-segment")
    elif (vs.g_value < 0) != (Gs[0] < 0):
        f = lambda t: _G(prob, t, view.vertex_point(t, True))  # noqa: E731
        t = _bisect(f, vs.value, arc.ts[0], vs.g_value, Gs[0])
        add(t, view.vertex_point(t, True), "-+" if vs.g_value < 0 else "+-")

    for i in range(len(arc.ts) - 1):
        ga, gb = Gs[i], Gs[i + 1]
        if not (math.isfinite(ga) and math.isfinite(gb)):
            continue
        if (ga < 0) != (gb < 0):
            t = brentq(view.G, arc.ts[i], arc.ts[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
            add(t, view.point(t), "-+" if ga < 0 else "+-")

    # tangential dips that never cross between samples
    for i in range(1, len(arc.ts) - 1):
        g0, g1, g2 = Gs[i - 1], Gs[i], Gs[i + 1]
        if not all(math.isfinite(x) for x in (g0, g1, g2)):
            continue
        s = 1.0 if g1 > 0 else -1.0
        if not ((g0 > 0) == (g1 > 0) == (g2 > 0)):
            continue
        if not (s * g1 < s * g0 and s * g1 < s * g2):
            continue
        ta, tb = arc.ts[i - 1], arc.ts[i + 1]
        res = minimize_scalar(lambda t: s * view.G(t), bounds=(ta, tb), method="bounded", options={"xatol": 1e-14 * (1 + abs(tb))})
        tm, gm = float(res.x), s * float(res.fun)
        if s * gm <= 0:
            for lo, hi, glo in ((ta, tm, g0), (tm, tb, gm)):
                ghi = view.G(hi)
                if (glo < 0) != (ghi < 0) and math.isfinite(glo):
                    t = brentq(view.G, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
                    add(t, view.point(t), "-+" if glo < 0 else "+-")
        elif abs(gm) < params.tangency_tol:
            add(tm, view.point(tm), "tangent")

    # end segment
    if arc.end is not None:
        ve = trace_result.vertices[arc.end]
        if ve.kind == "pole":
            if Gs[-1] < 0:
                add(arc.ts[-1], zs[-1], "pole-segment")
        elif (ve.g_value < 0) != (Gs[-1] < 0):
            f = lambda t: _G(prob, t, view.vertex_point(t, False))  # noqa: E731
            t = _bisect(f, arc.ts[-1], ve.value, Gs[-1], ve.g_value)
            add(t, view.vertex_point(t, False), "-+" if Gs[-1] < 0 else "+-")
    return out


def all_crossings(trace_result: TraceResult) -> list[Crossing]:
    out = []
    for i in range(len(trace_result.arcs)):
        out.extend(arc_crossings(trace_result, i))
    return out


@dataclass
class CertifiedPoint:
    z: complex
    curve: int
    residual: float


def certificate(prob: Problem, trace_result: TraceResult, merge_radius: float = 1e-6, strict: bool = True):
    """Certified minus-to-plus zeros of G along each curve.

    Returns (certified points, extra seeds).  Raises CertificateShort when
    fewer than d distinct certified points are found and `strict` is set.
    """
    source = trace_result.curve_trace or trace_result
    crossings_by_arc = {i: arc_crossings(source, i) for i in range(len(source.arcs))}
    curves = trace_result.curves
    certified: list[CertifiedPoint] = []
    extra: list[Crossing] = []
    for ci, curve in enumerate(curves):
        for ai in curve.arcs:
            for c in crossings_by_arc.get(ai, []):
                if c.kind == "-+":
                    if not any(abs(c.z - o.z) <= merge_radius * (1 + abs(c.z)) for o in certified):
                        certified.append(CertifiedPoint(c.z, ci, c.residual))
                else:
                    extra.append(c)
    if strict and len(certified) < prob.d:
        raise CertificateShort(f"only {len(certified)} certified crossings for d={prob.d}")
    return certified, extra


def export_csv(trace_result: TraceResult, path) -> None:
    """Write curve samples as CSV rows curve_id, t_index, re, im, F_value."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["curve_id", "t_index", "re", "im", "F_value"])
        for cid, curve in enumerate(trace_result.curves):
            for k, (z, t) in enumerate(zip(curve.samples, curve.f_values)):
                if not np.isfinite(z):
                    continue
                writer.writerow([cid, k, repr(float(z.real)), repr(float(z.imag)), repr(float(t))])
