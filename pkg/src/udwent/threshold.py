"""Entanglement classification and boundary tracing in the (L, Omega) plane."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (GuardError, IndeterminateError, PoleCrossingError, TopologyError, UdwError)
from .kernels import ScenarioSpec, check_guards
from .observables import DetectorParams, ObservableResult, observe, observe_exact
from .quadrature import QuadratureSpec

POINTS_PER_DECADE = 64
OMEGA_MIN = 1e-2
BISECT_REL_WIDTH = 1e-4
ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True)
class Classification:
    entangled: bool
    margin: float
    error: float
    method: str
    result: ObservableResult


@dataclass(frozen=True)
class Interval:
    """Critical frequencies at one separation; ``empty`` means no entangling Omega."""
    omega_lower: float | None
    omega_upper: float | None
    method: str = ""
    flags: tuple[str, ...] = ()

    @property
    def empty(self) -> bool:
        return self.omega_lower is None and self.omega_upper is None


@dataclass(frozen=True)
class Sample:
    L: float
    omega_lower: float | None
    omega_upper: float | None
    method: str = ""
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThresholdCurve:
    scenario: ScenarioSpec
    two_pi_T_sigma: float
    samples: tuple[Sample, ...]
    L_max: float | None
    horizon: float | None = None
    tip: tuple[float, float] | None = None  # (L, Omega) of the last entangled sliver below L_max

    def __post_init__(self):
        Ls = [s.L for s in self.samples]
        if Ls != sorted(Ls):
            raise ValueError("samples must be ordered by L")
        for s in self.samples:
            if s.omega_lower is not None and s.omega_upper is not None and s.omega_lower > s.omega_upper:
                raise ValueError("omega_lower > omega_upper")
            if self.scenario.kind == "vacuum" and s.omega_upper is not None:
                raise ValueError("vacuum samples have no upper frequency")


@dataclass
class SubsetReport:
    two_pi_T_sigma: float
    points: int
    violations: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    indeterminate: list = field(default_factory=list)
    thermal_entangled: int = 0
    desitter_entangled: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations and bool(self.witnesses)


def _params(omega: float) -> DetectorParams:
    return DetectorParams(sigma=1.0, omega=float(omega))


def _margin_of(r: ObservableResult) -> tuple[float, float]:
    m = r.margin
    return m, (1.0 + abs(m)) * r.error_estimate + ROUNDOFF_FLOOR


def classify(scenario: ScenarioSpec, params: DetectorParams, L: float,
             spec: QuadratureSpec = QuadratureSpec(), method: str | None = None) -> Classification:
    """Sign of |X| - A with a margin that must clear the combined error estimate.

    An unresolved margin is retried once on the exact tier before giving up.
    """
    if scenario.kind != "vacuum":
        check_guards(scenario, L / params.sigma)
    r = observe(scenario, params, L, spec, method)
    m, err = _margin_of(r)
    if abs(m) <= err and (method in (None, "auto") and spec.method == "auto"):
        r = observe_exact(scenario, params, L, spec)
        m, err = _margin_of(r)
    if abs(m) <= err:
        raise IndeterminateError(f"|margin| = {abs(m):.3g} within error {err:.3g}", margin=m, tolerance=err)
    return Classification(m > 0, m, err, r.method, r)


def scan_limit(scenario: ScenarioSpec, L: float) -> float:
    """Top of the Omega scan: the vacuum asymptote times ten, and for T > 0 at least
    1/T, past the first thermal image where the response outgrows any exchange."""
    hi = 10.0 * L / 2.0
    if scenario.kind != "vacuum":
        hi = max(hi, 1.0 / scenario.T)
    return hi


def _scan_grid(hi: float, per_decade: int) -> np.ndarray:
    n = int(math.ceil(per_decade * math.log10(hi / OMEGA_MIN)))
    return OMEGA_MIN * (hi / OMEGA_MIN) ** (np.arange(n + 1) / n)


def _bisect(f, a, b, fa):
    """Shrink a sign-change bracket [a, b] (log scale) to relative width BISECT_REL_WIDTH."""
    while b / a - 1.0 > BISECT_REL_WIDTH:
        c = math.sqrt(a * b)
        fc = f(c)
        if fc is None:
            break
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return a, b


def critical_frequencies(scenario: ScenarioSpec, L: float, two_pi_T_sigma: float | None = None,
                         spec: QuadratureSpec = QuadratureSpec(), method: str | None = None,
                         per_decade: int = POINTS_PER_DECADE) -> Interval:
    """Endpoints of the entangled Omega-interval at separation ``L`` (sigma = 1)."""
    if two_pi_T_sigma is not None and scenario.kind != "vacuum":
        scenario = ScenarioSpec(scenario.kind, two_pi_T_sigma / (2.0 * math.pi))
    if scenario.kind != "vacuum":
        check_guards(scenario, L)
    methods: list[str] = []
    unresolved: dict[str, list[float]] = {}

    def margin(w):
        try:
            c = classify(scenario, _params(w), L, spec, method)
        except (IndeterminateError, PoleCrossingError) as exc:
            key = "indeterminate" if isinstance(exc, IndeterminateError) else "pole-crossing"
            unresolved.setdefault(key, []).append(w)
            return None
        if c.method not in methods:
            methods.append(c.method)
        return c.margin

    grid = _scan_grid(scan_limit(scenario, L), per_decade)
    values = [margin(w) for w in grid]

    # sign changes between consecutive resolved scan points; unresolved points are never bridged
    brackets = []
    for i in range(len(grid) - 1):
        ma, mb = values[i], values[i + 1]
        if ma is None or mb is None:
            continue
        if (ma > 0) != (mb > 0):
            brackets.append((grid[i], grid[i + 1], ma))
    if len(brackets) > 2:
        raise TopologyError(f"{len(brackets)} sign changes at L = {L:g}", brackets=brackets)

    resolved = [m for m in values if m is not None]
    if not brackets and resolved and max(resolved) < 0 and scenario.kind != "vacuum":
        brackets = _refine_peak(margin, grid, values)

    edges = []
    for a, b, fa in brackets:
        lo, hi = _bisect(margin, a, b, fa)
        edges.append((math.sqrt(lo * hi), fa > 0))
    flags = [f"{k}:{len(ws)}@[{min(ws):.4g},{max(ws):.4g}]" for k, ws in sorted(unresolved.items())]
    return _assemble(scenario, edges, values, methods, flags)


def _refine_peak(margin, grid, values):
    """Look between scan points around the largest negative margin for a narrow entangled sliver."""
    i = max((k for k, m in enumerate(values) if m is not None), key=lambda k: values[k])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    a, b = math.log(lo), math.log(hi)
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = margin(math.exp(c)), margin(math.exp(d))
    for _ in range(40):
        if fc is None or fd is None:
            return []
        if max(fc, fd) > 0:
            peak = math.exp(c if fc > fd else d)
            fp = max(fc, fd)
            fl, fh = margin(lo), margin(hi)
            if fl is None or fh is None:
                return []
            return [(lo, peak, fl), (peak, hi, fp)]
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = margin(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = margin(math.exp(d))
        if (b - a) < BISECT_REL_WIDTH:
            break
    return []


def _assemble(scenario, edges, values, methods, flags):
    label = "+".join(methods)
    if scenario.kind == "vacuum":
        ups = [w for w, closes in edges if closes]
        if ups:
            raise TopologyError("vacuum scan found a closing edge", brackets=ups)
        lower = edges[0][0] if edges else None
        return Interval(lower, None, label, tuple(flags))
    if not edges:
        return Interval(None, None, label, tuple(flags))
    lower = upper = None
    for w, closes in edges:
        if not closes:
            lower = w
        else:
            upper = w
    if len(edges) == 1:
        # an interval open at the scan edge: say so rather than invent the other end
        flags.append("open-upper" if lower is not None else "open-lower")
    return Interval(lower, upper, label, tuple(flags))


def _nonempty(scenario, L, spec, method, per_decade):
    iv = critical_frequencies(scenario, L, None, spec, method, per_decade)
    return not iv.empty


def find_L_max(scenario: ScenarioSpec, L_lo: float, L_hi: float,
               spec: QuadratureSpec = QuadratureSpec(), method: str | None = None,
               rel_tol: float = 1e-3, per_decade: int = POINTS_PER_DECADE,
               with_tip: bool = False):
    """Bisect (in log L) between a separation with entanglement and one without."""
    tip = None
    while L_hi / L_lo - 1.0 > rel_tol:
        mid = math.sqrt(L_lo * L_hi)
        iv = critical_frequencies(scenario, mid, None, spec, method, per_decade)
        if iv.empty:
            L_hi = mid
        else:
            L_lo = mid
            if iv.omega_lower is not None and iv.omega_upper is not None:
                tip = (mid, math.sqrt(iv.omega_lower * iv.omega_upper))
    L_max = math.sqrt(L_lo * L_hi)
    return (L_max, tip) if with_tip else L_max


def trace_curve(scenario: ScenarioSpec, L_grid, spec: QuadratureSpec = QuadratureSpec(),
                method: str | None = None, per_decade: int = POINTS_PER_DECADE,
                L_max_search: float = 1e5, workers: int = 1) -> ThresholdCurve:
    """Critical frequencies over ``L_grid`` plus the maximal entangling separation."""
    L_grid = sorted(float(L) for L in L_grid)
    if scenario.kind != "vacuum":
        for L in L_grid:
            check_guards(scenario, L)
    jobs = [(scenario, L, spec, method, per_decade) for L in L_grid]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            intervals = list(pool.map(_sample_job, jobs))
    else:
        intervals = [_sample_job(j) for j in jobs]
    samples = tuple(Sample(L, iv.omega_lower, iv.omega_upper, iv.method, iv.flags)
                    for L, iv in zip(L_grid, intervals))

    L_max = tip = None
    if scenario.kind != "vacuum":
        full = [s.L for s, iv in zip(samples, intervals) if not iv.empty]
        empties = [s.L for s, iv in zip(samples, intervals) if iv.empty and full and s.L > max(full)]
        if full:
            lo = max(full)
            hi = min(empties) if empties else _first_empty(scenario, lo, L_max_search, spec, method, per_decade)
            if hi is not None:
                L_max, tip = find_L_max(scenario, lo, hi, spec, method, per_decade=per_decade,
                                        with_tip=True)
    horizon = None if scenario.kind == "vacuum" else scenario.horizon
    return ThresholdCurve(scenario, scenario.two_pi_T, samples, L_max, horizon, tip)


def _first_empty(scenario, L, L_stop, spec, method, per_decade):
    while L < L_stop:
        L *= 2.0
        if not _nonempty(scenario, L, spec, method, per_decade):
            return L
    return None


def _sample_job(job) -> Interval:
    scenario, L, spec, method, per_decade = job
    try:
        return critical_frequencies(scenario, L, None, spec, method, per_decade)
    except TopologyError as exc:
        return Interval(None, None, "", (f"topology:{len(exc.brackets)}",))
    except (PoleCrossingError, UdwError) as exc:
        if isinstance(exc, GuardError):
            raise
        return Interval(None, None, "", (f"error:{type(exc).__name__}",))


def _status(scenario, L, w, spec, method):
    try:
        c = classify(scenario, _params(w), L, spec, method)
        return c.entangled, c.margin, c.error
    except IndeterminateError as exc:
        return None, exc.margin, exc.tolerance


def _lattice_row(job):
    L, omegas, T, spec, method = job
    th, ds = ScenarioSpec("thermal", T), ScenarioSpec("desitter", T)
    return [(w, _status(th, L, w, spec, method), _status(ds, L, w, spec, method)) for w in omegas]


def subset_check(two_pi_T_sigma: float, L_values, omega_values,
                 spec: QuadratureSpec = QuadratureSpec(), method: str | None = None,
                 witness_window: tuple[float, float] | None = None, workers: int = 1) -> SubsetReport:
    """De Sitter entangled implies thermal entangled, pointwise over the lattice.

    A witness is a point that is thermally entangled and de Sitter separable,
    both with margins clearing their error estimates. ``witness_window`` limits
    witnesses to an open L range (defaults to one to two horizon lengths).
    """
    T = two_pi_T_sigma / (2.0 * math.pi)
    horizon = ScenarioSpec("thermal", T).horizon
    if witness_window is None:
        witness_window = (horizon, 2.0 * horizon)
    L_values = [float(L) for L in L_values]
    omegas = [float(w) for w in omega_values]
    jobs = [(L, omegas, T, spec, method) for L in L_values]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_lattice_row, jobs))
    else:
        rows = [_lattice_row(j) for j in jobs]
    rep = SubsetReport(two_pi_T_sigma, 0)
    for L, row in zip(L_values, rows):
        for w, (e_th, m_th, err_th), (e_ds, m_ds, err_ds) in row:
            rep.points += 1
            if e_th is None or e_ds is None:
                rep.indeterminate.append((L, w))
            rep.thermal_entangled += bool(e_th)
            rep.desitter_entangled += bool(e_ds)
            # indeterminate counts as not entangled on either side
            if e_ds and not e_th:
                rep.violations.append({"L": L, "omega": w, "margin_desitter": m_ds,
                                       "error_desitter": err_ds, "margin_thermal": m_th,
                                       "error_thermal": err_th})
            if e_th and e_ds is False and witness_window[0] < L < witness_window[1]:
                rep.witnesses.append({"L": L, "omega": w, "margin_thermal": m_th,
                                      "margin_desitter": m_ds})
    return rep


def log_lattice(lo: float, hi: float, n: int) -> list[float]:
    return [float(x) for x in np.geomspace(lo, hi, n)]
