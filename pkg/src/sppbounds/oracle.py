"""Brute-force verification of every bound against exact quantities.

:func:`exact_quantities` evaluates observables by plain summation over the
photon-number distribution.  It shares no code with :mod:`sppbounds.bounds`
or with the numpy path in :mod:`sppbounds.fock`, so agreement between them
is evidence rather than tautology.

Each ``run_*`` suite returns a :class:`VerificationReport`.  A check's
*margin* is its slack (``exact - lower``, ``upper - exact``, ...); margins
below ``-SLACK`` are violations, margins in ``[-SLACK, 0)`` are logged as
rounding noise.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional, Sequence

from scipy.optimize import bisect

from . import bounds as B
from .errors import NotApplicable
from .families import DEFAULT_TAIL_CAP, FamilySpec, simplex_batch
from .fock import ObservableSet, PhotonDistribution, validate

log = logging.getLogger(__name__)

SLACK = 1e-10
DEFAULT_MAX_N_SOUNDNESS = 6
DEFAULT_MAX_N_SET_INCLUSION = 8
LOW_EXCITATION = 0.1


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    trials: int
    violations: int
    worst_margin: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        out = asdict(self)
        if math.isinf(self.worst_margin):
            out["worst_margin"] = "inf"
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def exact_quantities(d: PhotonDistribution) -> ObservableSet:
    """All observables of ``d`` by direct summation.

    Mass truncated from ``d`` is credited to photon number ``K+1`` in the
    projections and ignored in the moments.
    """
    probs = d.probs
    first = [n * p for n, p in enumerate(probs)]
    second = [n * (n - 1) * p for n, p in enumerate(probs)]
    mean = math.fsum(first)
    fact2 = math.fsum(second)

    p0 = probs[0]
    p1 = probs[1] if len(probs) > 1 else 0.0
    q_explicit = math.fsum(probs[2:])
    q = q_explicit
    if d.tail_bound > 0.0:
        missing = max(0.0, 1.0 - math.fsum(probs))
        if len(probs) == 1:
            p1 += missing
        else:
            q += missing

    if q_explicit > 0.0:
        n2 = math.fsum(first[2:]) / q_explicit
        g2_multi = math.fsum(second[2:]) / (q_explicit * n2 * n2)
    else:
        n2 = g2_multi = None

    if mean > 0.0:
        g2 = fact2 / (mean * mean)
        mandel = fact2 / mean - mean
    else:
        g2 = mandel = None
    second_moment = math.fsum(n * n * p for n, p in enumerate(probs))
    return ObservableSet(
        mean_n=mean,
        g2=g2,
        variance=max(0.0, second_moment - mean * mean),
        mandel_q=mandel,
        p0=p0,
        p1=p1,
        q_multi=q,
        n2=n2,
        g2_multi=g2_multi,
    )


class _Tally:
    """Accumulates margins for one suite run."""

    def __init__(self, suite: str, seed: int, diagnostics: Optional[str]):
        self.suite = suite
        self.seed = seed
        self.diagnostics = diagnostics
        self.trials = 0
        self.violations = 0
        self.noise = 0
        self.worst = math.inf
        self._dumped = []

    def check(self, name: str, margin: float, d: Optional[PhotonDistribution] = None, ctx: Optional[dict] = None) -> bool:
        if margin != margin:  # NaN
            margin = -math.inf
        if margin < self.worst:
            self.worst = margin
        if margin >= 0.0:
            return True
        if margin >= -SLACK:
            self.noise += 1
            log.debug("%s/%s: margin %.3g within slack", self.suite, name, margin)
            return True
        self.violations += 1
        record = {"suite": self.suite, "check": name, "margin": margin, "trial": self.trials - 1, **(ctx or {})}
        if d is not None:
            record["distribution"] = d.to_dict()
        log.warning("violation %s", json.dumps(record, default=repr))
        self._dumped.append(record)
        return False

    def report(self) -> VerificationReport:
        if self.noise:
            log.info("%s: %d checks within rounding slack", self.suite, self.noise)
        if self._dumped and self.diagnostics:
            with open(self.diagnostics, "a", encoding="utf-8") as fh:
                for record in self._dumped:
                    fh.write(json.dumps(record, default=repr) + "\n")
        return VerificationReport(self.suite, self.trials, self.violations, self.worst, self.seed)


def _lower(t: _Tally, name: str, bound: float, exact: float, d, ctx: dict) -> None:
    margin = 0.0 if bound == exact else exact - bound  # inf - inf
    if margin < 0.0:
        ctx = {**ctx, "bound": bound, "exact": exact}
    t.check(name, margin, d, ctx)


def _upper(t: _Tally, name: str, bound: float, exact: float, d, ctx: dict) -> None:
    margin = bound - exact
    if margin < 0.0:
        ctx = {**ctx, "bound": bound, "exact": exact}
    t.check(name, margin, d, ctx)


def _random_states(trials: int, max_n: int, seed: int) -> Iterable[PhotonDistribution]:
    for row in simplex_batch(trials, max_n, seed, vary_support=True).tolist():
        yield validate(row)


def check_state_soundness(t: _Tally, d: PhotonDistribution, exactness: bool = False) -> None:
    """Run every bound on ``d`` against its exact counterpart."""
    obs = exact_quantities(d)
    if obs.g2 is None:
        return
    g2, mean_n, p0, p1, q = obs.g2, obs.mean_n, obs.p0, obs.p1, obs.q_multi
    ratio = p1 / q if q > 0.0 else math.inf
    ctx = {"g2": g2, "mean_n": mean_n, "p0": p0}

    # the full-information report is the tightest: analyze() intersects the
    # candidates of every criterion, so any subset of the inputs gives looser
    # bounds and is covered by this check
    r = B.analyze(obs)
    _lower(t, "analyze.spp_lower", r.spp_lower, p1, d, ctx)
    _upper(t, "analyze.spp_upper", r.spp_upper, p1, d, ctx)
    if q > 0.0:
        _lower(t, "analyze.smppr_lower", r.smppr_lower, ratio, d, ctx)
    if r.q_upper is not None:
        _upper(t, "analyze.q_upper", r.q_upper, q, d, ctx)
        _lower(t, "analyze.p0_plus_p1_lower", r.p0_plus_p1_lower, p0 + p1, d, ctx)

    vac = B.spp_bounds_vacuum(g2, p0)
    _lower(t, "vacuum.spp_lower", vac.lower, p1, d, ctx)
    _upper(t, "vacuum.spp_upper", vac.upper, p1, d, ctx)
    pho = B.spp_bounds_photon(g2, mean_n)
    _lower(t, "photon.spp_lower", pho.lower, p1, d, ctx)
    _upper(t, "photon.spp_upper", pho.upper, p1, d, ctx)

    x0 = (1.0 - p0) * g2
    xn = mean_n * g2
    if q > 0.0 and x0 < 0.5:
        _lower(t, "vacuum.smppr_lower", B.smppr_lower_vacuum(x0, g2), ratio, d, ctx)
    if q > 0.0 and xn <= 1.0:
        _lower(t, "photon.smppr_lower", B.smppr_lower_photon(xn), ratio, d, ctx)
    if xn < 1.0:
        mp = B.multiphoton_upper_and_p0p1_lower(xn)
        _upper(t, "photon.q_upper", mp.q_upper, q, d, ctx)
        _lower(t, "photon.p0_plus_p1_lower", mp.p0_plus_p1_lower, p0 + p1, d, ctx)
    if g2 < 0.5:
        fb = B.fallback_bounds_g2_only(g2, mean_n)
        if q > 0.0:
            _lower(t, "g2only.smppr_lower", fb.smppr_lower, ratio, d, ctx)
        _lower(t, "g2only.p0_plus_p1_lower", fb.p0p1_lower, p0 + p1, d, ctx)
        _lower(t, "g2only.spp_lower", fb.spp_lower, p1, d, ctx)

    if exactness:
        t.check("exact.photon.spp_lower", -abs(pho.lower - p1), d, ctx)
        if q > 0.0:
            t.check("exact.photon.smppr_lower", -abs(B.smppr_lower_photon(xn) - ratio), d, ctx)


def run_soundness_suite(
    trials: int,
    max_n: int = DEFAULT_MAX_N_SOUNDNESS,
    seed: int = 42,
    diagnostics: Optional[str] = None,
) -> VerificationReport:
    """Bracket exact ``p1``, ``p1/q``, ``q`` and ``p0+p1`` by every bound.

    For ``max_n <= 2`` the photon-number SPP and SMPPR lower bounds must in
    addition equal the exact values.
    """
    t = _Tally("soundness", seed, diagnostics)
    for d in _random_states(trials, max_n, seed):
        t.trials += 1
        check_state_soundness(t, d, exactness=max_n <= 2)
    return t.report()


def run_exactness_suite(trials: int, seed: int = 7, diagnostics: Optional[str] = None) -> VerificationReport:
    """Photon-number lower bounds are equalities on support ``{0, 1, 2}``."""
    t = _Tally("exactness", seed, diagnostics)
    for d in _random_states(trials, 2, seed):
        t.trials += 1
        obs = exact_quantities(d)
        xn = obs.mean_n * obs.g2
        lower = B.spp_bounds_photon(obs.g2, obs.mean_n).lower
        t.check("photon.spp_lower", -abs(lower - obs.p1), d, dict(bound=lower, exact=obs.p1))
        if obs.q_multi > 0.0:
            ratio = obs.p1 / obs.q_multi
            bound = B.smppr_lower_photon(xn)
            t.check("photon.smppr_lower", -abs(bound - ratio), d, dict(bound=bound, exact=ratio))
    return t.report()


def run_set_inclusion_suite(
    trials: int,
    max_n: int = DEFAULT_MAX_N_SET_INCLUSION,
    seed: int = 1,
    diagnostics: Optional[str] = None,
) -> VerificationReport:
    """M1 implies M2 implies M3, and no state has ``N g2 >= 1`` with
    ``(1 - p0) g2 < 1/2``."""
    t = _Tally("set-inclusion", seed, diagnostics)
    for d in _random_states(trials, max_n, seed):
        t.trials += 1
        obs = exact_quantities(d)
        g2, mean_n = obs.g2, obs.mean_n
        m1, m2, m3 = B.classify_sets(g2, mean_n)
        ctx = {"g2": g2, "mean_n": mean_n, "p0": obs.p0}
        if m1:
            t.check("M1 in M2", 1.0 - mean_n * g2, d, ctx)
        if m2:
            t.check("M2 in M3", 2.0 - mean_n, d, ctx)
        if (1.0 - obs.p0) * g2 < 0.5:
            t.check("vacuum-detectable implies photon-detectable", 1.0 - mean_n * g2, d, ctx)
    return t.report()


def saturating_state(mean_n: float) -> PhotonDistribution:
    """Two-level mixture of ``|f>`` and ``|f+1>``, ``f = floor(N)``, with mean ``N``."""
    f = math.floor(mean_n)
    probs = [0.0] * (f + 2)
    probs[f] = f + 1.0 - mean_n
    probs[f + 1] = mean_n - f
    return validate(probs)


def run_saturation_suite(n_grid: Sequence[float]) -> VerificationReport:
    """The lowest-``g2`` bound at fixed ``N`` is attained by :func:`saturating_state`."""
    t = _Tally("saturation", 0, None)
    for mean_n in n_grid:
        t.trials += 1
        d = saturating_state(mean_n)
        obs = exact_quantities(d)
        bound = B.zubizarreta_lower_g2(mean_n)
        t.check("g2 == bound", -abs(obs.g2 - bound), d, dict(mean_n=mean_n, bound=bound, exact=obs.g2))
        t.check("mean", -abs(obs.mean_n - mean_n), d, dict(mean_n=mean_n, exact=obs.mean_n))
    return t.report()


def run_floor_suite(trials: int, max_n: int = 8, seed: int = 3, diagnostics: Optional[str] = None) -> VerificationReport:
    """No random state has ``g2`` below the lowest value allowed at its ``N``."""
    t = _Tally("g2-floor", seed, diagnostics)
    for d in _random_states(trials, max_n, seed):
        t.trials += 1
        obs = exact_quantities(d)
        bound = B.zubizarreta_lower_g2(obs.mean_n)
        t.check("g2 >= bound", obs.g2 - bound, d, dict(mean_n=obs.mean_n, bound=bound, exact=obs.g2))
    return t.report()


def family_grid(kind: str, stop: float, step: float, **fixed) -> list[FamilySpec]:
    """``FamilySpec`` objects at ``step, 2*step, ...`` up to ``stop`` (exclusive
    of zero, inclusive of ``stop`` up to rounding)."""
    count = int(math.floor(stop / step + 1e-9))
    key = "n_alpha" if kind == "qd" else "mean_photons"
    return [FamilySpec.from_dict({"kind": kind, "params": {**fixed, key: k * step}}) for k in range(1, count + 1)]


def validity_grids(step_coherent: float = 0.005, step_thermal: float = 0.0025) -> list[FamilySpec]:
    """Coherent states on ``(0, ln 2)`` and thermal states on ``(0, 1/3)``."""
    coh = [s for s in family_grid("coherent", 1.0, step_coherent) if s.params["mean_photons"] < math.log(2.0)]
    th = [s for s in family_grid("thermal", 0.5, step_thermal) if s.params["mean_photons"] < 1.0 / 3.0]
    return coh + th


def run_comparison_suite(families: Iterable[FamilySpec], tail_cap: float = DEFAULT_TAIL_CAP) -> VerificationReport:
    """Photon-number vs vacuum criteria on specific families.

    (a) photon-number SMPPR lower bound >= vacuum one; (b) ``1 - p0 <= N``;
    (c) for ``N <= 0.1`` the vacuum SPP bounds are the tighter pair.
    States without a multi-photon part are skipped.
    """
    t = _Tally("comparison", 0, None)
    for spec in families:
        t.trials += 1
        d = spec.build(tail_cap)
        obs = exact_quantities(d)
        if obs.g2 is None or obs.q_multi == 0.0:
            continue
        g2, mean_n, p0 = obs.g2, obs.mean_n, obs.p0
        ctx = {"family": spec.to_dict(), "g2": g2, "mean_n": mean_n, "p0": p0}
        x0, xn = (1.0 - p0) * g2, mean_n * g2
        if x0 < 0.5:
            try:
                photon = B.smppr_lower_photon(xn)
            except NotApplicable:
                photon = -math.inf
            t.check("smppr photon >= vacuum", photon - B.smppr_lower_vacuum(x0), d, ctx)
        t.check("1 - p0 <= N", mean_n - (1.0 - p0), d, ctx)
        if mean_n <= LOW_EXCITATION:
            vac = B.spp_bounds_vacuum(g2, p0)
            pho = B.spp_bounds_photon(g2, mean_n)
            t.check("low-N vacuum lower >= photon lower", vac.lower - pho.lower, d, ctx)
            t.check("low-N vacuum upper <= photon upper", pho.upper - vac.upper, d, ctx)
    return t.report()


def find_family_edge(
    build: Callable[[float], PhotonDistribution],
    quantity: Callable[[ObservableSet], float],
    level: float,
    lo: float,
    hi: float,
    xtol: float = 1e-12,
) -> float:
    """Parameter at which ``quantity(exact_quantities(build(x)))`` crosses ``level``,
    located by bisection on ``[lo, hi]``."""
    return bisect(lambda x: quantity(exact_quantities(build(x))) - level, lo, hi, xtol=xtol)


SUITES = {
    "soundness": lambda trials, seed, max_n, diagnostics: run_soundness_suite(
        trials, max_n or DEFAULT_MAX_N_SOUNDNESS, seed, diagnostics),
    "exactness": lambda trials, seed, max_n, diagnostics: run_exactness_suite(trials, seed, diagnostics),
    "set-inclusion": lambda trials, seed, max_n, diagnostics: run_set_inclusion_suite(
        trials, max_n or DEFAULT_MAX_N_SET_INCLUSION, seed, diagnostics),
    "g2-floor": lambda trials, seed, max_n, diagnostics: run_floor_suite(trials, max_n or 8, seed, diagnostics),
    "saturation": lambda trials, seed, max_n, diagnostics: run_saturation_suite(
        [k / 100 for k in range(1, 801)]),
    "comparison": lambda trials, seed, max_n, diagnostics: run_comparison_suite(validity_grids()),
}
