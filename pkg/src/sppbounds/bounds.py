"""Certified bounds on the single-photon projection (SPP) ``p1`` and the
single-to-multi-photon projection ratio (SMPPR) ``p1/q``.

Three kinds of side information are supported next to the zero-delay
correlation ``g2``:

* the vacuum projection ``p0``, through ``g0_eff = (1 - p0) g2``;
* the mean photon number ``N``, through ``gN_eff = N g2 = N + Q``;
* nothing at all, using ``N < 2`` whenever ``g2 < 1/2``.

Every function here is closed-form.  :func:`analyze` combines whatever is
known into a :class:`BoundReport`.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Mapping, NamedTuple, Optional, Union

from .errors import DomainError, InsufficientData, NotApplicable
from .fock import ObservableSet

INF = math.inf
# Near g0_eff = 1/2 the square root turns an ulp of input rounding into
# ~1e-8 of bound.  1 - 2 g0_eff is shrunk by this times (1 + g2), which
# covers rounding of g2 and of 1 - p0 (absolute error ~eps, scaled by g2).
ROUNDING_GUARD = 8.0 * sys.float_info.epsilon


class Criterion(enum.Enum):
    VACUUM = "Vacuum"
    PHOTON = "Photon"


class Basis(enum.Enum):
    """Which side information produced the reported bounds."""

    VACUUM_BASED = "VacuumBased"
    PHOTON_BASED = "PhotonBased"
    FALLBACK_G2_ONLY = "FallbackG2Only"
    NOT_APPLICABLE = "NotApplicable"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _finite_nonneg(x: float, name: str) -> float:
    x = float(x)
    _require(math.isfinite(x) and x >= 0.0, f"{name} must be finite and >= 0, got {x!r}")
    return x


def zubizarreta_lower_g2(mean_n: float) -> float:
    """Smallest ``g2`` any state with mean photon number ``mean_n`` can have.

    ``floor(N) (2N - floor(N) - 1) / N^2``.  Uses the ordinary floor; the
    strict "largest integer below N" variant gives the same value at integer
    ``N`` (``(m-1)/m`` either way), so the result is continuous in ``N``.
    """
    n = float(mean_n)
    _require(math.isfinite(n) and n > 0.0, f"mean_n must be > 0, got {n!r}")
    f = math.floor(n)
    return f * (2.0 * n - f - 1.0) / n**2


def effective_g2_vacuum(g2: float, p0: float) -> float:
    """Vacuum-corrected correlation ``(1 - p0) g2``."""
    g2 = _finite_nonneg(g2, "g2")
    p0 = float(p0)
    _require(0.0 <= p0 <= 1.0, f"p0 must lie in [0, 1], got {p0!r}")
    return (1.0 - p0) * g2


def effective_g2_photon(g2: float, mean_n: float) -> float:
    """Photon-number-weighted correlation ``N g2``, equal to ``N + Q``."""
    return _finite_nonneg(g2, "g2") * _finite_nonneg(mean_n, "mean_n")


def _guarded_root(x: float, g2: float = 0.0) -> float:
    return math.sqrt(max(0.0, 1.0 - 2.0 * x - ROUNDING_GUARD * (1.0 + g2)))


def smppr_lower_vacuum(eff_g2: float, g2: float = 0.0) -> float:
    """Lower bound on ``p1/q`` from ``g0_eff < 1/2``.

    ``2 s / (1 - s)`` with ``s = sqrt(1 - 2 g0_eff)``, evaluated as
    ``s (1 + s) / g0_eff`` to avoid cancellation at small ``g0_eff``.
    Passing the raw ``g2`` widens the rounding guard near ``g0_eff = 1/2``
    to cover the cancellation in ``1 - p0``.
    """
    x = _finite_nonneg(eff_g2, "eff_g2")
    if x >= 0.5:
        raise NotApplicable(f"vacuum criterion needs eff_g2 < 1/2, got {x!r}")
    if x == 0.0:
        return INF
    s = _guarded_root(x, g2)
    return s * (1.0 + s) / x


def smppr_lower_photon(eff_g2: float) -> float:
    """Lower bound ``2 (1/gN_eff - 1)`` on ``p1/q``; exact for support in {0,1,2}."""
    x = _finite_nonneg(eff_g2, "eff_g2")
    if x > 1.0:
        raise NotApplicable(f"photon criterion needs eff_g2 <= 1, got {x!r}")
    if x == 0.0:
        return INF
    return 2.0 * (1.0 - x) / x


def g2_threshold_for_smppr(theta: float, criterion: Union[Criterion, str]) -> float:
    """Largest effective ``g2`` that still certifies ``p1/q >= theta``.

    Vacuum: ``2 (theta+1) / (theta+2)^2``.  Photon: ``2 / (theta+2)``, the
    inverse of :func:`smppr_lower_photon`.
    """
    t = float(theta)
    _require(t >= 0.0, f"theta must be >= 0, got {t!r}")
    criterion = Criterion(criterion)
    if math.isinf(t):
        return 0.0
    if criterion is Criterion.VACUUM:
        return 2.0 * (t + 1.0) / (t + 2.0) ** 2
    return 2.0 / (t + 2.0)


class Interval(NamedTuple):
    lower: float
    upper: float


def spp_bounds_vacuum(g2: float, p0: float) -> Interval:
    """Absolute bounds on ``p1`` from ``g2`` and ``p0``.

    The upper bound ``1 - p0`` always holds; the lower bound
    ``(1-p0) 2s / (1+s)``, ``s = sqrt(1 - 2 g0_eff)``, only when
    ``g0_eff < 1/2`` and is 0 otherwise.
    """
    x = effective_g2_vacuum(g2, p0)
    upper = 1.0 - float(p0)
    if x >= 0.5:
        return Interval(0.0, upper)
    s = _guarded_root(x, g2)
    return Interval(upper * 2.0 * s / (1.0 + s), upper)


def spp_bounds_photon(g2: float, mean_n: float) -> Interval:
    """Absolute bounds ``N(1 - N g2) <= p1 <= N``, clipped to ``[0, 1]``."""
    n = _finite_nonneg(mean_n, "mean_n")
    x = effective_g2_photon(g2, n)
    upper = min(n, 1.0)
    return Interval(min(max(0.0, n * (1.0 - x)), upper), upper)


class MultiPhotonBounds(NamedTuple):
    q_upper: float
    p0_plus_p1_lower: float


def multiphoton_upper_and_p0p1_lower(eff_g2_photon: float) -> MultiPhotonBounds:
    """``q <= gN/(2 - gN)`` and ``p0 + p1 >= 2(1 - gN)/(2 - gN)``."""
    x = _finite_nonneg(eff_g2_photon, "eff_g2_photon")
    if x >= 1.0:
        raise NotApplicable(f"needs eff_g2_photon < 1, got {x!r}")
    return MultiPhotonBounds(x / (2.0 - x), 2.0 * (1.0 - x) / (2.0 - x))


class FallbackBounds(NamedTuple):
    smppr_lower: float
    p0p1_lower: float
    spp_lower_factor: float
    #: ``mean_n * spp_lower_factor``, or None when N is unknown
    spp_lower: Optional[float]


def fallback_bounds_g2_only(g2: float, mean_n_if_known: Optional[float] = None) -> FallbackBounds:
    """Bounds from ``g2 < 1/2`` alone, substituting the largest possible ``N = 2``.

    ``p1/q >= 1/g2 - 2``, ``p0 + p1 >= (1 - 2 g2)/(1 - g2)`` and
    ``p1 >= N (1 - 2 g2)``.
    """
    g = _finite_nonneg(g2, "g2")
    if g >= 0.5:
        raise NotApplicable(f"g2-only bounds need g2 < 1/2, got {g!r}")
    smppr = INF if g == 0.0 else (1.0 - 2.0 * g) / g
    factor = 1.0 - 2.0 * g
    spp = None
    if mean_n_if_known is not None:
        spp = min(1.0, _finite_nonneg(mean_n_if_known, "mean_n") * factor)
    return FallbackBounds(smppr, factor / (1.0 - g), factor, spp)


class SetMembership(NamedTuple):
    m1: bool
    m2: bool
    m3: bool


def classify_sets(g2: float, mean_n: float) -> SetMembership:
    """Membership in M1 (g2 < 1/2), M2 (N g2 < 1) and M3 (N < 2)."""
    return SetMembership(g2 < 0.5, mean_n * g2 < 1.0, mean_n < 2.0)


def exact_p1_from_decomposition(mean_n: float, g2: float, n2: float, g2_multi: float) -> float:
    """``p1 = N (1 - N g2 / (n2 g2_multi))`` for a state whose multi-photon
    part has mean ``n2`` and correlation ``g2_multi``."""
    denom = float(n2) * float(g2_multi)
    _require(denom != 0.0 and math.isfinite(denom), "n2 * g2_multi must be finite and nonzero")
    return mean_n * (1.0 - mean_n * g2 / denom)


@dataclass
class BoundReport:
    """All bounds certified from one set of observables.

    ``None`` stands for Unknown.  ``smppr_lower`` is ``math.inf`` when the
    multi-photon projection is certified to vanish.  ``clamped`` names the
    fields whose raw formula value fell outside its range and was clipped;
    ``notes`` says why a criterion was not applied.
    """

    g2: Optional[float]
    mean_n: Optional[float] = None
    p0: Optional[float] = None
    eff_g2_vacuum: Optional[float] = None
    eff_g2_photon: Optional[float] = None
    spp_lower: float = 0.0
    spp_upper: float = 1.0
    smppr_lower: float = 0.0
    q_upper: Optional[float] = None
    p0_plus_p1_lower: Optional[float] = None
    set_m1: Optional[bool] = None
    set_m2: Optional[bool] = None
    set_m3: Optional[bool] = None
    criterion_used: Basis = Basis.NOT_APPLICABLE
    clamped: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["criterion_used"] = self.criterion_used.value
        for key, value in out.items():
            if isinstance(value, float) and math.isinf(value):
                out[key] = "inf"
        return out


def _get(obs: Union[ObservableSet, Mapping], key: str) -> Optional[float]:
    if isinstance(obs, ObservableSet):
        value = getattr(obs, key)
    elif isinstance(obs, Mapping):
        value = obs.get(key)
    else:
        value = getattr(obs, key, None)
    return None if value is None else float(value)


def _clamp(report: BoundReport, name: str, value: float, lo: float, hi: float) -> float:
    if value < lo or value > hi:
        report.clamped.append(name)
        return min(max(value, lo), hi)
    return value


def analyze(observables: Union[ObservableSet, Mapping[str, Optional[float]]]) -> BoundReport:
    """Combine every applicable bound for the observables that are known.

    Only ``g2``, ``mean_n`` and ``p0`` are read.  When several criteria
    apply, lower bounds are maximized and upper bounds minimized, which is
    sound because each holds on its own.  ``criterion_used`` names the
    basis of the tightest SPP lower bound (``PhotonBased`` on ties).

    Raises:
        InsufficientData: ``g2`` is unknown and the state is not known to be
            the vacuum.
    """
    g2 = _get(observables, "g2")
    mean_n = _get(observables, "mean_n")
    p0 = _get(observables, "p0")

    if g2 is None:
        if mean_n == 0.0 or p0 == 1.0:
            # the vacuum: g2 is 0/0 but every photon projection is zero
            report = BoundReport(g2=None, mean_n=mean_n, p0=p0, spp_upper=0.0,
                                 q_upper=0.0, p0_plus_p1_lower=1.0)
            report.notes.append("vacuum state: g2 undefined, all photon projections vanish")
            return report
        raise InsufficientData("g2 is required")

    g2 = _finite_nonneg(g2, "g2")
    report = BoundReport(g2=g2, mean_n=mean_n, p0=p0)
    report.set_m1 = g2 < 0.5

    spp_lowers: list[tuple[float, Basis]] = []
    spp_uppers: list[float] = [1.0]
    smppr_lowers: list[float] = []
    q_uppers: list[float] = []

    if mean_n is not None:
        mean_n = _finite_nonneg(mean_n, "mean_n")
        x = effective_g2_photon(g2, mean_n)
        report.eff_g2_photon = x
        report.set_m2, report.set_m3 = x < 1.0, mean_n < 2.0
        spp_uppers.append(mean_n)
        if x < 1.0:
            spp_lowers.append((mean_n * (1.0 - x), Basis.PHOTON_BASED))
            smppr_lowers.append(smppr_lower_photon(x))
            q_uppers.append(multiphoton_upper_and_p0p1_lower(x).q_upper)
        else:
            report.notes.append(f"photon criterion not applicable: N*g2 = {x!r} >= 1")

    if p0 is not None:
        x0 = effective_g2_vacuum(g2, p0)
        report.eff_g2_vacuum = x0
        vac = spp_bounds_vacuum(g2, p0)
        spp_uppers.append(vac.upper)
        if x0 < 0.5:
            spp_lowers.append((vac.lower, Basis.VACUUM_BASED))
            smppr_lowers.append(smppr_lower_vacuum(x0, g2))
        else:
            report.notes.append(f"vacuum criterion not applicable: (1-p0)*g2 = {x0!r} >= 1/2")

    if g2 < 0.5:
        fb = fallback_bounds_g2_only(g2)
        # p0 = 0 is the worst case of the vacuum criterion, so g2 alone also
        # bounds p1/q through it; N = 2 is the worst case of the photon one
        smppr_lowers.extend([fb.smppr_lower, smppr_lower_vacuum(g2, g2)])
        q_uppers.append(1.0 - fb.p0p1_lower)
        if mean_n is not None:
            spp_lowers.append((mean_n * fb.spp_lower_factor, Basis.FALLBACK_G2_ONLY))
    else:
        report.notes.append(f"g2-only criterion not applicable: g2 = {g2!r} >= 1/2")

    upper = _clamp(report, "spp_upper", min(spp_uppers), 0.0, 1.0)
    lower, basis = 0.0, Basis.NOT_APPLICABLE
    if spp_lowers:
        rank = {Basis.PHOTON_BASED: 0, Basis.VACUUM_BASED: 1, Basis.FALLBACK_G2_ONLY: 2}
        lower, basis = max(spp_lowers, key=lambda c: (c[0], -rank[c[1]]))
    elif smppr_lowers:
        basis = Basis.FALLBACK_G2_ONLY
    lower = _clamp(report, "spp_lower", lower, 0.0, upper)
    report.spp_lower, report.spp_upper = lower, upper
    report.criterion_used = basis

    if smppr_lowers:
        report.smppr_lower = _clamp(report, "smppr_lower", max(smppr_lowers), 0.0, INF)

    if p0 is not None:
        # q = 1 - p0 - p1
        q_uppers.append(1.0 - p0 - lower)
    if q_uppers:
        q_up = _clamp(report, "q_upper", min(q_uppers), 0.0, 1.0)
        report.q_upper = q_up
        report.p0_plus_p1_lower = 1.0 - q_up
    return report
