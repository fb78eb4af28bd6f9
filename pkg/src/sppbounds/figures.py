"""Figure data: SPP and SMPPR bounds along the coherent and thermal families,
and the designed quantum-dot state.

fig1 / fig3 (coherent / thermal), absolute bounds on ``p1``::

    N, exact_p1, lower_vacuum, upper_vacuum, lower_photon, upper_photon, diff_lower

fig2 / fig4, lower bounds on ``p1/q``::

    N, exact_ratio, lower_vacuum, lower_photon, ratio_vacuum_over_photon

fig5 is :data:`sppbounds.qd.CSV_COLUMNS`.  An inapplicable criterion
contributes a lower bound of 0; the ratio column is 0 whenever the vacuum
bound is.
"""

from __future__ import annotations

import math
from dataclasses import astuple
from typing import Callable, Optional

from . import bounds as B
from . import qd
from .errors import DomainError, NotApplicable
from .families import DEFAULT_TAIL_CAP, coherent, thermal
from .fock import PhotonDistribution, observables

ABS_COLUMNS = ("N", "exact_p1", "lower_vacuum", "upper_vacuum", "lower_photon", "upper_photon", "diff_lower")
REL_COLUMNS = ("N", "exact_ratio", "lower_vacuum", "lower_photon", "ratio_vacuum_over_photon")

# figure -> (family builder, grid stop, default step)
_FAMILY_FIGURES: dict[str, tuple[Callable[..., PhotonDistribution], float, float]] = {
    "fig1": (coherent, 1.0, 0.005),
    "fig2": (coherent, 1.0, 0.005),
    "fig3": (thermal, 0.5, 0.0025),
    "fig4": (thermal, 0.5, 0.0025),
}
FIG5_STOP, FIG5_STEP = 0.99, 0.01
FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def grid(stop: float, step: float, include_zero: bool = False) -> list[float]:
    """``k * step`` for ``k = 1 .. floor(stop/step)`` (from ``k = 0`` if asked)."""
    if not (math.isfinite(step) and step > 0.0):
        raise DomainError(f"grid step must be > 0, got {step!r}")
    count = int(math.floor(stop / step + 1e-9))
    return [k * step for k in range(0 if include_zero else 1, count + 1)]


def absolute_row(d: PhotonDistribution, x: float) -> tuple[float, ...]:
    obs = observables(d)
    vac = B.spp_bounds_vacuum(obs.g2, obs.p0)
    pho = B.spp_bounds_photon(obs.g2, obs.mean_n)
    return (x, obs.p1, vac.lower, vac.upper, pho.lower, pho.upper, pho.lower - vac.lower)


def relative_row(d: PhotonDistribution, x: float) -> tuple[float, ...]:
    obs = observables(d)
    exact = obs.p1 / obs.q_multi if obs.q_multi > 0.0 else math.inf
    try:
        lower_vac = B.smppr_lower_vacuum(B.effective_g2_vacuum(obs.g2, obs.p0), obs.g2)
    except NotApplicable:
        lower_vac = 0.0
    try:
        lower_pho = B.smppr_lower_photon(B.effective_g2_photon(obs.g2, obs.mean_n))
    except NotApplicable:
        lower_pho = 0.0
    if lower_vac == 0.0:
        ratio = 0.0
    elif lower_pho == 0.0:
        ratio = math.inf
    else:
        ratio = lower_vac / lower_pho
    return (x, exact, lower_vac, lower_pho, ratio)


def figure_table(which: str, step: Optional[float] = None,
                 tail_cap: float = DEFAULT_TAIL_CAP) -> tuple[tuple[str, ...], list[tuple[float, ...]]]:
    """Header and rows (ascending in the sweep parameter) for one figure."""
    if which == "fig5":
        points = grid(FIG5_STOP, step or FIG5_STEP, include_zero=True)
        return qd.CSV_COLUMNS, [astuple(r) for r in qd.figure5_sweep(points, tail_cap)]
    if which not in _FAMILY_FIGURES:
        raise DomainError(f"unknown figure {which!r}; choose from {', '.join(FIGURES)}")
    build, stop, default_step = _FAMILY_FIGURES[which]
    absolute = which in ("fig1", "fig3")
    row = absolute_row if absolute else relative_row
    rows = [row(build(n, tail_cap), n) for n in grid(stop, step or default_step)]
    return (ABS_COLUMNS if absolute else REL_COLUMNS), rows
