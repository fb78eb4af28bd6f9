"""Quantum-dot emission on top of a coherent laser background.

The state is ``p1_tilde |1><1| + (1 - p1_tilde) |alpha><alpha|`` with
``N_alpha = |alpha|^2``.  Its mean photon number and correlation are

    N  = p1_tilde + a N_alpha,        a = 1 - p1_tilde
    g2 = a N_alpha^2 / N^2

Fixing ``g2 = t`` gives the quadratic

    (a - t a^2) x^2 - 2 t a p1_tilde x - t p1_tilde^2 = 0,   x = N_alpha,

whose only non-negative root is ``x = p1_tilde sqrt(t) / (sqrt(a) - a sqrt(t))``.
It exists iff ``a t < 1``.  With ``t = 1/2`` this is the largest background
for which the standard ``g2 < 1/2`` test still sees a single photon.
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from typing import IO, Iterable, NamedTuple, Sequence

from .bounds import spp_bounds_photon, spp_bounds_vacuum
from .errors import DomainError, NoSolution
from .families import DEFAULT_TAIL_CAP, qd_background
from .fock import g2_zero_delay, mean_photon_number
from .tables import write_csv

RESIDUAL_TOL = 1e-10

CSV_COLUMNS = ("p1_tilde", "n_alpha", "g2", "mean_n", "exact_p1", "lower_photon", "lower_vacuum")

#: p1_tilde = 0.00, 0.01, ..., 0.99
DEFAULT_GRID = tuple(k / 100 for k in range(100))


def _check_p1_tilde(p1_tilde: float) -> float:
    p = float(p1_tilde)
    if not 0.0 <= p < 1.0:
        raise DomainError(f"p1_tilde must lie in [0, 1), got {p!r}")
    return p


def background_limit_g2_criterion(p1_tilde: float) -> float:
    """Largest ``N_alpha`` with ``g2 < 1/2``:
    ``p/(1+p) (1 + sqrt(2/(1-p)))``."""
    p = _check_p1_tilde(p1_tilde)
    return p / (1.0 + p) * (1.0 + math.sqrt(2.0 / (1.0 - p)))


def background_limit_photon_criterion(p1_tilde: float) -> float:
    """Largest ``N_alpha`` with ``N g2 < 1``:
    ``(1 + sqrt((1+3p)/(1-p))) / 2``."""
    p = _check_p1_tilde(p1_tilde)
    return 0.5 * (1.0 + math.sqrt((1.0 + 3.0 * p) / (1.0 - p)))


def _state_tail_cap(n_alpha: float, tail_cap: float) -> float:
    # g2 ~ sum n(n-1) p_n / N^2 loses relative accuracy ~ tail / N_alpha^2
    return tail_cap * min(1.0, n_alpha**2) if n_alpha > 0.0 else tail_cap


class BackgroundSolution(NamedTuple):
    n_alpha: float
    #: True when p1_tilde = 0 forces the vacuum, where g2 is undefined
    degenerate: bool


def solve_background_for_g2_target(
    p1_tilde: float, target_g2: float, tail_cap: float = DEFAULT_TAIL_CAP
) -> BackgroundSolution:
    """Background ``N_alpha`` at which the mixture has ``g2 == target_g2``.

    The root is verified by building the state and recomputing ``g2``.

    Raises:
        NoSolution: ``(1 - p1_tilde) * target_g2 >= 1`` or the rebuilt state
            misses the target by more than ``1e-10``.
    """
    p = _check_p1_tilde(p1_tilde)
    t = float(target_g2)
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"target_g2 must be > 0, got {t!r}")
    if p == 0.0:
        return BackgroundSolution(0.0, True)
    a = 1.0 - p
    if a * t >= 1.0:
        raise NoSolution(f"no background reaches g2 = {t!r} at p1_tilde = {p!r}")
    rt = math.sqrt(t)
    n_alpha = p * rt / (math.sqrt(a) - a * rt)
    g2 = g2_zero_delay(qd_background(p, n_alpha, _state_tail_cap(n_alpha, tail_cap)))
    if g2 is None or abs(g2 - t) > RESIDUAL_TOL:
        raise NoSolution(f"root N_alpha = {n_alpha!r} gives g2 = {g2!r}, target {t!r}")
    return BackgroundSolution(n_alpha, False)


@dataclass(frozen=True)
class QdScenarioRecord:
    p1_tilde: float
    n_alpha: float
    g2: float
    mean_n: float
    exact_p1: float
    lower_photon: float
    lower_vacuum: float


def scenario(p1_tilde: float, target_g2: float = 0.5, tail_cap: float = DEFAULT_TAIL_CAP) -> QdScenarioRecord:
    """One designed state on the ``g2 = target_g2`` boundary and its bounds.

    At ``p1_tilde = 0`` the state is the vacuum; the record then carries the
    target as its (limiting) ``g2`` and zeros elsewhere.
    """
    sol = solve_background_for_g2_target(p1_tilde, target_g2, tail_cap)
    p, x = float(p1_tilde), sol.n_alpha
    if sol.degenerate:
        return QdScenarioRecord(p, 0.0, float(target_g2), 0.0, 0.0, 0.0, 0.0)
    d = qd_background(p, x, _state_tail_cap(x, tail_cap))
    g2 = g2_zero_delay(d)
    mean_n = mean_photon_number(d)
    exact_p1 = p + (1.0 - p) * x * math.exp(-x)
    p0 = (1.0 - p) * math.exp(-x)
    return QdScenarioRecord(
        p1_tilde=p,
        n_alpha=x,
        g2=g2,
        mean_n=mean_n,
        exact_p1=exact_p1,
        lower_photon=spp_bounds_photon(g2, mean_n).lower,
        lower_vacuum=spp_bounds_vacuum(g2, p0).lower,
    )


def figure5_sweep(grid: Sequence[float] = DEFAULT_GRID, tail_cap: float = DEFAULT_TAIL_CAP) -> list[QdScenarioRecord]:
    """Designed ``g2 = 1/2`` states across ``grid``, in grid order."""
    return [scenario(p, 0.5, tail_cap) for p in grid]


def write_records_csv(out: IO[str], records: Iterable[QdScenarioRecord]) -> None:
    write_csv(out, CSV_COLUMNS, (astuple(r) for r in records))
