"""Fock-diagonal photon-number distributions and their exact observables.

Only the diagonal of the density matrix in the photon-number basis enters
any quantity computed here, so a state is fully described by the vector
``p_n = <n|rho|n>``.  Observables that are undefined for the vacuum (g2,
Mandel-Q, ...) are returned as ``None`` rather than raising.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, NotADistribution

#: entries in [-CLAMP_TOL, 0) are treated as serialization noise and set to 0
CLAMP_TOL = 1e-12
#: normalization slack accepted (and removed) when no tail is declared
RENORM_TOL = 1e-9


@dataclass(frozen=True)
class PhotonDistribution:
    """Truncated photon-number distribution ``p_0 .. p_K``.

    ``tail_bound`` is an upper bound on the probability mass sitting at
    photon numbers above ``K`` that was cut off during construction.  Build
    instances through :func:`validate` (or the family constructors), not
    directly.
    """

    probs: tuple[float, ...]
    tail_bound: float = 0.0

    @property
    def cutoff(self) -> int:
        """Largest photon number ``K`` carried explicitly."""
        return len(self.probs) - 1

    @property
    def residual(self) -> float:
        """Mass missing from ``probs``; zero when no tail was declared."""
        if self.tail_bound == 0.0:
            return 0.0
        return max(0.0, 1.0 - math.fsum(self.probs))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def to_dict(self) -> dict:
        return {"probs": list(self.probs), "tail_bound": self.tail_bound}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "PhotonDistribution":
        if not isinstance(obj, dict) or "probs" not in obj:
            raise NotADistribution("distribution object needs a 'probs' field")
        return validate(obj["probs"], obj.get("tail_bound", 0.0))

    @classmethod
    def from_json(cls, text: str) -> "PhotonDistribution":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ObservableSet:
    """Observables of one distribution.

    Any field may be ``None``: for the vacuum (``mean_n == 0``) the
    correlation quantities are undefined, and ``n2``/``g2_multi`` are
    undefined whenever there is no multi-photon part.  Partial sets (only
    some fields known) are also legal input to :func:`sppbounds.bounds.analyze`.
    """

    mean_n: Optional[float] = None
    g2: Optional[float] = None
    variance: Optional[float] = None
    mandel_q: Optional[float] = None
    p0: Optional[float] = None
    p1: Optional[float] = None
    q_multi: Optional[float] = None
    n2: Optional[float] = None
    g2_multi: Optional[float] = None


def validate(probs: Sequence[float], tail_bound: float = 0.0) -> PhotonDistribution:
    """Check and normalize a probability vector.

    Entries in ``[-1e-12, 0)`` are clamped to zero.  With ``tail_bound == 0``
    a sum within ``1e-9`` of one is renormalized exactly; with a positive
    tail the sum must lie in ``[1 - tail_bound - 1e-12, 1 + 1e-12]`` and is
    left untouched.

    Raises:
        NotADistribution: negative mass, non-finite entries, or a sum that
            cannot be reconciled with ``tail_bound``.
    """
    try:
        values = [float(p) for p in probs]
        tail = float(tail_bound)
    except (TypeError, ValueError) as exc:
        raise NotADistribution(f"non-numeric probability data: {exc}") from None
    if not values:
        raise NotADistribution("probs must contain at least p_0")
    if not all(math.isfinite(p) for p in values) or not math.isfinite(tail):
        raise NotADistribution("probabilities must be finite")
    if tail < 0.0:
        raise NotADistribution(f"tail_bound must be >= 0, got {tail!r}")

    for n, p in enumerate(values):
        if p < -CLAMP_TOL:
            raise NotADistribution(f"p_{n} = {p!r} is negative")
        if p > 1.0 + CLAMP_TOL:
            raise NotADistribution(f"p_{n} = {p!r} exceeds one")
    values = [min(max(p, 0.0), 1.0) for p in values]

    total = math.fsum(values)
    if tail == 0.0:
        if abs(total - 1.0) > RENORM_TOL:
            raise NotADistribution(f"probabilities sum to {total!r}, not 1")
        # skip sums already within rounding of 1 so validation is idempotent
        if abs(total - 1.0) > len(values) * sys.float_info.epsilon:
            values = [p / total for p in values]
    elif total > 1.0 + CLAMP_TOL or 1.0 - total > tail + CLAMP_TOL:
        raise NotADistribution(
            f"probabilities sum to {total!r}, inconsistent with tail_bound {tail!r}"
        )
    return PhotonDistribution(tuple(values), tail)


def _factorial_moments(d: PhotonDistribution) -> tuple[float, float]:
    # (sum n p_n, sum n(n-1) p_n), tail treated as zero
    p = d.as_array()
    n = np.arange(p.size, dtype=float)
    return float(n @ p), float((n * (n - 1.0)) @ p)


def mean_photon_number(d: PhotonDistribution) -> float:
    """Mean photon number ``N = sum_n n p_n``."""
    return _factorial_moments(d)[0]


def g2_zero_delay(d: PhotonDistribution) -> Optional[float]:
    """Zero-delay second-order correlation ``<a+^2 a^2> / <a+ a>^2``.

    Returns ``None`` for the vacuum, where the ratio is 0/0.
    """
    mean, fact2 = _factorial_moments(d)
    if mean == 0.0:
        return None
    return fact2 / mean**2


def photon_variance(d: PhotonDistribution) -> float:
    mean, fact2 = _factorial_moments(d)
    # <n^2> - N^2 = sum n(n-1)p + N - N^2
    return max(0.0, fact2 + mean - mean**2)


def mandel_q(d: PhotonDistribution) -> Optional[float]:
    """Mandel-Q parameter ``(dN)^2 / N - 1``; ``None`` for the vacuum.

    Evaluated as ``(sum n(n-1)p_n - N^2) / N``, which avoids subtracting
    two nearly equal numbers for near-Poissonian light.
    """
    mean, fact2 = _factorial_moments(d)
    if mean == 0.0:
        return None
    return (fact2 - mean**2) / mean


def projections(d: PhotonDistribution) -> tuple[float, float, float]:
    """Vacuum, single-photon and multi-photon projections ``(p0, p1, q)``.

    Truncated mass (``d.residual``) is attributed to photon number ``K+1``,
    so it lands in ``q`` unless the distribution stops at ``K = 0``.
    """
    p = d.probs
    p0 = p[0]
    p1 = p[1] if len(p) > 1 else 0.0
    q = math.fsum(p[2:])
    residual = d.residual
    if residual:
        if d.cutoff == 0:
            p1 += residual
        else:
            q += residual
    return p0, p1, q


def multi_photon_observables(d: PhotonDistribution) -> Optional[tuple[float, float]]:
    """Mean photon number ``n2`` and ``g2`` of the multi-photon component alone.

    Returns ``None`` when the state has no weight on ``n >= 2``.  Uses the
    explicit entries only, so ``n2 >= 2`` and ``g2_multi >= 1/2`` hold to
    rounding even when the multi-photon weight is tiny.
    """
    p = d.as_array()[2:]
    q = float(p.sum())
    if q == 0.0:
        return None
    n = np.arange(2, p.size + 2, dtype=float)
    n2 = float(n @ p) / q
    g2_multi = float((n * (n - 1.0)) @ p) / (q * n2**2)
    return n2, g2_multi


def observables(d: PhotonDistribution) -> ObservableSet:
    """Every observable of ``d`` in one record."""
    mean, fact2 = _factorial_moments(d)
    p0, p1, q = projections(d)
    multi = multi_photon_observables(d)
    n2, g2_multi = multi if multi is not None else (None, None)
    if mean == 0.0:
        g2 = mq = None
    else:
        g2 = fact2 / mean**2
        mq = (fact2 - mean**2) / mean
    return ObservableSet(
        mean_n=mean,
        g2=g2,
        variance=max(0.0, fact2 + mean - mean**2),
        mandel_q=mq,
        p0=p0,
        p1=p1,
        q_multi=q,
        n2=n2,
        g2_multi=g2_multi,
    )


def truncation_shift(d: PhotonDistribution) -> tuple[float, float]:
    """Shift of ``(N, sum n(n-1) p_n)`` if the truncated mass sat at ``K+1``.

    Point values ignore the tail; this is the error bar that goes with them.
    """
    k1 = d.cutoff + 1
    return k1 * d.tail_bound, k1 * (k1 - 1) * d.tail_bound


def vacuum_mix(d: PhotonDistribution, extra_vacuum: float) -> PhotonDistribution:
    """Incoherently mix a fraction ``extra_vacuum`` of vacuum into ``d``.

    ``p0 -> v + (1-v) p0`` and ``p_n -> (1-v) p_n`` for ``n >= 1``.  The
    ratio ``p1/q`` and the product ``N g2`` are unchanged.
    """
    v = float(extra_vacuum)
    if not 0.0 <= v < 1.0:
        raise DomainError(f"extra_vacuum must lie in [0, 1), got {v!r}")
    if v == 0.0:
        return d
    keep = 1.0 - v
    probs = (v + keep * d.probs[0],) + tuple(keep * p for p in d.probs[1:])
    return PhotonDistribution(probs, keep * d.tail_bound)
