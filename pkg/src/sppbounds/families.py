"""Parametric state families: coherent, thermal, Fock, quantum dot with
coherent background, and uniformly random distributions on a truncated
simplex.

Family JSON (``FamilySpec.from_dict``) uses these exact keys::

    {"kind": "coherent", "params": {"mean_photons": <float >= 0>}}
    {"kind": "thermal",  "params": {"mean_photons": <float >= 0>}}
    {"kind": "fock",     "params": {"n": <int >= 0>}}
    {"kind": "qd",       "params": {"p1_tilde": <float in [0,1]>, "n_alpha": <float >= 0>}}
    {"kind": "random",   "params": {"max_n": <int >= 1>, "seed": <int>}}

Random distributions use numpy's PCG64 bit generator seeded with the given
integer: draw ``max_n + 1`` unit-rate exponential variates with
``Generator.standard_exponential`` and divide by their sum.  That is a
uniform (flat Dirichlet) sample on the simplex.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import pdtrc

from .errors import DomainError
from .fock import PhotonDistribution, validate

DEFAULT_TAIL_CAP = 1e-14
MAX_TAIL_CAP = 1e-6


class FamilyKind(enum.Enum):
    COHERENT = "coherent"
    THERMAL = "thermal"
    FOCK = "fock"
    QD = "qd"
    RANDOM = "random"


_PARAM_KEYS = {
    FamilyKind.COHERENT: ("mean_photons",),
    FamilyKind.THERMAL: ("mean_photons",),
    FamilyKind.FOCK: ("n",),
    FamilyKind.QD: ("p1_tilde", "n_alpha"),
    FamilyKind.RANDOM: ("max_n", "seed"),
}


def _check_tail_cap(tail_cap: float) -> None:
    if not 0.0 < tail_cap <= MAX_TAIL_CAP:
        raise DomainError(f"tail_cap must lie in (0, {MAX_TAIL_CAP}], got {tail_cap!r}")


def _check_mean(mean: float, name: str = "mean_photons") -> float:
    mean = float(mean)
    if not (math.isfinite(mean) and mean >= 0.0):
        raise DomainError(f"{name} must be finite and >= 0, got {mean!r}")
    return mean


def poisson_weights(mean_photons: float, tail_cap: float = DEFAULT_TAIL_CAP) -> tuple[list[float], float]:
    """Poisson weights up to the smallest cutoff whose tail is ``<= tail_cap``.

    Returns the weights and the exact tail mass beyond the cutoff.
    """
    mean = _check_mean(mean_photons)
    _check_tail_cap(tail_cap)
    if mean == 0.0:
        return [1.0], 0.0
    # recurrence p_n = p_{n-1} N / n; for N > ~700 exp(-N) underflows
    if mean > 700.0:
        raise DomainError(f"mean_photons {mean!r} too large for direct summation")
    weights = [math.exp(-mean)]
    n = 0
    while True:
        tail = float(pdtrc(n, mean))
        if tail <= tail_cap:
            return weights, tail
        n += 1
        weights.append(weights[-1] * mean / n)


def coherent(mean_photons: float, tail_cap: float = DEFAULT_TAIL_CAP) -> PhotonDistribution:
    """Poissonian photon statistics of a coherent state with ``N = mean_photons``."""
    weights, tail = poisson_weights(mean_photons, tail_cap)
    return validate(weights, tail)


def thermal(mean_photons: float, tail_cap: float = DEFAULT_TAIL_CAP) -> PhotonDistribution:
    """Geometric distribution ``p_n = N^n / (1+N)^(n+1)``.

    The tail beyond cutoff ``K`` is ``(N/(1+N))^(K+1)`` in closed form.
    """
    mean = _check_mean(mean_photons)
    _check_tail_cap(tail_cap)
    if mean == 0.0:
        return validate([1.0])
    ratio = mean / (1.0 + mean)
    weights = [1.0 / (1.0 + mean)]
    tail = ratio
    while tail > tail_cap:
        weights.append(weights[-1] * ratio)
        tail *= ratio
    return validate(weights, tail)


def fock(n: int) -> PhotonDistribution:
    """Point mass on photon number ``n``."""
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"Fock index must be a non-negative integer, got {n!r}")
    n = int(n)
    probs = [0.0] * (n + 1)
    probs[n] = 1.0
    return PhotonDistribution(tuple(probs), 0.0)


def qd_background(p1_tilde: float, n_alpha: float, tail_cap: float = DEFAULT_TAIL_CAP) -> PhotonDistribution:
    """Single photon with probability ``p1_tilde`` mixed with coherent light.

    ``rho = p1_tilde |1><1| + (1 - p1_tilde) |alpha><alpha|`` with
    ``|alpha|^2 = n_alpha``.
    """
    p1_tilde = float(p1_tilde)
    if not 0.0 <= p1_tilde <= 1.0:
        raise DomainError(f"p1_tilde must lie in [0, 1], got {p1_tilde!r}")
    _check_mean(n_alpha, "n_alpha")
    if p1_tilde == 1.0:
        return fock(1)
    if p1_tilde == 0.0:
        return coherent(n_alpha, tail_cap)
    weights, tail = poisson_weights(n_alpha, tail_cap)
    bg = 1.0 - p1_tilde
    probs = [bg * w for w in weights]
    if len(probs) < 2:
        probs.append(0.0)
    probs[1] += p1_tilde
    return validate(probs, bg * tail)


def make_rng(seed: int) -> np.random.Generator:
    """The generator every random state in the package is drawn from."""
    return np.random.Generator(np.random.PCG64(seed))


def simplex_batch(trials: int, max_n: int, seed: int, vary_support: bool = False) -> np.ndarray:
    """``trials`` uniform points on the simplex over ``{0..max_n}``, one per row.

    With ``vary_support`` each row first draws its own cutoff ``k`` uniformly
    from ``{1..max_n}`` and is uniform on ``{0..k}`` (zeros above ``k``).
    Row ``i`` depends only on ``(seed, i)`` and the arguments, never on the
    order rows are consumed in.  Without ``vary_support``, row 0 equals
    ``random_truncated(max_n, seed)``.
    """
    if max_n < 1:
        raise DomainError(f"max_n must be >= 1, got {max_n!r}")
    if trials < 0:
        raise DomainError(f"trials must be >= 0, got {trials!r}")
    rng = make_rng(seed)
    if vary_support:
        cut = rng.integers(1, max_n + 1, size=trials)
    e = rng.standard_exponential((trials, max_n + 1))
    if vary_support:
        e[np.arange(max_n + 1)[None, :] > cut[:, None]] = 0.0
    return e / e.sum(axis=1, keepdims=True)


def random_truncated(max_n: int, seed: int) -> PhotonDistribution:
    """Uniformly random distribution on ``{0..max_n}``, deterministic in ``seed``."""
    if isinstance(max_n, bool) or int(max_n) != max_n or max_n < 1:
        raise DomainError(f"max_n must be an integer >= 1, got {max_n!r}")
    e = make_rng(seed).standard_exponential(int(max_n) + 1)
    return validate((e / e.sum()).tolist())


@dataclass(frozen=True)
class FamilySpec:
    """Parametric descriptor of a state; ``build()`` turns it into a distribution."""

    kind: FamilyKind
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        kind = FamilyKind(self.kind)
        object.__setattr__(self, "kind", kind)
        missing = [k for k in _PARAM_KEYS[kind] if k not in self.params]
        unknown = [k for k in self.params if k not in _PARAM_KEYS[kind]]
        if missing or unknown:
            raise DomainError(
                f"{kind.value} family needs params {list(_PARAM_KEYS[kind])}; "
                f"missing {missing}, unknown {unknown}"
            )

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_KEYS[self.kind]

    def with_param(self, name: str, value: Any) -> "FamilySpec":
        return FamilySpec(self.kind, {**self.params, name: value})

    def build(self, tail_cap: float = DEFAULT_TAIL_CAP) -> PhotonDistribution:
        p = self.params
        if self.kind is FamilyKind.COHERENT:
            return coherent(p["mean_photons"], tail_cap)
        if self.kind is FamilyKind.THERMAL:
            return thermal(p["mean_photons"], tail_cap)
        if self.kind is FamilyKind.FOCK:
            return fock(p["n"])
        if self.kind is FamilyKind.QD:
            return qd_background(p["p1_tilde"], p["n_alpha"], tail_cap)
        return random_truncated(p["max_n"], p["seed"])

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, obj: dict) -> "FamilySpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise DomainError("family object needs a 'kind' field")
        try:
            kind = FamilyKind(obj["kind"])
        except ValueError:
            raise DomainError(f"unknown family kind {obj['kind']!r}") from None
        return cls(kind, dict(obj.get("params", {})))
