import math

import numpy as np
import pytest

from sppbounds.errors import DomainError
from sppbounds.families import (
    FamilySpec,
    coherent,
    fock,
    qd_background,
    random_truncated,
    simplex_batch,
    thermal,
)
from sppbounds.fock import g2_zero_delay, mandel_q, mean_photon_number, observables, projections, validate


class TestCoherent:
    def test_vacuum(self):
        assert coherent(0.0, 1e-14).probs == (1.0,)

    def test_half_vacuum_at_ln2(self):
        assert coherent(math.log(2.0), 1e-14).probs[0] == pytest.approx(0.5, abs=1e-12)

    def test_g2_one(self):
        assert g2_zero_delay(coherent(1.3, 1e-14)) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("n", [0.01, 0.3, 2.0, 10.0])
    def test_tail_is_smallest_cutoff(self, n):
        d = coherent(n, 1e-14)
        assert 0.0 <= d.tail_bound <= 1e-14
        # one fewer term would leave more than the cap behind
        dropped = math.fsum(d.probs[:-1])
        assert 1.0 - dropped > 1e-14
        assert mandel_q(d) == pytest.approx(0.0, abs=1e-10)
        assert mean_photon_number(d) == pytest.approx(n, abs=1e-11 * max(1.0, n))

    @pytest.mark.parametrize("cap", [0.0, 1e-5, -1.0])
    def test_bad_cap(self, cap):
        with pytest.raises(DomainError):
            coherent(0.5, cap)

    def test_negative_mean(self):
        with pytest.raises(DomainError):
            coherent(-0.1)


class TestThermal:
    def test_vacuum(self):
        assert thermal(0.0, 1e-14).probs == (1.0,)

    def test_g2_two(self):
        assert g2_zero_delay(thermal(0.4, 1e-14)) == pytest.approx(2.0, abs=1e-8)

    def test_mean_at_one_third(self):
        assert mean_photon_number(thermal(1 / 3, 1e-14)) == pytest.approx(1 / 3, abs=1e-10)

    def test_weights_match_closed_form(self):
        n = 0.7
        d = thermal(n, 1e-14)
        k = np.arange(len(d.probs))
        np.testing.assert_allclose(d.probs, n**k / (1 + n) ** (k + 1), rtol=1e-13)
        assert d.tail_bound == pytest.approx((n / (1 + n)) ** len(d.probs), rel=1e-10)

    @pytest.mark.parametrize("n", [0.1, 0.5, 2.0])
    def test_mandel_equals_mean(self, n):
        assert mandel_q(thermal(n, 1e-14)) == pytest.approx(n, abs=1e-8)


class TestFock:
    def test_one(self):
        obs = observables(fock(1))
        assert obs.g2 == 0.0 and obs.mean_n == 1.0

    def test_two(self):
        obs = observables(fock(2))
        assert obs.g2 == 0.5
        assert obs.mean_n * obs.g2 == 1.0

    def test_zero(self):
        assert g2_zero_delay(fock(0)) is None

    @pytest.mark.parametrize("bad", [-1, 1.5, True])
    def test_bad_index(self, bad):
        with pytest.raises(DomainError):
            fock(bad)


class TestQdBackground:
    def test_pure_photon(self):
        assert qd_background(1.0, 0.7) == fock(1)

    def test_pure_background(self):
        assert qd_background(0.0, 0.7, 1e-14) == coherent(0.7, 1e-14)

    def test_spp(self):
        _, p1, _ = projections(qd_background(0.5, 0.2, 1e-14))
        assert p1 == pytest.approx(0.5 + 0.5 * 0.2 * math.exp(-0.2), abs=1e-12)

    @pytest.mark.parametrize("p,na", [(0.2, 0.3), (0.5, 1.0), (0.9, 3.0)])
    def test_moments_of_mixture(self, p, na):
        # linearity of the mixture: N = p + (1-p) Na, <a+^2 a^2> = (1-p) Na^2
        obs = observables(qd_background(p, na, 1e-14))
        n = p + (1 - p) * na
        assert obs.mean_n == pytest.approx(n, abs=1e-12)
        assert obs.g2 == pytest.approx((1 - p) * na**2 / n**2, abs=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            qd_background(1.2, 0.1)


class TestRandom:
    def test_deterministic(self):
        assert random_truncated(6, 11) == random_truncated(6, 11)
        assert random_truncated(6, 11) != random_truncated(6, 12)

    def test_valid(self):
        for seed in range(50):
            d = random_truncated(4, seed)
            assert validate(d.probs) == d
            assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-12)
            assert len(d.probs) == 5

    def test_batch_row_zero_matches(self):
        row = simplex_batch(3, 6, 99)[0]
        np.testing.assert_array_equal(row, np.asarray(random_truncated(6, 99).probs))

    def test_mean_vacuum_weight(self):
        # flat Dirichlet over 7 outcomes: E[p0] = 1/7
        p0 = [random_truncated(6, seed).probs[0] for seed in range(100_000)]
        assert abs(np.mean(p0) - 1 / 7) <= 0.01

    def test_varying_support(self):
        batch = simplex_batch(2000, 5, 3, vary_support=True)
        np.testing.assert_allclose(batch.sum(axis=1), 1.0)
        support = (batch > 0).sum(axis=1) - 1
        assert set(support.tolist()) == {1, 2, 3, 4, 5}

    def test_bad_max_n(self):
        with pytest.raises(DomainError):
            random_truncated(0, 1)


class TestFamilySpec:
    def test_round_trip(self):
        spec = FamilySpec.from_dict({"kind": "qd", "params": {"p1_tilde": 0.3, "n_alpha": 0.4}})
        assert FamilySpec.from_dict(spec.to_dict()) == spec
        assert spec.build() == qd_background(0.3, 0.4)

    @pytest.mark.parametrize(
        "obj,expected",
        [
            ({"kind": "coherent", "params": {"mean_photons": 0.5}}, coherent(0.5)),
            ({"kind": "thermal", "params": {"mean_photons": 0.5}}, thermal(0.5)),
            ({"kind": "fock", "params": {"n": 3}}, fock(3)),
            ({"kind": "random", "params": {"max_n": 4, "seed": 2}}, random_truncated(4, 2)),
        ],
    )
    def test_build(self, obj, expected):
        assert FamilySpec.from_dict(obj).build() == expected

    @pytest.mark.parametrize(
        "obj",
        [
            {"kind": "squeezed", "params": {}},
            {"kind": "coherent", "params": {}},
            {"kind": "coherent", "params": {"mean_photons": 1, "n": 2}},
            {"params": {}},
        ],
    )
    def test_rejects(self, obj):
        with pytest.raises(DomainError):
            FamilySpec.from_dict(obj)
