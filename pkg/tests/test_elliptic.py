import math

import mpmath
import pytest

from mathieu_resurgence.elliptic import (
    ellip_dE_dm,
    ellip_dK_dm,
    ellip_E,
    ellip_E_series,
    ellip_K,
    ellip_K_series,
    ellip_KE,
    jacobi_sd,
    jacobi_sn_cn_dn,
    legendre_defect,
)
from mathieu_resurgence.errors import DomainError, PoleError

GRID = [k / 100 for k in range(1, 100)]


class TestCompleteIntegrals:
    def test_circular_limits(self):
        assert ellip_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert ellip_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_E_at_one(self):
        assert ellip_E(1.0) == 1.0

    def test_K_half(self):
        assert ellip_K(0.5) == pytest.approx(1.85407467730137, abs=2e-14)

    def test_K_diverges_at_one(self):
        with pytest.raises(PoleError):
            ellip_K(1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            ellip_K(-0.1)
        with pytest.raises(DomainError):
            ellip_E(1.2)

    def test_agm_matches_maclaurin_series_on_grid(self):
        for m in GRID:
            K, E = ellip_KE(m)
            assert abs(K - ellip_K_series(m)) <= 1e-13 * K
            assert abs(E - ellip_E_series(m)) <= 1e-13 * E

    def test_extended_precision_tier(self):
        with mpmath.workdps(40):
            K = ellip_K(mpmath.mpf(1) / 2, dps=40)
            ref = mpmath.ellipk(mpmath.mpf(1) / 2)
            assert abs(K - ref) < mpmath.mpf(10) ** -38


class TestDerivatives:
    def test_formula_instance(self):
        K, E = ellip_KE(0.5)
        assert ellip_dE_dm(0.5) == pytest.approx((E - K) / 1.0, rel=1e-14)

    def test_finite_difference(self):
        h = 1e-5
        for m in (0.3, 0.7):
            fd_K = (ellip_K(m + h) - ellip_K(m - h)) / (2 * h)
            fd_E = (ellip_E(m + h) - ellip_E(m - h)) / (2 * h)
            assert abs(ellip_dK_dm(m) - fd_K) < 1e-8
            assert abs(ellip_dE_dm(m) - fd_E) < 1e-8

    def test_endpoints_rejected(self):
        with pytest.raises(DomainError):
            ellip_dK_dm(0.0)
        with pytest.raises(DomainError):
            ellip_dE_dm(1.0)


class TestLegendre:
    def test_half(self):
        assert abs(legendre_defect(0.5)) <= 1e-13

    def test_tenth(self):
        assert abs(legendre_defect(0.1)) <= 1e-13

    def test_near_zero_bounded(self):
        assert abs(legendre_defect(1e-6)) <= 1e-12

    def test_grid(self):
        for m in GRID:
            assert abs(legendre_defect(m)) <= 1e-13


class TestJacobi:
    def test_sd_zero(self):
        assert jacobi_sd(0.0, 0.4) == 0.0

    def test_sd_sin_limit(self):
        for z in (0.3, 1.1, -0.8):
            assert jacobi_sd(z, 0.0) == pytest.approx(math.sin(z), abs=1e-14)

    def test_sd_sinh_limit(self):
        for z in (0.3, 1.1, -0.8):
            assert jacobi_sd(z, 1.0) == pytest.approx(math.sinh(z), abs=1e-12)

    def test_sd_squared_limits_pointwise(self):
        for z in (0.2, 0.9, 1.7):
            assert jacobi_sd(z, 0.0) ** 2 == pytest.approx(math.sin(z) ** 2, abs=1e-12)
            assert jacobi_sd(z, 1.0) ** 2 == pytest.approx(math.sinh(z) ** 2, abs=1e-12)

    def test_period_antisymmetry(self):
        m = 0.3
        K = ellip_K(m)
        for z in (0.1, 0.7, 1.9):
            assert jacobi_sd(z + 2 * K, m) == pytest.approx(-jacobi_sd(z, m), abs=1e-11)

    def test_purely_imaginary_argument(self):
        got = jacobi_sd(complex(0, 0.7), 0.3)
        want = complex(0, float(jacobi_sd(0.7, 0.7)))
        assert got == pytest.approx(want, abs=1e-13)

    def test_sn_cn_dn_identities(self):
        for u, m in ((0.4, 0.2), (1.3, 0.8), (-2.1, 0.5)):
            sn, cn, dn = jacobi_sn_cn_dn(u, m)
            assert sn * sn + cn * cn == pytest.approx(1.0, abs=1e-13)
            assert dn * dn + m * sn * sn == pytest.approx(1.0, abs=1e-13)

    def test_general_complex_rejected(self):
        with pytest.raises(DomainError):
            jacobi_sd(complex(1.0, 1.0), 0.3)
