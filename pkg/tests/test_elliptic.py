import math

import numpy as np
import pytest

from bicyclide.elliptic import (
    Modulus,
    complete_integrals,
    glaisher,
    inverse_sn,
    jacobi,
    landen_descend,
    landen_identities,
)
from bicyclide.errors import DomainError, SingularityError
from oracles import agm_E, agm_K

SAMPLE_K = (0.1, 0.5, 0.7, 0.9)


class TestModulus:
    @pytest.mark.parametrize("k", SAMPLE_K)
    def test_invariants(self, k):
        mod = Modulus.from_k(k)
        assert abs(mod.k**2 + mod.kprime**2 - 1.0) < 1e-15
        assert abs(mod.bigK / agm_K(k) - 1.0) < 1e-14
        assert abs(mod.bigKprime / agm_K(mod.kprime) - 1.0) < 1e-14
        assert abs(mod.omega * 2.0 * mod.bigK - math.pi) < 1e-15
        b1 = (1.0 - k) / mod.kprime
        b2 = mod.kprime / (1.0 + k)
        assert abs(b1 - b2) < 1e-14
        assert abs(mod.b - b2) < 1e-15
        assert 0.0 < mod.b < 1.0

    def test_complement_involution(self):
        mod = Modulus.from_k(0.7)
        back = mod.complement().complement()
        assert abs(back.k - mod.k) < 1e-15

    @pytest.mark.parametrize("k", (0.0, 1.0, -0.2, 1.5))
    def test_domain(self, k):
        with pytest.raises(DomainError):
            Modulus.from_k(k)


class TestCompleteIntegrals:
    def test_small_k_limits(self):
        K, E = complete_integrals(1e-12)
        assert abs(K - math.pi / 2) < 1e-12
        assert abs(E - math.pi / 2) < 1e-12

    @pytest.mark.parametrize("k", SAMPLE_K + (0.999,))
    def test_agm_oracle(self, k):
        K, E = complete_integrals(k)
        assert abs(K / agm_K(k) - 1.0) < 1e-14
        assert abs(E / agm_E(k) - 1.0) < 1e-14

    def test_domain(self):
        with pytest.raises(DomainError):
            complete_integrals(1.2)


class TestJacobi:
    def test_values_at_zero(self):
        sn, cn, dn = jacobi(0.0, 0.7)
        assert (sn, cn, dn) == (0.0, 1.0, 1.0)

    @pytest.mark.parametrize("k", SAMPLE_K)
    def test_values_at_K(self, k):
        mod = Modulus.from_k(k)
        sn, cn, dn = jacobi(mod.bigK, k)
        assert abs(sn - 1.0) < 1e-14
        assert abs(cn) < 1e-14
        assert abs(dn - mod.kprime) < 1e-14

    def test_complex_identities(self):
        sn, cn, dn = jacobi(0.3 + 0.2j, 0.7)
        assert abs(sn**2 + cn**2 - 1.0) < 1e-12
        assert abs(dn**2 + 0.49 * sn**2 - 1.0) < 1e-12

    def test_real_input_gives_floats(self):
        out = jacobi(0.4, 0.5)
        assert all(isinstance(v, float) for v in out)

    @pytest.mark.parametrize("k", SAMPLE_K)
    def test_identities_on_real_interval(self, k):
        mod = Modulus.from_k(k)
        for u in np.linspace(-mod.bigK, mod.bigK, 17)[1:-1]:
            sn, cn, dn = jacobi(float(u), k)
            assert abs(sn**2 + cn**2 - 1.0) < 1e-12
            assert abs(dn**2 + k * k * sn**2 - 1.0) < 1e-12

    @pytest.mark.parametrize("k", SAMPLE_K)
    def test_periodicity(self, k):
        mod = Modulus.from_k(k)
        for u in (-1.1, 0.23, 0.8):
            s1, _, _ = jacobi(u, k)
            s2, _, _ = jacobi(u + 4.0 * mod.bigK, k)
            assert abs(s1 - s2) < 1e-10

    def test_pole_guard(self):
        mod = Modulus.from_k(0.7)
        with pytest.raises(SingularityError):
            jacobi(1e-10 + 1j * mod.bigKprime, 0.7)


class TestGlaisher:
    def test_trivials(self):
        assert glaisher("dc", 0.0, 0.7) == 1.0
        assert glaisher("sc", 0.0, 0.7) == 0.0

    def test_quotient_consistency(self):
        sn, cn, dn = jacobi(0.5, 0.7)
        assert abs(glaisher("dc", 0.5, 0.7) - dn / cn) < 1e-14
        assert abs(glaisher("ns", 0.5, 0.7) - 1.0 / sn) < 1e-14

    def test_denominator_guard(self):
        mod = Modulus.from_k(0.7)
        with pytest.raises(SingularityError):
            glaisher("dc", mod.bigK, 0.7)

    def test_unknown_code(self):
        with pytest.raises(DomainError):
            glaisher("xy", 0.3, 0.7)


class TestLanden:
    def test_arithmetic(self):
        assert abs(landen_descend(0.6) - 0.25) < 1e-15

    def test_near_one_limit(self):
        assert landen_descend(1.0 - 1e-12) < 1e-11

    @pytest.mark.parametrize("k", SAMPLE_K)
    def test_K_identities(self, k):
        r1, r2 = landen_identities(k)
        assert abs(r1) < 1e-12
        assert abs(r2) < 1e-12


class TestInverseSn:
    @pytest.mark.parametrize("k", SAMPLE_K)
    def test_round_trip(self, k):
        for x in (-0.95, -0.3, 0.0, 0.5, 0.99):
            u = inverse_sn(x, k)
            sn, _, _ = jacobi(u, k)
            assert abs(sn - x) < 1e-13

    def test_domain(self):
        with pytest.raises(DomainError):
            inverse_sn(1.2, 0.5)
