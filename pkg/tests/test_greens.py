import math

import numpy as np
import pytest

from bicyclide.coords import BiCyclidePoint, from_cartesian, to_cartesian, to_cylindrical
from bicyclide.errors import DomainError, PreconditionError
from bicyclide.greens import (
    addition_series,
    azimuthal_fourier,
    dirichlet_coefficients,
    dirichlet_solve,
    direct_distance,
    expand_distance,
    external_from_integral,
    integral_relation,
)
from bicyclide.harmonics import HarmonicIndex, eval_harmonic
from bicyclide.wangerin import solve_eigen, wronskian_w


def _pt(mod, fs, ft, phi=0.0):
    return BiCyclidePoint(fs * mod.bigK, ft * mod.bigKprime, phi, mod)


@pytest.fixture(scope="module")
def pair07(mod07):
    q = to_cartesian(_pt(mod07, 0.2, 0.5, 0.3))
    qs = to_cartesian(_pt(mod07, -0.3, -0.4, -1.0))
    return q, qs


class TestDirectDistance:
    def test_values(self):
        assert direct_distance((0, 0, 0), (1, 0, 0)) == 1.0
        assert direct_distance((0, 0, 0), (2, 0, 0)) == 0.5

    def test_symmetry(self):
        a, b = (0.3, -0.2, 1.1), (-0.5, 0.8, 0.0)
        assert direct_distance(a, b) == direct_distance(b, a)

    def test_coincident(self):
        with pytest.raises(DomainError):
            direct_distance((1, 2, 3), (1, 2, 3))


class TestExpandDistance:
    def test_first_kind_converges(self, mod07, pair07):
        q, qs = pair07
        res = expand_distance(q, qs, "first", mod07, 5, 8)
        err = abs(res.value - res.direct_value)
        assert err / res.direct_value < 1e-4
        assert err <= 10.0 * res.tail_estimate
        assert res.fitted_ratio < 1.0

    def test_second_kind_converges(self, mod07, pair07):
        q, qs = pair07
        res = expand_distance(qs, q, "second", mod07, 5, 8)
        err = abs(res.value - res.direct_value)
        assert err / res.direct_value < 1e-3
        assert err <= 10.0 * res.tail_estimate

    def test_ordering_precondition(self, mod07, pair07):
        q, qs = pair07
        with pytest.raises(PreconditionError, match="t\\* < t"):
            expand_distance(qs, q, "first", mod07, 2, 2)
        with pytest.raises(PreconditionError, match="s < s\\*"):
            expand_distance(q, qs, "second", mod07, 2, 2)

    def test_shell_decay(self, mod07, pair07):
        q, qs = pair07
        res = expand_distance(q, qs, "first", mod07, 4, 6)
        shells = res.shell_sums()
        # geometric decay beyond the onset
        assert shells[-1] < shells[2]
        assert res.term_magnitudes.shape == (5, 7)


class TestAzimuthalFourier:
    def test_coplanar_terms_real(self, mod07):
        q = to_cartesian(_pt(mod07, 0.2, 0.5, 0.4))
        qs = to_cartesian(_pt(mod07, -0.3, -0.4, 0.4))
        res = azimuthal_fourier(q, qs, 10)
        assert isinstance(res.value, float)

    def test_matches_direct(self, mod07, pair07):
        q, qs = pair07
        res = azimuthal_fourier(q, qs, 30)
        assert abs(res.value - res.direct_value) / res.direct_value < 1e-8

    def test_slow_convergence_flagged(self, mod07):
        # nearly coincident (R, z) projections: chi -> 1+, heavy tail
        q = (1.0, 0.0, 0.5)
        qs = (1.0005 * math.cos(2.0), 1.0005 * math.sin(2.0), 0.5)
        res = azimuthal_fourier(q, qs, 10)
        assert res.tail_estimate > 0.01 * res.direct_value

    def test_axis_rejected(self):
        with pytest.raises(DomainError):
            azimuthal_fourier((0, 0, 1.0), (1, 0, 0), 5)


class TestAdditionSeries:
    @pytest.mark.parametrize("m", (0, 2))
    def test_matches_toroidal_Q(self, mod07, m):
        p = _pt(mod07, 0.25, 0.45)
        ps = _pt(mod07, -0.15, -0.35)
        res = addition_series(m, p, ps, 14)
        assert abs(res.value - res.direct_value) / abs(res.direct_value) < 1e-6

    def test_ordering(self, mod07):
        p = _pt(mod07, 0.25, 0.45)
        ps = _pt(mod07, -0.15, -0.35)
        with pytest.raises(PreconditionError):
            addition_series(0, ps, p, 5)

    def test_consistency_with_expansion(self, mod07):
        # summing the addition series over m against the azimuthal expansion
        # reproduces the double-series value
        p = _pt(mod07, 0.2, 0.5, 0.3)
        ps = _pt(mod07, -0.3, -0.4, -1.0)
        q, qs = to_cartesian(p), to_cartesian(ps)
        m_max, n_max = 6, 10
        dphi = p.phi - ps.phi
        cp, cps = to_cylindrical(p), to_cylindrical(ps)
        total = 0.0
        for m in range(m_max + 1):
            res = addition_series(m, p, ps, n_max)
            fold = 1.0 if m == 0 else 2.0 * math.cos(m * dphi)
            total += fold * res.value / (math.pi * math.sqrt(cp.R * cps.R))
        double = expand_distance(q, qs, "first", mod07, m_max, n_max)
        assert abs(total - double.value) < 1e-6 * abs(double.value)


class TestIntegralRelation:
    @pytest.mark.parametrize("m,n", [(0, 0), (1, 2)])
    def test_relation(self, mod07, m, n):
        lhs, rhs = integral_relation(
            m, n, 0.3, 0.5 * mod07.bigKprime, -0.4 * mod07.bigKprime, mod07
        )
        assert abs(lhs - rhs) / abs(rhs) < 1e-6

    def test_parity_shortcut(self, mod07):
        lhs, rhs = integral_relation(
            1, 3, 0.0, 0.45 * mod07.bigKprime, -0.3 * mod07.bigKprime, mod07
        )
        scale = wronskian_w(1, 3, mod07)
        assert abs(rhs) < 1e-8 * scale
        assert abs(lhs) < 1e-8 * scale

    def test_ordering(self, mod07):
        with pytest.raises(PreconditionError):
            integral_relation(0, 0, 0.3, -0.5, 0.5, mod07)


class TestDirichlet:
    def test_single_mode_recovery(self, mod07):
        t0 = 0.3 * mod07.bigKprime
        sol00 = solve_eigen(-0.5, 0, mod07)
        g = lambda s, phi: sol00.interior(s) * np.ones_like(phi)
        coeffs = dirichlet_coefficients(g, t0, mod07, 2, 3)
        assert abs(coeffs.c_of(0, 0) - 1.0) < 1e-9
        for m in (-2, -1, 1, 2):
            for n in range(4):
                assert abs(coeffs.c_of(m, n)) < 1e-9
        for n in (1, 2, 3):
            assert abs(coeffs.c_of(0, n)) < 1e-9

    def test_mode_with_phase(self, mod07):
        t0 = 0.3 * mod07.bigKprime
        sol11 = solve_eigen(0.5, 1, mod07)
        g = lambda s, phi: sol11.interior(s) * np.exp(1j * phi)
        coeffs = dirichlet_coefficients(g, t0, mod07, 2, 3)
        assert abs(coeffs.c_of(1, 1) - 1.0) < 1e-9
        assert abs(coeffs.c_of(-1, 1)) < 1e-9
        assert abs(coeffs.c_of(0, 1)) < 1e-9

    def test_d_ratio_invariant(self, mod07):
        t0 = 0.3 * mod07.bigKprime
        sol = solve_eigen(0.5, 1, mod07)
        g = lambda s, phi: sol.interior(s) * np.exp(1j * phi)
        coeffs = dirichlet_coefficients(g, t0, mod07, 1, 1)
        edge = (-1.0) ** sol.n * math.exp(sol.edge_log(mod07.bigKprime - t0)[0])
        assert abs(coeffs.d_of(1, 1) - coeffs.c_of(1, 1) / edge) < 1e-15 * abs(coeffs.d_of(1, 1))

    def test_phi_symmetric_data(self, mod07):
        t0 = 0.35 * mod07.bigKprime
        g = lambda s, phi: np.cosh(0.3 * s) * np.ones_like(phi)
        coeffs = dirichlet_coefficients(g, t0, mod07, 3, 6)
        p1 = _pt(mod07, 0.2, 0.7, 0.0)
        p2 = _pt(mod07, 0.2, 0.7, 2.1)
        v1 = dirichlet_solve(coeffs, p1)
        v2 = dirichlet_solve(coeffs, p2)
        assert abs(v1 - v2) < 1e-10 * abs(v1)
        assert abs(v1.imag) < 1e-10 * abs(v1)

    def test_harmonic_comparator(self, mod07):
        # boundary data from 1/|u - r*| with r* outside the region: the
        # series solution must reproduce the distance kernel inside
        t0 = 0.35 * mod07.bigKprime
        rstar = to_cartesian(_pt(mod07, 0.1, -0.5, 1.2))
        from bicyclide.coords import _forward_RZ

        def g(s, phi):
            s, phi = np.broadcast_arrays(np.asarray(s, float), np.asarray(phi, float))
            R, z = _forward_RZ(s, t0, mod07)
            X, Y = R * np.cos(phi), R * np.sin(phi)
            d = np.sqrt((X - rstar.x) ** 2 + (Y - rstar.y) ** 2 + (z - rstar.z) ** 2)
            return np.sqrt(R) / d

        coeffs = dirichlet_coefficients(g, t0, mod07, 6, 8)
        for fs, ft, phi in ((0.0, 0.75, 0.4), (0.3, 0.6, -1.0)):
            p = _pt(mod07, fs, ft, phi)
            val = dirichlet_solve(coeffs, p)
            ref = direct_distance(to_cartesian(p), rstar)
            assert abs(val - ref) < 1e-4 * ref

    def test_interior_precondition(self, mod07):
        t0 = 0.4 * mod07.bigKprime
        g = lambda s, phi: np.ones_like(s) * np.ones_like(phi)
        coeffs = dirichlet_coefficients(g, t0, mod07, 0, 0)
        with pytest.raises(PreconditionError):
            dirichlet_solve(coeffs, _pt(mod07, 0.1, 0.2))

    def test_t0_domain(self, mod07):
        with pytest.raises(DomainError):
            dirichlet_coefficients(lambda s, p: s, -0.1, mod07, 0, 0)


class TestIntegralRepresentation:
    @pytest.mark.parametrize("m,n", [(0, 0), (1, 1)])
    def test_matches_external_harmonic(self, mod07, m, n):
        t0 = 0.5 * mod07.bigKprime
        qstar = to_cartesian(_pt(mod07, 0.2, -0.3, 0.8))
        val = external_from_integral(m, n, t0, qstar, mod07)
        ref = eval_harmonic(HarmonicIndex(m, n, "external1"), qstar, mod07)
        assert abs(val - ref) <= 1e-5 * abs(ref)

    def test_wronskian_nonzero(self, mod07):
        for m, n in ((0, 0), (1, 1), (2, 0)):
            assert wronskian_w(m, n, mod07) != 0.0

    def test_inside_point_rejected(self, mod07):
        t0 = 0.4 * mod07.bigKprime
        inside = to_cartesian(_pt(mod07, 0.1, 0.8, 0.0))
        with pytest.raises(PreconditionError):
            external_from_integral(0, 0, t0, inside, mod07)
