"""Reciprocal-distance expansions, the Dirichlet solver and integral identities.

The two-point kernel 1/|r - r*| admits the double series

    1/|r - r*| = 2 sum_m sum_n  w_{m,n}^{-1} G_{m,n}(r) H_{-m,n}(r*),

valid for t* < t (first kind) or s < s* (second kind).  In the phase-free
edge-profile convention a single (m, n) term reads

    A_{m,n} = 2 (R R*)**(-1/2) W(s) W(s*) * w(K'-t) w(K'+t*) / w_{m,n},

with the interior/edge roles of s and t exchanged (and k -> k') for the
second kind.  Edge-profile products are assembled in log space, so the huge
intermediate profile values never leave the exponent:

    w(r1) w(r2) / w_{m,n} = exp(L(r1) + L(r2) - 2 L(K')) / (2 u(K')),

where L = log w and u = w'/w.  Negative azimuthal orders are folded by
conjugate symmetry (the real factors depend on |m| only), and terms are
accumulated in a fixed order (increasing m+n shells, then m) so serial
results are bit-reproducible.

The truncation-tail estimate follows the geometric decay of the terms: a
ratio p is fitted to the trailing diagonal shells and the tail is reported
as (last shell sum)/(1 - p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coords import BiCyclidePoint, _forward_RZ, chi_from_cylindrical, from_cartesian
from .elliptic import Modulus
from .errors import ConvergenceError, DomainError, PreconditionError
from .legendre import toroidal_Q, toroidal_Q_all
from .wangerin import EigenSolution, solve_eigen


@dataclass
class SeriesResult:
    """Value of a truncated double series with per-term diagnostics."""

    value: complex | float
    m_max: int
    n_max: int
    term_magnitudes: np.ndarray
    tail_estimate: float
    direct_value: float | None = None
    fitted_ratio: float | None = None

    def shell_sums(self) -> np.ndarray:
        """Summed |term| over the anti-diagonals m + n = const."""
        M = self.term_magnitudes
        nm, nn = M.shape
        out = np.zeros(nm + nn - 1)
        for i in range(nm):
            for j in range(nn):
                out[i + j] += M[i, j]
        return out


def _fit_ratio(shells: np.ndarray) -> float:
    """Geometric decay ratio fitted to the trailing diagonal shell sums."""
    nz = shells[shells > 0.0]
    if len(nz) < 3:
        return 0.5
    span = min(4, len(nz) - 1)
    ratio = (nz[-1] / nz[-1 - span]) ** (1.0 / span)
    return float(min(max(ratio, 1e-6), 0.999))


def _tail_from_shells(shells: np.ndarray) -> tuple[float, float]:
    """(tail estimate, fitted ratio) for a single-index series."""
    ratio = _fit_ratio(shells)
    return float(shells[-1] / (1.0 - ratio)), ratio


def _tail_from_frontier(mags: np.ndarray, shells: np.ndarray) -> tuple[float, float]:
    """(tail estimate, fitted ratio) for a double series.

    The truncation frontier is the last row plus last column of the term
    magnitude matrix (the terms added by the final enlargement of the
    truncation rectangle); the tail is its sum amplified by the fitted
    geometric ratio of the diagonal shells.
    """
    ratio = _fit_ratio(shells)
    frontier = float(mags[-1, :].sum() + mags[:, -1].sum() - mags[-1, -1])
    return frontier / (1.0 - ratio), ratio


def direct_distance(q, qstar) -> float:
    """1/|q - q*| for distinct Cartesian points."""
    d = math.dist(tuple(map(float, q)), tuple(map(float, qstar)))
    if d == 0.0:
        raise DomainError("direct_distance requires distinct points")
    return 1.0 / d


# -- single expansion terms (shared with the limit module) --------------


def _term_first(sol: EigenSolution, R: float, Rstar: float,
                s: float, sstar: float, t: float, tstar: float) -> float:
    Kp = sol.modulus.bigKprime
    L1, _ = sol.edge_log(Kp - t)
    L2, _ = sol.edge_log(Kp + tstar)
    ratio = math.exp(L1 + L2 - 2.0 * sol._L_mid) / (2.0 * sol._u_mid)
    return 2.0 / math.sqrt(R * Rstar) * sol.interior(s) * sol.interior(sstar) * ratio


def _term_second(sol2: EigenSolution, R: float, Rstar: float,
                 s: float, sstar: float, t: float, tstar: float) -> float:
    # sol2 lives at the complementary modulus: interior in t, edge in s + K.
    K = sol2.modulus.bigKprime  # = K(k) for the complement bundle
    L1, _ = sol2.edge_log(K + s)
    L2, _ = sol2.edge_log(K - sstar)
    ratio = math.exp(L1 + L2 - 2.0 * sol2._L_mid) / (2.0 * sol2._u_mid)
    return 2.0 / math.sqrt(R * Rstar) * sol2.interior(t) * sol2.interior(tstar) * ratio


def _ordered_shell_sum(contrib: np.ndarray) -> float:
    """Sum contrib[m, n] in increasing m+n shells, then increasing m."""
    nm, nn = contrib.shape
    total = 0.0
    for shell in range(nm + nn - 1):
        for m in range(min(shell, nm - 1) + 1):
            n = shell - m
            if n <= nn - 1:
                total += contrib[m, n]
    return total


def expand_distance(q, qstar, kind: str, modulus: Modulus,
                    m_max: int, n_max: int) -> SeriesResult:
    """Truncated reciprocal-distance expansion between two Cartesian points.

    ``kind='first'`` requires t* < t in bi-cyclide coordinates and
    ``kind='second'`` requires s < s*.
    """
    if kind not in ("first", "second"):
        raise DomainError(f"kind must be 'first' or 'second', got {kind!r}")
    direct = direct_distance(q, qstar)
    p = from_cartesian(q, modulus)
    ps = from_cartesian(qstar, modulus)
    if kind == "first" and not (ps.t < p.t):
        raise PreconditionError(
            f"first-kind expansion requires t* < t; got t={p.t}, t*={ps.t}"
        )
    if kind == "second" and not (p.s < ps.s):
        raise PreconditionError(
            f"second-kind expansion requires s < s*; got s={p.s}, s*={ps.s}"
        )
    R, _ = _forward_RZ(p.s, p.t, modulus)
    Rs, _ = _forward_RZ(ps.s, ps.t, modulus)
    dphi = p.phi - ps.phi

    A = np.zeros((m_max + 1, n_max + 1))
    contrib = np.zeros_like(A)
    for m in range(m_max + 1):
        nu = m - 0.5
        fold = 1.0 if m == 0 else 2.0 * math.cos(m * dphi)
        for n in range(n_max + 1):
            if kind == "first":
                sol = solve_eigen(nu, n, modulus)
                A[m, n] = _term_first(sol, R, Rs, p.s, ps.s, p.t, ps.t)
            else:
                sol2 = solve_eigen(nu, n, modulus.complement())
                A[m, n] = _term_second(sol2, R, Rs, p.s, ps.s, p.t, ps.t)
            contrib[m, n] = fold * A[m, n]
    mags = np.abs(A) * np.where(np.arange(m_max + 1)[:, None] == 0, 1.0, 2.0)
    value = _ordered_shell_sum(contrib)
    res = SeriesResult(value, m_max, n_max, mags, 0.0, direct)
    res.tail_estimate, res.fitted_ratio = _tail_from_frontier(mags, res.shell_sums())
    return res


def azimuthal_fourier(q, qstar, m_max: int) -> SeriesResult:
    """Azimuthal expansion of 1/|r - r*| through half-integer-degree Q.

    Partial sum of ``(pi sqrt(R R*))**(-1)  sum_m Q_{m-1/2}(chi) e^{im dphi}``
    with the negative orders folded in by conjugate symmetry.
    """
    direct = direct_distance(q, qstar)
    x, y, z = (float(v) for v in q)
    xs, ys, zs = (float(v) for v in qstar)
    R, Rs = math.hypot(x, y), math.hypot(xs, ys)
    if R == 0.0 or Rs == 0.0:
        raise DomainError("azimuthal expansion is undefined on the z-axis")
    dphi = math.atan2(y, x) - math.atan2(ys, xs)
    ch = chi_from_cylindrical(R, z, Rs, zs)
    qs = toroidal_Q_all(m_max, ch)
    pref = 1.0 / (math.pi * math.sqrt(R * Rs))
    terms = pref * qs * np.where(np.arange(m_max + 1) == 0, 1.0, 2.0)
    value = 0.0
    for m in range(m_max + 1):
        value += terms[m] * (1.0 if m == 0 else math.cos(m * dphi))
    mags = np.abs(terms)[:, None]
    tail, ratio = _tail_from_shells(mags[:, 0])
    return SeriesResult(value, m_max, 0, mags, tail, direct, ratio)


def addition_series(m: int, p: BiCyclidePoint, pstar: BiCyclidePoint,
                    n_max: int) -> SeriesResult:
    """Series for Q_{m-1/2}(chi) in products of the separated eigenfunctions.

    ``direct_value`` holds the half-integer Legendre value the series must
    reproduce; requires t* < t.
    """
    if m < 0:
        raise DomainError(f"addition_series requires m >= 0, got {m}")
    if not (pstar.t < p.t):
        raise PreconditionError(
            f"addition series requires t* < t; got t={p.t}, t*={pstar.t}"
        )
    mod = p.modulus
    R, z = _forward_RZ(p.s, p.t, mod)
    Rs, zs = _forward_RZ(pstar.s, pstar.t, mod)
    ch = chi_from_cylindrical(float(R), float(z), float(Rs), float(zs))
    direct = toroidal_Q(m, ch)
    nu = m - 0.5
    Kp = mod.bigKprime
    terms = np.zeros(n_max + 1)
    for n in range(n_max + 1):
        sol = solve_eigen(nu, n, mod)
        L1, _ = sol.edge_log(Kp - p.t)
        L2, _ = sol.edge_log(Kp + pstar.t)
        ratio = math.exp(L1 + L2 - 2.0 * sol._L_mid) / (2.0 * sol._u_mid)
        terms[n] = 2.0 * math.pi * sol.interior(p.s) * sol.interior(pstar.s) * ratio
    value = 0.0
    for n in range(n_max + 1):  # fixed increasing-n order
        value += terms[n]
    mags = np.abs(terms)[None, :]
    tail, fitted = _tail_from_shells(np.abs(terms))
    return SeriesResult(value, 0, n_max, mags, tail, direct, fitted)


def integral_relation(m: int, n: int, sstar: float, t: float, tstar: float,
                      modulus: Modulus) -> tuple[float, float]:
    """Both sides of the eigenfunction integral identity.

    lhs: ``w_{m,n} * integral_{-K}^{K} Q_{m-1/2}(chi(s; t, s*, t*)) W(s) ds``;
    rhs: ``2 pi w(K'-t) W(s*) w(K'+t*)``, both in the d_0 = 1 convention.
    """
    if not (tstar < t):
        raise PreconditionError(
            f"integral relation requires t* < t; got t={t}, t*={tstar}"
        )
    mod = modulus
    sol = solve_eigen(m - 0.5, n, mod)
    Rs, zs = _forward_RZ(sstar, tstar, mod)
    Kp = mod.bigKprime

    def quad(num: int) -> float:
        xg, wg = np.polynomial.legendre.leggauss(num)
        sg = mod.bigK * xg
        wg = mod.bigK * wg
        R, z = _forward_RZ(sg, t, mod)
        W = sol.interior(sg)
        vals = np.array(
            [toroidal_Q(m, chi_from_cylindrical(R[i], z[i], float(Rs), float(zs)))
             for i in range(num)]
        )
        return float(np.dot(wg, vals * W))

    prev = quad(160)
    for num in (320, 640, 1280):
        cur = quad(num)
        if abs(cur - prev) <= 1e-10 + 1e-9 * abs(cur):
            prev = cur
            break
        prev = cur
    else:
        raise ConvergenceError("integral relation quadrature did not settle")
    lhs = sol.wronskian * prev
    w1 = math.exp(sol.edge_log(Kp - t)[0])
    w2 = math.exp(sol.edge_log(Kp + tstar)[0])
    rhs = 2.0 * math.pi * w1 * sol.interior(sstar) * w2
    return lhs, rhs


# -- Dirichlet problem on the interior region of a t = t0 surface -------


@dataclass
class DirichletCoefficients:
    """Boundary-data coefficients c and series coefficients d = c / edge(t0)."""

    t0: float
    modulus: Modulus
    m_max: int
    n_max: int
    c: np.ndarray = field(repr=False)  # shape (2*m_max+1, n_max+1), row m+m_max
    d: np.ndarray = field(repr=False)

    def c_of(self, m: int, n: int) -> complex:
        return complex(self.c[m + self.m_max, n])

    def d_of(self, m: int, n: int) -> complex:
        return complex(self.d[m + self.m_max, n])


def _edge_factor_t(sol: EigenSolution, t: float) -> float:
    """Parity-adjusted first-kind edge factor (-1)**n w(K' - t)."""
    sign = -1.0 if sol.n % 2 else 1.0
    return sign * math.exp(sol.edge_log(sol.modulus.bigKprime - t)[0])


def dirichlet_coefficients(g: Callable, t0: float, modulus: Modulus,
                           m_max: int, n_max: int,
                           num_s: int = 200, num_phi: int | None = None,
                           ) -> DirichletCoefficients:
    """Tensor-quadrature coefficients of boundary data g(s, phi).

    g must accept numpy arrays (broadcast over a (s, phi) grid) and be
    square-integrable on (-K, K) x (-pi, pi].  The phi direction uses the
    trapezoid rule (spectrally accurate for periodic data), the s direction
    Gauss-Legendre.
    """
    if not (0.0 < t0 < modulus.bigKprime):
        raise DomainError(f"t0 must lie in (0, K'), got {t0}")
    if num_phi is None:
        num_phi = max(64, 8 * (m_max + 1))
    xg, wg = np.polynomial.legendre.leggauss(num_s)
    sg = modulus.bigK * xg
    ws = modulus.bigK * wg
    phis = -math.pi + 2.0 * math.pi * np.arange(num_phi) / num_phi
    G = np.asarray(g(sg[:, None], phis[None, :]), dtype=complex)
    c = np.zeros((2 * m_max + 1, n_max + 1), dtype=complex)
    d = np.zeros_like(c)
    phase = np.exp(-1j * np.outer(np.arange(-m_max, m_max + 1), phis))
    for n in range(n_max + 1):
        for am in range(m_max + 1):
            sol = solve_eigen(am - 0.5, n, modulus)
            W = sol.interior(sg)
            B = (ws * W) @ G  # shape (num_phi,)
            for m in (-am, am) if am else (0,):
                c[m + m_max, n] = (phase[m + m_max] @ B) / num_phi
                d[m + m_max, n] = c[m + m_max, n] / _edge_factor_t(sol, t0)
    return DirichletCoefficients(t0, modulus, m_max, n_max, c, d)


def dirichlet_solve(coeffs: DirichletCoefficients, p: BiCyclidePoint) -> complex:
    """Evaluate the separated-series solution at an interior point (t > t0)."""
    if not (p.t > coeffs.t0):
        raise PreconditionError(
            f"solution domain requires t > t0; got t={p.t}, t0={coeffs.t0}"
        )
    mod = coeffs.modulus
    R, _ = _forward_RZ(p.s, p.t, mod)
    Kp = mod.bigKprime
    total = 0.0 + 0.0j
    for shell in range(coeffs.m_max + coeffs.n_max + 1):
        for am in range(min(shell, coeffs.m_max) + 1):
            n = shell - am
            if n > coeffs.n_max:
                continue
            sol = solve_eigen(am - 0.5, n, mod)
            ratio = math.exp(
                sol.edge_log(Kp - p.t)[0] - sol.edge_log(Kp - coeffs.t0)[0]
            )
            W = sol.interior(p.s)
            for m in (-am, am) if am else (0,):
                cmn = coeffs.c[m + coeffs.m_max, n]
                if cmn == 0.0:
                    continue
                total += cmn * ratio * W * np.exp(1j * m * p.phi)
    return complex(total / math.sqrt(R))


def external_from_integral(m: int, n: int, t0: float, qstar, modulus: Modulus,
                           quad_spec: dict | None = None) -> complex:
    """External harmonic at q* from a surface integral over the t = t0 shell.

    Reproduces ``eval_harmonic(external1)`` for q* strictly outside the
    closed interior region (t* < t0).  The surface element on the shell is
    R h_s ds dphi, so the integrand reduces to R^{1/2} W(s) e^{im phi} over
    the (s, phi) rectangle divided by the chord length.
    """
    if not (0.0 < t0 < modulus.bigKprime):
        raise DomainError(f"t0 must lie in (0, K'), got {t0}")
    pstar = from_cartesian(qstar, modulus)
    if not (pstar.t < t0):
        raise PreconditionError(
            f"integral representation requires q* outside the region: t* < t0,"
            f" got t*={pstar.t}, t0={t0}"
        )
    spec = {"num_s": 120, "num_phi": 96, "levels": 4, "rtol": 1e-8}
    if quad_spec:
        spec.update(quad_spec)
    sol = solve_eigen(abs(m) - 0.5, n, modulus)
    xs, ys, zs = (float(v) for v in qstar)

    def surface_integral(num_s: int, num_phi: int) -> complex:
        xg, wg = np.polynomial.legendre.leggauss(num_s)
        sg = modulus.bigK * xg
        ws = modulus.bigK * wg
        phis = -math.pi + 2.0 * math.pi * np.arange(num_phi) / num_phi
        R, z = _forward_RZ(sg, t0, modulus)
        W = sol.interior(sg)
        X = R[:, None] * np.cos(phis)[None, :]
        Y = R[:, None] * np.sin(phis)[None, :]
        dist = np.sqrt((X - xs) ** 2 + (Y - ys) ** 2 + (z[:, None] - zs) ** 2)
        kern = np.exp(1j * m * phis)[None, :] / dist
        col = kern.sum(axis=1) * (2.0 * math.pi / num_phi)
        return complex(np.dot(ws * np.sqrt(R) * W, col))

    prev = surface_integral(spec["num_s"], spec["num_phi"])
    ns, nphi = spec["num_s"], spec["num_phi"]
    for _ in range(spec["levels"]):
        ns *= 2
        nphi *= 2
        cur = surface_integral(ns, nphi)
        if abs(cur - prev) <= spec["rtol"] * max(abs(cur), 1e-300):
            prev = cur
            break
        prev = cur
    else:
        raise ConvergenceError("surface quadrature did not settle")
    sign = -1.0 if n % 2 else 1.0
    Kp = modulus.bigKprime
    pref = sign * math.exp(2.0 * sol._L_mid - sol.edge_log(Kp - t0)[0]) * sol._u_mid
    return pref / (2.0 * math.pi) * prev
