"""Closed-form bi-spherical and prolate-spheroidal terms and the limit checks.

As k -> 0 the coordinates approach bi-spherical coordinates (with the angle
theta = pi/2 - s) and each expansion term A_{m,n} approaches the closed-form
bi-spherical term B_{m,n}.  As k -> 1, after rescaling lengths by 2/k' and
substituting sigma = s + K, the second-kind terms approach the prolate
spheroidal terms (with theta = pi/2 - t).  The A-terms here are exactly the
terms summed by :func:`bicyclide.greens.expand_distance`; the second-kind
variant carries the k'/2 scale factor of the rescaled points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .coords import Cartesian, _forward_RZ
from .elliptic import Modulus
from .errors import DomainError, PreconditionError
from .greens import _term_first, _term_second
from .legendre import ferrers_P, legendre_PQ
from .wangerin import solve_eigen


@dataclass(frozen=True)
class LimitTermSpec:
    """Indices and coordinates of both points for a closed-form term.

    ``radial`` is (t, t*) for the bi-spherical term and (sigma, sigma*) for
    the prolate term; ``angular`` is (theta, theta*) in both systems.
    """

    m: int
    n: int
    radial: tuple[float, float]
    angular: tuple[float, float]

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"index n must be >= 0, got {self.n}")


def bispherical_point(theta: float, t: float, phi: float) -> Cartesian:
    """Cartesian image of bi-spherical coordinates (theta, t, phi)."""
    den = math.cosh(t) - math.cos(theta)
    return Cartesian(
        math.sin(theta) * math.cos(phi) / den,
        math.sin(theta) * math.sin(phi) / den,
        math.sinh(t) / den,
    )


def prolate_point(sigma: float, theta: float, phi: float) -> Cartesian:
    """Cartesian image of prolate spheroidal coordinates (sigma, theta, phi)."""
    return Cartesian(
        math.sinh(sigma) * math.sin(theta) * math.cos(phi),
        math.sinh(sigma) * math.sin(theta) * math.sin(phi),
        math.cosh(sigma) * math.cos(theta),
    )


def bispherical_B(spec: LimitTermSpec) -> float:
    """Closed-form bi-spherical expansion term B_{m,n} (symmetric in +-m)."""
    m, n = abs(spec.m), spec.n
    t, ts = spec.radial
    th, ths = spec.angular
    if not (ts < t):
        raise PreconditionError(f"bi-spherical term requires t* < t; got t={t}, t*={ts}")
    if not (0.0 < th < math.pi and 0.0 < ths < math.pi):
        raise DomainError("angles must lie in (0, pi)")
    pref = math.sqrt((math.cosh(t) - math.cos(th)) * (math.cosh(ts) - math.cos(ths)))
    decay = math.exp(-(m + n + 0.5) * (t - ts))
    fac = math.factorial(n) / math.factorial(2 * m + n)
    return (
        pref * decay * fac
        * ferrers_P(m + n, m, math.cos(th))
        * ferrers_P(m + n, m, math.cos(ths))
    )


def prolate_B(spec: LimitTermSpec) -> float:
    """Closed-form prolate spheroidal expansion term B_{m,n}."""
    m, n = abs(spec.m), spec.n
    sig, sigs = spec.radial
    th, ths = spec.angular
    if not (0.0 < sig < sigs):
        raise PreconditionError(
            f"prolate term requires 0 < sigma < sigma*; got {sig}, {sigs}"
        )
    if not (0.0 < th < math.pi and 0.0 < ths < math.pi):
        raise DomainError("angles must lie in (0, pi)")
    fac = math.factorial(n) / math.factorial(2 * m + n)
    P, _ = legendre_PQ(m + n, m, math.cosh(sig))
    _, Q = legendre_PQ(m + n, m, math.cosh(sigs))
    return (
        (-1) ** m * (2 * m + 2 * n + 1) * fac * fac
        * ferrers_P(m + n, m, math.cos(th))
        * ferrers_P(m + n, m, math.cos(ths))
        * P * Q
    )


def bicyclide_A(kind: str, m: int, n: int, p: tuple[float, float],
                pstar: tuple[float, float], modulus: Modulus) -> float:
    """One (m, n) term of the truncated reciprocal-distance expansion.

    ``kind='first'``: p = (s, t), p* = (s*, t*) with t* < t; the term of
    :func:`bicyclide.greens.expand_distance` between the image points.
    ``kind='second'``: p = (sigma, t), p* = (sigma*, t*) with sigma < sigma*;
    the term of the second-kind expansion between the points rescaled by
    2/k', i.e. k'/2 times the unscaled second-kind term.
    """
    if m < 0:
        raise DomainError(f"bicyclide_A requires m >= 0, got {m}")
    nu = m - 0.5
    if kind == "first":
        s, t = p
        ss, ts = pstar
        if not (ts < t):
            raise PreconditionError(f"first-kind term requires t* < t; got t={t}, t*={ts}")
        sol = solve_eigen(nu, n, modulus)
        R, _ = _forward_RZ(s, t, modulus)
        Rs, _ = _forward_RZ(ss, ts, modulus)
        return _term_first(sol, float(R), float(Rs), s, ss, t, ts)
    if kind == "second":
        sig, t = p
        sigs, ts = pstar
        if not (sig < sigs):
            raise PreconditionError(
                f"second-kind term requires sigma < sigma*; got {sig}, {sigs}"
            )
        s, ss = sig - modulus.bigK, sigs - modulus.bigK
        sol2 = solve_eigen(nu, n, modulus.complement())
        R, _ = _forward_RZ(s, t, modulus)
        Rs, _ = _forward_RZ(ss, ts, modulus)
        return 0.5 * modulus.kprime * _term_second(sol2, float(R), float(Rs), s, ss, t, ts)
    raise DomainError(f"kind must be 'first' or 'second', got {kind!r}")


class ProfileLimitRow(NamedTuple):
    k: float
    ratio: float
    gap: float


class ProfileLimitCheck(NamedTuple):
    target: float
    rows: list[ProfileLimitRow]


def limit_profile_check(nu: float, n: int, sigma: float, sigma0: float,
                        k_sequence) -> ProfileLimitCheck:
    """Edge-profile ratios against their large-modulus Legendre targets.

    For half-integer nu (integer order mu = nu + 1/2) the ratio
    w_k'(2K - sigma) / w_k'(2K - sigma0) approaches

        sqrt(sinh sigma) Q_{n+mu}^{mu}(cosh sigma)
        -------------------------------------------
        sqrt(sinh sigma0) Q_{n+mu}^{mu}(cosh sigma0)

    as k -> 1.  Returns the target and one (k, ratio, gap) row per modulus.
    """
    mu = nu + 0.5
    if abs(mu - round(mu)) > 1e-12 or mu < 0:
        raise DomainError(f"limit check needs half-integer nu >= -1/2, got nu={nu}")
    mu = int(round(mu))
    if sigma <= 0.0 or sigma0 <= 0.0:
        raise DomainError("sigma and sigma0 must be positive")
    _, Q1 = legendre_PQ(n + mu, mu, math.cosh(sigma))
    _, Q0 = legendre_PQ(n + mu, mu, math.cosh(sigma0))
    target = math.sqrt(math.sinh(sigma)) * Q1 / (math.sqrt(math.sinh(sigma0)) * Q0)
    rows = []
    for k in k_sequence:
        mod = Modulus.from_k(float(k))
        if not (sigma < 2.0 * mod.bigK and sigma0 < 2.0 * mod.bigK):
            raise DomainError(f"sigma must lie in (0, 2K); 2K={2 * mod.bigK} at k={k}")
        sol2 = solve_eigen(nu, n, mod.complement())
        L1, _ = sol2.edge_log(2.0 * mod.bigK - sigma)
        L0, _ = sol2.edge_log(2.0 * mod.bigK - sigma0)
        ratio = math.exp(L1 - L0)
        rows.append(ProfileLimitRow(float(k), ratio, abs(ratio - target) / abs(target)))
    return ProfileLimitCheck(target, rows)
