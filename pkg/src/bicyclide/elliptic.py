"""Jacobi elliptic functions and complete elliptic integrals.

All routines use the modulus convention: ``sn(u, k)`` etc. depend on the
modulus ``k`` in (0, 1), with parameter ``m = k**2`` passed to scipy.  Real
arguments are evaluated by scipy's descending-Landen implementation; complex
arguments ``u = x + i*y`` use the standard decomposition into real-argument
values at modulus ``k`` (for ``x``) and the complementary modulus ``k'``
(for ``y``):

    sn(x+iy, k) = (s*d1 + i*c*d*s1*c1) / (c1**2 + k**2 * s**2 * s1**2)

with ``s, c, d`` at ``(x, k)`` and ``s1, c1, d1`` at ``(y, k')``.  The
common denominator vanishes exactly at the poles ``u = i K' (mod 2K, 2iK')``,
which are guarded by a configurable proximity threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp

from .errors import DomainError, SingularityError

#: Default pole-proximity threshold (distance in the argument plane).
POLE_TOL = 1e-8

_GLAISHER_CODES = {
    "sc": ("s", "c"),
    "cs": ("c", "s"),
    "dc": ("d", "c"),
    "cd": ("c", "d"),
    "ns": ("n", "s"),
    "nc": ("n", "c"),
    "nd": ("n", "d"),
    "ds": ("d", "s"),
    "sd": ("s", "d"),
}


def _check_k(k: float) -> None:
    if not (0.0 < k < 1.0):
        raise DomainError(f"modulus k must lie in (0, 1), got {k}")


def complete_integrals(k: float) -> tuple[float, float]:
    """Complete elliptic integrals (K(k), E(k)) for modulus k in (0, 1).

    K is evaluated through ``ellipkm1`` with the complementary parameter
    ``k'**2 = (1-k)(1+k)`` so that accuracy is retained as k -> 1.
    """
    _check_k(k)
    kp2 = (1.0 - k) * (1.0 + k)
    return float(sp.ellipkm1(kp2)), float(sp.ellipe(k * k))


@dataclass(frozen=True)
class Modulus:
    """Elliptic parameter bundle shared by every module.

    Attributes:
        k: modulus in (0, 1).
        kprime: complementary modulus ``sqrt(1 - k**2)``.
        bigK: complete integral K(k).
        bigKprime: complete integral K(k').
        omega: ``pi / (2 K)``.
        b: axis landmark ``(1-k)/k' = k'/(1+k)`` in (0, 1).
    """

    k: float
    kprime: float = field(repr=False, default=0.0)
    bigK: float = field(repr=False, default=0.0)
    bigKprime: float = field(repr=False, default=0.0)
    omega: float = field(repr=False, default=0.0)
    b: float = field(repr=False, default=0.0)

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        _check_k(k)
        kp = math.sqrt((1.0 - k) * (1.0 + k))
        bigK, _ = complete_integrals(k)
        bigKp = float(sp.ellipkm1(k * k))
        return cls(
            k=float(k),
            kprime=kp,
            bigK=bigK,
            bigKprime=bigKp,
            omega=math.pi / (2.0 * bigK),
            b=kp / (1.0 + k),
        )

    def complement(self) -> "Modulus":
        """The bundle for the complementary modulus k'."""
        return Modulus.from_k(self.kprime)

    @property
    def m(self) -> float:
        """scipy parameter ``m = k**2``."""
        return self.k * self.k

    @property
    def mprime(self) -> float:
        """Complementary parameter ``1 - k**2``, computed cancellation-free."""
        return (1.0 - self.k) * (1.0 + self.k)


def _ellipj(u, m):
    """scipy ellipj without the amplitude; accepts scalars or arrays."""
    sn, cn, dn, _ = sp.ellipj(u, m)
    return sn, cn, dn


def _pole_distance(x: float, y: float, bigK: float, bigKp: float) -> float:
    """Distance from x+iy to the pole lattice iK' + 2aK + 2biK'."""
    rx = math.remainder(x, 2.0 * bigK)
    ry = math.remainder(y - bigKp, 2.0 * bigKp)
    return math.hypot(rx, ry)


def jacobi(u: complex, k: float, pole_tol: float = POLE_TOL):
    """Jacobi elliptic functions (sn, cn, dn) at argument u and modulus k.

    Real u returns a float triple, complex u a complex triple.  Raises
    :class:`SingularityError` if u lies within ``pole_tol`` of a pole.
    """
    _check_k(k)
    m = k * k
    uc = complex(u)
    if uc.imag == 0.0:
        sn, cn, dn = _ellipj(uc.real, m)
        return float(sn), float(cn), float(dn)
    bigK = float(sp.ellipkm1((1.0 - k) * (1.0 + k)))
    bigKp = float(sp.ellipkm1(m))
    if _pole_distance(uc.real, uc.imag, bigK, bigKp) < pole_tol:
        raise SingularityError(
            f"argument {u} lies within {pole_tol} of a pole of the Jacobi functions"
        )
    s, c, d = _ellipj(uc.real, m)
    s1, c1, d1 = _ellipj(uc.imag, 1.0 - m)
    den = c1 * c1 + m * (s * s1) ** 2
    sn = (s * d1 + 1j * c * d * s1 * c1) / den
    cn = (c * c1 - 1j * s * d * s1 * d1) / den
    dn = (d * c1 * d1 - 1j * m * s * c * s1) / den
    return sn, cn, dn


def glaisher(code: str, u: complex, k: float, denom_tol: float = POLE_TOL):
    """Glaisher quotient of Jacobi functions, e.g. ``dc = dn/cn``.

    Supported codes: sc, cs, dc, cd, ns, nc, nd, ds, sd.
    """
    if code not in _GLAISHER_CODES:
        raise DomainError(f"unknown Glaisher code {code!r}")
    num_c, den_c = _GLAISHER_CODES[code]
    sn, cn, dn = jacobi(u, k)
    table = {"s": sn, "c": cn, "d": dn, "n": 1.0}
    den = table[den_c]
    if abs(den) < denom_tol:
        raise SingularityError(
            f"denominator {den_c}n({u}, {k}) = {den} below threshold {denom_tol}"
        )
    return table[num_c] / den


def landen_descend(k: float) -> float:
    """Descending Landen modulus ``kappa = (1-k)/(1+k)``."""
    _check_k(k)
    return (1.0 - k) / (1.0 + k)


def landen_identities(k: float) -> tuple[float, float]:
    """Residuals of the two Landen K-relations for ``kappa = (1-k)/(1+k)``.

    Returns ``(K'(k) - (1+kappa) K(kappa), 2 K(k) - (1+kappa) K'(kappa))``;
    both vanish identically in exact arithmetic.
    """
    kappa = landen_descend(k)
    bigK, _ = complete_integrals(k)
    bigKp = float(sp.ellipkm1(k * k))
    kap_K, _ = complete_integrals(kappa)
    kap_Kp = float(sp.ellipkm1(kappa * kappa))
    return bigKp - (1.0 + kappa) * kap_K, 2.0 * bigK - (1.0 + kappa) * kap_Kp


def inverse_sn(x: float, k: float) -> float:
    """Inverse of sn(., k) on [-1, 1], i.e. u with sn(u, k) = x, |u| <= K."""
    _check_k(k)
    if not (-1.0 <= x <= 1.0):
        raise DomainError(f"inverse_sn requires |x| <= 1, got {x}")
    return float(np.sign(x)) * float(sp.ellipkinc(math.asin(abs(x)), k * k))
