"""Bi-cyclide coordinates: forward/inverse maps, metric and related geometry.

A point has coordinates ``(s, t, phi)`` with ``s in (-K, K)``,
``t in (-K', K')``, ``phi in (-pi, pi]`` relative to a modulus bundle.  The
cylindrical radius and height are

    R = cn(s,k) cn(t,k') / (1 - sn(s,k) dn(t,k')),
    z = dn(s,k) sn(t,k') / (1 - sn(s,k) dn(t,k')).

The planar map has the complex form ``z + iR = i (sc + nc)(s - i t, k)``,
which makes the inverse a one-complex-variable Newton iteration; the seed is
recovered in closed form from

    sn(s,k) dn(t,k') = (R^2+z^2-1)/(R^2+z^2+1)

together with the defining quotients, which reduce to a quadratic in
``sn(s,k)**2``.  The rectangle boundary maps to the z-axis with segment
landmarks at ``+-b`` and ``+-1/b``, ``b = k'/(1+k)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .elliptic import Modulus, _ellipj, inverse_sn, jacobi
from .errors import ConvergenceError, DomainError


class Cartesian(NamedTuple):
    x: float
    y: float
    z: float


class Cylindrical(NamedTuple):
    R: float
    z: float
    phi: float


@dataclass(frozen=True)
class BiCyclidePoint:
    """A point in (s, t, phi) coordinates at a fixed modulus."""

    s: float
    t: float
    phi: float
    modulus: Modulus

    def __post_init__(self):
        K, Kp = self.modulus.bigK, self.modulus.bigKprime
        if not (-K < self.s < K):
            raise DomainError(f"s={self.s} outside (-K, K) = (-{K}, {K})")
        if not (-Kp < self.t < Kp):
            raise DomainError(f"t={self.t} outside (-K', K') = (-{Kp}, {Kp})")
        if not (-math.pi < self.phi <= math.pi):
            raise DomainError(f"phi={self.phi} outside (-pi, pi]")


def _forward_RZ(s, t, modulus: Modulus):
    """Vectorized (R, z) of the planar map; open-rectangle arguments."""
    sn, cn, dn = _ellipj(s, modulus.m)
    st, ct, dt = _ellipj(t, modulus.mprime)
    den = 1.0 - sn * dt
    return cn * ct / den, dn * st / den


def to_cylindrical(p: BiCyclidePoint) -> Cylindrical:
    R, z = _forward_RZ(p.s, p.t, p.modulus)
    return Cylindrical(float(R), float(z), p.phi)


def to_cartesian(p: BiCyclidePoint) -> Cartesian:
    """Cartesian image (R cos(phi), R sin(phi), z) of a coordinate point."""
    R, z, phi = to_cylindrical(p)
    return Cartesian(R * math.cos(phi), R * math.sin(phi), z)


def from_cartesian(q, modulus: Modulus, tol: float = 1e-13, max_iter: int = 40) -> BiCyclidePoint:
    """Invert the coordinate map for a point off the z-axis.

    Closed-form recovery of sn(s,k) and dn(t,k') seeds a Newton iteration on
    the conjugate-analytic form ``z + iR = i (sc + nc)(s - i t, k)``.
    """
    x, y, z = float(q[0]), float(q[1]), float(q[2])
    R = math.hypot(x, y)
    if R == 0.0:
        raise DomainError("from_cartesian is undefined on the z-axis; use axis_map")
    phi = math.atan2(y, x)
    k, kp = modulus.k, modulus.kprime
    m = modulus.m

    rho = R * R + z * z
    A = (rho - 1.0) / (rho + 1.0)  # sn(s,k) dn(t,k')
    B = 2.0 * R / (rho + 1.0)      # cn(s,k) cn(t,k')
    S = m + A * A + modulus.mprime * B * B
    disc = max(S * S - 4.0 * m * A * A, 0.0)
    a2 = 2.0 * A * A / (S + math.sqrt(disc))
    a2 = min(a2, 1.0)
    a = math.copysign(math.sqrt(a2), A)
    d2 = m + modulus.mprime * B * B / max(1.0 - a2, 1e-300)
    d2 = min(max(d2, m), 1.0)
    snt = math.copysign(math.sqrt(max(1.0 - d2, 0.0)) / kp, z)
    s = inverse_sn(a, k)
    t = inverse_sn(min(max(snt, -1.0), 1.0), kp)

    # Newton polish on xi = s - i t; g(xi) = i (sn+1)/cn, g'(xi) = i dn (1+sn)/cn^2
    target = complex(z, R)
    xi = complex(s, -t)
    scale = 1.0 + abs(target)
    for _ in range(max_iter):
        sn, cn, dn = jacobi(xi, k)
        g = 1j * (sn + 1.0) / cn
        resid = g - target
        if abs(resid) <= tol * scale:
            break
        xi -= resid / (1j * dn * (1.0 + sn) / (cn * cn))
    else:
        raise ConvergenceError(
            f"coordinate inversion did not reach {tol} at {q}; residual {abs(resid)}"
        )
    return BiCyclidePoint(xi.real, -xi.imag, phi, modulus)


def metric_h(p: BiCyclidePoint) -> tuple[float, float, float]:
    """Scale factors (h_s, h_t, h_phi); h_s = h_t and h_phi = R."""
    mod = p.modulus
    sn, cn, dn = _ellipj(p.s, mod.m)
    st, ct, dt = _ellipj(p.t, mod.mprime)
    R = cn * ct / (1.0 - sn * dt)
    h = R * math.sqrt((dn / cn) ** 2 + mod.m * (st / ct) ** 2)
    return float(h), float(h), float(R)


def cyclide_polys(q, s0: float, t0: float, modulus: Modulus) -> tuple[float, float]:
    """The two quartic surface polynomials (P1, P2) at a Cartesian point.

    P1 vanishes exactly on the coordinate surfaces t = +-t0 and P2 on
    s = +-s0.
    """
    K, Kp = modulus.bigK, modulus.bigKprime
    if not (-K < s0 < K) or not (-Kp < t0 < Kp):
        raise DomainError(f"surface parameters (s0={s0}, t0={t0}) outside the open rectangle")
    x, y, z = float(q[0]), float(q[1]), float(q[2])
    r2 = x * x + y * y + z * z
    plus = (r2 + 1.0) ** 2
    minus = (r2 - 1.0) ** 2
    sn0, cn0, dn0 = _ellipj(t0, modulus.mprime)
    p1 = sn0 * sn0 * plus - modulus.m * (sn0 / dn0) ** 2 * minus - 4.0 * z * z
    sn1, cn1, dn1 = _ellipj(s0, modulus.m)
    p2 = sn1 * sn1 * plus - minus - 4.0 * modulus.mprime * (sn1 / dn1) ** 2 * z * z
    return float(p1), float(p2)


def cyclide_polys_factored(p: BiCyclidePoint, s0: float, t0: float) -> tuple[float, float]:
    """Factored (s, t)-forms of (P1, P2), used to cross-check the quartics."""
    mod = p.modulus
    sn, cn, dn = _ellipj(p.s, mod.m)
    st, ct, dt = _ellipj(p.t, mod.mprime)
    sn0, _, dn0 = _ellipj(t0, mod.mprime)
    sn1, _, dn1 = _ellipj(s0, mod.m)
    den = (1.0 - sn * dt) ** 2
    p1 = 4.0 * (sn0 * sn0 - st * st) * (dn0 * dn0 - mod.m * sn * sn) / (dn0 * dn0 * den)
    p2 = 4.0 * (sn1 * sn1 - sn * sn) * (dt * dt - mod.m * sn1 * sn1) / (dn1 * dn1 * den)
    return float(p1), float(p2)


def chi_from_cylindrical(R: float, z: float, Rstar: float, zstar: float) -> float:
    """Cross-point kernel argument (R^2 + R*^2 + (z-z*)^2) / (2 R R*)."""
    if R <= 0.0 or Rstar <= 0.0:
        raise DomainError("chi is undefined on the z-axis")
    return (R * R + Rstar * Rstar + (z - zstar) ** 2) / (2.0 * R * Rstar)


def chi(p: BiCyclidePoint, pstar: BiCyclidePoint) -> float:
    """Kernel argument chi > 1 in elliptic-function product form.

    chi = nc nc* nc nc* - dc sc dc* sc* - sc dc sc* dc* with the s-factors at
    modulus k and the t-factors at k'; equals the cylindrical quotient
    ``(R^2+R*^2+(z-z*)^2)/(2RR*)`` of the two image points.
    """
    mod = p.modulus
    sn, cn, dn = _ellipj(p.s, mod.m)
    st, ct, dt = _ellipj(p.t, mod.mprime)
    sn_, cn_, dn_ = _ellipj(pstar.s, mod.m)
    st_, ct_, dt_ = _ellipj(pstar.t, mod.mprime)
    val = (
        1.0 / (cn * ct * cn_ * ct_)
        - (dn / cn) * (st / ct) * (dn_ / cn_) * (st_ / ct_)
        - (sn / cn) * (dt / ct) * (sn_ / cn_) * (dt_ / ct_)
    )
    return float(val)


def axis_map(s: float, t: float, modulus: Modulus, tol: float = 1e-12) -> float:
    """z-axis image of a point on the coordinate-rectangle boundary.

    The closed boundary maps to R = 0; traversed clockwise the image sweeps
    the axis from -inf to +inf with landmarks -1/b, -b, b, 1/b at the
    corners.  The corner (K, 0) is excluded (the map is singular there).
    """
    K, Kp = modulus.bigK, modulus.bigKprime
    k, kp = modulus.k, modulus.kprime
    on_s = abs(abs(s) - K) <= tol
    on_t = abs(abs(t) - Kp) <= tol
    if not (on_s or on_t):
        raise DomainError(f"({s}, {t}) is not on the rectangle boundary")
    if abs(s) > K + tol or abs(t) > Kp + tol:
        raise DomainError(f"({s}, {t}) is outside the closed rectangle")
    if on_s and s > 0 and abs(t) <= tol:
        raise DomainError("the corner (K, 0) is excluded from the axis map")
    if on_t:
        sn, _, dn = _ellipj(s, modulus.m)
        if t > 0:
            return float(dn / (1.0 - k * sn))
        return float(-dn / (1.0 - k * sn))
    st, _, dt = _ellipj(t, modulus.mprime)
    if s > 0:
        return float(kp * st / (1.0 - dt))
    return float(kp * st / (1.0 + dt))


def inversion_M(q) -> Cartesian:
    """Sphere inversion centered at (0, 0, 1) with radius sqrt(2).

    Exchanges the two coordinate-surface families: the image of a point with
    coordinates (s, t, phi) at modulus k has coordinates (t, s, phi) at the
    complementary modulus k'.
    """
    x, y, z = float(q[0]), float(q[1]), float(q[2])
    den = x * x + y * y + (z - 1.0) ** 2
    if den == 0.0:
        raise DomainError("inversion_M is undefined at its center (0, 0, 1)")
    return Cartesian(2.0 * x / den, 2.0 * y / den, (x * x + y * y + z * z - 1.0) / den)


def kelvin_point(q) -> Cartesian:
    """Inversion at the unit sphere, q -> q / |q|^2 (s -> -s in coordinates)."""
    x, y, z = float(q[0]), float(q[1]), float(q[2])
    n2 = x * x + y * y + z * z
    if n2 == 0.0:
        raise DomainError("kelvin_point is undefined at the origin")
    return Cartesian(x / n2, y / n2, z / n2)


def moon_spencer_convert(mu: float, nu: float, kappa: float) -> BiCyclidePoint:
    """Convert Moon-Spencer style coordinates (mu, nu) at modulus kappa.

    With ``k = (1-kappa)/(1+kappa)`` the images agree:
    ``t = (1+kappa) mu`` and ``s = (1+kappa) nu - K(k)``, and the planar
    point satisfies ``z + iR = sqrt(kappa) sn(mu + i nu, kappa)``.
    """
    if not (0.0 < kappa < 1.0):
        raise DomainError(f"kappa must lie in (0, 1), got {kappa}")
    mod_kappa = Modulus.from_k(kappa)
    if not (-mod_kappa.bigK < mu < mod_kappa.bigK):
        raise DomainError(f"mu={mu} outside (-K(kappa), K(kappa))")
    if not (0.0 < nu < mod_kappa.bigKprime):
        raise DomainError(f"nu={nu} outside (0, K'(kappa))")
    k = (1.0 - kappa) / (1.0 + kappa)
    mod = Modulus.from_k(k)
    t = (1.0 + kappa) * mu
    s = (1.0 + kappa) * nu - mod.bigK
    return BiCyclidePoint(s, t, 0.0, mod)
