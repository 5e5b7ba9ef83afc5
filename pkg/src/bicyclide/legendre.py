"""Ferrers and associated Legendre functions, including half-integer degree.

On the cut (-1, 1) the Ferrers functions of the first kind are delegated to
scipy (``lpmv``).  On (1, oo) both kinds are generated by recurrence in the
real-valued convention

    P_l^m(x) = (x**2-1)**(m/2) * d^m/dx^m P_l(x),
    Q_l^m(x) = (x**2-1)**(m/2) * d^m/dx^m Q_l(x),

whose Wronskian is ``P Q' - P' Q = (-1)**m (l+m)!/(l-m)! / (1-x**2)``.
First-kind values grow with degree, so upward degree recurrence is stable;
second-kind values are recessive and are generated by a backward (Miller)
recurrence anchored at the closed form of Q_0.  Order raising is dominant for
both kinds and is done upward from the degree sequences.

Half-integer degree values Q_{m-1/2} (toroidal harmonics) use the same
Miller scheme anchored at the complete-elliptic-integral closed form of
Q_{-1/2}.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from .errors import DomainError

#: Contamination target for Miller starting offsets (decimal digits).
_MILLER_DIGITS = 40.0


def ferrers_P(l: int, m: int, x: float) -> float:
    """Ferrers function of the first kind P_l^m(x) on -1 < x < 1."""
    if l < 0 or m < 0 or m > l:
        raise DomainError(f"ferrers_P requires 0 <= m <= l, got l={l}, m={m}")
    if not (-1.0 < x < 1.0):
        raise DomainError(f"ferrers_P requires |x| < 1, got x={x}")
    return float(sp.lpmv(m, l, x))


def _q_degree_sequence(lmax: int, x: float) -> np.ndarray:
    """Q_0 .. Q_lmax at x > 1 by backward recurrence (Miller)."""
    rho = x + math.sqrt(x * x - 1.0)
    buf = int(_MILLER_DIGITS * math.log(10.0) / (2.0 * math.log(rho))) + 15
    top = lmax + buf
    t = np.zeros(top + 2)
    t[top] = 1.0
    for l in range(top, 0, -1):
        t[l - 1] = ((2 * l + 1) * x * t[l] - (l + 1) * t[l + 1]) / l
    q0 = 0.5 * math.log((x + 1.0) / (x - 1.0))
    return t[: lmax + 1] * (q0 / t[0])


def _p_degree_sequence(lmax: int, m: int, x: float) -> np.ndarray:
    """P_m^m .. P_lmax^m at x > 1 by the stable upward degree recurrence."""
    w = math.sqrt(x * x - 1.0)
    vals = np.zeros(lmax + 1)
    pmm = 1.0
    for i in range(1, m + 1):
        pmm *= (2 * i - 1) * w
    vals[m] = pmm
    if lmax > m:
        vals[m + 1] = (2 * m + 1) * x * pmm
    for l in range(m + 1, lmax):
        vals[l + 1] = ((2 * l + 1) * x * vals[l] - (l + m) * vals[l - 1]) / (l - m + 1)
    return vals


def _raise_order(l: int, m: int, y0: float, y1: float, x: float) -> float:
    # y^{mu+2} = -2 x (mu+1) (x^2-1)^{-1/2} y^{mu+1} + (l-mu)(l+mu+1) y^mu
    w = math.sqrt(x * x - 1.0)
    if m == 0:
        return y0
    ys = [y0, y1]
    for mu in range(0, m - 1):
        ys.append(-2.0 * x * (mu + 1) / w * ys[mu + 1] + (l - mu) * (l + mu + 1) * ys[mu])
    return ys[m]


def legendre_PQ(l: int, m: int, x: float) -> tuple[float, float]:
    """Associated Legendre functions (P_l^m(x), Q_l^m(x)) on x > 1.

    Real-valued convention as in the module docstring; validated against the
    Wronskian identity ``P Q' - P' Q = (-1)**m (l+m)!/(l-m)! / (1-x**2)``.
    """
    if l < 0 or m < 0 or m > l:
        raise DomainError(f"legendre_PQ requires 0 <= m <= l, got l={l}, m={m}")
    if not (x > 1.0):
        raise DomainError(f"legendre_PQ requires x > 1, got x={x}")
    p = float(_p_degree_sequence(l, m, x)[l])
    q = _q_degree_sequence(max(l, 1), x)
    if m == 0:
        return p, float(q[l])
    w = math.sqrt(x * x - 1.0)
    if l == 0:
        raise DomainError("legendre_PQ requires m <= l")
    y0 = float(q[l])
    y1 = l * (x * q[l] - q[l - 1]) / w
    return p, float(_raise_order(l, m, y0, y1, x))


def toroidal_Q_all(mmax: int, chi: float) -> np.ndarray:
    """Q_{m-1/2}(chi) for m = 0..mmax at chi > 1 (backward recurrence).

    The normalization anchor is the closed form
    ``Q_{-1/2}(chi) = sqrt(2/(1+chi)) K(sqrt(2/(1+chi)))``.
    """
    if not (chi > 1.0):
        raise DomainError(f"toroidal_Q requires chi > 1, got chi={chi}")
    if mmax < 0:
        raise DomainError("toroidal_Q requires m >= 0")
    rho = chi + math.sqrt(chi * chi - 1.0)
    buf = int(_MILLER_DIGITS * math.log(10.0) / (2.0 * math.log(rho))) + 15
    top = mmax + buf
    t = np.zeros(top + 2)
    t[top] = 1.0
    for mm in range(top, 0, -1):
        t[mm - 1] = (2 * mm * chi * t[mm] - (mm + 0.5) * t[mm + 1]) / (mm - 0.5)
    mu2 = 2.0 / (1.0 + chi)
    seed = math.sqrt(mu2) * float(sp.ellipk(mu2))
    return t[: mmax + 1] * (seed / t[0])


def toroidal_Q(m: int, chi: float) -> float:
    """Legendre function of the second kind Q_{m-1/2}(chi), chi > 1."""
    return float(toroidal_Q_all(m, chi)[m])
