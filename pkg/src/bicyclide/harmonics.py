"""Internal and external bi-cyclide harmonics of both kinds.

All four families are R-separated products

    R**(-1/2) * [interior factor] * [edge-profile factor] * exp(i m phi)

of degree ``nu = |m| - 1/2``.  Complex edge arguments are expressed through
the real edge profile w with unit leading coefficient; the unimodular
constant relating w to the analytically continued eigenfunction cancels in
every quantity this package exports, so harmonics are reported in the fixed
``d_0 = 1`` convention with the parity sign ``(-1)**n`` carried explicitly:

    internal1: R**(-1/2) W(s, k)   (-1)**n w_k (K'-t)  e^{im phi}
    external1: R**(-1/2) W(s, k)   (-1)**n w_k (K'+t)  e^{im phi}
    internal2: R**(-1/2) W(t, k')  (-1)**n w_k'(K+s)   e^{im phi}
    external2: R**(-1/2) W(t, k')  (-1)**n w_k'(K-s)   e^{im phi}

Each kind is singular on one closed z-axis segment (with ``b = k'/(1+k)``):
internal1 on -1/b <= z <= -b, external1 on b <= z <= 1/b, internal2 on
|z| >= 1/b, external2 on |z| <= b.  On the remaining axis points the m = 0
harmonics extend continuously and are evaluated by closed-form limits; for
m != 0 the axis value is 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .coords import Cartesian, from_cartesian
from .elliptic import Modulus, _ellipj, inverse_sn
from .errors import DomainError, SingularityError
from .wangerin import EigenSolution, solve_eigen

KINDS = ("internal1", "external1", "internal2", "external2")

#: Points with R/(1+|z|) below this are treated as on-axis input.
AXIS_TOL = 1e-12


@dataclass(frozen=True)
class HarmonicIndex:
    """Order m, index n and family selector for one harmonic."""

    m: int
    n: int
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n < 0:
            raise DomainError(f"index n must be >= 0, got {self.n}")

    @property
    def nu(self) -> float:
        return abs(self.m) - 0.5


def _solution_for(idx: HarmonicIndex, modulus: Modulus) -> EigenSolution:
    if idx.kind in ("internal1", "external1"):
        return solve_eigen(idx.nu, idx.n, modulus)
    return solve_eigen(idx.nu, idx.n, modulus.complement())


def eval_harmonic(idx: HarmonicIndex, q, modulus: Modulus) -> complex:
    """Value of the harmonic at a Cartesian point, d_0 = 1 convention."""
    x, y, z = float(q[0]), float(q[1]), float(q[2])
    if math.hypot(x, y) <= AXIS_TOL * (1.0 + abs(z)):
        return _axis_value(idx, z, modulus)
    p = from_cartesian((x, y, z), modulus)
    sol = _solution_for(idx, modulus)
    K, Kp = modulus.bigK, modulus.bigKprime
    sn, cn, dn = _ellipj(p.s, modulus.m)
    st, ct, dt = _ellipj(p.t, modulus.mprime)
    R = cn * ct / (1.0 - sn * dt)
    sign = -1.0 if idx.n % 2 else 1.0
    if idx.kind == "internal1":
        radial = sol.interior(p.s) * math.exp(sol.edge_log(Kp - p.t)[0])
    elif idx.kind == "external1":
        radial = sol.interior(p.s) * math.exp(sol.edge_log(Kp + p.t)[0])
    elif idx.kind == "internal2":
        radial = sol.interior(p.t) * math.exp(sol.edge_log(K + p.s)[0])
    else:
        radial = sol.interior(p.t) * math.exp(sol.edge_log(K - p.s)[0])
    return sign * radial / math.sqrt(R) * cmath.exp(1j * idx.m * p.phi)


def kelvin_transform(u: Callable[[Cartesian], complex]) -> Callable[[Cartesian], complex]:
    """Evaluator of the Kelvin transform r -> |r|**(-1) u(r / |r|**2)."""

    def transformed(q) -> complex:
        x, y, z = float(q[0]), float(q[1]), float(q[2])
        n2 = x * x + y * y + z * z
        if n2 == 0.0:
            raise DomainError("Kelvin transform is undefined at the origin")
        return u(Cartesian(x / n2, y / n2, z / n2)) / math.sqrt(n2)

    return transformed


# -- on-axis limits ----------------------------------------------------


def _t_on_left_edge(z: float, modulus: Modulus):
    """Axis parameter on the s = -K edge (|z| < b): dn(t,k') = (1-z^2)/(1+z^2)."""
    d = (1.0 - z * z) / (1.0 + z * z)
    snt = math.copysign(math.sqrt(max(1.0 - d * d, 0.0)) / modulus.kprime, z)
    t = inverse_sn(min(max(snt, -1.0), 1.0), modulus.kprime)
    cnt = math.sqrt(max(1.0 - snt * snt, 0.0))
    return t, cnt, d


def _t_on_right_edge(z: float, modulus: Modulus):
    """Axis parameter on the s = +K edge (|z| > 1/b): dn(t,k') = (z^2-1)/(z^2+1)."""
    d = (z * z - 1.0) / (z * z + 1.0)
    snt = math.copysign(math.sqrt(max(1.0 - d * d, 0.0)) / modulus.kprime, z)
    t = inverse_sn(min(max(snt, -1.0), 1.0), modulus.kprime)
    cnt = math.sqrt(max(1.0 - snt * snt, 0.0))
    return t, cnt, d


def _s_on_top_bottom_edge(z: float, modulus: Modulus):
    """Axis parameter on the t = +-K' edges (b < |z| < 1/b)."""
    a = (z * z - 1.0) / (modulus.k * (z * z + 1.0))
    s = inverse_sn(min(max(a, -1.0), 1.0), modulus.k)
    cns = math.sqrt(max(1.0 - a * a, 0.0))
    return s, a, cns


def _check_clear_of(z: float, lo: float, hi: float, what: str) -> None:
    pad = 1e-9 * max(1.0, abs(hi))
    if lo - pad <= z <= hi + pad:
        raise DomainError(f"point (0, 0, {z}) lies on the singular axis segment {what}")


def _near_landmark(z: float, modulus: Modulus) -> bool:
    b = modulus.b
    return any(abs(abs(z) - v) < 1e-9 * max(1.0, v) for v in (b, 1.0 / b))


def _axis_value(idx: HarmonicIndex, z: float, modulus: Modulus) -> complex:
    b = modulus.b
    k, kp = modulus.k, modulus.kprime
    if idx.kind == "external1":
        return _axis_value(
            HarmonicIndex(idx.m, idx.n, "internal1"), -z, modulus
        )
    if idx.kind == "external2":
        if abs(z) <= b * (1.0 + 1e-9):
            raise DomainError(f"point (0, 0, {z}) lies on the singular axis segment |z| <= b")
        inner = _axis_value(HarmonicIndex(idx.m, idx.n, "internal2"), 1.0 / z, modulus)
        return inner / abs(z)

    if idx.kind == "internal1":
        _check_clear_of(z, -1.0 / b, -b, "[-1/b, -b]")
    else:
        if abs(z) >= (1.0 / b) * (1.0 - 1e-9):
            raise DomainError(f"point (0, 0, {z}) lies on the singular axis segment |z| >= 1/b")
    if idx.m != 0:
        return 0.0 + 0.0j
    if _near_landmark(z, modulus):
        raise SingularityError(
            f"axis landmark z={z} is a rectangle corner; the one-sided limit"
            " formulas degenerate there"
        )

    sol = _solution_for(idx, modulus)
    sign = -1.0 if idx.n % 2 else 1.0
    Kp = modulus.bigKprime
    K = modulus.bigK
    c0 = float(sol.frobenius_c[0])

    if idx.kind == "internal1":
        if abs(z) < b:
            t, cnt, d = _t_on_left_edge(z, modulus)
            w = math.exp(sol.edge_log(Kp - t)[0])
            return complex(c0 * math.sqrt((1.0 + d) / (kp * cnt)) * w)
        if abs(z) > 1.0 / b:
            t, cnt, d = _t_on_right_edge(z, modulus)
            w = math.exp(sol.edge_log(Kp - t)[0])
            return complex(sign * c0 * math.sqrt((1.0 - d) / (kp * cnt)) * w)
        # b < z < 1/b: top edge t -> K'
        s, a, cns = _s_on_top_bottom_edge(z, modulus)
        return complex(sign * sol.interior(s) * math.sqrt((1.0 - k * a) / (k * cns)))

    # internal2
    if abs(z) < b:
        t, cnt, d = _t_on_left_edge(z, modulus)
        return complex(sign * math.sqrt((1.0 + d) / (kp * cnt)) * sol.interior(t))
    s, a, cns = _s_on_top_bottom_edge(z, modulus)
    w = math.exp(sol.edge_log(K + s)[0])
    if z > 0.0:
        return complex(sign * c0 * w * math.sqrt((1.0 - k * a) / (k * cns)))
    return complex(c0 * w * math.sqrt((1.0 - k * a) / (k * cns)))
