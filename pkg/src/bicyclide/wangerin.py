"""Lame-Wangerin eigenfunctions: the separated ODE solved on (-K, K).

The interior problem is

    W'' + (Lambda - nu(nu+1) dc^2(s, k)) W = 0,   s in (-K, K),

for the solution recessive (exponent nu+1) at both endpoints; the n-th
eigenvalue ``Lambda_nu^n(k)`` is indexed by the interior zero count n.  With
``x = K - s`` the potential becomes ``nu(nu+1) ns^2(x, k)``, so a Frobenius
series ``W = sum c_l x^(nu+1+2l)`` with the two-term-per-shell recurrence

    2 l (2 nu + 2 l + 1) c_l = C c_{l-1} + nu(nu+1) sum_J e_J c_{l-J},

(e_J the Laurent coefficients of ``x^2 ns^2(x,k)``; C the additive constant
of the ODE) starts the integration a safe distance from the singular
endpoint.  Eigenvalues are isolated by a Pruefer-angle shooting count, which
is monotone in Lambda, and then polished on the smooth parity residual
W'(0) (even n) or W(0) (odd n).  At nu = -1/2 both endpoint exponents equal
1/2; the log-free series above is the recessive branch and the recurrence
denominators stay nonzero, so no special casing is needed.

The edge profile w(r) is the real-valued restriction of the eigenfunction to
the complex segment through the endpoint, normalized by a unit leading
coefficient (d_0 = 1).  It satisfies ``w'' = (Lambda + nu(nu+1) cs^2(r, k')) w``
on (0, 2K') and never vanishes there, so it is propagated in log form:
``(log w)' = u`` with the Riccati equation ``u' = q - u^2``.  All quantities
exported to the expansion modules (term ratios, Wronskians) are built from
``log w`` and ``u``, which keeps huge profile values exact in the exponent.

The Wronskian of the two edge solutions is evaluated at the midpoint,
``w_{m,n} = 2 w(K') w'(K')``, and is constant in the matching parameter.
"""

from __future__ import annotations

import json
import math
import os
import threading

import numpy as np
from scipy import special as sp
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .elliptic import Modulus, _ellipj
from .errors import ConvergenceError, DomainError, SingularityError

#: Distance (in the coordinate rectangle) kept clear of singular segments.
SINGULAR_GUARD = 1e-6

_CACHE_ENV = "BICYCLIDE_CACHE_DIR"
_RECORD_VERSION = 1

_cache: dict[tuple, "EigenSolution"] = {}
_cache_lock = threading.RLock()


def _ns2_coeffs(m: float, nterms: int = 60) -> np.ndarray:
    """Laurent coefficients e_J of x^2 ns^2(x, k) = 1 + sum e_J x^(2J).

    ns^2 differs from the Weierstrass pe-function of the (2K, 2iK') lattice
    by the constant (1+k^2)/3, so the e_J follow the classical quadratic
    recursion for the pe Laurent coefficients with invariants
    g2 = (4/3)(1 - m + m^2), g3 = -(4/27)(1+m)(2-m)(2m-1).
    """
    g2 = (4.0 / 3.0) * (1.0 - m + m * m)
    g3 = -(4.0 / 27.0) * (1.0 + m) * (2.0 - m) * (2.0 * m - 1.0)
    a = np.zeros(nterms + 1)
    a[2] = g2 / 20.0
    a[3] = g3 / 28.0
    for j in range(4, nterms + 1):
        a[j] = 3.0 * np.dot(a[2 : j - 1], a[j - 2 : 1 : -1]) / ((2 * j + 1) * (j - 3))
    e = a.copy()
    e[1] = (1.0 + m) / 3.0
    return e


def _frobenius(nu: float, C: float, e: np.ndarray, xref: float, cap: int = 200) -> np.ndarray:
    """Series coefficients c_l (c_0 = 1) for W'' = (nu(nu+1) ns^2 + C) W."""
    nn1 = nu * (nu + 1.0)
    c = np.zeros(cap + 1)
    c[0] = 1.0
    x2 = xref * xref
    biggest = 1.0
    for L in range(1, cap + 1):
        s = C * c[L - 1]
        top = min(L, len(e) - 1)
        s += nn1 * np.dot(e[1 : top + 1], c[L - 1 : L - top - 1 : -1] if L - top - 1 >= 0 else c[L - 1 :: -1])
        c[L] = s / (2.0 * L * (2.0 * nu + 2.0 * L + 1.0))
        term = abs(c[L]) * x2**L
        biggest = max(biggest, term)
        if term < 1e-18 * biggest and L > 5:
            return c[: L + 1]
    raise ConvergenceError(
        f"endpoint series did not converge within {cap} terms at xref={xref}"
    )


def _series_WWp(nu: float, c: np.ndarray, x):
    """(W, dW/dx) of the endpoint series, vectorized in x > 0."""
    x = np.asarray(x, dtype=float)
    y = x * x
    S = np.zeros_like(y)
    T = np.zeros_like(y)
    for l in range(len(c) - 1, -1, -1):
        S = S * y + c[l]
        T = T * y + c[l] * (nu + 1.0 + 2.0 * l)
    return x ** (nu + 1.0) * S, x**nu * T


def _start_point(nu: float, C: float, interval: float, rho: float) -> float:
    """Series start distance: inside the convergence disc, clear of zeros,
    and small enough that the alternating series loses at most ~3 digits."""
    scale = 7.0 / math.sqrt(abs(C) + 1.0)
    if nu >= 0.5:
        scale = min(scale, 0.8 * math.sqrt(nu * (nu + 1.0) / (abs(C) + 1.0)))
    else:
        scale = min(scale, 0.6 / math.sqrt(abs(C) + 1.0))
    return min(0.35 * rho, 0.9 * interval, max(scale, 1e-3))


def _recessive_start(nu: float, C: float, e: np.ndarray, interval: float, rho: float):
    """Start abscissa plus series values with W, W' > 0 guaranteed."""
    x0 = _start_point(nu, C, interval, rho)
    for _ in range(60):
        c = _frobenius(nu, C, e, x0)
        W0, Wp0 = _series_WWp(nu, c, x0)
        if W0 > 0.0 and Wp0 > 0.0:
            return x0, c, float(W0), float(Wp0)
        x0 *= 0.5
    raise ConvergenceError(f"no positive recessive start found (nu={nu}, C={C})")


def _theta_end(nu: float, lam: float, mod: Modulus, e: np.ndarray, rho: float) -> float:
    """Pruefer angle at the interval center for the recessive solution."""
    m = mod.m
    nn1 = nu * (nu + 1.0)
    x0, _, W0, Wp0 = _recessive_start(nu, -lam, e, mod.bigK, rho)
    th0 = math.atan2(W0, Wp0)

    def rhs(tau, th):
        sn, _, _ = _ellipj(tau, m)
        Q = lam - nn1 / (sn * sn)
        si, co = math.sin(th[0]), math.cos(th[0])
        return [co * co + Q * si * si]

    sol = solve_ivp(rhs, (x0, mod.bigK), [th0], method="DOP853", rtol=1e-11, atol=1e-11)
    if not sol.success:
        raise ConvergenceError(f"Pruefer integration failed at lambda={lam}")
    return float(sol.y[0, -1])


def _parity_residual(nu: float, lam: float, mod: Modulus, e: np.ndarray, rho: float, parity: int) -> float:
    """Scaled W'(0) (even) or W(0) (odd) of the recessive solution."""
    m = mod.m
    nn1 = nu * (nu + 1.0)
    x0, _, W0, Wp0 = _recessive_start(nu, -lam, e, mod.bigK, rho)

    def rhs(tau, y):
        sn, _, _ = _ellipj(tau, m)
        Q = lam - nn1 / (sn * sn)
        return [y[1], -Q * y[0]]

    sol = solve_ivp(rhs, (x0, mod.bigK), [W0, Wp0], method="DOP853", rtol=1e-13, atol=1e-290)
    if not sol.success:
        raise ConvergenceError(f"shooting integration failed at lambda={lam}")
    W, Wp = sol.y[0, -1], sol.y[1, -1]
    scale = math.hypot(W, Wp / math.sqrt(abs(lam) + 1.0))
    return float((Wp if parity == 0 else W) / scale)


def eigenvalue_lower_bound(nu: float, n: int, mod: Modulus) -> float:
    """Quoted lower bound: omega^2 (n+nu+1)^2 for nu >= 0, omega^2/2 - 1/4 at nu = -1/2."""
    om2 = mod.omega * mod.omega
    if nu >= 0.0:
        return om2 * (n + nu + 1.0) ** 2
    return 0.5 * om2 - 0.25


def _find_lambda(nu: float, n: int, mod: Modulus, tol: float) -> float:
    e = _ns2_coeffs(mod.m)
    rho = min(2.0 * mod.bigK, 2.0 * mod.bigKprime)
    est = mod.omega**2 * (n + nu + 1.0) ** 2
    lo = eigenvalue_lower_bound(nu, n, mod) * (1.0 - 1e-9) - 1e-12
    target = (n + 1) * math.pi / 2.0

    def D(lam):
        return _theta_end(nu, lam, mod, e, rho) - target

    dlo = D(lo)
    shrink = 0
    while dlo >= 0.0 and shrink < 60:
        lo -= max(1.0, abs(lo))
        dlo = D(lo)
        shrink += 1
    if dlo >= 0.0:
        raise ConvergenceError(f"no lower bracket for (nu={nu}, n={n}, k={mod.k})")
    hi = max(1.7 * est + 2.0, lo + 2.0)
    grow = 0
    while D(hi) <= 0.0:
        hi = lo + 2.0 * (hi - lo)
        grow += 1
        if grow > 60:
            raise ConvergenceError(
                f"no upper bracket for (nu={nu}, n={n}, k={mod.k}); scanned up to {hi}"
            )
    lam1 = brentq(D, lo, hi, xtol=1e-4 * max(1.0, abs(est)), rtol=1e-10)

    f = lambda lam: _parity_residual(nu, lam, mod, e, rho, n % 2)
    width = 1e-4 * max(1.0, abs(lam1))
    a, b = lam1 - width, lam1 + width
    fa, fb = f(a), f(b)
    grow = 0
    while fa * fb > 0.0:
        width *= 2.0
        a, b = lam1 - width, lam1 + width
        fa, fb = f(a), f(b)
        grow += 1
        if grow > 40:
            raise ConvergenceError(
                f"polish bracket lost for (nu={nu}, n={n}, k={mod.k}) near {lam1}"
            )
    return brentq(f, a, b, xtol=tol * max(1.0, abs(lam1)), rtol=1e-15)


class EigenSolution:
    """One eigenpair with evaluable interior and edge-profile representations.

    Construction is expensive; instances are immutable after construction and
    safe to share between threads.  Use :func:`solve_eigen` to obtain cached
    instances.
    """

    def __init__(self, nu: float, n: int, modulus: Modulus, lam: float):
        self.nu = float(nu)
        self.n = int(n)
        self.modulus = modulus
        self.lam = float(lam)
        self.lower_bound = eigenvalue_lower_bound(nu, n, modulus)
        self._build_interior()
        self._build_edge()

    # -- construction -------------------------------------------------

    def _build_interior(self) -> None:
        mod = self.modulus
        nu, lam = self.nu, self.lam
        nn1 = nu * (nu + 1.0)
        e = _ns2_coeffs(mod.m)
        rho = min(2.0 * mod.bigK, 2.0 * mod.bigKprime)
        x0, c, W0, Wp0 = _recessive_start(nu, -lam, e, mod.bigK, rho)
        s0 = mod.bigK - x0

        def rhs(s, y):
            sn, cn, dn = _ellipj(s, mod.m)
            Q = lam - nn1 * (dn / cn) ** 2
            return [y[1], -Q * y[0]]

        sol = solve_ivp(
            rhs, (s0, 0.0), [W0, -Wp0], method="DOP853",
            rtol=1e-12, atol=1e-290, dense_output=True,
        )
        if not sol.success:
            raise ConvergenceError(f"interior integration failed for {self!r}")
        self._x0, self._s0 = x0, s0
        self._interior_sol = sol.sol

        # L2 normalization over (-K, K): Gauss-Legendre on the dense part,
        # Gauss-Jacobi with weight x^(2 nu + 2) on the endpoint series part.
        xg, wg = np.polynomial.legendre.leggauss(200)
        sg = 0.5 * s0 * (xg + 1.0)
        Wv = sol.sol(sg)[0]
        inner = 0.5 * s0 * float(np.dot(wg, Wv * Wv))
        xj, wj = sp.roots_jacobi(60, 0.0, 2.0 * nu + 2.0)
        xs = 0.5 * x0 * (xj + 1.0)
        y = xs * xs
        S = np.zeros_like(y)
        for l in range(len(c) - 1, -1, -1):
            S = S * y + c[l]
        outer = float(np.dot(wj, S * S)) * (0.5 * x0) ** (2.0 * nu + 3.0)
        norm = math.sqrt(2.0 * (inner + outer))
        self._scale = 1.0 / norm
        self._c = c * self._scale

    def _build_edge(self) -> None:
        mod = self.modulus
        nu, lam = self.nu, self.lam
        nn1 = nu * (nu + 1.0)
        Ce = lam - nn1
        e = _ns2_coeffs(mod.mprime)
        rho = min(2.0 * mod.bigK, 2.0 * mod.bigKprime)
        r0, d, w0, wp0 = _recessive_start(nu, Ce, e, mod.bigKprime, rho)
        r_hi = 2.0 * mod.bigKprime - SINGULAR_GUARD
        mp = mod.mprime

        def rhs(r, y):
            sn, cn, dn = _ellipj(r, mp)
            q = lam + nn1 * (cn / sn) ** 2
            return [y[1], q - y[1] * y[1]]

        sol = solve_ivp(
            rhs, (r0, r_hi), [math.log(w0), wp0 / w0], method="DOP853",
            rtol=1e-12, atol=1e-12, dense_output=True,
        )
        if not sol.success:
            raise ConvergenceError(f"edge-profile integration failed for {self!r}")
        self._r0, self._d = r0, d
        self._r_hi = r_hi
        self._edge_sol = sol.sol
        mid = mod.bigKprime
        L, u = sol.sol(mid)
        self._L_mid, self._u_mid = float(L), float(u)

    # -- public surface -----------------------------------------------

    @property
    def frobenius_c(self) -> np.ndarray:
        """Endpoint-series coefficients, scaled so the L2 norm is 1, c_0 > 0."""
        return self._c.copy()

    @property
    def edge_profile_d(self) -> np.ndarray:
        """Edge-profile series coefficients with d_0 = 1."""
        return self._d.copy()

    def interior(self, s):
        """W(s) for s in (-K, K); accepts scalars or arrays."""
        arr = np.asarray(s, dtype=float)
        scalar = arr.ndim == 0
        a = np.atleast_1d(np.abs(arr))
        if np.any(a >= self.modulus.bigK):
            raise DomainError(f"s outside (-K, K) with K={self.modulus.bigK}")
        out = np.empty_like(a)
        near_end = a >= self._s0
        if np.any(near_end):
            W, _ = _series_WWp(self.nu, self._c, self.modulus.bigK - a[near_end])
            out[near_end] = W
        if np.any(~near_end):
            out[~near_end] = self._interior_sol(a[~near_end])[0] * self._scale
        if self.n % 2 == 1:
            signed = np.atleast_1d(arr)
            out = np.where(signed < 0.0, -out, out)
            out = np.where(signed == 0.0, 0.0, out)  # exact parity zero
        return float(out[0]) if scalar else out

    def interior_with_deriv(self, s: float) -> tuple[float, float]:
        """(W(s), W'(s)) at a scalar s."""
        a = abs(float(s))
        if a >= self.modulus.bigK:
            raise DomainError(f"s outside (-K, K) with K={self.modulus.bigK}")
        if a >= self._s0:
            W, Wp_x = _series_WWp(self.nu, self._c, self.modulus.bigK - a)
            W, Wp = float(W), -float(Wp_x)
        else:
            W, Wp = (float(v) for v in self._interior_sol(a) * self._scale)
        if s < 0.0 and self.n % 2 == 1:
            return -W, Wp
        if s < 0.0:
            return W, -Wp
        return W, Wp

    def edge_log(self, r: float) -> tuple[float, float]:
        """(log w(r), w'(r)/w(r)) on (0, 2K'); w > 0 throughout."""
        if not (0.0 < r):
            raise DomainError(f"edge profile requires r > 0, got {r}")
        if r >= self._r_hi:
            raise SingularityError(
                f"edge profile evaluated within {SINGULAR_GUARD} of the singular"
                f" endpoint 2K' = {2.0 * self.modulus.bigKprime}"
            )
        if r <= self._r0:
            w, wp = _series_WWp(self.nu, self._d, r)
            return float(np.log(w)), float(wp / w)
        L, u = self._edge_sol(r)
        return float(L), float(u)

    def edge_profile(self, r: float) -> tuple[float, float]:
        """(w(r), w'(r)) of the unit-leading-coefficient edge profile."""
        L, u = self.edge_log(r)
        w = math.exp(L)
        return w, u * w

    @property
    def wronskian(self) -> float:
        """w_{m,n} = 2 w(K') w'(K') in the d_0 = 1 convention."""
        return 2.0 * math.exp(2.0 * self._L_mid) * self._u_mid

    def wronskian_at(self, tau: float) -> float:
        """w(K'-tau) w'(K'+tau) + w'(K'-tau) w(K'+tau); constant in tau."""
        Kp = self.modulus.bigKprime
        L1, u1 = self.edge_log(Kp - tau)
        L2, u2 = self.edge_log(Kp + tau)
        return math.exp(L1 + L2) * (u1 + u2)

    def count_interior_zeros(self, npts: int = 2000) -> int:
        grid = np.linspace(-self.modulus.bigK, self.modulus.bigK, npts + 2)[1:-1]
        vals = self.interior(grid)
        return int(np.sum(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))

    def __repr__(self):
        return (
            f"EigenSolution(nu={self.nu}, n={self.n}, k={self.modulus.k},"
            f" lam={self.lam:.12g})"
        )


# -- cache and serialization ------------------------------------------


def _cache_key(nu: float, n: int, k: float) -> tuple:
    return (round(float(nu), 12), int(n), round(float(k), 12))


def _record_path(cache_dir: str, key: tuple) -> str:
    nu, n, k = key
    return os.path.join(cache_dir, f"eigen_nu{nu:+.6f}_n{n:03d}_k{k:.12f}.json")


def save_record(sol: EigenSolution, cache_dir: str) -> str:
    """Persist (nu, n, k, lambda) plus coefficient arrays as JSON."""
    os.makedirs(cache_dir, exist_ok=True)
    path = _record_path(cache_dir, _cache_key(sol.nu, sol.n, sol.modulus.k))
    record = {
        "version": _RECORD_VERSION,
        "nu": sol.nu,
        "n": sol.n,
        "k": sol.modulus.k,
        "lambda": sol.lam,
        "interior_coefficients": sol.frobenius_c.tolist(),
        "edge_coefficients": sol.edge_profile_d.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(record, fh)
    return path


def _load_record(path: str) -> EigenSolution | None:
    try:
        with open(path) as fh:
            record = json.load(fh)
    except (OSError, ValueError):
        return None
    if record.get("version") != _RECORD_VERSION:
        return None
    mod = Modulus.from_k(record["k"])
    return EigenSolution(record["nu"], record["n"], mod, record["lambda"])


def solve_eigen(nu: float, n: int, modulus: Modulus, tol: float = 1e-11) -> EigenSolution:
    """Solve the eigenproblem for the n-th recessive-at-both-ends solution.

    Results are cached in memory on (nu, n, k); if the environment variable
    ``BICYCLIDE_CACHE_DIR`` is set, eigenvalue records are also read from and
    written to that directory, skipping the eigenvalue search on reload.
    """
    if nu < -0.5:
        raise DomainError(f"degree nu must be >= -1/2, got {nu}")
    if n < 0:
        raise DomainError(f"index n must be >= 0, got {n}")
    if tol < 1e-12:
        raise DomainError(f"tol must be >= 1e-12, got {tol}")
    key = _cache_key(nu, n, modulus.k)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    cache_dir = os.environ.get(_CACHE_ENV)
    sol = None
    if cache_dir:
        sol = _load_record(_record_path(cache_dir, key))
    if sol is None:
        lam = _find_lambda(nu, n, modulus, tol)
        sol = EigenSolution(nu, n, modulus, lam)
        if cache_dir:
            save_record(sol, cache_dir)
    with _cache_lock:
        _cache.setdefault(key, sol)
        return _cache[key]


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


# -- spec-level operation wrappers -------------------------------------


def eval_interior(sol: EigenSolution, s):
    """W_nu^n(s, k) under the unit-norm, positive-leading-coefficient convention."""
    return sol.interior(s)


def eval_edge_profile(sol: EigenSolution, r: float) -> tuple[float, float]:
    """(w(r), w'(r)) of the edge profile, r in (0, 2K')."""
    return sol.edge_profile(r)


def wronskian_w(m: int, n: int, modulus: Modulus) -> float:
    """Wronskian w_{m,n} of the two edge solutions for degree |m| - 1/2."""
    sol = solve_eigen(abs(m) - 0.5, n, modulus)
    return sol.wronskian
