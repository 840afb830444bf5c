"""Quantum integers, the complex dilogarithm, Lobachevsky's function and the
quantum dilogarithm phi_N."""
from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import bernoulli

log = logging.getLogger(__name__)

PI2_6 = math.pi ** 2 / 6


class DomainError(ValueError):
    pass


class AccuracyError(RuntimeError):
    pass


class BranchCutWarning(UserWarning):
    pass


@dataclass(frozen=True)
class QuantumLevel:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be a positive integer")

    @property
    def r(self) -> int:
        return 2 * self.N + 1

    @property
    def M(self) -> float:
        """N + 1/2, the natural asymptotic parameter."""
        return self.N + 0.5

    @property
    def t(self) -> complex:
        return cmath.exp(4j * math.pi / self.r)

    def tpow(self, x) -> complex:
        """t^x read as exp(4 pi i x / r) for rational x."""
        return cmath.exp(4j * math.pi * x / self.r)


def quantum_integer(n, level: QuantumLevel) -> float:
    return math.sin(2 * math.pi * n / level.r) / math.sin(2 * math.pi / level.r)


def brace(n, level: QuantumLevel) -> complex:
    return 2j * math.sin(2 * math.pi * n / level.r)


def _check_factorial_range(n, level):
    if n < 0 or n > level.r - 1 or int(n) != n:
        raise DomainError(f"factorial index {n} outside 0..{level.r - 1}")


def brace_factorial(n: int, level: QuantumLevel) -> complex:
    _check_factorial_range(n, level)
    out = 1 + 0j
    for k in range(1, int(n) + 1):
        out *= brace(k, level)
    return out


def pochhammer_t(n: int, level: QuantumLevel) -> complex:
    _check_factorial_range(n, level)
    t = level.t
    out = 1 + 0j
    for k in range(1, int(n) + 1):
        out *= 1 - t ** k
    return out


# --- dilogarithm -----------------------------------------------------------

# Li2(z) = sum_n B_n u^{n+1}/(n+1)!, u = -log(1-z); B_1 = -1/2
_NB = 30
_BCOEF = np.array([bernoulli(_NB)[n] / math.factorial(n + 1) for n in range(_NB + 1)])
_BCOEF[1] = -0.5 / 2.0


def _bernoulli_series(u):
    # Horner on u * sum_n c_n u^n
    acc = np.zeros_like(u)
    for c in _BCOEF[::-1]:
        acc = acc * u + c
    return acc * u


def dilog(z):
    """Principal branch Li2(z), continuous on C minus (1, inf).

    Points on the cut take the limit from below and raise BranchCutWarning.
    Accepts scalars or numpy arrays.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    x, y = z.real, z.imag

    on_cut = (y == 0) & (x > 1)
    if np.any(on_cut):
        warnings.warn("dilog evaluated on the cut (1, inf); using the limit from below", BranchCutWarning, stacklevel=2)
        xc = x[on_cut]
        # Re Li2(x) = pi^2/3 - log(x)^2/2 - Li2(1/x); Im = -pi log x from below
        re = np.pi ** 2 / 3 - 0.5 * np.log(xc) ** 2 - dilog(1 / xc).real
        out[on_cut] = re - 1j * np.pi * np.log(xc)

    rest = ~on_cut
    zr = z[rest]
    xr, nz = zr.real, np.abs(zr) ** 2
    res = np.empty_like(zr)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = (xr <= 0.5) & (nz <= 1)
        invert = ((xr <= 0.5) & (nz > 1)) | ((xr > 0.5) & (nz > 2 * xr))
        reflect = (xr > 0.5) & (nz <= 2 * xr)

        w = zr[small]
        res[small] = _bernoulli_series(-np.log1p(-w))

        w = zr[invert]
        lz = np.log(-w)
        res[invert] = -_bernoulli_series(-np.log1p(-1 / w)) - 0.5 * lz * lz - PI2_6

        w = zr[reflect]
        u = -np.log(w)
        # at w = 1 exactly, u*log(1-w) -> 0
        tail = np.where(w == 1, 0, u * np.log1p(-w))
        res[reflect] = -_bernoulli_series(u) + tail + PI2_6
    res[zr == 0] = 0
    out[rest] = res
    return complex(out[0]) if scalar else out


def lobachevsky(theta):
    """Lambda(theta) = Im Li2(e^{2 pi i theta}) / (2 pi); odd and 1-periodic."""
    th = np.asarray(theta, dtype=float)
    frac = th - np.round(th)  # in [-1/2, 1/2]
    val = dilog(np.exp(2j * np.pi * np.abs(frac))).imag / (2 * np.pi)
    val = np.sign(frac) * val
    val = np.where(np.abs(frac) == 0.5, 0.0, val)
    return float(val) if np.ndim(theta) == 0 else val


def bloch_wigner(z) -> float:
    """D(z) = Im Li2(z) + arg(1 - z) log|z|; real-analytic off {0, 1}."""
    z = complex(z)
    if z == 0 or z == 1:
        return 0.0
    return dilog(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def clausen_fourier(theta, terms: int = 100000) -> float:
    """Partial Fourier sum of Lambda with an integral tail estimate; slow, test oracle only."""
    n = np.arange(1, terms + 1)
    return float(np.sum(np.sin(2 * np.pi * n * theta) / n ** 2) / (2 * np.pi))


# --- quantum dilogarithm ---------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    tail_cutoff: float | None = None  # None: derived from the analytic tail bound
    node_budget: int = 96  # Gauss-Legendre nodes on the unit semicircle
    target_abs_err: float = 1e-12


@lru_cache(maxsize=16)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    phi = 0.5 * np.pi * (x + 1)
    return phi, 0.5 * np.pi * w


def _integrand(zs, a, M):
    return np.exp(a * zs) / (4 * zs * np.sinh(zs) * np.sinh(zs / M))


def phi_N(theta: complex, level: QuantumLevel, contour: ContourSpec = ContourSpec(), return_error: bool = False):
    """Quantum dilogarithm phi_N(theta) on the convergence strip
    -1/(2N+1) < Re(theta) < 1 + 1/(2N+1) (which contains theta = 1, needed
    for (t)_N).

    The two real half-lines are folded into one integral over [1, X] of
    sinh((2 theta - 1) x) / (2 x sinh x sinh(x/M)); the semicircle part uses
    fixed Gauss-Legendre quadrature.
    """
    theta = complex(theta)
    M = level.M
    if not abs(2 * theta.real - 1) < 1 + 1 / M:
        raise DomainError(f"phi_N integral diverges at Re(theta) = {theta.real}")
    a = 2 * theta - 1
    c = 1 + 1 / M

    phi, w = _gl_nodes(contour.node_budget)
    zs = np.exp(1j * phi)
    arc = -np.sum(w * _integrand(zs, a, M) * 1j * zs)

    kappa = c - abs(a.real)
    # |tail(x)| <= pref e^{-kappa x} / x for x >= 1
    pref = 2 / ((1 - math.exp(-2)) * (1 - math.exp(-2 / M)))
    X = contour.tail_cutoff
    if X is None:
        X = max(2.0, (math.log(pref / (kappa * contour.target_abs_err))) / kappa)
    truncation = pref * math.exp(-kappa * X) / (kappa * X)

    def tail(x):
        num = np.exp((a - c) * x) - np.exp(-(a + c) * x)
        return num / (x * -np.expm1(-2 * x) * -np.expm1(-2 * x / M))

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(tail, 1, X, complex_func=True, limit=4000,
                                  epsabs=contour.target_abs_err / 4, epsrel=1e-14)
    for w in caught:
        log.debug("phi_N(%s) tail quadrature: %s", theta, str(w.message).split(".")[0])
    # complex_func=True reports the error estimate as err.real + 1j * err.imag
    est = abs(complex(err)) + truncation
    if est > 1e3 * contour.target_abs_err:
        raise AccuracyError(f"phi_N tail quadrature error estimate {est:.3g} above target")
    out = complex(arc + val)
    return (out, est) if return_error else out


def phi_N_reflection(theta: complex, level: QuantumLevel) -> complex:
    """Closed form of phi_N(theta) + phi_N(1 - theta)."""
    M = level.M
    return 2j * math.pi * (-(M / 2) * (theta * theta - theta + 1 / 6) + 1 / (24 * M))


def phi_N_at_half_step(level: QuantumLevel, upper: bool = False) -> complex:
    """Closed forms of phi_N(1/(2M)) and, with ``upper``, phi_N(1 - 1/(2M))."""
    M = level.M
    sgn = -1 if upper else 1
    return (M / (2j * math.pi)) * PI2_6 + sgn * 0.5 * math.log(M) + 1j * math.pi / 4 - 1j * math.pi / (12 * M)


def pochhammer_via_phi(n: int, level: QuantumLevel, contour: ContourSpec = ContourSpec()) -> complex:
    """(t)_n from phi_N for 0 <= n <= 2N."""
    M, N = level.M, level.N
    base = phi_N(0.5 / M, level, contour)
    if n <= N:
        return cmath.exp(base - phi_N((n + 0.5) / M, level, contour))
    return cmath.exp(base - phi_N((n + 0.5) / M - 1, level, contour) + math.log(2))
