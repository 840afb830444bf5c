"""Saddle-point data of the invariant sum: critical points, the leading
asymptotic of J_N, the Turaev-Viro growth coefficient, Hessian diagnostics
and the color-deformed family zeta(p,q;x)."""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .geometry import NonHyperbolicError, critical_thetas, in_set_S, solve_filling
from .invariants import _epi, chain_root
from .potentials import (
    BranchError, Potential, RegionSpec, general_potential, in_D0, plus_potential,
    potential_V_N as _V_N, region_membership, region_v, x_potential,
)
from .special import DomainError, QuantumLevel
from .surgery import SurgeryPresentation

log = logging.getLogger(__name__)

NEWTON_TOL = 1e-12
TWO_PI_I = 2j * math.pi

__all__ = [
    "AsymptoticProfile", "ContinuationError", "CriticalX", "PotentialParams", "RegionSpec", "SingularityError",
    "asymptotic_J", "log_asymptotic_J", "C_N", "critical_x", "dV_dc_identity", "hessian_f", "hessian_f_grid", "hessian_positivity_x_bound",
    "potential_V", "potential_V_N", "region_membership", "region_v", "saddle_H", "solve_critical",
    "theta2_of_c", "tv_asymptotic", "tv_coefficient", "zeta_second_derivative_formula",
]


class ContinuationError(RuntimeError):
    """Newton continuation lost the critical point."""


class SingularityError(DomainError):
    """A Hessian entry was requested at (numerically) a pole."""


@dataclass(frozen=True)
class PotentialParams:
    """Selects one potential.

    form "plus": V^{sign} in the symmetric form (the critical-value potential).
    form "general": the (s, m1, m2) Fourier potential; s indexes the I/K tables.
    form "x": the color-deformed V^{sign}(x, theta1, theta2).
    """

    p: int
    q: int
    sign: int = 1
    form: str = "plus"
    s: int | None = None
    m1: int | None = None
    m2: int = 1
    x: float = 0.0

    @classmethod
    def tagged(cls, p: int, q: int, sign: int = 1) -> "PotentialParams":
        """The (s^sign, m1^sign, m2 = 1) general potential."""
        comb = SurgeryPresentation.from_slope(p, q).comb
        s, m1 = (comb.s_plus, comb.m_plus) if sign > 0 else (comb.s_minus, comb.m_minus)
        return cls(p, q, sign, "general", s, m1, 1)

    def build(self) -> Potential:
        pres = SurgeryPresentation.from_slope(self.p, self.q)
        if self.form == "plus":
            return plus_potential(self.p, self.q, pres.slope.p_star, self.sign)
        if self.form == "x":
            return x_potential(self.p, self.q, pres.slope.p_star, self.sign)
        if self.form == "general":
            if self.s is None or self.m1 is None:
                raise ValueError("general form needs s and m1")
            c = pres.comb
            return general_potential(self.p, self.q, c.I_table[self.s], c.K_table[self.s], self.m1, self.m2)
        raise ValueError(f"unknown potential form {self.form!r}")


def potential_V(params: PotentialParams, theta1: complex, theta2: complex) -> complex:
    return params.build()(theta1, theta2, params.x)


def potential_V_N(params: PotentialParams, level: QuantumLevel, theta1: complex, theta2: complex) -> complex:
    """Finite-N potential of the s-th summand (s defaults to s^+), shifted by
    2 pi i (m1 theta1 + m2 theta2) when m1 is given."""
    comb = SurgeryPresentation.from_slope(params.p, params.q).comb
    s = comb.s_plus if params.s is None else params.s
    val = _V_N(params.p, params.q, comb.I_table[s], comb.K_table[s], level, theta1, theta2)
    if params.m1 is not None:
        val += TWO_PI_I * (params.m1 * complex(theta1) + params.m2 * complex(theta2))
    return val


# --- critical point ------------------------------------------------------------

def _newton2(P: Potential, t: np.ndarray, x: float = 0.0, iters: int = 60) -> tuple[np.ndarray, float]:
    """Newton on (dV/dtheta1, dV/dtheta2) = 0, halving steps that raise the residual."""
    t = np.asarray(t, dtype=complex)
    g = P.gradient(t[0], t[1], x)[:2]
    for _ in range(iters):
        H = P.hessian(t[0], t[1], x)[:2, :2]
        step = np.linalg.solve(H, g)
        lam = 1.0
        while True:
            t_new = t - lam * step
            try:
                g_new = P.gradient(t_new[0], t_new[1], x)[:2]
            except BranchError:
                g_new = np.array([np.inf, np.inf])
            if np.abs(g_new).max() < np.abs(g).max() or lam < 1e-3:
                break
            lam *= 0.5
        t, g = t_new, g_new
        if np.abs(g).max() < 1e-15 or np.abs(lam * step).max() < 1e-16:
            break
    return t, float(np.abs(g).max())


def saddle_H(p: int, q: int, z1: complex, z2: complex) -> complex:
    """The Hessian-determinant factor H(p,q;z1,z2) of the saddle point."""
    a = p / (2 * q)
    g = 1 + 3 * z2 / (1 - z2) - 4 * z2 ** 2 / (1 - z2 ** 2)
    cross = z1 * z2 / (1 - z1 * z2) + z2 / (z1 - z2)
    return (a + 1) * g + (a + 1 + g) * cross + 4 * z1 * z2 ** 2 / ((1 - z2 * z1) * (z1 - z2))


@dataclass(frozen=True)
class AsymptoticProfile:
    p: int
    q: int
    theta1_0: complex
    theta2_0: complex
    z1_0: complex
    z2_0: complex
    zeta: complex
    omega: complex
    H: complex
    hessV: np.ndarray
    residual: float
    in_D0: bool
    zeta_of_x: tuple[tuple[float, complex], ...] = field(default=())

    @property
    def volume(self) -> float:
        return 2 * math.pi * self.zeta.real


def solve_critical(p: int, q: int, x_samples: int = 0, x_max: float = RegionSpec().x0) -> AsymptoticProfile:
    """Critical point of V^+ seeded by the transformed filling shape.

    When no hyperbolic shape is available the (1,1) critical point is used as a
    seed. ``x_samples`` > 0 also tabulates zeta(p,q;x) on [0, x_max].
    """
    pres = SurgeryPresentation.from_slope(p, q)
    P = plus_potential(p, q, pres.slope.p_star)
    try:
        seed = np.array(critical_thetas(solve_filling(p, q).z0))
    except NonHyperbolicError:
        log.warning("no filling shape for (%d,%d); seeding from the (1,1) critical point", p, q)
        seed = np.array(critical_thetas(solve_filling(1, 1).z0))
    t, res = _newton2(P, seed)
    if not res < NEWTON_TOL:
        raise ContinuationError(f"critical point of V+ for ({p},{q}) not found (residual {res:.3g})")
    t1, t2 = complex(t[0]), complex(t[1])
    z1, z2 = cmath.exp(TWO_PI_I * t1), cmath.exp(TWO_PI_I * t2)
    H = saddle_H(p, q, z1, z2)
    J = float(pres.comb.J_table[pres.comb.s_plus])
    omega = cmath.sin(t1 * math.pi / q - J * math.pi) / (cmath.sqrt(1 - z2 * z2) * cmath.sqrt(H))
    prof = AsymptoticProfile(
        p, q, t1, t2, z1, z2, P(t1, t2), omega, H, P.hessian(t1, t2)[:2, :2], res,
        bool(in_D0(t1.real, t2.real)),
    )
    if x_samples > 0:
        xs = np.linspace(0.0, x_max, x_samples + 1)
        samples = tuple((float(x), critical_x(p, q, float(x), profile=prof).zeta) for x in xs)
        prof = replace(prof, zeta_of_x=samples)
    return prof


# --- leading asymptotics ---------------------------------------------------------

def C_N(pres: SurgeryPresentation, N: int) -> complex:
    """Unimodular phase of the leading term, assembled from the surgery data.

    Exponents are exact rationals, so the phase is accurate for any N.
    """
    ncf, comb = pres.ncf, pres.comb
    sp, l, b, q = comb.s_plus, ncf.l, ncf.b, pres.q
    r, M = 2 * N + 1, Fraction(2 * N + 1, 2)
    shift = comb.K_table[sp] / 2 + Fraction(pres.slope.p_star, 2 * q)
    e = (comb.P_table[sp] + comb.m_plus + Fraction(3 * l, 4) + Fraction(3 * N, 2) + sum(b[:-1])
         + M * (Fraction(3, 2) * b[-1] - shift)
         + ncf.sigma * (Fraction(3, r) + Fraction(r + 1, 4)))
    return _epi(e % 2)


def log_asymptotic_J(p: int, q: int, level: QuantumLevel, profile: AsymptoticProfile | None = None) -> complex:
    """log of ``asymptotic_J`` (some branch), usable at levels where the value overflows."""
    if not in_set_S(p, q):
        log.warning("(%d,%d) is outside S; the leading term is not guaranteed", p, q)
    pres = SurgeryPresentation.from_slope(p, q)
    prof = profile or solve_critical(p, q)
    r, M = level.r, level.M
    pref = -C_N(pres, level.N) * math.sqrt(r) / (math.sin(math.pi / r) * chain_root(pres.ncf)) * prof.omega
    return cmath.log(pref) + M * prof.zeta


def asymptotic_J(p: int, q: int, level: QuantumLevel, profile: AsymptoticProfile | None = None) -> complex:
    """Leading term -C_N sqrt(r)/(sin(pi/r) R) omega e^{(N+1/2) zeta} of J_N.

    R is the chain root of the continued fraction (R^2 = q); the overall sign
    and R match the exact collapsed sum.
    """
    return cmath.exp(log_asymptotic_J(p, q, level, profile))


def zeta_second_derivative_formula(profile: AsymptoticProfile) -> float:
    """-4 pi Im(1/(1 - z2)), the second x-derivative of Re zeta(p,q;x) at 0."""
    return -4 * math.pi * (1 / (1 - profile.z2_0)).imag


def tv_coefficient(profile: AsymptoticProfile) -> float:
    """|sin^2(theta1 pi/q - J pi) / (q (1 - z2^2) H)|; the 1/q makes it sqrt-branch free."""
    pres = SurgeryPresentation.from_slope(profile.p, profile.q)
    J = float(pres.comb.J_table[pres.comb.s_plus])
    s = cmath.sin(profile.theta1_0 * math.pi / profile.q - J * math.pi)
    return abs(s * s / (profile.q * (1 - profile.z2_0 ** 2) * profile.H))


def tv_asymptotic(p: int, q: int, level: QuantumLevel, profile: AsymptoticProfile | None = None) -> float:
    """Leading Turaev-Viro growth: coefficient * M^{1/2} / sqrt(Im 1/(1-z2)) * e^{M Vol / pi}."""
    prof = profile or solve_critical(p, q)
    M = level.M
    im = (1 / (1 - prof.z2_0)).imag
    return tv_coefficient(prof) * math.sqrt(M) / math.sqrt(im) * math.exp(M * prof.volume / math.pi)


# --- Hessian diagnostics -----------------------------------------------------------

def _im_inv_one_minus(angle: float, X: float) -> float:
    """Im 1/(1 - e^{2 pi i (angle + i X)}) in the real closed form."""
    den = math.exp(2 * math.pi * X) + math.exp(-2 * math.pi * X) - 2 * math.cos(2 * math.pi * angle)
    if abs(den) < 1e-12:
        raise SingularityError(f"pole at angle={angle}, X={X}")
    return math.sin(2 * math.pi * angle) / den


def hessian_f(theta1R: float, X1: float, theta2R: float, X2: float, x: float = 0.0) -> np.ndarray:
    """Hessian of Re V^+ in the imaginary directions (X1, X2).

    x == 0 uses the a, b, c, d entries; x > 0 the color-deformed (b, c, d) entries.
    """
    a = _im_inv_one_minus(theta2R - theta1R, X2 - X1)
    b = _im_inv_one_minus(theta2R + theta1R, X2 + X1)
    z2 = cmath.exp(TWO_PI_I * complex(theta2R, X2))
    if x == 0:
        if min(abs(1 - z2), abs(1 + z2)) < 1e-12:
            raise SingularityError("z2 at +-1")
        c = (1 / (1 - z2)).imag
        d = -(1 / (1 + z2)).imag
        return 2 * math.pi * np.array([[a + b, b - a], [b - a, a + b + c + 2 * d]])
    ex = cmath.exp(TWO_PI_I * x)
    d = (1 / (1 - ex * z2) - 1 / (1 - ex / z2) + 1 / (1 - z2) - 4 / (1 - z2 * z2)).imag
    return 2 * math.pi * np.array([[b + a, b - a], [b - a, b + a + d]])


def hessian_f_grid(theta1R, X1, theta2R, X2):
    """Vectorized x = 0 Hessian entries (h11, h12, h22) over broadcast arrays.

    Poles come out as inf/nan instead of raising.
    """
    t1, t2 = np.asarray(theta1R, float), np.asarray(theta2R, float)
    X1, X2 = np.asarray(X1, float), np.asarray(X2, float)

    def im_inv(angle, X):
        den = np.exp(2 * np.pi * X) + np.exp(-2 * np.pi * X) - 2 * np.cos(2 * np.pi * angle)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.sin(2 * np.pi * angle) / den

    a = im_inv(t2 - t1, X2 - X1)
    b = im_inv(t2 + t1, X2 + X1)
    z2 = np.exp(TWO_PI_I * (t2 + 1j * X2))
    with np.errstate(divide="ignore", invalid="ignore"):
        c = (1 / (1 - z2)).imag
        d = -(1 / (1 + z2)).imag
    return 2 * np.pi * (a + b), 2 * np.pi * (b - a), 2 * np.pi * (a + b + c + 2 * d)


def hessian_positivity_x_bound(eps: float) -> float:
    """Largest x for which the deformed Hessian is proven positive when theta2 >= eps."""
    c = math.cos(2 * math.pi * eps)
    return min(math.acos(math.sqrt((3 + math.sqrt(9 + 16 * c * c)) / 8)) / math.pi, 1 / 6)


# --- color-deformed family ------------------------------------------------------------

@dataclass(frozen=True)
class CriticalX:
    x: float
    theta1: complex
    theta2: complex
    zeta: complex
    residual: float
    in_proven_regime: bool


def critical_x(p: int, q: int, x: float, steps: int = 8, profile: AsymptoticProfile | None = None) -> CriticalX:
    """Critical point of V^+(x, .) by continuation in x from the x = 0 saddle."""
    pres = SurgeryPresentation.from_slope(p, q)
    P = x_potential(p, q, pres.slope.p_star)
    prof = profile or solve_critical(p, q)
    t = np.array([prof.theta1_0, prof.theta2_0])
    res = 0.0
    for xx in np.linspace(0.0, x, steps + 1)[1:] if x != 0 else [0.0]:
        t, res = _newton2(P, t, float(xx))
        if not res < NEWTON_TOL:
            raise ContinuationError(f"lost the critical point at x={xx} for ({p},{q}) (residual {res:.3g})")
    regime = abs(p) >= 1000 or abs(q) >= 1000
    return CriticalX(x, complex(t[0]), complex(t[1]), P(t[0], t[1], x), res, regime)


# --- one-dimensional family --------------------------------------------------------------

def theta2_of_c(c: float) -> complex:
    """Root of dV^+/dtheta2 = 0 at theta1 = c with Re theta2 in [0, 1/2)."""
    s2 = math.sin(math.pi * c) ** 2
    z2 = (1 - 2 * s2 + 2j * math.sqrt(1 - s2 * s2)) / (5 - 4 * s2)
    return cmath.log(z2) / TWO_PI_I


def dV_dc_identity(c: float) -> float:
    """Closed form of d/dc Re V^+(c, theta2(c)): 2 log(sqrt(sin^2(pi c) + 1) - sin(pi c))."""
    s = math.sin(math.pi * c)
    return 2 * math.log(math.sqrt(s * s + 1) - s)


def re_V_along_c(c: float, p: int = 1, q: int = 1) -> float:
    """Re V^+(p,q; c, theta2(c)); independent of (p,q) for real c."""
    pres = SurgeryPresentation.from_slope(p, q)
    return plus_potential(p, q, pres.slope.p_star)(c, theta2_of_c(c)).real
