"""Hyperbolic Dehn filling of one Whitehead-link cusp.

The one-shape deformation z of the ideal octahedron solves

    p (log z + log(z+1) - log(z-1)) + q (4 log z + 2 pi i) = 2 pi i,   Im z < 0,

and z = -i is the complete structure. Volumes come from two independent
routes: the critical value of V^+ after the shape transform, and the
Bloch-Wigner sum over the deformed shapes.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .potentials import in_D0, plus_potential
from .special import DomainError, bloch_wigner, lobachevsky
from .surgery import bezout

log = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi
PI_SQ = math.pi ** 2
OCTAHEDRON_VOLUME = 8 * math.pi * float(lobachevsky(0.25))
RESIDUAL_TOL = 1e-12
DEGENERATE_IM = 1e-9  # shapes this close to the real axis are flat, not hyperbolic


class NonHyperbolicError(DomainError):
    """Newton left the lower half-plane or failed to converge."""


class BranchSelectionError(DomainError):
    """The logarithm branches put (Re theta1, Re theta2) outside the expected region."""


@dataclass(frozen=True)
class HyperbolicSolution:
    p: int
    q: int
    z0: complex
    u: complex
    v: complex
    gamma: complex
    z1: complex
    z2: complex
    vol: float
    cs: float
    residual: float

    @property
    def theta1(self) -> complex:
        return self.u / TWO_PI_I

    @property
    def theta2(self) -> complex:
        return cmath.log(self.z2) / TWO_PI_I


def holonomies(z: complex) -> tuple[complex, complex]:
    """Meridian and longitude log-holonomies (u, v) of the deformed octahedron."""
    u = cmath.log(z) + cmath.log(z + 1) - cmath.log(z - 1)
    v = 4 * cmath.log(z) + TWO_PI_I
    return u, v


def filling_residual(z: complex, p: int, q: int) -> complex:
    u, v = holonomies(z)
    return p * u + q * v - TWO_PI_I


def _filling_derivative(z: complex, p: int, q: int) -> complex:
    return p * (1 / z + 1 / (z + 1) - 1 / (z - 1)) + 4 * q / z


def to_critical_shapes(z: complex) -> tuple[complex, complex]:
    """z -> (z1, z2) = (z(z+1)/(z-1), z/(z^2+z-1))."""
    return z * (z + 1) / (z - 1), z / (z * z + z - 1)


def from_critical_shapes(z1: complex, z2: complex) -> complex:
    return z2 * (z1 + 1) / (z1 * z2 - 1)


def _tolerance(p: int, q: int) -> float:
    # the residual is a combination of logs weighted by p and q
    return RESIDUAL_TOL * (1 + abs(p) + 4 * abs(q))


def _acceptable(z: complex, p: int, q: int) -> bool:
    # z -> 0 or infinity are degenerate limits that also zero the residual
    return z.imag < -DEGENERATE_IM and 1e-6 < abs(z) < 1e6 and abs(filling_residual(z, p, q)) < _tolerance(p, q)


def _newton(z: complex, p: int, q: int, target: complex, iters: int = 60) -> complex:
    """Newton on p u + q v = target with residual-based step halving."""
    def res(w):
        return filling_residual(w, p, q) + TWO_PI_I - target

    f = res(z)
    for _ in range(iters):
        step = f / _filling_derivative(z, p, q)
        lam = 1.0
        # extra caution near the poles z = +-1 of the derivative
        if min(abs(z - 1), abs(z + 1)) < 1e-3:
            lam = 0.5
        while True:
            z_new = z - lam * step
            f_new = res(z_new)
            if abs(f_new) < abs(f) or lam < 1e-4:
                break
            lam *= 0.5
        z, f = z_new, f_new
        if abs(f) < 1e-15 or abs(lam * step) < 1e-16:
            break
    return z


def solve_filling(p: int, q: int, steps: int = 32) -> HyperbolicSolution:
    """Shape of W(p,q), its holonomies, transformed shapes and Vol + i CS.

    Newton from z = -i first; if that lands outside the lower half-plane the
    right-hand side is continued from 0 (complete structure) to 2 pi i.
    """
    bezout(p, q)  # coprimality check
    z = _newton(-1j, p, q, TWO_PI_I)
    if not _acceptable(z, p, q):
        log.debug("direct Newton failed for (%d,%d); continuing from the complete structure", p, q)
        z = -1j
        for t in np.linspace(0, 1, steps + 1)[1:]:
            z = _newton(z, p, q, TWO_PI_I * t)
            if z.imag >= 0:
                break
    resid = abs(filling_residual(z, p, q))
    if not _acceptable(z, p, q):
        raise NonHyperbolicError(f"no lower-half-plane filling solution for ({p},{q}): z={z}, residual={resid:.3g}")
    u, v = holonomies(z)
    p_star, q_star = bezout(p, q)
    gamma = -q_star * u + p_star * v
    z1, z2 = to_critical_shapes(z)
    vol, cs = _critical_volume(p, q, z)
    return HyperbolicSolution(p, q, z, u, v, gamma, z1, z2, vol, cs, resid)


def critical_thetas(z: complex) -> tuple[complex, complex]:
    """(theta1, theta2) with theta1 = u/(2 pi i) and Re theta2 in (0, 1/2]."""
    u, _ = holonomies(z)
    _, z2 = to_critical_shapes(z)
    t2 = cmath.log(z2) / TWO_PI_I
    if t2.real <= 0:
        t2 += 1
    return u / TWO_PI_I, t2


def _critical_volume(p: int, q: int, z: complex) -> tuple[float, float]:
    t1, t2 = critical_thetas(z)
    val = 2 * math.pi * plus_potential(p, q, bezout(p, q)[0])(t1, t2)
    return val.real, val.imag % PI_SQ


def vol_cs(p: int, q: int, strict: bool = False) -> tuple[float, float]:
    """(Vol, CS mod pi^2) as 2 pi V^+ at the transformed critical point.

    With ``strict`` the real parts of the thetas must lie in D0; otherwise an
    excursion is only logged (small slopes such as (1,1) leave D0 but the
    critical value is still Vol + i CS).
    """
    sol = solve_filling(p, q)
    t1, t2 = critical_thetas(sol.z0)
    if not in_D0(t1.real, t2.real):
        msg = f"(Re theta1, Re theta2) = ({t1.real:.6f}, {t2.real:.6f}) outside D0 for ({p},{q})"
        if strict:
            raise BranchSelectionError(msg)
        log.info(msg)
    return sol.vol, sol.cs


def vol_bloch_wigner(z: complex) -> float:
    """Volume of the deformed octahedron from its shape, -2 (D(z) + D(-1/z))."""
    return -2 * (bloch_wigner(z) + bloch_wigner(-1 / z))


def slope_length_sq(p: int, q: int) -> int:
    """Squared normalized length (p+2q)^2 + 4q^2, up to the factor 2."""
    return (p + 2 * q) ** 2 + 4 * q * q


class VolumeBound(NamedTuple):
    value: float
    vacuous: bool


def vol_lower_bound(p: int, q: int) -> VolumeBound:
    """Length-based lower bound (1 - 2 pi^2 / L)^{3/2} Vol(octahedron); 0 when L <= 2 pi^2."""
    L = slope_length_sq(p, q)
    if L <= 2 * PI_SQ:
        return VolumeBound(0.0, True)
    return VolumeBound((1 - 2 * PI_SQ / L) ** 1.5 * OCTAHEDRON_VOLUME, False)


_EXCLUDED = frozenset({
    (-9, 1), (-8, 1), (-7, 1), (-6, 1), (-5, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1),
    (-11, 2), (-9, 2), (-7, 2), (-5, 2), (-3, 2), (-1, 2), (1, 2), (3, 2),
    (-11, 3), (-10, 3), (-8, 3), (-7, 3), (-5, 3), (-4, 3), (-2, 3), (-1, 3),
    (-9, 4), (-7, 4),
})


def in_set_S(p: int, q: int) -> bool:
    """Coprime slopes with q != 0 outside the finite exclusion lists, up to (p,q) ~ (-p,-q).

    Membership says nothing about hyperbolicity: the exceptional slopes
    (-4,1), ..., (0,1) pass this test but have no hyperbolic filling.
    """
    if q == 0 or math.gcd(p, q) != 1:
        return False
    if q < 0:
        p, q = -p, -q
    return (p, q) not in _EXCLUDED
