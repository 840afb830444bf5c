"""Potential functions of the collapsed invariant sum and their derivatives.

Every limiting potential here has the shape

    pi*i * Q(theta1, theta2, x) + sum_k w_k Li2(exp(2 pi i (c_k . v + c0_k))) / (2 pi i)

with Q quadratic in v = (theta1, theta2, x). Storing that shape once gives
values, gradients and Hessians from the same data, so Newton solvers and the
Hessian diagnostics cannot drift from the function they differentiate.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .special import DomainError, QuantumLevel, dilog, lobachevsky, phi_N

TWO_PI_I = 2j * math.pi
C0 = 0.122532
REGION_THRESHOLD = 3.374482


class BranchError(DomainError):
    """A log(1 - w) in a derivative hits its singular point w = 1."""


@dataclass(frozen=True)
class Li2Term:
    weight: float
    coef: tuple[float, float, float]  # multiplies (theta1, theta2, x)
    shift: float = 0.0


@dataclass(frozen=True)
class Potential:
    """pi*i*(v.A.v + b.v + c) + sum_k w_k Li2(e^{2 pi i (coef_k . v + shift_k)}) / (2 pi i)."""

    A: tuple[tuple[float, ...], ...]
    b: tuple[float, float, float]
    c: float
    terms: tuple[Li2Term, ...]
    label: str = ""

    def _v(self, theta1, theta2, x):
        return np.array([theta1, theta2, x], dtype=complex)

    def _args(self, v, guard: bool = True):
        for t in self.terms:
            w = cmath.exp(TWO_PI_I * (np.dot(t.coef, v) + t.shift))
            if guard and abs(w - 1) < 1e-14:
                raise BranchError(f"{self.label}: Li2 argument hits the singular point 1")
            yield t, w

    def value(self, theta1, theta2, x=0.0) -> complex:
        v = self._v(theta1, theta2, x)
        A = np.asarray(self.A)
        poly = v @ A @ v + np.dot(self.b, v) + self.c
        li = sum(t.weight * dilog(w) for t, w in self._args(v, guard=False))
        return complex(1j * math.pi * poly + li / TWO_PI_I)

    def gradient(self, theta1, theta2, x=0.0) -> np.ndarray:
        """(d/dtheta1, d/dtheta2, d/dx); log terms use the principal branch."""
        v = self._v(theta1, theta2, x)
        A = np.asarray(self.A)
        g = 1j * math.pi * (2 * A @ v + np.asarray(self.b))
        for t, w in self._args(v):
            g = g - t.weight * np.asarray(t.coef) * cmath.log(1 - w)
        return g

    def hessian(self, theta1, theta2, x=0.0) -> np.ndarray:
        v = self._v(theta1, theta2, x)
        H = TWO_PI_I * np.asarray(self.A, dtype=complex)
        for t, w in self._args(v):
            c = np.asarray(t.coef)
            H = H + t.weight * TWO_PI_I * (w / (1 - w)) * np.outer(c, c)
        return H

    def __call__(self, theta1, theta2, x=0.0) -> complex:
        return self.value(theta1, theta2, x)


def _sym(d: dict[tuple[int, int], float]) -> tuple[tuple[float, ...], ...]:
    A = np.zeros((3, 3))
    for (i, j), val in d.items():
        if i == j:
            A[i, i] += val
        else:
            A[i, j] += val / 2
            A[j, i] += val / 2
    return tuple(map(tuple, A))


def plus_potential(p: int, q: int, p_star: int, sign: int = 1) -> Potential:
    """V^+ (sign=+1) or V^- (sign=-1) in the symmetric form whose Li2 arguments
    are z1 z2, z2/z1, z2 and z2^2."""
    a = p / (2 * q)
    return Potential(
        A=_sym({(0, 0): a + 1, (1, 1): 1.0}),
        b=(-sign / q, -1.0, 0.0),
        c=5 / 6 + p_star / (2 * q),
        terms=(Li2Term(1, (1, 1, 0)), Li2Term(1, (-1, 1, 0)), Li2Term(3, (0, 1, 0)), Li2Term(-1, (0, 2, 0))),
        label="V+" if sign > 0 else "V-",
    )


def _split_terms(with_x: bool) -> tuple[Li2Term, ...]:
    core = (Li2Term(1, (-1, 1, 0)), Li2Term(-1, (-1, -1, 0)), Li2Term(1, (0, -2, 0)))
    if with_x:
        return core + (Li2Term(-1, (0, -1, -1)), Li2Term(1, (0, 1, -1)), Li2Term(-1, (0, -1, 0)))
    return core + (Li2Term(-2, (0, -1, 0)), Li2Term(1, (0, 1, 0)))


def general_potential(p: int, q: int, I: int, K: Fraction | float, m1: int, m2: int) -> Potential:
    """Limit potential of the (s, m1, m2) Fourier term of the collapsed sum."""
    a = p / (2 * q)
    return Potential(
        A=_sym({(0, 0): a, (0, 1): -2.0, (1, 1): 2.0}),
        b=(2 * m1 - I / q, 2 * m2 - 2.0, 0.0),
        c=0.5 - float(K) / 2,
        terms=_split_terms(False),
        label=f"V(I={I},m1={m1},m2={m2})",
    )


def x_potential(p: int, q: int, p_star: int, sign: int = 1) -> Potential:
    """Color-deformed V^{+/-}(x, theta1, theta2); reduces to the split form of
    ``plus_potential`` at x = 0."""
    a = p / (2 * q)
    return Potential(
        A=_sym({(0, 0): a, (0, 1): -2.0, (1, 1): 2.0, (1, 2): -2.0}),
        b=(1 - sign / q, 0.0, 0.0),
        c=0.5 + p_star / (2 * q),
        terms=_split_terms(True),
        label="V+(x)" if sign > 0 else "V-(x)",
    )


# --- finite-N potential ----------------------------------------------------

# (coefficient of theta1, coefficient of theta2, constant, constant in 1/M, +1 numerator / -1 denominator)
# for the six Pochhammer symbols (t)_n of the summand, written as x = (n + 1/2)/M.
_POCH = (
    (0, -1, 2, -1.0, +1),   # (t)_{2N - i' - 1/2}
    (0, -1, 1, -0.5, +1),   # (t)_{N - i' - 1/2}
    (-1, -1, 2, -0.5, +1),  # (t)_{2N - n' - i'}
    (0, 1, 0, 0.0, -1),     # (t)_{i' - 1/2}
    (-1, 1, 0, 0.5, -1),    # (t)_{i' - n'}
    (0, -2, 2, -0.5, -1),   # (t)_{2N - 2i'}
)


def _log_poch_tail(x: complex, level: QuantumLevel) -> complex:
    """log (t)_n minus the common phi_N(1/(2M)) term, for x = (n + 1/2)/M."""
    if x.real <= 1:
        return -phi_N(x, level)
    return -phi_N(x - 1, level) + math.log(2)


def potential_V_N(p: int, q: int, I: int, K: Fraction | float, level: QuantumLevel, theta1, theta2) -> complex:
    """Finite-N potential: exp(M V_N(n'/M, i'/M)) is the (s, n', i') summand of
    the collapsed sum with the sine factor and (-1)^{P(s)} removed.

    The Pochhammer branch (x <= 1, or x - 1 with the extra log 2) is chosen per
    factor from Re x, which reproduces every real-part case of the lattice.
    Exact ties at Re x = 1 take the x <= 1 branch.
    """
    M = level.M
    t1, t2 = complex(theta1), complex(theta2)
    quad = (0.5 - 2 * t2 + 2 * t2 * t2 - I * t1 / q - 2 * t1 * t2 + p / (2 * q) * t1 * t1 - float(K) / 2
            - 0.5 / M - t1 / M - t2 / M - 1.5 / M ** 2)
    logs = 0j
    for c1, c2, c0, cm, side in _POCH:
        x = c1 * t1 + c2 * t2 + c0 + cm / M
        logs += side * _log_poch_tail(x, level)
    return 1j * math.pi * quad + logs / M


def V_N_first_order(theta1, theta2) -> complex:
    """Coefficient of 1/M in V_N - V, valid away from the boundary of D0'."""
    t1, t2 = complex(theta1), complex(theta2)

    def lg(x):
        return cmath.log(1 - cmath.exp(TWO_PI_I * x))

    return (1j * math.pi * (t2 - 2) + math.log(2) - 1.5 * lg(t2)
            - 0.5 * lg(t2 + t1) - 0.5 * lg(t2 - t1) + 0.5 * lg(2 * t2))


# --- real region function ----------------------------------------------------

def region_v(theta1, theta2):
    """v = 3 Lambda(theta2) + Lambda(theta2 + theta1) + Lambda(theta2 - theta1) - Lambda(2 theta2)."""
    t1, t2 = np.asarray(theta1, dtype=float), np.asarray(theta2, dtype=float)
    return 3 * lobachevsky(t2) + lobachevsky(t2 + t1) + lobachevsky(t2 - t1) - lobachevsky(2 * t2)


@dataclass(frozen=True)
class RegionSpec:
    c0: float = C0
    threshold: float = REGION_THRESHOLD
    epsilon: float = 1e-5
    x0: float = 0.01


def in_D(theta1, theta2):
    t1, t2 = np.asarray(theta1), np.asarray(theta2)
    return (t2 + t1 > 0) & (t2 - t1 > 0) & (t2 > 0) & (t2 < 0.5)


def in_D0_prime(theta1, theta2, c0: float = C0, tol: float = 0.0):
    a, t2 = np.abs(np.asarray(theta1)), np.asarray(theta2)
    return (a - tol <= t2) & (t2 <= 0.5 - a + tol) & (a <= c0 + tol)


def in_D0_second(theta1, theta2, c0: float = C0, tol: float = 0.0):
    a, t2 = np.abs(np.asarray(theta1)), np.asarray(theta2)
    return (a - tol <= t2) & (t2 <= 0.5 + tol) & (a >= c0 - tol) & (a <= 0.25 + tol)


def in_D0(theta1, theta2, c0: float = C0, tol: float = 0.0):
    return in_D0_prime(theta1, theta2, c0, tol) | in_D0_second(theta1, theta2, c0, tol)


def region_membership(theta1: float, theta2: float, c0: float = C0) -> str:
    """Most specific of "D0'", "D0''", "D", "outside" (D0' and D0'' are subsets of D)."""
    if not in_D(theta1, theta2):
        return "outside"
    if in_D0_prime(theta1, theta2, c0):
        return "D0'"
    if in_D0_second(theta1, theta2, c0):
        return "D0''"
    return "D"
