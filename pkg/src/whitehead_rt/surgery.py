"""Integer and rational combinatorics of the chain surgery presentation of W(p,q).

Everything here is exact: integers and ``fractions.Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


class CoprimalityError(ValueError):
    pass


class CombinatoricsError(RuntimeError):
    pass


@dataclass(frozen=True)
class SurgerySlope:
    p: int
    q: int
    p_star: int
    q_star: int

    @classmethod
    def make(cls, p: int, q: int) -> "SurgerySlope":
        ps, qs = bezout(p, q)
        return cls(p, q, ps, qs)


def bezout(p: int, q: int) -> tuple[int, int]:
    """Return (p', q') with p'p + q'q = 1 and 0 <= p' < |q| when |q| > 1."""
    if q == 0:
        raise CoprimalityError("q must be nonzero")
    if math.gcd(p, q) != 1:
        raise CoprimalityError(f"gcd({p}, {q}) != 1")
    if abs(q) == 1:
        # p*1 + q*q'... pick p' = 0 unless p = ±1 in which case the usual choice is p' = p
        if abs(p) == 1:
            return p, 0
        return 0, q
    ps = pow(p, -1, abs(q))
    qs = (1 - ps * p) // q
    assert ps * p + qs * q == 1
    return ps, qs


@dataclass(frozen=True)
class NegContinuedFraction:
    """p/q = b_l - 1/(b_{l-1} - 1/(... - 1/b_1)), stored as b = (b_1, ..., b_l)."""

    b: tuple[int, ...]
    a0_sign: int
    A: tuple[int, ...]
    C: tuple[int, ...]
    sigma: int
    degenerate: bool = False

    @property
    def l(self) -> int:
        return len(self.b)

    @property
    def K(self) -> tuple[Fraction, ...]:
        """K_1..K_l as exact rationals (index 0 of the tuple is K_1)."""
        out = []
        acc = 0
        for i in range(1, self.l + 1):
            acc += self.b[i - 1] * self.C[i]
            out.append(Fraction((-1) ** i * acc, self.C[i]))
        return tuple(out)

    def K_at(self, i: int) -> Fraction:
        # K_0 only ever appears multiplied by C_0 = 0
        return Fraction(0) if i == 0 else self.K[i - 1]

    def CK_at(self, i: int) -> int:
        """C_i K_i = (-1)^i sum_{j<=i} b_j C_j, an integer."""
        return (-1) ** i * sum(self.b[j - 1] * self.C[j] for j in range(1, i + 1))


def _recurse(b: list[int], a0: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    A, C = [a0], [0]
    for bi in b:
        A.append(bi * A[-1] - C[-1])
        C.append(A[-2])
    return tuple(A), tuple(C)


def ncf_from_terms(b: list[int] | tuple[int, ...], p: int, q: int) -> NegContinuedFraction:
    """Wrap a given term list (b_1..b_l), choosing A_0 = ±1 so that A_l = p, C_l = q."""
    b = list(b)
    for a0 in (1, -1):
        A, C = _recurse(b, a0)
        if A[-1] == p and C[-1] == q:
            sig, deg = linking_signature_full(b)
            return NegContinuedFraction(tuple(b), a0, A, C, sig, deg)
    raise CombinatoricsError(f"terms {b} do not expand {p}/{q}")


def expand_ncf(p: int, q: int) -> NegContinuedFraction:
    """Greedy ceiling expansion of p/q."""
    bezout(p, q)
    terms = []
    x = Fraction(p, q)
    while True:
        c = math.ceil(x)
        terms.append(c)
        rem = c - x
        if rem == 0:
            break
        x = 1 / rem
    terms.reverse()
    return ncf_from_terms(terms, p, q)


def linking_signature_full(b) -> tuple[int, bool]:
    """Signature of the tridiagonal chain matrix via LDL^T with exact pivots.

    A zero pivot is bypassed by a symmetric 2x2 block elimination; returns
    (signature, singular?).
    """
    n = len(b)
    if n == 0:
        raise ValueError("empty chain")
    M = [[Fraction(0)] * n for _ in range(n)]
    for i, bi in enumerate(b):
        M[i][i] = Fraction(bi)
        if i + 1 < n:
            M[i][i + 1] = M[i + 1][i] = Fraction(1)
    pos = neg = 0
    singular = False
    k = 0
    while k < n:
        d = M[k][k]
        if d != 0:
            pos += d > 0
            neg += d < 0
            for i in range(k + 1, n):
                f = M[i][k] / d
                if f:
                    for j in range(k + 1, n):
                        M[i][j] -= f * M[k][j]
            k += 1
            continue
        # zero pivot; look for a coupling to eliminate a 2x2 block
        j = next((j for j in range(k + 1, n) if M[j][k] != 0), None)
        if j is None:
            singular = True
            k += 1
            continue
        if j != k + 1:
            M[k + 1], M[j] = M[j], M[k + 1]
            for row in M:
                row[k + 1], row[j] = row[j], row[k + 1]
        blk = [[M[k][k], M[k][k + 1]], [M[k + 1][k], M[k + 1][k + 1]]]
        det = blk[0][0] * blk[1][1] - blk[0][1] * blk[1][0]
        # det < 0 always here (a zero diagonal entry): one positive, one negative
        pos += 1
        neg += 1
        inv = [[blk[1][1] / det, -blk[0][1] / det], [-blk[1][0] / det, blk[0][0] / det]]
        for i in range(k + 2, n):
            ci = (M[i][k], M[i][k + 1])
            if ci == (0, 0):
                continue
            w = (ci[0] * inv[0][0] + ci[1] * inv[1][0], ci[0] * inv[0][1] + ci[1] * inv[1][1])
            for jj in range(k + 2, n):
                M[i][jj] -= w[0] * M[k][jj] + w[1] * M[k + 1][jj]
        k += 2
    return pos - neg, singular


def linking_signature(b) -> int:
    return linking_signature_full(b)[0]


@dataclass(frozen=True)
class SurgeryCombinatorics:
    s_plus: int
    s_minus: int
    m_plus: int
    m_minus: int
    I_table: tuple[int, ...]
    J_table: tuple[Fraction, ...]
    K_table: tuple[Fraction, ...]
    P_table: tuple[int, ...]


def build_combinatorics(ncf: NegContinuedFraction, p: int, q: int) -> SurgeryCombinatorics:
    l, C = ncf.l, ncf.C
    aq = abs(q)
    Cl1 = C[l - 1]
    CK = ncf.CK_at(l - 1)
    K = ncf.K

    I_tab, P_tab, J_tab, K_tab = [], [], [], []
    # s-independent pieces of J and K
    j_shift = Fraction(0)
    for i in range(1, l):
        j_shift += (-1) ** (i + 1) * K[i - 1] / C[i + 1]
    j_shift *= (-1) ** l
    k_shift = sum((C[i] * K[i - 1] ** 2 / C[i + 1] for i in range(1, l - 1)), Fraction(0))
    for s in range(aq):
        raw = -(Cl1 * (2 * s + 1) + CK)
        I = raw % (2 * aq)
        I_tab.append(I)
        P_tab.append((raw - I) // (2 * aq))
        J_tab.append(Fraction(2 * s + 1, q) + j_shift)
        # C_{l-1}(2s+1+K_{l-1})^2 / q with the integer numerator kept exact
        if Cl1 == 0:
            k_main = Fraction(0)
        else:
            k_main = Fraction((Cl1 * (2 * s + 1) + CK) ** 2, Cl1 * q)
        K_tab.append(k_main + k_shift)

    def find(target_offset: int) -> tuple[int, int]:
        for s, I in enumerate(I_tab):
            num = I - target_offset + q
            if num % (2 * q) == 0:
                return s, num // (2 * q)
        raise CombinatoricsError(f"no s with I_s = {target_offset} - q mod 2q; bad continued fraction?")

    sp, mp = find(1)
    sm, mm = find(-1)
    return SurgeryCombinatorics(sp, sm, mp, mm, tuple(I_tab), tuple(J_tab), tuple(K_tab), tuple(P_tab))


@dataclass(frozen=True)
class SurgeryPresentation:
    """All exact data of one slope bundled together."""

    slope: SurgerySlope
    ncf: NegContinuedFraction
    comb: SurgeryCombinatorics

    @classmethod
    def from_slope(cls, p: int, q: int, terms=None) -> "SurgeryPresentation":
        slope = SurgerySlope.make(p, q)
        ncf = expand_ncf(p, q) if terms is None else ncf_from_terms(terms, p, q)
        return cls(slope, ncf, build_combinatorics(ncf, p, q))

    @property
    def p(self) -> int:
        return self.slope.p

    @property
    def q(self) -> int:
        return self.slope.q
