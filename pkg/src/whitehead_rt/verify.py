"""Named numerical checks, grouped into suites.

Each criterion function returns a list of ``Check`` records with the measured
quantity and the tolerance it was held to; nothing here raises on failure.
"""
from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .asymptotics import (
    critical_x, dV_dc_identity, hessian_f, hessian_f_grid, hessian_positivity_x_bound, re_V_along_c,
    solve_critical, theta2_of_c, tv_asymptotic, tv_coefficient, zeta_second_derivative_formula,
)
from .geometry import (
    NonHyperbolicError, PI_SQ, in_set_S, slope_length_sq, solve_filling, vol_bloch_wigner, vol_cs,
    vol_lower_bound,
)
from .invariants import gauss_sum_S, gauss_sum_direct, rt_bruteforce, rt_reduced, turaev_viro
from .potentials import REGION_THRESHOLD, C0, RegionSpec, in_D0, plus_potential, region_v
from .special import (
    QuantumLevel, dilog, lobachevsky, phi_N, phi_N_at_half_step, phi_N_reflection, pochhammer_t, pochhammer_via_phi,
)
from .surgery import CombinatoricsError, SurgeryPresentation, _recurse, ncf_from_terms

ORACLE_SLOPES = ((1, 1), (5, 2), (1, -2), (3, 5))
VOL_FIGURE_EIGHT = 6 * math.pi * float(lobachevsky(1 / 3))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"[{status}] {self.name}: measured={self.measured:.3e} tol={self.tolerance:.1e}{extra}"


def _below(name, measured, tol, detail=""):
    return Check(name, bool(measured < tol), float(measured), tol, detail)


def _mod_pi_sq(x: float) -> float:
    """Representative of x mod pi^2 in [-pi^2/2, pi^2/2)."""
    return (x + PI_SQ / 2) % PI_SQ - PI_SQ / 2


# --- 1, 2: exact invariants ----------------------------------------------------------

def criterion_1(slopes=ORACLE_SLOPES, levels=range(3, 13)) -> list[Check]:
    t0 = time.perf_counter()
    worst, where = 0.0, ""
    for p, q in slopes:
        pres = SurgeryPresentation.from_slope(p, q)
        for N in levels:
            lv = QuantumLevel(N)
            brute = [rt_bruteforce(pres, m, lv).J_bar for m in range(1, N + 1)]
            red = [rt_reduced(pres, m, lv, "double").J_bar for m in range(1, N + 1)]
            scale = max(abs(b) for b in brute)
            for m, (b, r) in enumerate(zip(brute, red), start=1):
                err = abs(r - b) / max(abs(b), scale)
                if err > worst:
                    worst, where = err, f"worst at ({p},{q}) N={N} m={m}"
    elapsed = time.perf_counter() - t0
    return [_below("reduced sum equals brute force", worst, 1e-9, where),
            _below("oracle runtime (s)", elapsed, 60.0)]


def small_chains(max_len: int = 3, coef=range(-3, 4)):
    """Continued fractions b with |b_i| <= 3 and no vanishing denominators."""
    for l in range(1, max_len + 1):
        for b in itertools.product(coef, repeat=l):
            A, C = _recurse(list(b), 1)
            if any(c == 0 for c in C[1:]):
                continue
            try:
                yield ncf_from_terms(b, A[-1], C[-1])
            except CombinatoricsError:
                continue


def criterion_2(levels=range(2, 7)) -> list[Check]:
    worst, count = 0.0, 0
    for ncf in small_chains():
        for N in levels:
            lv = QuantumLevel(N)
            for n in range(1, lv.r):
                worst = max(worst, abs(gauss_sum_S(n, lv, ncf) - gauss_sum_direct(n, lv, ncf)))
                count += 1
    return [_below("Gauss-sum closed form vs direct sum (abs)", worst, 1e-10, f"{count} cases, r=5..13, l<=3")]


# --- 3, 4, 5: reference values ----------------------------------------------------------

REFERENCE_1M2 = {
    "theta1": complex(-0.1038205182, 0.1790172070),
    "theta2": complex(0.1308066000, 0.09218763785),
    "z1": complex(0.2580453976, -0.19711501),
    "z2": complex(0.3814962624, 0.4104006092),
    "z0": complex(-0.6623589786, -0.5622795125),
}
REFERENCE_1M2_VALUE = complex(2.828122086, 6.845476024)


def criterion_3() -> list[Check]:
    t0 = time.perf_counter()
    prof = solve_critical(1, -2)
    sol = solve_filling(1, -2)
    got = {"theta1": prof.theta1_0, "theta2": prof.theta2_0, "z1": prof.z1_0, "z2": prof.z2_0, "z0": sol.z0}
    out = [_below(f"(1,-2) {k}", abs(got[k] - v), 1e-8) for k, v in REFERENCE_1M2.items()]
    val = 2 * math.pi * prof.zeta
    out.append(_below("(1,-2) Re 2 pi zeta", abs(val.real - REFERENCE_1M2_VALUE.real), 1e-6))
    out.append(_below("(1,-2) Im 2 pi zeta mod pi^2", abs(_mod_pi_sq(val.imag - REFERENCE_1M2_VALUE.imag)), 1e-6))
    out.append(_below("(1,-2) runtime (s)", time.perf_counter() - t0, 1.0))
    return out


def criterion_4(N: int = 51) -> list[Check]:
    prof = solve_critical(1, 1)
    z2 = complex(0.5, math.sqrt(3) / 2)
    target = 1 / (2 * math.sqrt(3))
    coef = tv_coefficient(prof)
    lv = QuantumLevel(N)
    full = tv_asymptotic(1, 1, lv, prof) / math.exp(lv.M * prof.volume / math.pi)
    expect = math.sqrt(lv.M) / (math.sqrt(2) * 3 ** 0.75)
    return [
        _below("(1,1) z2", abs(prof.z2_0 - z2), 1e-10),
        _below("(1,1) TV coefficient vs 1/(2 sqrt 3)", abs(coef - target), 1e-8),
        _below("(1,1) full TV coefficient (relative)", abs(full / expect - 1), 1e-8, f"N={N}"),
    ]


THETA2_C0_REFERENCE = complex(0.1946407106, 0.1185471546)


def criterion_5() -> list[Check]:
    v = 2 * math.pi * float(region_v(C0, 0.5 - C0))
    t2 = theta2_of_c(C0)
    w = 2 * math.pi * re_V_along_c(C0)
    return [
        _below("2 pi v(c0, 1/2 - c0) vs 3.3744816", abs(v - 3.3744816), 1e-6),
        _below("2 pi Re V+(c0, theta2(c0)) vs 3.3744812", abs(w - 3.3744812), 1e-6),
        _below("theta2(c0) vs reference digits", abs(t2 - THETA2_C0_REFERENCE), 1e-8, f"computed {t2:.10f}"),
    ]


# --- 6, 7: growth at large N ------------------------------------------------------------

def convergence_error(p: int, q: int, N: int, zeta: complex) -> float:
    """|(2 pi/M) log J_N - 2 pi zeta| with log J_N on the branch nearest M zeta
    and the imaginary part reduced mod pi^2."""
    lv = QuantumLevel(N)
    J = rt_reduced((p, q), N, lv, "extended").J_norm
    M = lv.M
    d = (2 * math.pi / M) * cmath.log(J / cmath.exp(M * zeta))
    return abs(complex(d.real, _mod_pi_sq(d.imag)))


def criterion_6(levels=(51, 101, 201)) -> list[Check]:
    zeta = solve_critical(5, 2).zeta
    E = [convergence_error(5, 2, N, zeta) for N in levels]
    bound = 2 * math.pi * (math.log(levels[-1]) + 5) / levels[-1]
    drops = [E[i] - E[i + 1] for i in range(len(E) - 1)]
    detail = " ".join(f"E({N})={e:.4f}" for N, e in zip(levels, E))
    return [
        Check("E(N) strictly decreasing at (5,2)", min(drops) > 0, min(drops), 0.0, detail),
        _below(f"E({levels[-1]}) below 2 pi (log N + 5)/N", E[-1], bound),
    ]


def criterion_7(levels=(25, 51, 101)) -> list[Check]:
    prof = solve_critical(1, 1)
    errs, ratios = [], []
    for N in levels:
        lv = QuantumLevel(N)
        tv = turaev_viro((1, 1), lv).total
        errs.append(abs(math.pi / lv.M * math.log(tv) - VOL_FIGURE_EIGHT))
        ratios.append(tv / tv_asymptotic(1, 1, lv, prof))
    drops = [errs[i] - errs[i + 1] for i in range(len(errs) - 1)]
    return [
        Check("TV growth error decreasing at (1,1)", min(drops) > 0, min(drops), 0.0,
              " ".join(f"{e:.4f}" for e in errs)),
        _below(f"TV growth error at N={levels[-1]}", errs[-1], 0.2),
        Check(f"TV exact/asymptotic ratio in (0.5, 2) at N={levels[-1]}", 0.5 < ratios[-1] < 2, ratios[-1], 2.0),
        Check("TV ratio closer to 1 than at the previous level", abs(ratios[-1] - 1) < abs(ratios[-2] - 1),
              abs(ratios[-1] - 1), abs(ratios[-2] - 1), " ".join(f"{x:.4f}" for x in ratios)),
    ]


# --- 8, 9: identities and derivatives ------------------------------------------------------

def criterion_8(levels=(5, 10, 20)) -> list[Check]:
    poch = refl = half = 0.0
    for N in levels:
        lv = QuantumLevel(N)
        for n in range(N + 1):
            exact = pochhammer_t(n, lv)
            poch = max(poch, abs(pochhammer_via_phi(n, lv) - exact) / max(1.0, abs(exact)))
        for th in (0.13, 0.37 + 0.2j, 0.5, 0.81 - 0.4j):
            refl = max(refl, abs(phi_N(th, lv) + phi_N(1 - th, lv) - phi_N_reflection(th, lv)))
        half = max(half, abs(phi_N(0.5 / lv.M, lv) - phi_N_at_half_step(lv)))
    eq = 0.0
    for th, X in itertools.product((0.1, 0.3, 0.5, 0.77), (-1.5, -0.2, 0.4, 1.1)):
        w = cmath.exp(2j * math.pi * complex(th, X))
        lhs = ((dilog(w) + dilog(1 / w)) / (2j * math.pi)).real
        eq = max(eq, abs(lhs - 2 * math.pi * (th - 0.5) * X))
    return [
        _below("(t)_n from phi_N, all n <= N", poch, 1e-9, f"N in {levels}"),
        _below("phi_N(theta) + phi_N(1 - theta) closed form", refl, 1e-10),
        _below("phi_N(1/(2M)) closed form", half, 1e-10),
        _below("Re (Li2(w) + Li2(1/w))/(2 pi i) = 2 pi (theta - 1/2) X", eq, 1e-10),
    ]


def _zeta_re_at(p, q, x, prof):
    return critical_x(p, q, x, profile=prof).zeta.real


def criterion_9(slopes=((1, 1), (5, 2)), h: float = 1e-4) -> list[Check]:
    out = []
    grad_err = 0.0
    eps = 1e-6
    for p, q in slopes:
        prof = solve_critical(p, q)
        P = plus_potential(p, q, SurgeryPresentation.from_slope(p, q).slope.p_star)
        for dt in (0.01 + 0.02j, -0.03 + 0.01j, 0.02 - 0.015j):
            t1, t2 = prof.theta1_0 + dt, prof.theta2_0 - dt / 2
            g = P.gradient(t1, t2)[:2]
            fd = [(P(t1 + eps, t2) - P(t1 - eps, t2)) / (2 * eps), (P(t1, t2 + eps) - P(t1, t2 - eps)) / (2 * eps)]
            grad_err = max(grad_err, float(np.abs(g - np.array(fd)).max()))
        z0 = _zeta_re_at(p, q, 0.0, prof)
        zp, zm = _zeta_re_at(p, q, h, prof), _zeta_re_at(p, q, -h, prof)
        d1 = (zp - zm) / (2 * h)
        d2 = (zp - 2 * z0 + zm) / h ** 2
        formula = zeta_second_derivative_formula(prof)
        out.append(_below(f"({p},{q}) d Re zeta/dx at 0", abs(d1), 1e-6))
        out.append(_below(f"({p},{q}) d2 Re zeta/dx2 vs -4 pi Im 1/(1-z2) (relative)",
                          abs(d2 / formula - 1), 1e-5, f"fd={d2:.8f} formula={formula:.8f}"))
    out.insert(0, _below("V+ gradient vs central differences", grad_err, 1e-6))
    return out


# --- 10: geometry ---------------------------------------------------------------------------

def random_long_slopes(count: int = 30, seed: int = 0, min_len: int = 370, bound: int = 60):
    rng = np.random.default_rng(seed)
    found = []
    while len(found) < count:
        p, q = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
        if q == 0 or math.gcd(p, q) != 1 or slope_length_sq(p, q) < min_len or (p, q) in found:
            continue
        found.append((p, q))
    return found


def criterion_10(count: int = 30, seed: int = 0) -> list[Check]:
    route, bw, bound_viol, s_viol, hyperbolic = 0.0, 0.0, 0, 0, 0
    for p, q in random_long_slopes(count, seed):
        try:
            vol, _ = vol_cs(p, q)
        except NonHyperbolicError:
            continue
        hyperbolic += 1
        prof = solve_critical(p, q)
        route = max(route, abs(vol - prof.volume))
        bw = max(bw, abs(vol - vol_bloch_wigner(solve_filling(p, q).z0)))
        bound_viol += vol < vol_lower_bound(p, q).value
        s_viol += in_set_S(p, q) and not vol > REGION_THRESHOLD
    return [
        Check("random long slopes are hyperbolic", hyperbolic == count, hyperbolic, count),
        _below("vol_cs vs 2 pi Re zeta", route, 1e-9),
        _below("vol_cs vs Bloch-Wigner volume", bw, 1e-9),
        Check("vol >= length lower bound", bound_viol == 0, bound_viol, 0),
        Check("vol > 3.374482 on S", s_viol == 0, s_viol, 0),
    ]


# --- 11: grids ---------------------------------------------------------------------------------

def _grid(lo, hi, step):
    return np.round(np.arange(lo, hi + step / 2, step), 10)


def hessian_grid_violations(step: float = 0.01, xmax: float = 1.0) -> tuple[int, int, float]:
    """(violations, points, smallest min(h11, det)) over D_H x [-xmax, xmax]^2."""
    g = _grid(-0.5, 0.5, step)
    X = _grid(-xmax, xmax, step)
    X1, X2 = np.meshgrid(X, X, indexing="ij")
    bad = total = 0
    worst = np.inf
    for a, b in itertools.product(g, g):
        if not (0 < b + a < 0.5 and 0 < b - a < 0.5):
            continue
        h11, h12, h22 = hessian_f_grid(a, X1, b, X2)
        m = np.minimum(h11, h11 * h22 - h12 ** 2)
        bad += int(np.count_nonzero(~(m > 0)))
        total += m.size
        worst = min(worst, float(m.min()))
    return bad, total, worst


def region_grid_violations(step: float = 1e-3, spec: RegionSpec = RegionSpec()) -> tuple[int, int]:
    """(points with v above threshold outside D0, points with v above threshold)."""
    T1, T2 = np.meshgrid(_grid(-0.5, 0.5, step), _grid(0.0, 0.5, step), indexing="ij")
    inside = (T2 + T1 > 0) & (T2 - T1 > 0) & (T2 > 0) & (T2 < 0.5)
    high = inside & (region_v(T1, T2) > spec.threshold / (2 * math.pi))
    bad = high & ~in_D0(T1, T2, spec.c0, tol=spec.epsilon)
    return int(bad.sum()), int(high.sum())


def hessian_grid_check() -> list[Check]:
    bad, total, worst = hessian_grid_violations()
    return [Check("Hessian positive on D_H grid", bad == 0, bad, 0, f"{total} points, min(h11, det)={worst:.3g}")]


def region_grid_check() -> list[Check]:
    bad, total = region_grid_violations()
    return [Check("v above threshold implies D0", bad == 0, bad, 0, f"{total} points above threshold")]


def criterion_11() -> list[Check]:
    return hessian_grid_check() + region_grid_check()


# --- auxiliary checks used only by the CLI suites ----------------------------------------------

def deformed_hessian_checks(eps: float = 0.05, step: float = 0.02) -> list[Check]:
    """x > 0 Hessian positivity for x below the proven bound, theta2 >= eps."""
    xb = hessian_positivity_x_bound(eps)
    bad = total = 0
    for x in (xb / 4, xb / 2, 0.99 * xb):
        for a, b in itertools.product(_grid(-0.5, 0.5, step), _grid(eps, 0.5, step)):
            if not (0 < b + a < 0.5 and 0 < b - a < 0.5):
                continue
            for X1, X2 in itertools.product((-0.5, 0.0, 0.5), repeat=2):
                H = hessian_f(a, X1, b, X2, x)
                total += 1
                bad += not (H[0, 0] > 0 and np.linalg.det(H) > 0)
    return [Check("deformed Hessian positive below the x bound", bad == 0, bad, 0, f"{total} samples, bound={xb:.4g}")]


def dc_identity_checks(h: float = 1e-5) -> list[Check]:
    worst = max(abs((re_V_along_c(c + h) - re_V_along_c(c - h)) / (2 * h) - dV_dc_identity(c)) for c in (0.05, 0.1, 0.2))
    return [_below("d Re V+/dc closed form", worst, 1e-6)]


CRITERIA: dict[int, Callable[[], list[Check]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}

SUITES: dict[str, tuple] = {
    "oracle": (criterion_1, criterion_2),
    "identities": (criterion_8, dc_identity_checks),
    "regions": (criterion_5, region_grid_check),
    "hessian": (hessian_grid_check, deformed_hessian_checks, criterion_9),
    "volume": (criterion_3, criterion_4, criterion_10),
    "convergence": (criterion_6, criterion_7),
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    out = []
    for fn in SUITES[name]:
        out.extend(fn(seed=seed) if fn is criterion_10 else fn())
    return out
