import cmath
import math

import numpy as np
import pytest

from whitehead_rt.asymptotics import (
    C_N, PotentialParams, SingularityError, asymptotic_J, critical_x, dV_dc_identity, hessian_f, hessian_f_grid,
    hessian_positivity_x_bound, log_asymptotic_J, potential_V, potential_V_N, re_V_along_c, solve_critical, theta2_of_c,
    tv_asymptotic, tv_coefficient, zeta_second_derivative_formula,
)
from whitehead_rt.geometry import OCTAHEDRON_VOLUME, solve_filling
from whitehead_rt.invariants import rt_reduced
from whitehead_rt.potentials import plus_potential, x_potential
from whitehead_rt.special import QuantumLevel
from whitehead_rt.surgery import SurgeryPresentation


@pytest.fixture(scope="module")
def prof52():
    return solve_critical(5, 2)


def test_example_values():
    prof = solve_critical(1, -2)
    assert abs(prof.theta1_0 - complex(-0.1038205182, 0.1790172070)) < 1e-8
    assert abs(prof.theta2_0 - complex(0.1308066000, 0.09218763785)) < 1e-8
    assert prof.residual < 1e-12 and prof.in_D0


@pytest.mark.parametrize("pq", [(5, 2), (1, -2), (3, 5), (7, -3), (1, 1)])
def test_critical_point_is_geometric(pq):
    p, q = pq
    prof = solve_critical(p, q)
    z1, z2 = prof.z1_0, prof.z2_0
    assert abs(z1 ** p * ((z1 - z2) / (z1 * z2 - 1)) ** (2 * q) - 1) < 1e-10
    sol = solve_filling(p, q)
    assert abs(z1 - sol.z1) < 1e-12 and abs(z2 - sol.z2) < 1e-12
    assert 0 < prof.volume < OCTAHEDRON_VOLUME
    assert prof.volume == pytest.approx(sol.vol, abs=1e-10)
    cs = (2 * math.pi * prof.zeta.imag - sol.cs + math.pi ** 2 / 2) % math.pi ** 2 - math.pi ** 2 / 2
    assert abs(cs) < 1e-9


@pytest.mark.parametrize("pq", [(5, 2), (3, 5)])
def test_shift_relation(pq):
    p, q = pq
    prof = solve_critical(p, q)
    G = PotentialParams.tagged(p, q).build()
    # the tagged Fourier potential differs from zeta by a purely imaginary constant
    assert abs((G(prof.theta1_0, prof.theta2_0) - prof.zeta).real) < 1e-12


def test_figure_eight_coefficients():
    prof = solve_critical(1, 1)
    s2 = cmath.sin(math.pi * prof.theta1_0) ** 2
    assert abs(s2 - (5 / 8 - 3 * math.sqrt(3) / 8 * 1j)) < 1e-12
    assert tv_coefficient(prof) == pytest.approx(1 / (2 * math.sqrt(3)), abs=1e-12)
    assert 1 / math.sqrt((1 / (1 - prof.z2_0)).imag) == pytest.approx(math.sqrt(2) / 3 ** 0.25, abs=1e-12)
    lv = QuantumLevel(40)
    coef = tv_asymptotic(1, 1, lv, prof) / math.exp(lv.M * prof.volume / math.pi)
    assert coef == pytest.approx(math.sqrt(lv.M) / (math.sqrt(2) * 3 ** 0.75), rel=1e-12)


def test_phase_unimodular():
    pres = SurgeryPresentation.from_slope(5, 2)
    for N in (5, 51, 10 ** 9 + 7):
        assert abs(abs(C_N(pres, N)) - 1) < 1e-14


def test_asymptotic_J_ratio(prof52):
    ratios = []
    for N in (25, 51, 101):
        lv = QuantumLevel(N)
        exact = rt_reduced((5, 2), N, lv).J_norm
        ratios.append(exact / asymptotic_J(5, 2, lv, prof52))
    errs = [abs(r - 1) for r in ratios]
    assert errs[0] > errs[1] > errs[2]
    # O(1/N): doubling N roughly halves the error
    assert errs[2] < 0.6 * errs[1] and errs[2] < 0.15


def test_asymptotic_growth_prefactor(prof52):
    gaps = []
    for N in (100, 1000, 10000):
        lv = QuantumLevel(N)
        gaps.append(abs(2 * math.pi / lv.M * log_asymptotic_J(5, 2, lv, prof52).real - prof52.volume))
    assert gaps[0] > gaps[1] > gaps[2]


def _f(P, t1R, t2R, x=0.0):
    return lambda X1, X2: P(complex(t1R, X1), complex(t2R, X2), x).real


@pytest.mark.parametrize("pt", [(0.05, 0.2, 0.1, -0.3), (-0.1, 0.3, -0.4, 0.2), (0.0, 0.25, 0.0, 0.0)])
def test_hessian_matches_differences(pt):
    t1R, X1, t2R, X2 = pt[0], pt[2], pt[1], pt[3]
    f = _f(plus_potential(5, 2, 1), t1R, t2R)
    h = 1e-4
    fd = np.array([
        [(f(X1 + h, X2) - 2 * f(X1, X2) + f(X1 - h, X2)) / h ** 2,
         (f(X1 + h, X2 + h) - f(X1 + h, X2 - h) - f(X1 - h, X2 + h) + f(X1 - h, X2 - h)) / (4 * h * h)],
        [0.0, (f(X1, X2 + h) - 2 * f(X1, X2) + f(X1, X2 - h)) / h ** 2]])
    fd[1, 0] = fd[0, 1]
    H = hessian_f(t1R, X1, t2R, X2)
    assert np.abs(H - fd).max() < 1e-5
    assert np.allclose(hessian_f_grid(t1R, X1, t2R, X2), (H[0, 0], H[0, 1], H[1, 1]))


def test_deformed_hessian_matches_differences():
    x, t1R, X1, t2R, X2 = 0.01, 0.05, 0.1, 0.2, -0.2
    f = _f(x_potential(5, 2, 1), t1R, t2R, x)
    h = 1e-4
    d11 = (f(X1 + h, X2) - 2 * f(X1, X2) + f(X1 - h, X2)) / h ** 2
    d22 = (f(X1, X2 + h) - 2 * f(X1, X2) + f(X1, X2 - h)) / h ** 2
    d12 = (f(X1 + h, X2 + h) - f(X1 + h, X2 - h) - f(X1 - h, X2 + h) + f(X1 - h, X2 - h)) / (4 * h * h)
    H = hessian_f(t1R, X1, t2R, X2, x)
    assert np.abs(H - np.array([[d11, d12], [d12, d22]])).max() < 1e-5


def test_hessian_symmetric_axis():
    H = hessian_f(0.0, 0.0, 0.2, 0.3)
    assert abs(H[0, 1]) < 1e-15


def test_hessian_pole():
    with pytest.raises(SingularityError):
        hessian_f(0.1, 0.0, 0.1, 0.0)


def test_x_bound():
    assert 0 < hessian_positivity_x_bound(0.05) <= 1 / 6
    assert hessian_positivity_x_bound(0.25) == pytest.approx(1 / 6)


def test_color_family(prof52):
    assert abs(critical_x(5, 2, 0.0, profile=prof52).zeta - prof52.zeta) < 1e-13
    d2 = zeta_second_derivative_formula(prof52)
    assert d2 < 0
    res = [critical_x(5, 2, x, profile=prof52) for x in np.linspace(0, 0.01, 6)]
    assert all(r.residual < 1e-12 for r in res)
    assert not res[-1].in_proven_regime


def test_color_family_proven_regime():
    prof = solve_critical(3, 1000)
    vals = [critical_x(3, 1000, x, profile=prof) for x in np.arange(0, 0.0101, 0.002)]
    assert all(v.in_proven_regime for v in vals)
    re = [v.zeta.real for v in vals]
    assert all(a > b for a, b in zip(re, re[1:]))


def test_profile_samples():
    prof = solve_critical(1, 1, x_samples=4)
    assert len(prof.zeta_of_x) == 5 and prof.zeta_of_x[0][0] == 0.0
    assert abs(prof.zeta_of_x[0][1] - prof.zeta) < 1e-13


def test_one_dimensional_family():
    assert abs(theta2_of_c(0.0) - cmath.log((1 + 2j) / 5) / (2j * math.pi)) < 1e-15
    h = 1e-5
    for c in (0.05, 0.1, 0.2):
        fd = (re_V_along_c(c + h) - re_V_along_c(c - h)) / (2 * h)
        assert abs(fd - dV_dc_identity(c)) < 1e-6
        t2 = theta2_of_c(c)
        assert abs(plus_potential(1, 1, 1).gradient(c, t2)[1]) < 1e-12
    assert re_V_along_c(0.1, 5, 2) == pytest.approx(re_V_along_c(0.1), abs=1e-13)


def test_params_dispatch():
    p = PotentialParams(5, 2)
    assert potential_V(p, 0.1, 0.2) == plus_potential(5, 2, 1)(0.1, 0.2)
    assert potential_V(PotentialParams(5, 2, form="x", x=0.01), 0.1, 0.2) == x_potential(5, 2, 1)(0.1, 0.2, 0.01)
    with pytest.raises(ValueError):
        PotentialParams(5, 2, form="other").build()
    with pytest.raises(ValueError):
        PotentialParams(5, 2, form="general").build()
    lv = QuantumLevel(10)
    base = potential_V_N(PotentialParams(5, 2), lv, 0.05, 0.2)
    shifted = potential_V_N(PotentialParams(5, 2, m1=1, m2=1), lv, 0.05, 0.2)
    assert abs(shifted - base - 2j * math.pi * 0.25) < 1e-12
