import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from whitehead_rt.special import (
    AccuracyError, ContourSpec, DomainError, QuantumLevel, bloch_wigner, brace, brace_factorial, clausen_fourier,
    dilog, lobachevsky, phi_N, phi_N_at_half_step, phi_N_reflection, pochhammer_t, pochhammer_via_phi,
    quantum_integer,
)

PI2_6 = math.pi ** 2 / 6
off_cut = st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z) > 1e-3 and not (z.real > 1 and abs(z.imag) < 1e-9) and abs(z - 1) > 1e-3)


def test_quantum_level():
    lv = QuantumLevel(7)
    assert lv.r == 15 and lv.M == 7.5
    assert abs(abs(lv.t) - 1) < 1e-15 and abs(lv.t ** lv.r - 1) < 1e-12
    with pytest.raises(DomainError):
        QuantumLevel(0)


def test_quantum_integers():
    lv = QuantumLevel(2)
    assert quantum_integer(1, lv) == pytest.approx(1)
    assert quantum_integer(2, lv) == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-10)
    lv = QuantumLevel(6)
    for n in range(-5, 6):
        assert quantum_integer(n + lv.r, lv) == pytest.approx(quantum_integer(n, lv), abs=1e-12)


def test_factorials():
    lv = QuantumLevel(2)
    assert brace_factorial(0, lv) == 1 and pochhammer_t(0, lv) == 1
    t = lv.t
    assert abs(pochhammer_t(2, lv) - (1 - t) * (1 - t * t)) < 1e-14
    assert abs(brace(3, lv) - 2j * math.sin(6 * math.pi / 5)) < 1e-15
    with pytest.raises(DomainError):
        brace_factorial(lv.r, lv)


def test_dilog_values():
    assert dilog(0) == 0
    assert dilog(1) == pytest.approx(PI2_6, abs=1e-14)
    for th in np.linspace(0.05, 0.95, 13):
        w = cmath.exp(2j * math.pi * th)
        assert dilog(w).real == pytest.approx(PI2_6 + math.pi ** 2 * th * (th - 1), abs=1e-12)
        assert dilog(w).imag / (2 * math.pi) == pytest.approx(float(lobachevsky(th)), abs=1e-12)


@given(off_cut)
def test_dilog_against_mpmath(z):
    assert abs(dilog(z) - complex(mpmath.polylog(2, z))) < 1e-12 * max(1, abs(dilog(z)))


@given(off_cut)
def test_dilog_inversion(z):
    assume_ok = not (0 < z.real < 1 and abs(z.imag) < 1e-9)  # 1/z on the cut
    if not assume_ok:
        return
    rhs = -dilog(z) - PI2_6 - 0.5 * cmath.log(-z) ** 2
    assert abs(dilog(1 / z) - rhs) < 1e-12 * max(1, abs(rhs))


def test_lobachevsky():
    assert abs(lobachevsky(0.5)) < 1e-15 and abs(lobachevsky(1.0)) < 1e-15
    assert float(lobachevsky(0.25)) == pytest.approx(0.915965594177219 / (2 * math.pi), abs=1e-13)
    x = np.linspace(-2, 2, 41)
    assert np.allclose(lobachevsky(-x), -lobachevsky(x), atol=1e-15)
    assert np.allclose(lobachevsky(x + 1), lobachevsky(x), atol=1e-14)
    for th in (0.1, 0.3, 0.45):
        assert float(lobachevsky(th)) == pytest.approx(clausen_fourier(th, 20000), abs=1e-8)


def test_bloch_wigner_octahedron():
    # regular ideal octahedron: 4 D(i) per the -2(D(z) + D(-1/z)) formula at z = -i
    assert -2 * (bloch_wigner(-1j) + bloch_wigner(1 / 1j)) == pytest.approx(8 * math.pi * float(lobachevsky(0.25)))


def test_phi_domain():
    lv = QuantumLevel(5)
    with pytest.raises(DomainError):
        phi_N(1.5, lv)
    with pytest.raises(AccuracyError):
        phi_N(0.4, lv, ContourSpec(tail_cutoff=2.0, target_abs_err=1e-14))


@pytest.mark.parametrize("N", [5, 10, 20])
def test_pochhammer_via_phi(N):
    lv = QuantumLevel(N)
    for n in range(2 * N + 1):
        exact = pochhammer_t(n, lv)
        assert abs(pochhammer_via_phi(n, lv) - exact) < 1e-9 * max(1, abs(exact))


@pytest.mark.parametrize("theta", [0.2, 0.5 + 0.3j, 0.7 - 0.2j])
def test_phi_reflection(theta):
    lv = QuantumLevel(10)
    assert abs(phi_N(theta, lv) + phi_N(1 - theta, lv) - phi_N_reflection(theta, lv)) < 1e-10


def test_phi_half_steps():
    lv = QuantumLevel(10)
    M = lv.M
    assert abs(phi_N(0.5 / M, lv) - phi_N_at_half_step(lv)) < 1e-10
    assert abs(phi_N(1 - 0.5 / M, lv) - phi_N_at_half_step(lv, upper=True)) < 1e-10


def test_phi_limit_convergence():
    grid = [complex(a, b) for a in (0.1, 0.3, 0.5, 0.7, 0.9) for b in (-0.5, 0.0, 0.5)]
    errs = []
    for N in (10, 20, 40, 80):
        lv = QuantumLevel(N)
        errs.append(max(abs(phi_N(z, lv) / lv.M - dilog(cmath.exp(2j * math.pi * z)) / (2j * math.pi)) for z in grid))
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-2


def test_phi_derivative_limit():
    h = 1e-5
    for N in (20, 40):
        lv = QuantumLevel(N)
        worst = 0.0
        for z in (0.2 + 0.1j, 0.5, 0.8 - 0.3j):
            d = (phi_N(z + h, lv) - phi_N(z - h, lv)) / (2 * h)
            worst = max(worst, abs(d / lv.M + cmath.log(1 - cmath.exp(2j * math.pi * z))))
        assert worst < 5 / lv.M ** 2


@given(st.floats(0.01, 0.99), st.floats(-2.0, 2.0))
def test_li2_pair_identity(theta, X):
    w = cmath.exp(2j * math.pi * complex(theta, X))
    lhs = ((dilog(w) + dilog(1 / w)) / (2j * math.pi)).real
    assert abs(lhs - 2 * math.pi * (theta - 0.5) * X) < 1e-10
