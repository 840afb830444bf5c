import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from whitehead_rt.geometry import (
    OCTAHEDRON_VOLUME, BranchSelectionError, NonHyperbolicError, critical_thetas, filling_residual,
    from_critical_shapes, holonomies, in_set_S, slope_length_sq, solve_filling, to_critical_shapes,
    vol_bloch_wigner, vol_cs, vol_lower_bound,
)
from whitehead_rt.special import lobachevsky

long_slopes = st.tuples(st.integers(-80, 80), st.integers(-40, 40)).filter(
    lambda pq: pq[1] != 0 and math.gcd(*pq) == 1 and slope_length_sq(*pq) >= 100)


def test_complete_structure():
    u, v = holonomies(-1j)
    assert abs(u) < 1e-15
    assert OCTAHEDRON_VOLUME == pytest.approx(3.663862376708876, abs=1e-12)
    assert vol_bloch_wigner(-1j) == pytest.approx(OCTAHEDRON_VOLUME, abs=1e-12)


def test_example_one_minus_two():
    sol = solve_filling(1, -2)
    assert abs(sol.z0 - complex(-0.6623589786, -0.5622795125)) < 1e-9
    assert sol.vol == pytest.approx(2.828122086, abs=1e-8)


def test_figure_eight():
    sol = solve_filling(1, 1)
    assert abs(sol.z2 - complex(0.5, math.sqrt(3) / 2)) < 1e-12
    assert sol.vol == pytest.approx(6 * math.pi * float(lobachevsky(1 / 3)), abs=1e-12)
    with pytest.raises(BranchSelectionError):
        vol_cs(1, 1, strict=True)


@pytest.mark.parametrize("p", [-4, -3, -2, -1, 0])
def test_exceptional_slopes(p):
    with pytest.raises(NonHyperbolicError):
        solve_filling(p, 1)


@settings(max_examples=40)
@given(long_slopes)
def test_solution_invariants(pq):
    p, q = pq
    sol = solve_filling(p, q)
    z, z1, z2 = sol.z0, sol.z1, sol.z2
    assert z.imag < 0
    assert abs(filling_residual(z, p, q)) < 1e-12 * (1 + abs(p) + 4 * abs(q))
    assert abs(from_critical_shapes(z1, z2) - z) < 1e-12 * max(1, abs(z))
    assert abs(z2 ** 2 * (z1 + 1 / z1 + 3) - (z1 + 1 / z1) * z2 + 1) < 1e-11
    assert abs(1 / (1 - z2) - (1 + 1 / (z - 1 / z))) < 1e-12
    assert (1 / (1 - z2)).imag > 0
    assert abs(sol.theta1.imag) > 1e-6
    assert 0 < sol.vol < OCTAHEDRON_VOLUME
    assert sol.vol >= vol_lower_bound(p, q).value
    assert sol.vol == pytest.approx(vol_bloch_wigner(z), abs=1e-10)
    assert 0 <= sol.cs < math.pi ** 2


def test_unit_circle_identity():
    # the closed form -1/(2 Im z) needs |z| = 1, which filling shapes need not satisfy
    for phi in (0.3, 1.1, 2.5):
        z = cmath.exp(-1j * phi)
        assert (1 / (1 - to_critical_shapes(z)[1])).imag == pytest.approx(-1 / (2 * z.imag), abs=1e-12)
    assert abs(abs(solve_filling(1, 1).z0) - 1) > 0.1


def test_thetas_branch():
    t1, t2 = critical_thetas(solve_filling(7, 3).z0)
    assert -0.5 < t1.real < 0.5 and 0 < t2.real <= 0.5


def test_lower_bound():
    b = vol_lower_bound(1, -2)
    assert not b.vacuous and b.value == pytest.approx((1 - 2 * math.pi ** 2 / 25) ** 1.5 * OCTAHEDRON_VOLUME)
    assert b.value == pytest.approx(0.3537, abs=1e-4)
    assert vol_lower_bound(1, 1).vacuous
    assert vol_lower_bound(10 ** 6, 1).value == pytest.approx(OCTAHEDRON_VOLUME, rel=1e-9)
    for p, q in [(370, 0), (-2, 10), (9, -1)]:
        if slope_length_sq(p, q) >= 370:
            assert vol_lower_bound(p, q).value > 3.374482


def test_set_S():
    assert not in_set_S(1, 1)
    assert not in_set_S(-1, 2) and not in_set_S(1, -2)
    assert in_set_S(5, 2)
    assert not in_set_S(4, 2)
    assert not in_set_S(1, 0)
    assert in_set_S(-4, 1)  # exceptional, yet not excluded by the lists
