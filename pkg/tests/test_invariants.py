import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from whitehead_rt import invariants as inv
from whitehead_rt.invariants import (
    InfeasibleError, gauss_sum_S, gauss_sum_direct, habiro_bracket, mu_r, rt_bruteforce, rt_reduced, turaev_viro,
)
from whitehead_rt.special import DomainError, QuantumLevel, brace
from whitehead_rt.surgery import SurgeryPresentation, ncf_from_terms

small_slopes = st.tuples(st.integers(-9, 9), st.integers(-5, 5)).filter(
    lambda pq: pq[1] != 0 and math.gcd(*pq) == 1)


def figure_eight_jones(m: int, lv: QuantumLevel) -> complex:
    """Cyclotomic expansion sum_k prod_{j<=k} {m+j}{m-j} of the colored Jones polynomial of 4_1."""
    total, prod = 0j, 1 + 0j
    for k in range(m):
        if k:
            prod *= brace(m + k, lv) * brace(m - k, lv)
        total += prod
    return total


@settings(max_examples=25)
@given(small_slopes, st.integers(2, 6))
def test_reduced_matches_bruteforce(pq, N):
    lv = QuantumLevel(N)
    pres = SurgeryPresentation.from_slope(*pq)
    brute = [rt_bruteforce(pres, m, lv).J_bar for m in range(1, N + 1)]
    scale = max(abs(b) for b in brute)
    for m, b in enumerate(brute, start=1):
        assert abs(rt_reduced(pres, m, lv, "double").J_bar - b) < 1e-9 * max(abs(b), scale)


@pytest.mark.parametrize("N", [5, 9])
def test_figure_eight_moduli(N):
    lv = QuantumLevel(N)
    for m in range(1, N + 1):
        assert abs(rt_reduced((1, 1), m, lv).J_norm) == pytest.approx(abs(figure_eight_jones(m, lv)), rel=1e-10)


def test_normalization():
    lv = QuantumLevel(6)
    for m in range(1, 7):
        s = rt_reduced((5, 2), m, lv)
        ratio = (-1) ** (m - 1) * math.sin(2 * math.pi / lv.r) / math.sin(2 * math.pi * m / lv.r)
        assert abs(s.J_norm - ratio * s.J_bar) < 1e-12 * max(1, abs(s.J_norm))


def test_habiro_single_term():
    lv = QuantumLevel(3)
    F = inv._brace_factorials(lv.r)
    for n in range(lv.r - 1):
        expect = (-1) ** n * F[1] * F[n + 1] / (F[0] * F[n] * F[1]) / brace(1, lv)
        assert abs(habiro_bracket(1, n, lv) - expect) < 1e-12
    with pytest.raises(DomainError):
        habiro_bracket(1, lv.r - 1, lv)


@pytest.mark.parametrize("terms, pq, N", [((2, 3), (5, 2), 3), ((-2, -1), (1, -2), 4), ((2, 3, 1), (3, 5), 6)])
def test_gauss_sum_examples(terms, pq, N):
    lv = QuantumLevel(N)
    ncf = ncf_from_terms(terms, *pq)
    for n in range(1, lv.r):
        assert abs(gauss_sum_S(n, lv, ncf) - gauss_sum_direct(n, lv, ncf)) < 1e-10


def test_precision_modes_agree():
    lv = QuantumLevel(20)
    for m in (1, 10, 20):
        d = rt_reduced((3, 5), m, lv, "double").J_norm
        e = rt_reduced((3, 5), m, lv, "extended").J_norm
        assert abs(d - e) < 1e-10 * max(1, abs(e))


def test_precision_env(monkeypatch):
    monkeypatch.setenv(inv.PRECISION_ENV, "extended")
    assert inv.resolve_precision(None, 5) == "extended"
    monkeypatch.setenv(inv.PRECISION_ENV, "auto")
    assert inv.resolve_precision(None, 101) == "extended"
    assert inv.resolve_precision(None, 50) == "auto"
    with pytest.raises(ValueError):
        inv.resolve_precision("quad", 5)


def test_summation_order_independence():
    lv = QuantumLevel(51)
    pres = SurgeryPresentation.from_slope(5, 2)
    terms = inv._terms_double(pres, 0, lv)
    rng = np.random.default_rng(1)
    ref = terms.sum()
    for _ in range(3):
        assert abs(rng.permutation(terms).sum() - ref) < 1e-12 * abs(ref)


def test_bruteforce_budget():
    with pytest.raises(InfeasibleError, match="budget"):
        rt_bruteforce((3, 5), 1, QuantumLevel(250))


def test_color_range():
    with pytest.raises(DomainError):
        rt_reduced((1, 1), 0, QuantumLevel(3))
    with pytest.raises(DomainError):
        rt_reduced((1, 1), 4, QuantumLevel(3))


def test_turaev_viro_structure():
    lv = QuantumLevel(25)
    tv = turaev_viro((5, 2), lv)
    assert tv.total >= tv.mu_r_sq * tv.per_color[-1] > 0
    assert tv.total == pytest.approx(tv.mu_r_sq * sum(tv.per_color))
    assert int(np.argmax(tv.per_color)) + 1 in (lv.N, lv.N - 1)


def test_mu_conventions():
    lv = QuantumLevel(7)
    assert mu_r(lv, "asymptotic") == pytest.approx(2 * mu_r(lv, "skein"))
    assert mu_r(lv) == pytest.approx(math.sqrt(2) * math.sin(math.pi / lv.M) / math.sqrt(lv.M))
    with pytest.raises(ValueError):
        mu_r(lv, "other")
