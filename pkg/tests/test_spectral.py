"""Hecke zeta values, twisted divisor sums, the Eisenstein-side sieve
quadratic form, and the geometric side of the trace identity.

mpmath supplies the zeta oracle on the p = 0 line:
zeta_F(s) = zeta(s) L(s, chi_{-4}), with the L-function evaluated
through Hurwitz zetas.  The p != 0 values are checked for internal
consistency (conjugation, cutoff stability, multiplicativity).
"""

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gisieve.archimedean import (
    QuadratureConfig,
    TestFunction,
    _panel_rule,
    plancherel_integral,
)
from gisieve.gauss import (
    DomainError,
    GaussianInt,
    GIdeal,
    divisor_count,
    ideals_up_to_norm,
    is_coprime,
)
from gisieve.spectral import (
    CSV_HEADER,
    CoefficientSequence,
    ExcludedPointError,
    POLE_BAND_HALF_WIDTH,
    PoleError,
    analytic_conductor,
    angular_character,
    csv_row,
    eisenstein_sieve_sum,
    eisenstein_weight,
    gamma_factor,
    hecke_zeta,
    kuznetsov_geometric,
    tau_s_p,
    ZETA_EULER_CONSTANT,
)

mpmath.mp.dps = 30


def dedekind_zeta_oracle(s):
    """zeta_F(s) for Q(i) via mpmath: zeta(s) * L(s, chi_{-4})."""
    s = mpmath.mpc(s)
    l_chi = 4**-s * (mpmath.zeta(s, mpmath.mpf(1) / 4) - mpmath.zeta(s, mpmath.mpf(3) / 4))
    return complex(mpmath.zeta(s) * l_chi)


small = st.integers(min_value=-6, max_value=6)
nonzero_ideals = (
    st.builds(GaussianInt, small, small)
    .filter(lambda z: not z.is_zero())
    .map(GIdeal.of)
)


# ---------------------------------------------------------------------------
# Twisted divisor sums
# ---------------------------------------------------------------------------


def test_angular_character_values():
    assert angular_character(GIdeal.of(GaussianInt(3, 0)), 5) == pytest.approx(1.0)
    # lambda_{4p}((1+i)) = exp(4 i p arg(1+i)) = exp(i p pi) = (-1)^p
    for p in (-3, -1, 0, 1, 2):
        got = angular_character(GIdeal.of(GaussianInt(1, 1)), p)
        assert got == pytest.approx((-1.0) ** p, abs=1e-12)


def test_tau_unit_ideal():
    one = GIdeal.of(GaussianInt(1, 0))
    assert tau_s_p(one, 0.3 + 0.2j, 4) == pytest.approx(1.0)


def test_tau_ramified_prime():
    # divisors of (1+i) pair into (a, b) = ((1), (1+i)) and ((1+i), (1)):
    # tau_{it,p} = (-1)^p (2^{it} + 2^{-it}) = (-1)^p 2 cos(t log 2)
    n = GIdeal.of(GaussianInt(1, 1))
    for t, p in ((0.7, 0), (1.3, 1), (-2.1, 3)):
        want = (-1.0) ** p * 2.0 * math.cos(t * math.log(2.0))
        assert tau_s_p(n, 1j * t, p) == pytest.approx(want, abs=1e-12)


@given(nonzero_ideals, st.floats(-4, 4), st.integers(-4, 4))
def test_tau_bounded_by_divisor_count(n, t, p):
    assert abs(tau_s_p(n, 1j * t, p)) <= divisor_count(n) + 1e-9


@given(nonzero_ideals, nonzero_ideals)
def test_tau_multiplicative(m, n):
    if not is_coprime(m.gen, n.gen):
        return
    s, p = 0.4j, 2
    lhs = tau_s_p(m * n, s, p)
    rhs = tau_s_p(m, s, p) * tau_s_p(n, s, p)
    assert lhs == pytest.approx(rhs, abs=1e-9)


@given(nonzero_ideals, st.floats(-3, 3), st.integers(-3, 3))
def test_tau_conjugation(n, t, p):
    lhs = tau_s_p(n, 1j * t, p).conjugate()
    rhs = tau_s_p(n, -1j * t, -p)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_tau_rejects_zero_ideal():
    with pytest.raises(DomainError):
        tau_s_p(GIdeal.of(GaussianInt(0, 0)), 0.0j, 0)


# ---------------------------------------------------------------------------
# Hecke zeta
# ---------------------------------------------------------------------------


def test_zeta_at_two_against_mpmath():
    got, tail = hecke_zeta(2.0 + 0.0j, 0)
    want = dedekind_zeta_oracle(2)
    assert abs(got - want) < 1e-8
    assert abs(got - want) <= tail + 1e-12
    # the classical closed form: zeta_F(2) = (pi^2 / 6) * Catalan
    assert got.real == pytest.approx(math.pi**2 / 6.0 * float(mpmath.catalan), abs=1e-8)


@pytest.mark.parametrize("sigma", [1.5, 2.5, 4.0])
def test_zeta_direct_mode_tail_honest(sigma):
    rough = hecke_zeta(complex(sigma, 1.0), 0, cutoff=5e4)
    fine = hecke_zeta(complex(sigma, 1.0), 0, cutoff=8e5)
    assert abs(rough.value - fine.value) <= rough.tail_estimate
    assert fine.tail_estimate < rough.tail_estimate


@pytest.mark.parametrize("t", [0.25, 1.0, 3.0, -2.0])
def test_zeta_smoothed_on_critical_line_edge(t):
    # the weight line s = 1 + 2it, where the direct series no longer
    # converges absolutely; documented accuracy target is 1e-2
    s = complex(1.0, 2.0 * t)
    got = hecke_zeta(s, 0, cutoff=2e5, smoothed=True)
    want = dedekind_zeta_oracle(s)
    assert abs(got.value - want) / abs(want) < 1e-3


def test_zeta_smoothed_tail_tracks_error():
    s = complex(1.0, 1.6)
    got = hecke_zeta(s, 0, cutoff=2e5, smoothed=True)
    want = dedekind_zeta_oracle(s)
    assert abs(got.value - want) <= 10.0 * got.tail_estimate + 1e-9


def test_zeta_pole_guard():
    with pytest.raises(PoleError):
        hecke_zeta(1.0 + 0.0j, 0)
    # no pole off the p = 0 sheet
    value, _ = hecke_zeta(1.0 + 0.0j, 2, cutoff=2e5, smoothed=True)
    assert np.isfinite(value.real) and np.isfinite(value.imag)


@given(st.floats(1.2, 3.0), st.floats(-2.0, 2.0), st.integers(-3, 3))
def test_zeta_conjugation_symmetry(sigma, t, p):
    s = complex(sigma, t)
    a = hecke_zeta(s, -p, cutoff=2e4).value
    b = hecke_zeta(s.conjugate(), p, cutoff=2e4).value.conjugate()
    assert a == pytest.approx(b, abs=1e-12)


@pytest.mark.parametrize("p", [1, 4])
def test_zeta_nonzero_p_cutoff_stable(p):
    s = 1.0 + 1.0j
    rough = hecke_zeta(s, p, cutoff=1e5, smoothed=True).value
    fine = hecke_zeta(s, p, cutoff=4e5, smoothed=True).value
    assert abs(rough - fine) < 2e-3 * max(1.0, abs(fine))


def test_zeta_euler_constant_against_mpmath():
    # constant term of the Laurent expansion at the pole, computed
    # independently as zeta_F(1 + d) - (pi/4)/d for small d
    with mpmath.workdps(40):
        d = mpmath.mpf("1e-12")
        s = 1 + d
        l_chi = 4**-s * (mpmath.zeta(s, mpmath.mpf(1) / 4) - mpmath.zeta(s, mpmath.mpf(3) / 4))
        limit = mpmath.zeta(s) * l_chi - (mpmath.pi / 4) / d
    assert ZETA_EULER_CONSTANT == pytest.approx(float(limit), abs=1e-10)


def test_zeta_smoothed_at_beta_pole_collisions():
    # at real s = 2, 3, 4 the contour-shift term collides with a pole of
    # the Cesaro weight's Mellin transform; the merged residue must be
    # used (the naive Beta factor is infinite there)
    got2 = hecke_zeta(2.0 + 0.0j, 0, cutoff=1e5, smoothed=True)
    assert abs(got2.value - dedekind_zeta_oracle(2)) < 1e-8
    for s in (3.0, 4.0):
        got = hecke_zeta(complex(s), 0, cutoff=1e5, smoothed=True)
        err = abs(got.value - dedekind_zeta_oracle(s))
        assert err < 2e-4
        assert err <= 3.0 * got.tail_estimate + 1e-9


def test_zeta_smoothed_accurate_through_collision():
    # approaching s = 2 must not reintroduce the cancelling divergences:
    # the error against the oracle stays uniformly small even though the
    # two subtracted pole terms individually blow up like 1/(s - 2)
    for ds in (0.0, 1e-7, -1e-7, 1e-9, -1e-9, 1e-12):
        got = hecke_zeta(2.0 + ds, 0, cutoff=1e5, smoothed=True).value
        assert abs(got - dedekind_zeta_oracle(2.0 + ds)) < 1e-8


# ---------------------------------------------------------------------------
# Eisenstein weight
# ---------------------------------------------------------------------------


def test_weight_pole_band_excluded():
    with pytest.raises(ExcludedPointError):
        eisenstein_weight(0.5 * POLE_BAND_HALF_WIDTH, 0)
    # p != 0 has no band
    assert eisenstein_weight(0.0, 1) > 0.0


def test_weight_positive_and_symmetric():
    for t, p in ((0.3, 0), (1.0, 1), (2.5, -2)):
        w = eisenstein_weight(t, p)
        assert w > 0.0
        assert eisenstein_weight(-t, -p) == pytest.approx(w, rel=1e-12)


def test_weight_vanishes_toward_pole():
    # on p = 0 the zeta pole at t = 0 sends omega to zero
    w_near = eisenstein_weight(0.06, 0)
    w_far = eisenstein_weight(1.0, 0)
    assert w_near < 0.15 * w_far


def test_weight_regression_value():
    # pinned library value at (t, p) = (1, 1), previously cross-checked
    # against cutoff refinement
    assert eisenstein_weight(1.0, 1) == pytest.approx(0.6416, abs=2e-3)


# ---------------------------------------------------------------------------
# Coefficient sequences
# ---------------------------------------------------------------------------


def _ideal(a, b):
    return GIdeal.of(GaussianInt(a, b))


def test_sequence_from_dict_and_norms():
    seq = CoefficientSequence.from_dict({_ideal(1, 1): 2.0, _ideal(2, 1): -1j})
    assert seq.l2_norm() == pytest.approx(math.sqrt(5.0))
    assert not seq.is_zero()
    assert seq.scaled(2.0).l2_norm() == pytest.approx(2.0 * math.sqrt(5.0))
    assert seq.scaled(0.0).is_zero()


def test_sequence_window_validation():
    with pytest.raises(DomainError):
        CoefficientSequence(((_ideal(3, 0), 1.0 + 0j),), (1.0, 5.0))  # norm 9 outside
    with pytest.raises(DomainError):
        CoefficientSequence((), (4.0, 2.0))  # empty window


def test_sequence_entries_sorted():
    seq = CoefficientSequence.from_dict(
        [(_ideal(2, 1), 1.0 + 0j), (_ideal(1, 1), 2.0 + 0j)]
    )
    norms = [ideal.norm for ideal, _ in seq.entries]
    assert norms == sorted(norms)


# ---------------------------------------------------------------------------
# Eisenstein sieve sum
# ---------------------------------------------------------------------------


def test_eisenstein_zero_sequence():
    seq = CoefficientSequence.from_dict({_ideal(1, 1): 0.0})
    assert eisenstein_sieve_sum(seq, 2.0, 1.0) == 0.0


def test_eisenstein_rejects_small_region():
    seq = CoefficientSequence.from_dict({_ideal(1, 1): 1.0})
    with pytest.raises(DomainError):
        eisenstein_sieve_sum(seq, 0.25, 1.0)


def test_eisenstein_single_entry_oracle():
    # for one coefficient the sum factorizes as
    # |a|^2 * sum_p int omega(t, p) |tau_{it,p}(n^2)|^2 dt; rebuild that
    # integral with scalar calls and a finer independent panel rule
    n0 = _ideal(2, 1)
    a0 = 1.5 - 0.5j
    seq = CoefficientSequence.from_dict({n0: a0})
    T, P, cutoff = 2.0, 4.5, 5e4  # the identity holds at any fixed cutoff
    got = eisenstein_sieve_sum(seq, T, P, weight_cutoff=cutoff)
    sq = GIdeal.of(n0.gen * n0.gen)
    expected = 0.0
    for p in range(-int(P // 4), int(P // 4) + 1):
        if p == 0:
            intervals = [(-T / 2, -POLE_BAND_HALF_WIDTH), (POLE_BAND_HALF_WIDTH, T / 2)]
        else:
            intervals = [(-T / 2, T / 2)]
        for lo, hi in intervals:
            nodes, wts = _panel_rule(lo, hi, 32, 12)
            vals = [
                eisenstein_weight(t, p, cutoff) * abs(tau_s_p(sq, 1j * t, p)) ** 2
                for t in nodes
            ]
            expected += abs(a0) ** 2 * float(wts @ np.array(vals))
    assert got == pytest.approx(expected, rel=1e-9)


def test_eisenstein_monotone_in_region():
    seq = CoefficientSequence.from_dict({_ideal(1, 1): 1.0, _ideal(2, 1): 0.5j})
    v1 = eisenstein_sieve_sum(seq, 1.0, 1.0, weight_cutoff=5e4)
    v2 = eisenstein_sieve_sum(seq, 2.0, 1.0, weight_cutoff=5e4)
    v3 = eisenstein_sieve_sum(seq, 2.0, 8.0, weight_cutoff=5e4)
    assert 0.0 < v1 < v2 < v3


def test_eisenstein_quadratic_scaling():
    seq = CoefficientSequence.from_dict({_ideal(1, 1): 1.0, _ideal(2, 1): -2.0})
    base = eisenstein_sieve_sum(seq, 2.0, 1.0, weight_cutoff=5e4)
    scaled = eisenstein_sieve_sum(seq.scaled(3.0), 2.0, 1.0, weight_cutoff=5e4)
    assert scaled == pytest.approx(9.0 * base, rel=1e-12)


# ---------------------------------------------------------------------------
# Kuznetsov geometric side
# ---------------------------------------------------------------------------


def test_kuznetsov_diagonal_only():
    tf = TestFunction(1.0, 1.0)
    one = GaussianInt(1, 0)
    res = kuznetsov_geometric(one, one, tf, 0)
    assert res.kloosterman_term == 0j
    assert res.diagonal == pytest.approx(
        plancherel_integral(tf) / (8.0 * math.pi**3), rel=1e-12
    )
    # m = -n also hits the unit-square diagonal
    res2 = kuznetsov_geometric(one, -one, tf, 0)
    assert res2.diagonal == res.diagonal
    # m != +-n does not
    res3 = kuznetsov_geometric(one, GaussianInt(2, 1), tf, 0)
    assert res3.diagonal == 0.0


def test_kuznetsov_symmetry_and_tail():
    # symmetry and the increment-vs-tail inequality are exact properties
    # at any fixed quadrature, so a coarse configuration keeps this fast;
    # the full-resolution sweep lives in the acceptance suite
    tf = TestFunction(1.0, 1.0)
    cfg = QuadratureConfig(gl_order=8, omega_base_panels=2, phase_rad_per_panel=16.0)
    m, n = GaussianInt(1, 0), GaussianInt(2, 1)
    a = kuznetsov_geometric(m, n, tf, 20, cfg)
    b = kuznetsov_geometric(n, m, tf, 20, cfg)
    assert abs(a.kloosterman_term - b.kloosterman_term) < 1e-12
    assert a.diagonal == b.diagonal
    assert a.tail_bound == pytest.approx(b.tail_bound, rel=1e-12)

    wider = kuznetsov_geometric(m, n, tf, 40, cfg)
    assert abs(wider.kloosterman_term - a.kloosterman_term) <= a.tail_bound
    assert wider.tail_bound < a.tail_bound


def test_kuznetsov_rejects_zero_frequency():
    tf = TestFunction(1.0, 1.0)
    with pytest.raises(DomainError):
        kuznetsov_geometric(GaussianInt(0, 0), GaussianInt(1, 0), tf, 10)


# ---------------------------------------------------------------------------
# Archimedean factors and reporting helpers
# ---------------------------------------------------------------------------


def test_gamma_factor_against_mpmath():
    s, t, p = 0.75 + 0.1j, 1.3, 2
    want = complex(
        mpmath.gamma(s) * mpmath.gamma(s + 1j * t + abs(p)) * mpmath.gamma(s - 1j * t + abs(p))
    )
    assert gamma_factor(s, t, p) == pytest.approx(want, rel=1e-12)


def test_analytic_conductor():
    assert analytic_conductor(0.5, 0.0, 0) == pytest.approx(0.125)
    assert analytic_conductor(0.5, 10.0, 0) > analytic_conductor(0.5, 1.0, 0)
    assert analytic_conductor(0.5, 1.0, 5) > analytic_conductor(0.5, 1.0, 0)


def test_csv_row_shape():
    assert CSV_HEADER.split(",") == ["quantity", "params", "value_re", "value_im", "error"]
    row = csv_row("zeta", {"s": 2.0, "p": 0}, complex(1.5, 0.0), 1e-8)
    cells = row.split(",")
    assert cells[0] == "zeta"
    assert cells[1] == "p=0;s=2.0"  # parameters sorted by name
    assert float(cells[2]) == 1.5
    assert float(cells[4]) == 1e-8
    # deterministic under re-rendering
    assert row == csv_row("zeta", {"p": 0, "s": 2.0}, complex(1.5, 0.0), 1e-8)
