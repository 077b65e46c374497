"""Exponential sums over Z[i]: Kloosterman sums and the twisted sum F.

The brute-force oracle below shares nothing with the library internals:
residues are found by scanning an integer box, inverses by scanning,
and phases are assembled from integer data directly.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gisieve.expsums import (
    e_additive,
    f_sum,
    f_sum_values,
    kloosterman,
    root_of_unity,
    selberg_residual,
    shift_vanishing_residual,
    weil_ratio,
)
from gisieve.gauss import (
    DomainError,
    GaussianInt,
    GIdeal,
    divisor_count,
    gcd,
    ideals_up_to_norm,
    is_coprime,
    mod_inverse,
    reduce_mod,
    unit_residues,
)

small = st.integers(min_value=-7, max_value=7)
gints = st.builds(GaussianInt, small, small)
nonzero = gints.filter(lambda z: not z.is_zero())
moduli = gints.filter(lambda z: z.norm > 1)


# ---------------------------------------------------------------------------
# Independent brute-force oracle
# ---------------------------------------------------------------------------


def brute_residue_classes(c):
    """One (x, y) representative per class of Z[i]/(c), by box scan.

    z and w are congruent mod c exactly when z*conj(c) and w*conj(c)
    agree coordinatewise mod N(c); that key needs no division.
    """
    n = c.re * c.re + c.im * c.im
    seen = {}
    for x in range(n):
        for y in range(n):
            key = ((x * c.re + y * c.im) % n, (y * c.re - x * c.im) % n)
            if key not in seen:
                seen[key] = (x, y)
            if len(seen) == n:
                return list(seen.values())
    return list(seen.values())


def brute_kloosterman(m, n, c):
    """S(m, n; c) from first principles: e[z] = exp(2 pi i Re(z))."""
    big_n = c.re * c.re + c.im * c.im
    classes = brute_residue_classes(c)

    def mul(u, v):
        return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    def key(u):
        return ((u[0] * c.re + u[1] * c.im) % big_n, (u[1] * c.re - u[0] * c.im) % big_n)

    one = key((1, 0))
    inverses = {}
    for a in classes:
        for b in classes:
            if key(mul(a, b)) == one:
                inverses[a] = b
                break
    total = 0j
    for a, ainv in inverses.items():
        # Re((a*m + ainv*n) * conj(c)) / N(c), kept as an exact integer ratio
        zm = mul(a, (m.re, m.im))
        zn = mul(ainv, (n.re, n.im))
        num = (zm[0] + zn[0]) * c.re + (zm[1] + zn[1]) * c.im
        total += cmath.exp(2j * cmath.pi * (num % big_n) / big_n)
    return total


@pytest.mark.parametrize(
    "c",
    [
        GaussianInt(2, 1),
        GaussianInt(3, 0),
        GaussianInt(1, 1),
        GaussianInt(2, 2),
        GaussianInt(4, 0),
        GaussianInt(3, 2),
        GaussianInt(5, 1),
    ],
)
def test_kloosterman_against_brute_force(c):
    for m, n in [(1, 1), (1, 2), (2, 3), (0, 1)]:
        mm, nn = GaussianInt(m, 1), GaussianInt(n, -1)
        lib = kloosterman(mm, nn, c)
        ora = brute_kloosterman(mm, nn, c)
        assert abs(lib - ora) < 1e-10


def test_kloosterman_hand_value():
    # modulus 2+i: the residue field is F_5 via a -> a, and the additive
    # character is a -> e(2a/5) since Re(a*(2-i)) = 2a.  Hence
    # S(1,1;2+i) = sum_{a=1..4} e(2(a + a^{-1})/5) = 2 + 2 cos(2 pi / 5).
    expected = 2.0 + 2.0 * math.cos(2.0 * math.pi / 5.0)
    got = kloosterman(GaussianInt(1, 0), GaussianInt(1, 0), GaussianInt(2, 1))
    assert got.real == pytest.approx(expected, abs=1e-12)
    assert abs(got.imag) < 1e-12


def test_kloosterman_zero_modulus():
    with pytest.raises(DomainError):
        kloosterman(GaussianInt(1, 0), GaussianInt(1, 0), GaussianInt(0, 0))


@given(gints, gints, moduli)
def test_kloosterman_symmetric_and_real(m, n, c):
    s1 = kloosterman(m, n, c)
    s2 = kloosterman(n, m, c)
    # alpha -> alpha^{-1} swaps the roles of m and n
    assert abs(s1 - s2) < 1e-9
    # alpha -> -alpha fixes the sum; pairing alpha with conj shows realness
    assert abs(s1.imag) < 1e-9


@given(gints, gints, moduli, gints)
def test_kloosterman_periodic(m, n, c, k):
    assert abs(kloosterman(m, n, c) - kloosterman(m + k * c, n, c)) < 1e-9
    assert abs(kloosterman(m, n, c) - kloosterman(m, n + k * c, c)) < 1e-9


@given(gints, gints, moduli, st.integers(min_value=0, max_value=30))
def test_kloosterman_unit_substitution(m, n, c, idx):
    units = unit_residues(c)
    u = units[idx % len(units)]
    shifted = kloosterman(u * m, mod_inverse(u, c) * n, c)
    assert abs(kloosterman(m, n, c) - shifted) < 1e-9


# ---------------------------------------------------------------------------
# Weil bound
# ---------------------------------------------------------------------------


@given(gints, gints, moduli)
def test_weil_ratio_bounded(m, n, c):
    assert weil_ratio(m, n, c) <= 2.0 + 1e-9


def test_weil_ratio_attained():
    # the unit modulus gives |S| = 1 = tau * sqrt(N(c)), ratio exactly 1
    one = GaussianInt(1, 0)
    assert weil_ratio(GaussianInt(3, 1), one, one) == pytest.approx(1.0)
    # prime moduli come close to square-root size: ratio 0.9653 at c = 1+4i
    near = weil_ratio(one, GaussianInt(3, 1), GaussianInt(1, 4))
    assert 0.9 < near <= 2.0


# ---------------------------------------------------------------------------
# F(w; c) and its value table
# ---------------------------------------------------------------------------


def test_f_sum_needs_coprime():
    with pytest.raises(DomainError):
        f_sum(GaussianInt(1, 1), GaussianInt(2, 0))


@given(moduli)
def test_f_sum_values_match_scalar(c):
    table = f_sum_values(c)
    units = unit_residues(c)
    assert table.shape == (len(units),)
    for idx in (0, len(units) // 2, len(units) - 1):
        assert abs(table[idx] - f_sum(units[idx], c)) < 1e-10


@given(moduli, gints)
def test_f_sum_periodic_in_w(c, k):
    w = GaussianInt(1, 0)
    if not is_coprime(w + k * c, c):
        return
    assert abs(f_sum(w, c) - f_sum(w + k * c, c)) < 1e-9


def test_f_sum_brute_force():
    # F(w; c) = S(w^2, 1; c) e[2w/c] straight from the brute-force sum
    c = GaussianInt(3, 2)
    for w in (GaussianInt(1, 0), GaussianInt(2, 1), GaussianInt(0, 1)):
        s = brute_kloosterman(w * w, GaussianInt(1, 0), c)
        num = 2 * (w.re * c.re + w.im * c.im)
        phase = cmath.exp(2j * cmath.pi * (num % c.norm) / c.norm)
        assert abs(f_sum(w, c) - s * phase) < 1e-10


# ---------------------------------------------------------------------------
# Exact identities
# ---------------------------------------------------------------------------


@given(nonzero, nonzero, moduli)
def test_selberg_identity(m, n, c):
    assert abs(selberg_residual(m, n, c)) < 1e-9


@given(nonzero, nonzero, moduli)
def test_shift_vanishing(q, g, c):
    assert abs(shift_vanishing_residual(q * g, c, g)) < 1e-9


def test_shift_needs_divisibility():
    with pytest.raises(DomainError):
        shift_vanishing_residual(GaussianInt(1, 0), GaussianInt(3, 0), GaussianInt(2, 0))


# ---------------------------------------------------------------------------
# Phase helpers
# ---------------------------------------------------------------------------


def test_e_additive_uses_real_part():
    assert e_additive(0.5 + 7.3j) == pytest.approx(-1.0)
    assert e_additive(1.0 + 0.0j) == pytest.approx(1.0)
    assert e_additive(0.25) == pytest.approx(1j)


def test_root_of_unity_exact():
    assert root_of_unity(0, 8) == 1.0 + 0.0j
    assert root_of_unity(4, 8) == pytest.approx(-1.0)
    assert root_of_unity(1, 8) == pytest.approx(cmath.exp(1j * cmath.pi / 4))
    assert root_of_unity(9, 8) == root_of_unity(1, 8)  # reduced mod den


def test_divisor_structure_used_by_selberg():
    # anchor for the identity's divisor sums: (6) = (1+i)^2 (3), so
    # tau((6)) = tau((1+i)^2) tau((3)) = 3 * 2
    assert divisor_count(GIdeal.of(GaussianInt(6, 0))) == 6
