"""Kloosterman sums over Z[i] and the exact identities they satisfy.

With e[z] = exp(2*pi*i*Re(z)), the Kloosterman sum for a modulus c is

    S(m, n; c) = sum over units a mod c of e[(a*m + a^{-1}*n) / c],

and the twisted variant feeding the character transforms is

    F(w; c) = S(w^2, 1; c) * e[2*w/c],        gcd(w, c) = (1).

Every exponent Re((...)*conj(c))/N(c) is an exact rational with integer
numerator, so each value is a sum of N(c)-th roots of unity looked up in
a shared table.  Two expressions that agree in the algebra then agree
numerically to ~1e-13, which is what lets the identity tests run at 1e-9.

For a unit modulus the quotient is the zero ring, its one residue class
is invertible, and every sum degenerates to the single term 1.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .gauss import (
    ONE,
    DomainError,
    GIdeal,
    GaussianInt,
    divisor_count,
    exact_div,
    gcd,
    ideal_divisors,
    is_coprime,
    mod_inverse,
    moebius,
    unit_residues,
)

__all__ = [
    "e_additive",
    "root_of_unity",
    "kloosterman",
    "f_sum",
    "f_sum_values",
    "selberg_residual",
    "shift_vanishing_residual",
    "weil_ratio",
]


def e_additive(z: complex) -> complex:
    """e[z] = exp(2*pi*i*Re(z))."""
    return complex(math.cos(2.0 * math.pi * z.real), math.sin(2.0 * math.pi * z.real))


@lru_cache(maxsize=512)
def _exp_table(n: int) -> np.ndarray:
    """exp(2*pi*i*k/n) for k = 0..n-1; the shared root-of-unity table."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def root_of_unity(num: int, den: int) -> complex:
    """exp(2*pi*i*num/den) via the shared table (exact modular exponent)."""
    return complex(_exp_table(den)[num % den])


@lru_cache(maxsize=2048)
def _unit_pairs(c: GaussianInt) -> tuple[tuple[GaussianInt, GaussianInt], ...]:
    """(alpha, alpha^{-1} mod c) for each unit residue, in enumeration order."""
    return tuple((a, mod_inverse(a, c)) for a in unit_residues(c))


def kloosterman(m: GaussianInt, n: GaussianInt, c: GaussianInt) -> complex:
    """S(m, n; c).  Accumulation follows the fixed residue order."""
    if c.is_zero():
        raise DomainError("Kloosterman sum needs a nonzero modulus")
    big_n = c.norm
    tab = _exp_table(big_n)
    cbar = c.conj()
    mc = m * cbar
    nc = n * cbar
    total = 0j
    for a, ainv in _unit_pairs(c):
        total += tab[((a * mc).re + (ainv * nc).re) % big_n]
    return complex(total)


def f_sum(w: GaussianInt, c: GaussianInt) -> complex:
    """F(w; c) = S(w^2, 1; c) * e[2w/c] for gcd(w, c) = (1)."""
    if not is_coprime(w, c):
        raise DomainError(f"f_sum needs gcd(w, c) = (1); got w={w}, c={c}")
    big_n = c.norm
    twist = _exp_table(big_n)[(2 * (w * c.conj()).re) % big_n]
    return complex(kloosterman(w * w, ONE, c) * twist)


def f_sum_values(c: GaussianInt, chunk: int = 256) -> np.ndarray:
    """F(alpha; c) for every unit residue alpha, in enumeration order.

    Vectorized over the shared exponential table:
    S(a^2, 1; c) = sum_b e[(b*a^2 + b^{-1})/c] has exponent
    Re(b*cbar)*Re(a^2) - Im(b*cbar)*Im(a^2) + Re(b^{-1}*cbar)  (mod N(c)).
    """
    pairs = _unit_pairs(c)
    big_n = c.norm
    tab = _exp_table(big_n)
    cbar = c.conj()
    bc = [b * cbar for b, _ in pairs]
    p_arr = np.array([x.re for x in bc], dtype=np.int64)
    q_arr = np.array([x.im for x in bc], dtype=np.int64)
    r_arr = np.array([(binv * cbar).re for _, binv in pairs], dtype=np.int64)

    sq = [a * a for a, _ in pairs]
    s_arr = np.array([x.re for x in sq], dtype=np.int64)
    t_arr = np.array([x.im for x in sq], dtype=np.int64)
    tw_idx = np.array([(2 * (a * cbar).re) % big_n for a, _ in pairs], dtype=np.int64)

    out = np.empty(len(pairs), dtype=np.complex128)
    for lo in range(0, len(pairs), chunk):
        hi = min(lo + chunk, len(pairs))
        idx = (
            p_arr[:, None] * s_arr[None, lo:hi]
            - q_arr[:, None] * t_arr[None, lo:hi]
            + r_arr[:, None]
        ) % big_n
        out[lo:hi] = tab[idx].sum(axis=0)
    return out * tab[tw_idx]


def selberg_residual(m: GaussianInt, n: GaussianInt, c: GaussianInt) -> complex:
    """S(m^2, n^2; c) - sum_{d | (m^2, n^2, c)} N(d) S((mn/d)^2, 1; c/d).

    Zero in exact arithmetic; the divisor sum is over ideals, and the
    summand is independent of the generator chosen for d.
    """
    lhs = kloosterman(m * m, n * n, c)
    g = gcd(gcd(m * m, n * n), c)
    rhs = 0j
    mn = m * n
    for d in ideal_divisors(GIdeal.of(g)):
        w = exact_div(mn, d.gen)
        rhs += d.norm * kloosterman(w * w, ONE, exact_div(c, d.gen))
    return lhs - rhs


def shift_vanishing_residual(w: GaussianInt, c: GaussianInt, g: GaussianInt) -> complex:
    """Residual of the shifted-argument identity for g | w:

    S(w^2, 1; c*g) = 0                      if gcd(c, g) != (1)
                   = mu((g)) S((w/g)^2, 1; c)  otherwise.
    """
    try:
        q = exact_div(w, g)
    except DomainError:
        raise DomainError(f"shift identity needs g | w; got w={w}, g={g}") from None
    lhs = kloosterman(w * w, ONE, c * g)
    if not is_coprime(c, g):
        return lhs
    rhs = moebius(GIdeal.of(g)) * kloosterman(q * q, ONE, c)
    return lhs - rhs


def weil_ratio(m: GaussianInt, n: GaussianInt, c: GaussianInt) -> float:
    """|S(m, n; c)| / (tau((c)) * sqrt(N((m,n,c))) * sqrt(N(c)))."""
    if c.is_zero():
        raise DomainError("weil_ratio needs a nonzero modulus")
    # triple gcd (m, n, c); gcd handles single zeros, m = n = 0 gives (c) itself
    g3 = gcd(gcd(m, n), c) if not (m.is_zero() and n.is_zero()) else gcd(c, c)
    val = abs(kloosterman(m, n, c))
    tau = divisor_count(GIdeal.of(c))
    return val / (tau * math.sqrt(g3.norm) * math.sqrt(c.norm))
