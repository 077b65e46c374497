"""Hecke zeta values, twisted divisor sums, Eisenstein weights, and the
geometric side of the Kuznetsov identity over Z[i].

The unitary characters of C* are lambda_{it,p}(z) = |z|^{it} (z/|z|)^p.
Units of Z[i] are fourth roots of unity, so lambda_{4p} descends to
ideals: lambda_{4p}((z)) = (z/|z|)^{4p} does not depend on the choice of
generator.  Around this sit

    zeta(s, p)    = sum over nonzero ideals n of lambda_{4p}(n) / N(n)^s,
    tau_{s,p}(n)  = sum over factorizations a*b = n of
                    lambda_{4p}(a/b) * (N(a)/N(b))^s,
    omega(t, p)   = 1 / |zeta(1 + 2it, 2p)|^2,

and the Eisenstein sieve quantity: the integral over |t| <= T/2 and sum
over |p| <= floor(P/4) of omega(t,p) |sum_n a_(n) tau_{it,p}(n^2)|^2.

zeta(s, p) for Re(s) > 1 is a lattice partial sum plus an
integral-comparison tail correction.  On the line Re(s) = 1 (the omega
use case) the series is summed with Cesaro weights (1 - N(n)/X)^kappa,
and for p = 0 the contribution of the simple pole at s = 1 to the
smoothed sum is removed in closed form, which keeps the weight usable
down to the edge of the excluded band around t = 0.

The geometric side of the Kuznetsov identity is

    diagonal + (1/(32 pi^3)) * sum over c in Z[i], c != 0, of
        S(m, n; c) / N(c) * H(2 pi sqrt(mn) / c),

with diagonal = H_total/(8 pi^3) when m = +-n (the squares of the units
are {1, -1}), H_total the Plancherel integral, and H(z) the Bessel
integral of the test function.  H is even, so the principal square root
of mn is as good as any.  The c-sum here runs over elements — all four
associates — because H(z) is not invariant under rotating z by i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .archimedean import (
    DEFAULT_QUADRATURE,
    PoleError,
    QuadratureConfig,
    TestFunction,
    _panel_rule,
    bessel_integral_weighted,
    complex_gamma,
    plancherel_integral,
    small_z_bound_constant,
)
from .expsums import kloosterman
from .gauss import (
    DomainError,
    GIdeal,
    GaussianInt,
    exact_div,
    gcd,
    ideal_divisors,
    ideals_up_to_norm,
)

__all__ = [
    "ExcludedPointError",
    "CoefficientSequence",
    "HeckeZetaValue",
    "KuznetsovGeometric",
    "angular_character",
    "tau_s_p",
    "hecke_zeta",
    "eisenstein_weight",
    "eisenstein_sieve_sum",
    "kuznetsov_geometric",
    "gamma_factor",
    "analytic_conductor",
    "POLE_BAND_HALF_WIDTH",
    "DEFAULT_ZETA_CUTOFF",
    "DEFAULT_WEIGHT_CUTOFF",
    "IDEAL_DENSITY",
    "ZETA_EULER_CONSTANT",
    "CSV_HEADER",
    "csv_row",
]


class ExcludedPointError(ValueError):
    """A weight was requested inside the excluded band around a pole."""


#: Half-width of the band around t = 0 excluded from omega(t, 0): the
#: Dedekind zeta function has its pole at 1 + 2it = 1, omega -> 0 there,
#: and the band's contribution to any integral is O(band * omega).
POLE_BAND_HALF_WIDTH = 0.05

#: Default lattice cutoff for direct zeta evaluation.
DEFAULT_ZETA_CUTOFF = 1_000_000.0

#: Default cutoff for the smoothed zeta values behind omega(t, p); sized
#: for the documented 1e-2 relative accuracy target on |t| <= 5, |p| <= 8.
DEFAULT_WEIGHT_CUTOFF = 200_000.0

#: Residue of the Dedekind zeta function of Q(i) at s = 1 (equals the
#: density of ideals per unit norm): L(1, chi_{-4}) = pi/4.
IDEAL_DENSITY = math.pi / 4.0

#: Constant term of the Laurent expansion of zeta(s, 0) at s = 1:
#: zeta(1 + d, 0) = IDEAL_DENSITY / d + ZETA_EULER_CONSTANT + O(d).
#: Closed form (pi/4)(2 euler + 2 log 2 + 3 log pi - 4 log Gamma(1/4)).
ZETA_EULER_CONSTANT = 0.6462454398948133


# ---------------------------------------------------------------------------
# Angular characters and twisted divisor sums
# ---------------------------------------------------------------------------


def angular_character(n: GIdeal, p: int) -> complex:
    """lambda_{4p}(n) = (z/|z|)^{4p} for any generator z of n."""
    g = n.gen
    return cmath.exp(4j * p * math.atan2(g.im, g.re))


@lru_cache(maxsize=None)
def _divisor_geometry(n: GIdeal) -> tuple[np.ndarray, np.ndarray]:
    """Per divisor d of n (with e = n/d): arg(d) - arg(e) and log(N(d)/N(e)).

    This is the p- and s-independent part of tau_{s,p}(n): the term for d is
    exp(4ip * darg + s * dlog).
    """
    dargs = []
    dlogs = []
    for d in ideal_divisors(n):
        e = exact_div(n.gen, d.gen)
        dargs.append(math.atan2(d.gen.im, d.gen.re) - math.atan2(e.im, e.re))
        dlogs.append(math.log(d.norm) - math.log(e.norm))
    return np.array(dargs), np.array(dlogs)


def tau_s_p(n: GIdeal, s: complex, p: int) -> complex:
    """Twisted divisor sum: sum over d*e = n of lambda_{4p}(d/e)(N(d)/N(e))^s.

    Exact finite sum; multiplicative on coprime ideals.  For n = (1+i) and
    s = it this is (-1)^p * 2 cos(t log 2).
    """
    if n.gen.is_zero():
        raise DomainError("tau_s_p requires a nonzero ideal")
    dargs, dlogs = _divisor_geometry(n)
    return complex(np.sum(np.exp(4j * p * dargs + complex(s) * dlogs)))


# ---------------------------------------------------------------------------
# Hecke zeta on and to the right of the 1-line
# ---------------------------------------------------------------------------


class HeckeZetaValue(NamedTuple):
    value: complex
    tail_estimate: float


def _lattice_partial(s: complex, p: int, cutoff: float, cesaro_order: int) -> complex:
    """sum over ideals N(n) <= cutoff of w(N/cutoff) lambda_{4p}(n) N^{-s},
    with w(y) = (1-y)^order (order 0 = sharp truncation).

    One ideal per lattice point in {a >= 1, b >= 0}: of the four associates
    of a nonzero Gaussian integer exactly one has re >= 1, im >= 0.
    """
    x = float(cutoff)
    top = math.isqrt(int(x))
    s = complex(s)
    total = 0.0 + 0.0j
    for a in range(1, top + 1):
        bmax = math.isqrt(int(x) - a * a)
        b = np.arange(0.0, bmax + 1.0)
        norms = a * a + b * b
        terms = np.exp(-s * np.log(norms) + 4j * p * np.arctan2(b, float(a)))
        if cesaro_order:
            terms = terms * (1.0 - norms / x) ** cesaro_order
        total += complex(terms.sum())
    return total


def _cesaro_pole_term(s: complex, cutoff: float, order: int) -> complex:
    """Contribution of the p = 0 pole at s = 1 to the smoothed partial sum.

    With w(y) = (1-y)^order, the Mellin transform over [0, 1] is the Beta
    value B(u, order+1) = order! / (u (u+1) ... (u+order)), and shifting the
    Mellin inversion contour past u = 1 - s picks up

        rho_F * cutoff^(1-s) * B(1-s, order+1),       rho_F = pi/4.

    order = 0 recovers the sharp-cutoff integral comparison
    rho_F * cutoff^(1-s) / (1 - s).

    The Beta factor has its own poles at u = -k, hit when s = 1 + k for
    k = 1..order.  Each such pole contributes a shifted term
    r_k x^(-k) zeta(s - k, 0) with r_k = (-1)^k C(order, k); near the
    collision that term and the main shifted term diverge individually
    while their sum stays finite.  Within distance 1/2 of a collision the
    pair is returned instead, using the two-term Laurent expansion
    zeta(1 + d, 0) = rho_F / d + ZETA_EULER_CONSTANT + O(d), which keeps
    the subtraction uniformly accurate through real s = 2 .. order + 1.
    """
    u = 1.0 - complex(s)
    x = float(cutoff)
    for k in range(1, order + 1):
        delta = u + k
        if abs(delta) >= 0.5:
            continue
        r_k = (-1.0) ** k * math.comb(order, k)
        # g(delta) = B(u, order+1) * delta / r_k, regular with g(0) = 1
        g = 1.0 + 0.0j
        for j in range(order + 1):
            if j != k:
                g *= (j - k) / (j - k + delta)
        if abs(delta) < 1e-6:
            # limit of (x^delta g(delta) - 1) / delta
            grown = math.log(x) - sum(
                1.0 / (j - k) for j in range(order + 1) if j != k
            )
        else:
            grown = (x**delta * g - 1.0) / delta
        return x ** (-k) * r_k * (IDEAL_DENSITY * grown + ZETA_EULER_CONSTANT)
    denom = 1.0 + 0.0j
    for j in range(order + 1):
        denom *= u + j
    return IDEAL_DENSITY * cutoff**u * math.factorial(order) / denom


def hecke_zeta(
    s: complex,
    p: int,
    cutoff: float = DEFAULT_ZETA_CUTOFF,
    smoothed: bool = False,
    cesaro_order: int = 3,
) -> HeckeZetaValue:
    """zeta(s, p) = sum over ideals of lambda_{4p}(n) / N(n)^s.

    Direct mode (Re(s) > 1): sharp partial sum; for p = 0 the smooth main
    term of the tail is added back via integral comparison, and the
    returned tail_estimate bounds the lattice-discrepancy remainder.  For
    Re(s) <= 1 the direct mode still returns the partial sum but with an
    infinite tail_estimate — use smoothed mode there.

    Smoothed mode (the omega(t,p) use case, Re(s) = 1): Cesaro weights
    (1 - N/X)^order damp the conditional convergence; for p = 0 the
    closed-form pole contribution is subtracted.  tail_estimate is the
    observed change when the cutoff is halved.

    Raises PoleError at (s, p) = (1, 0).
    """
    s = complex(s)
    if p == 0 and abs(s - 1.0) < 1e-12:
        raise PoleError("zeta(s, 0) has a simple pole at s = 1")
    if cutoff < 4:
        raise DomainError("cutoff too small to say anything")

    if not smoothed:
        sigma = s.real
        value = _lattice_partial(s, p, cutoff, 0)
        if p == 0:
            value -= _cesaro_pole_term(s, cutoff, 0)
        if sigma > 1.0:
            # #ideals(norm <= x) = (pi/4) x + E(x) with |E(x)| <= 8 sqrt(x)
            # (a conservative circle-problem constant); partial summation of
            # the tail against E gives the bound below.
            tail = 8.0 * (1.0 + sigma / (sigma - 0.5)) * cutoff ** (0.5 - sigma)
        else:
            tail = math.inf
        return HeckeZetaValue(value, tail)

    def corrected(x: float) -> complex:
        val = _lattice_partial(s, p, x, cesaro_order)
        if p == 0:
            val -= _cesaro_pole_term(s, x, cesaro_order)
        return val

    value = corrected(cutoff)
    tail = abs(value - corrected(cutoff / 2.0))
    return HeckeZetaValue(value, tail)


# ---------------------------------------------------------------------------
# Eisenstein weight and sieve sum
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _weight_cached(t: float, p: int, cutoff: float) -> float:
    z = hecke_zeta(1.0 + 2j * t, 2 * p, cutoff, smoothed=True).value
    return 1.0 / abs(z) ** 2


def eisenstein_weight(t: float, p: int, cutoff: float = DEFAULT_WEIGHT_CUTOFF) -> float:
    """omega(t, p) = 1 / |zeta(1 + 2it, 2p)|^2.

    Documented accuracy target: 1e-2 relative for |t| <= 5, |p| <= 8 at the
    default cutoff.  Raises ExcludedPointError inside the pole band
    |t| < POLE_BAND_HALF_WIDTH when p = 0 (omega -> 0 there; the band is
    skipped by the quadrature rather than modelled).
    """
    if p == 0 and abs(t) < POLE_BAND_HALF_WIDTH:
        raise ExcludedPointError(
            f"omega(t, 0) is excluded for |t| < {POLE_BAND_HALF_WIDTH}"
        )
    return _weight_cached(float(t), int(p), float(cutoff))


@dataclass(frozen=True)
class CoefficientSequence:
    """A finitely supported map from ideals to coefficients.

    entries are (ideal, coefficient) pairs sorted by ideal; norm_window is
    (lo, hi] and every key norm lies inside it.  lo = 0 declares the window
    [1, hi]; the dyadic window of the sieve statements is (N, 2N].
    """

    entries: tuple[tuple[GIdeal, complex], ...]
    norm_window: tuple[float, float]

    def __post_init__(self) -> None:
        lo, hi = self.norm_window
        if not (0 <= lo < hi):
            raise DomainError(f"bad norm window ({lo}, {hi}]")
        for ideal, _ in self.entries:
            if not (lo < ideal.norm <= hi):
                raise DomainError(
                    f"ideal {ideal} of norm {ideal.norm} outside ({lo}, {hi}]"
                )

    @classmethod
    def from_dict(
        cls,
        coeffs: Mapping[GIdeal, complex] | Iterable[tuple[GIdeal, complex]],
        norm_window: tuple[float, float] | None = None,
    ) -> "CoefficientSequence":
        items = dict(coeffs)
        entries = tuple(
            (ideal, complex(items[ideal])) for ideal in sorted(items)
        )
        if norm_window is None:
            hi = max((ideal.norm for ideal, _ in entries), default=1)
            norm_window = (0, hi)
        return cls(entries, norm_window)

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for _, v in self.entries))

    def scaled(self, factor: complex) -> "CoefficientSequence":
        return CoefficientSequence(
            tuple((ideal, factor * v) for ideal, v in self.entries),
            self.norm_window,
        )

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.entries)


def _sieve_linear_form(
    a: CoefficientSequence, t_nodes: np.ndarray, p: int
) -> np.ndarray:
    """V(t) = sum_n a_(n) tau_{it,p}(n^2) at each quadrature node."""
    out = np.zeros(len(t_nodes), dtype=complex)
    for ideal, coeff in a.entries:
        if coeff == 0:
            continue
        square = GIdeal.of(ideal.gen * ideal.gen)
        dargs, dlogs = _divisor_geometry(square)
        phases = 4.0 * p * dargs[None, :] + t_nodes[:, None] * dlogs[None, :]
        out += coeff * np.exp(1j * phases).sum(axis=1)
    return out


def eisenstein_sieve_sum(
    a: CoefficientSequence,
    T: float,
    P: float,
    *,
    weight_cutoff: float = DEFAULT_WEIGHT_CUTOFF,
    phase_budget: float = 6.0,
    gl_order: int = 16,
) -> float:
    """Integral over |t| <= T/2, sum over |p| <= floor(P/4), of
    omega(t, p) |sum_n a_(n) tau_{it,p}(n^2)|^2.

    The t-quadrature uses Gauss-Legendre panels sized so that the fastest
    divisor-sum phase (rate 2 log N(n_max) per unit t) advances at most
    phase_budget radians per panel.  The band |t| < POLE_BAND_HALF_WIDTH is
    excluded at p = 0.  Nonnegative; nondecreasing in T and in P.
    """
    if T < 0.5 or P < 0.5:
        raise DomainError("eisenstein_sieve_sum requires T, P >= 1/2")
    if not a.entries or a.is_zero():
        return 0.0
    half = T / 2.0
    p_max = int(P // 4)
    max_log = max(math.log(ideal.norm) for ideal, _ in a.entries)
    rate = 4.0 * max_log + 1.0  # tau on n^2 doubles the log; +1 covers omega
    total = 0.0
    for p in range(-p_max, p_max + 1):
        if p == 0:
            intervals = [(-half, -POLE_BAND_HALF_WIDTH), (POLE_BAND_HALF_WIDTH, half)]
        else:
            intervals = [(-half, half)]
        for lo, hi in intervals:
            if hi <= lo:
                continue
            n_panels = max(2, math.ceil((hi - lo) * rate / phase_budget))
            nodes, wts = _panel_rule(lo, hi, n_panels, gl_order)
            form = _sieve_linear_form(a, nodes, p)
            weights = np.array(
                [_weight_cached(float(t), p, float(weight_cutoff)) for t in nodes]
            )
            total += float(wts @ (weights * np.abs(form) ** 2))
    return total


# ---------------------------------------------------------------------------
# Kuznetsov geometric side
# ---------------------------------------------------------------------------


class KuznetsovGeometric(NamedTuple):
    diagonal: float
    kloosterman_term: complex
    tail_bound: float


@lru_cache(maxsize=None)
def _bessel_integral_cached(
    z: complex, tf: TestFunction, cfg: QuadratureConfig
) -> float:
    return bessel_integral_weighted(z, tf, cfg)


@lru_cache(maxsize=None)
def _small_z_constant_cached(tf: TestFunction, cfg: QuadratureConfig) -> float:
    return small_z_bound_constant(tf, cfg)


@lru_cache(maxsize=1)
def _zeta_f_32_upper() -> float:
    """An upper bound for zeta_F(3/2), self-contained."""
    value, tail = hecke_zeta(1.5, 0, 1_000_000.0)
    return abs(value) + tail


def _divisor_tail_over_ideals(cut: float) -> float:
    """Upper bound for sum over ideals with N(c) > cut of tau(c) N(c)^{-3/2}.

    Writing tau(c) = #{(d, e) : d e = c} turns the sum into
    sum_d N(d)^{-3/2} G(cut / N(d)) with G(W) = sum_{N(e) > W} N(e)^{-3/2};
    G(W) = zeta_F(3/2) - (partial sum up to W), evaluated exactly from the
    enumerated ideal norms, and the d-range beyond the cut is bounded by
    G(cut) * zeta_F(3/2).
    """
    zf = _zeta_f_32_upper()
    norms = np.array([ideal.norm for ideal in ideals_up_to_norm(max(cut, 1.0))], float)
    if norms.size == 0:
        return zf * zf
    powers = norms**-1.5
    partials = np.cumsum(powers)  # norms are nondecreasing by construction

    def g_tail(w: float) -> float:
        k = int(np.searchsorted(norms, w, side="right"))
        partial = partials[k - 1] if k else 0.0
        return max(zf - partial, 0.0)

    head = sum(powers[i] * g_tail(cut / norms[i]) for i in range(len(norms)))
    return float(head + g_tail(cut) * zf)


def kuznetsov_geometric(
    m: GaussianInt,
    n: GaussianInt,
    tf: TestFunction,
    c_norm_max: int,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> KuznetsovGeometric:
    """Diagonal, truncated Kloosterman term, and truncation tail bound of
    the geometric side for the pair (m, n).

    diagonal:          H_total/(8 pi^3) if m = +-n, else 0.
    kloosterman_term:  (1/(32 pi^3)) sum over elements c, 0 < N(c) <= cutoff,
                       of S(m, n; c)/N(c) * H(2 pi sqrt(mn)/c).
    tail_bound:        bound for the dropped |c|-range, from the Weil bound
                       |S(m, n; c)| <= 2 tau(c) sqrt(N((m, n, c)) N(c)) and
                       |H(z)| <= B |z|^2 with B the small-argument constant
                       of the weighted representation.

    H is even, so only two of the four associates of each c need a Bessel
    integral; S(m, n; c) itself is summed for every associate.
    """
    if m.is_zero() or n.is_zero():
        raise DomainError("kuznetsov_geometric requires nonzero m, n")
    h_total = plancherel_integral(tf)
    diagonal = h_total / (8.0 * math.pi**3) if (m == n or m == -n) else 0.0

    root = cmath.sqrt(complex(m) * complex(n))
    term = 0.0 + 0.0j
    for ideal in ideals_up_to_norm(c_norm_max):
        for c in (ideal.gen, ideal.gen.times_i()):
            z = 2.0 * math.pi * root / complex(c)
            bessel = _bessel_integral_cached(z, tf, cfg)
            for cc in (c, -c):  # H(-z) = H(z)
                term += kloosterman(m, n, cc) / ideal.norm * bessel
    term /= 32.0 * math.pi**3

    b_const = _small_z_constant_cached(tf, cfg)
    norm_g = gcd(m, n).norm
    prefactor = (
        2.0  # Weil constant
        * 4.0  # |z|^2 = 4 pi^2 sqrt(N(m) N(n)) / N(c)
        * math.pi**2
        * b_const
        * math.sqrt(m.norm * n.norm)
        * math.sqrt(norm_g)
        / (32.0 * math.pi**3)
    )
    tail = prefactor * 4.0 * _divisor_tail_over_ideals(float(max(c_norm_max, 0)))
    return KuznetsovGeometric(diagonal, term, tail)


# ---------------------------------------------------------------------------
# Gamma factors
# ---------------------------------------------------------------------------


def gamma_factor(s: complex, t: float, p: int) -> complex:
    """Gamma(s) Gamma(s + it + |p|) Gamma(s - it + |p|)."""
    return (
        complex_gamma(complex(s))
        * complex_gamma(complex(s) + 1j * t + abs(p))
        * complex_gamma(complex(s) - 1j * t + abs(p))
    )


def analytic_conductor(s: complex, t: float, p: int) -> float:
    """|s| * |s + it + |p|| * |s - it + |p||."""
    s = complex(s)
    return abs(s) * abs(s + 1j * t + abs(p)) * abs(s - 1j * t + abs(p))


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

CSV_HEADER = "quantity,params,value_re,value_im,error"


def csv_row(
    quantity: str, params: Mapping[str, object], value: complex, error: float
) -> str:
    """One stable CSV row: parameters serialized as sorted key=value pairs."""
    blob = ";".join(f"{k}={params[k]}" for k in sorted(params))
    v = complex(value)
    return f"{quantity},{blob},{v.real!r},{v.imag!r},{float(error)!r}"
