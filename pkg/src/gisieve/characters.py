"""Dirichlet characters on (Z[i]/c)^x and the character transform of F.

The unit group mod c is a finite abelian group.  We decompose it into a
direct product of cyclic factors by brute force — compute element orders,
peel off a maximal-order generator, recurse on the quotient, and lift the
quotient generators back (the classical basis construction).  This works
uniformly for split, inert and the ramified prime (1+i), where the local
unit groups have different shapes, without any case analysis.

A character is an exponent vector (a_1, ..., a_r) against the stored
generators: chi(g_i) = exp(2*pi*i*a_i/n_i).  Values are exact roots of
unity looked up in the shared table, so orthogonality, Fourier inversion
and Parseval hold to ~1e-12 at desk scale.

The transform of interest is the finite Fourier coefficient

    fhat(chi) = (1/phi(c)) * sum over units a mod c of conj(chi(a)) F(a; c),

whose modulus, for prime-power moduli, is pinned by an exact local case
analysis (local_prediction below).  fhat depends mildly on which
generator of the modulus ideal is used inside F; the magnitude does not.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .expsums import _exp_table, f_sum_values
from .gauss import (
    ONE,
    DomainError,
    GIdeal,
    GaussianInt,
    UNIT_IDEAL,
    euler_phi,
    factor,
    factor_int,
    gcd,
    ideal_divisors,
    is_coprime,
    reduce_mod,
    reduce_pair,
    residue_box,
    unit_residues,
)

__all__ = [
    "CharGroup",
    "DirichletChar",
    "MagnitudePrediction",
    "char_group",
    "f_sum_hat",
    "local_prediction",
    "twisted_mult_residual",
    "average_f_hat",
]


# ---------------------------------------------------------------------------
# Abelian group decomposition
# ---------------------------------------------------------------------------


def _pow(x, k, mul, one):
    out = one
    while k:
        if k & 1:
            out = mul(out, x)
        x = mul(x, x)
        k >>= 1
    return out


def _abelian_generators(keys, mul, one):
    """Direct-product generators [(g, order)] of an abelian group.

    `keys` is the full (hashable, sortable) element list.  The first
    generator has maximal order = the group exponent; each further one is
    a maximal-order element of the successive quotient, corrected by the
    standard lemma so that its order in the full group equals its order
    in the quotient.  The internal direct product of the results is the
    whole group.
    """
    n = len(keys)
    if n == 1:
        return []
    qs = [p for p, _ in factor_int(n)]

    def elem_order(x):
        o = n
        for q in qs:
            while o % q == 0 and _pow(x, o // q, mul, one) == one:
                o //= q
        return o

    best_order = 0
    best = one
    for x in keys:
        o = elem_order(x)
        if o > best_order or (o == best_order and x < best):
            best_order, best = o, x
    g = best
    if best_order == n:
        return [(g, n)]

    # subgroup <g> and coset labels (smallest member, found by sorted sweep)
    cyc = [one]
    p = g
    while p != one:
        cyc.append(p)
        p = mul(p, g)
    label = {}
    for x in sorted(keys):
        if x in label:
            continue
        for h in cyc:
            label[mul(x, h)] = x
    qkeys = sorted(set(label.values()))

    def qmul(u, v):
        return label[mul(u, v)]

    sub = _abelian_generators(qkeys, qmul, label[one])

    gdlog = {h: j for j, h in enumerate(cyc)}
    gens = [(g, best_order)]
    for h, m in sub:
        j = gdlog[_pow(h, m, mul, one)]  # h^m lies in <g> since its label is trivial
        assert j % m == 0, "maximal-order peeling violated the lifting lemma"
        corr = _pow(g, (best_order - j // m) % best_order, mul, one)
        gens.append((mul(h, corr), m))
    return gens


# ---------------------------------------------------------------------------
# Character groups
# ---------------------------------------------------------------------------


class CharGroup:
    """The character group of (Z[i]/(c))^x for a fixed generator element c.

    The group data (residues, generators, discrete logs) depends only on
    the ideal (c); the element is kept because the transform F(.; c) does
    depend on it.
    """

    def __init__(self, element: GaussianInt):
        if element.is_zero():
            raise DomainError("zero modulus")
        self.element = element
        self.modulus = GIdeal.of(element)
        self.residues = unit_residues(element)
        box = residue_box(element)
        keys = [(r.re, r.im) for r in self.residues]
        pos = {k: i for i, k in enumerate(keys)}

        def mul(u, v):
            return reduce_pair(u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0], box)

        one = reduce_pair(1, 0, box)
        gens = _abelian_generators(keys, mul, one)

        table = {one: ()}
        for gk, n in gens:
            step = {}
            p = one
            for j in range(n):
                for k, v in table.items():
                    step[mul(k, p)] = v + (j,)
                p = mul(p, gk)
            table = step
        assert len(table) == len(keys), "generators do not span the unit group"

        self.gen_elements = tuple(GaussianInt(*gk) for gk, _ in gens)
        self.gen_orders = tuple(n for _, n in gens)
        self.exponent = math.lcm(*self.gen_orders) if gens else 1
        # dlog matrix in residue enumeration order, pre-scaled to /exponent
        scale = [self.exponent // n for n in self.gen_orders]
        self._dlog = {k: v for k, v in table.items()}
        self._dlog_matrix = np.array(
            [[v * s for v, s in zip(table[k], scale)] for k in keys], dtype=np.int64
        ).reshape(len(keys), len(gens))
        self._pos = pos

    # -- basic views ---------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.residues)

    def dlog(self, z: GaussianInt) -> tuple[int, ...] | None:
        """Exponent vector of z against the stored generators, or None."""
        r = reduce_mod(z, self.element)
        key = (r.re, r.im)
        return self._dlog.get(key)

    # -- characters ------------------------------------------------------

    def character(self, exps: Sequence[int]) -> "DirichletChar":
        if len(exps) != len(self.gen_orders):
            raise DomainError("exponent vector has wrong length")
        exps = tuple(a % n for a, n in zip(exps, self.gen_orders))
        return DirichletChar(self, exps)

    def trivial_character(self) -> "DirichletChar":
        return DirichletChar(self, (0,) * len(self.gen_orders))

    def characters(self) -> Iterator["DirichletChar"]:
        """All phi(c) characters, exponent vectors in lexicographic order."""
        def rec(i):
            if i == len(self.gen_orders):
                yield ()
                return
            for a in range(self.gen_orders[i]):
                for rest in rec(i + 1):
                    yield (a,) + rest
        for exps in rec(0):
            yield DirichletChar(self, exps)

    def value_matrix(self) -> np.ndarray:
        """Matrix X[j, i] = chi_j(alpha_i) over all characters/residues."""
        L = self.exponent
        tab = _exp_table(L)
        chars = np.array([chi.exps for chi in self.characters()], dtype=np.int64)
        idx = (chars @ self._dlog_matrix.T) % L
        return tab[idx]


class DirichletChar:
    """A character of (Z[i]/(c))^x given by exponents against the group basis."""

    __slots__ = ("group", "exps", "_conductor")

    def __init__(self, group: CharGroup, exps: tuple[int, ...]):
        self.group = group
        self.exps = exps
        self._conductor: GIdeal | None = None

    # -- algebra ----------------------------------------------------------

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if other.group is not self.group:
            raise DomainError("characters live on different groups")
        return self.group.character(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def conjugate(self) -> "DirichletChar":
        return self.group.character(tuple(-a for a in self.exps))

    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.exps)

    def is_quadratic_or_trivial(self) -> bool:
        """Whether chi^2 is the trivial character."""
        return all((2 * a) % n == 0 for a, n in zip(self.exps, self.group.gen_orders))

    # -- evaluation ---------------------------------------------------------

    def weight(self, z: GaussianInt) -> int | None:
        """Integer w with chi(z) = exp(2*pi*i*w/exponent); None if not coprime."""
        v = self.group.dlog(z)
        if v is None:
            return None
        L = self.group.exponent
        total = 0
        for a, e, n in zip(self.exps, v, self.group.gen_orders):
            total += a * e * (L // n)
        return total % L

    def __call__(self, z: GaussianInt) -> complex:
        w = self.weight(z)
        if w is None:
            return 0j
        return complex(_exp_table(self.group.exponent)[w])

    def values_on_residues(self) -> np.ndarray:
        L = self.group.exponent
        idx = (self.group._dlog_matrix @ np.array(self.exps, dtype=np.int64)) % L
        return _exp_table(L)[idx]

    # -- conductor and classification -------------------------------------

    def conductor(self) -> GIdeal:
        """Smallest ideal d | (c) such that chi factors through (Z[i]/d)^x."""
        if self._conductor is not None:
            return self._conductor
        grp = self.group
        for d in ideal_divisors(grp.modulus):
            dg = d.gen
            ok = True
            for a in grp.residues:
                if reduce_mod(a - ONE, dg).is_zero() and self.weight(a) != 0:
                    ok = False
                    break
            if ok:
                self._conductor = d
                return d
        raise AssertionError("conductor search failed (modulus always works)")

    def char_class(self) -> str:
        """One of 'trivial', 'primitive', 'semi-primitive', 'mixed'.

        trivial        <=> conductor = (1)   (takes precedence at modulus (1))
        primitive      <=> conductor = modulus
        semi-primitive <=> 1 <= v_p(conductor) < v_p(modulus) at every prime p
        """
        cond = self.conductor()
        if cond == UNIT_IDEAL:
            return "trivial"
        if cond == self.group.modulus:
            return "primitive"
        cond_exp = {p: e for p, e in factor(cond.gen).factors}
        if all(1 <= cond_exp.get(p, 0) < e for p, e in factor(self.group.modulus.gen).factors):
            return "semi-primitive"
        return "mixed"

    def is_primitive(self) -> bool:
        return self.conductor() == self.group.modulus


@lru_cache(maxsize=512)
def char_group(element: GaussianInt) -> CharGroup:
    return CharGroup(element)


# ---------------------------------------------------------------------------
# The transform fhat and its local predictions
# ---------------------------------------------------------------------------


def f_sum_hat(chi: DirichletChar, element: GaussianInt | None = None) -> complex:
    """fhat(chi) = (1/phi) sum_a conj(chi(a)) F(a; c).

    `element` may be any generator of the modulus ideal (defaults to the
    group's own); changing it permutes fhat by a unit twist of the
    argument, leaving |fhat| unchanged.
    """
    grp = chi.group
    c = grp.element if element is None else element
    if GIdeal.of(c) != grp.modulus:
        raise DomainError("element generates a different ideal than the character modulus")
    values = f_sum_values(c)
    return complex(np.conj(chi.values_on_residues()) @ values / grp.order)


class MagnitudePrediction:
    """Predicted |fhat(chi)|; is_bound marks 'upper bound only' cases."""

    __slots__ = ("value", "is_bound")

    def __init__(self, value: float, is_bound: bool = False):
        self.value = value
        self.is_bound = is_bound

    def __repr__(self):
        rel = "<=" if self.is_bound else "="
        return f"MagnitudePrediction(|fhat| {rel} {self.value:.6g})"


def local_prediction(chi: DirichletChar) -> MagnitudePrediction:
    """Exact |fhat| (or an upper bound) for a prime-power modulus p^k.

    Cases, with q = N(p), kstar = v_p(conductor):
      trivial chi:      1/(q-1) if k = 1;  q^{k/2} if k even;  0 otherwise
      primitive:        0 if q = 2; else sqrt(q)/(q-1) if chi^2 trivial,
                        q/(q-1) otherwise
      semi-primitive:   0 if kstar != k (mod 2); else
                        bound q^{k/2} if chi^2 trivial;
                        2^{5/2} iff q = 2 and k = kstar + 2, else 0
    The unit modulus (1) carries only the trivial character, with fhat = 1.
    """
    grp = chi.group
    fac = factor(grp.modulus.gen).factors
    if not fac:
        return MagnitudePrediction(1.0)
    if len(fac) > 1:
        raise DomainError("local prediction needs a prime-power modulus")
    p, k = fac[0]
    q = p.norm
    cond = chi.conductor()
    kstar = 0 if cond == UNIT_IDEAL else factor(cond.gen).factors[0][1]

    if kstar == 0:  # trivial character mod p^k
        if k == 1:
            return MagnitudePrediction(1.0 / (q - 1))
        return MagnitudePrediction(float(q) ** (k // 2) if k % 2 == 0 else 0.0)
    if kstar == k:  # primitive
        if q == 2:
            return MagnitudePrediction(0.0)
        if chi.is_quadratic_or_trivial():
            return MagnitudePrediction(math.sqrt(q) / (q - 1))
        return MagnitudePrediction(q / (q - 1))
    # semi-primitive: 1 <= kstar < k
    if (k - kstar) % 2 == 1:
        return MagnitudePrediction(0.0)
    if chi.is_quadratic_or_trivial():
        return MagnitudePrediction(float(q) ** (k / 2.0), is_bound=True)
    if q == 2 and k == kstar + 2:
        return MagnitudePrediction(2.0 ** 2.5)
    return MagnitudePrediction(0.0)


def twisted_mult_residual(chi1: DirichletChar, chi2: DirichletChar) -> complex:
    """fhat(chi1*chi2 mod c1*c2) - conj(chi1(c2) chi2(c1)) fhat(chi1) fhat(chi2).

    The product modulus element is literally c1*c2 with the same c1, c2
    used in the unit twists, which is what makes this an exact identity.
    """
    c1 = chi1.group.element
    c2 = chi2.group.element
    if not is_coprime(c1, c2):
        raise DomainError("moduli must be coprime")
    c = c1 * c2
    values = f_sum_values(c)
    acc = 0j
    for a, fv in zip(unit_residues(c), values):
        acc += (chi1(a) * chi2(a)).conjugate() * fv
    phi = euler_phi(GIdeal.of(c))
    lhs = acc / phi
    rhs = (
        chi1(c2).conjugate()
        * chi2(c1).conjugate()
        * f_sum_hat(chi1)
        * f_sum_hat(chi2)
    )
    return complex(lhs - rhs)


def average_f_hat(max_norm: float, gamma: float, mode: str = "trivial") -> float:
    """sum over N(c) <= max_norm of N(c)^gamma * (|fhat| mass in `mode`).

    mode='trivial' takes the trivial character of each modulus;
    mode='semi-primitive' sums |fhat| over the semi-primitive characters.
    Used to probe the C^{max(1+gamma, 0)} scaling experimentally.
    """
    from .gauss import ideals_up_to_norm

    if mode not in ("trivial", "semi-primitive"):
        raise DomainError(f"unknown mode {mode!r}")
    total = 0.0
    for ideal in ideals_up_to_norm(max_norm):
        grp = char_group(ideal.gen)
        w = float(ideal.norm) ** gamma
        if mode == "trivial":
            total += w * abs(f_sum_hat(grp.trivial_character()))
        else:
            for chi in grp.characters():
                if chi.char_class() == "semi-primitive":
                    total += w * abs(f_sum_hat(chi))
    return total
