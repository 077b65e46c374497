"""Desk-scale experiments: brute-force sieve quantities against their bounds.

Three families of experiments, each reporting lhs / rhs ratios:

  quad form    F^gamma(d, theta, C, M, N) =
                 sum over ideals M < N(m) <= 2M, N < N(n) <= 2N, and
                 moduli C < N(c) <= 2C with (c, dmn) = (1), of
                 a_(m) conj(b_(n)) N(c)^gamma F(dmn; c) e[mn theta/c],
               against C^(1+gamma) (K + sqrt(M) + sqrt(N) + C sqrt(MN)/K)
               K^eps |a| |b|, where K = C + sqrt(CMN) |theta|;

  hybrid       sum over ideals N(c) <= C, primitive chi mod c, and
                 (t, p) with |t| <= T, |p| <= floor(T), of
                 |sum_n a_(n) chi(n) lambda_{it,p}(n)|^2,
               against (C^2 T^2 + N) (CT)^eps sum |a|^2;

  eisenstein   the Eisenstein sieve sum of the spectral module, against
               {TP(T^2+P^2) + TPN + ((T^2+P^2)/TP)(1/T^2+1/P^2) N^2}
               (TPN)^eps sum |a|^2.

The "<< ... ^eps" bounds come with no constants; the artifact fixes
eps = 0.1 and implied constant 1 and *reports* ratios rather than
asserting thresholds.  At desk scale the only checkable facts are that
the ratios are finite, scale-invariant, and stable under more trials.

Ideals are represented by canonical generators wherever an element is
required (the argument of F, the twist e[mn theta/c], the character and
lambda values); summing over canonical associates is what makes the
Groessencharakter parity condition moot.

Randomized trials are independent jobs executed on a thread pool sized
by SIEVE_LAB_THREADS and merged deterministically by trial index, so a
report is a pure function of (parameters, seed).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, TypeVar

import numpy as np

from .characters import char_group
from .expsums import e_additive, f_sum
from .gauss import (
    DomainError,
    GaussianInt,
    GIdeal,
    ideals_up_to_norm,
    is_coprime,
)
from .spectral import CoefficientSequence, eisenstein_sieve_sum

__all__ = [
    "EPSILON",
    "DESK_CAPS",
    "ExperimentReport",
    "make_report",
    "thread_count",
    "run_trials",
    "random_sign_sequence",
    "quad_form",
    "quad_form_bound_ratio",
    "quad_form_experiment",
    "hybrid_lhs",
    "hybrid_ratio",
    "hybrid_experiment",
    "eisenstein_ratio",
    "eisenstein_experiment",
]

#: Fixed stand-in for the arbitrarily small exponent in the target bounds.
EPSILON = 0.1

#: Default desk-scale limits; pass force=True to exceed them knowingly.
DESK_CAPS = {"modulus_norm": 1000.0, "sequence_norm": 100.0, "trials": 100}


def _check_caps(force: bool, **named: float) -> None:
    if force:
        return
    for name, value in named.items():
        cap = DESK_CAPS["trials"] if name == "trials" else (
            DESK_CAPS["modulus_norm"] if name in ("C",) else DESK_CAPS["sequence_norm"]
        )
        if value > cap:
            raise DomainError(
                f"{name} = {value} exceeds the desk-scale cap {cap}; "
                "pass force=True to run anyway"
            )


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentReport:
    """One experiment outcome; ratio = lhs / rhs_bound, 0 if rhs is 0."""

    experiment: str
    parameters: tuple[tuple[str, str], ...]
    lhs: float
    rhs_bound: float
    ratio: float
    trials: int
    seed: int

    def __post_init__(self) -> None:
        want = self.lhs / self.rhs_bound if self.rhs_bound > 0 else 0.0
        if not math.isclose(self.ratio, want, rel_tol=1e-12, abs_tol=1e-300):
            raise DomainError("report ratio does not equal lhs/rhs_bound")

    def csv_header(self) -> str:
        names = ",".join(name for name, _ in self.parameters)
        return f"experiment,{names},trials,lhs,rhs,ratio,seed"

    def csv_row(self) -> str:
        vals = ",".join(value for _, value in self.parameters)
        return (
            f"{self.experiment},{vals},{self.trials},"
            f"{self.lhs!r},{self.rhs_bound!r},{self.ratio!r},{self.seed}"
        )

    def to_json_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "parameters": dict(self.parameters),
            "trials": self.trials,
            "lhs": self.lhs,
            "rhs": self.rhs_bound,
            "ratio": self.ratio,
            "seed": self.seed,
        }


def _render(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def make_report(
    experiment: str,
    parameters: Mapping[str, object],
    lhs: float,
    rhs_bound: float,
    trials: int,
    seed: int,
) -> ExperimentReport:
    ratio = lhs / rhs_bound if rhs_bound > 0 else 0.0
    return ExperimentReport(
        experiment,
        tuple((k, _render(v)) for k, v in parameters.items()),
        lhs,
        rhs_bound,
        ratio,
        trials,
        seed,
    )


# ---------------------------------------------------------------------------
# Work queue
# ---------------------------------------------------------------------------

R = TypeVar("R")


def thread_count() -> int:
    """Worker count: SIEVE_LAB_THREADS if set, else a small default."""
    env = os.environ.get("SIEVE_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise DomainError(f"SIEVE_LAB_THREADS = {env!r} is not an integer") from exc
    return min(4, os.cpu_count() or 1)


def run_trials(task: Callable[[int], R], trials: int) -> list[R]:
    """Run task(0..trials-1) on the pool; results merged by trial index."""
    if trials <= 0:
        return []
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(task, range(trials)))


def random_sign_sequence(
    norm_window: tuple[float, float], seed_key: Sequence[int] | int
) -> CoefficientSequence:
    """Coefficients +-1 (iid, from seed_key) on every ideal in the window."""
    lo, hi = norm_window
    ideals = [ideal for ideal in ideals_up_to_norm(hi) if ideal.norm > lo]
    if not ideals:
        raise DomainError(f"empty norm window ({lo}, {hi}]")
    rng = np.random.default_rng(seed_key)
    signs = rng.integers(0, 2, size=len(ideals)) * 2 - 1
    return CoefficientSequence(
        tuple((ideal, complex(int(s))) for ideal, s in zip(ideals, signs)),
        (lo, hi),
    )


# ---------------------------------------------------------------------------
# Quadratic form with Kloosterman sums
# ---------------------------------------------------------------------------


def _window_check(seq: CoefficientSequence, lo: float, hi: float, label: str) -> None:
    for ideal, coeff in seq.entries:
        if coeff != 0 and not (lo < ideal.norm <= hi):
            raise DomainError(
                f"{label}-entry at norm {ideal.norm} outside window ({lo}, {hi}]"
            )


def quad_form(
    d: GaussianInt,
    theta: complex,
    gamma: float,
    C: float,
    M: float,
    N: float,
    a: CoefficientSequence,
    b: CoefficientSequence,
    *,
    force: bool = False,
) -> complex:
    """Exact triple sum F^gamma(d, theta, C, M, N) by brute force.

    m runs over ideals with M < N(m) <= 2M carrying a, n likewise for b,
    and c over canonical generators with C < N(c) <= 2C and (c, dmn) = (1).
    """
    if d.is_zero():
        raise DomainError("quad_form requires d != 0")
    if theta == 0:
        raise DomainError("quad_form requires theta != 0")
    if min(C, M, N) < 0.5:
        raise DomainError("quad_form requires C, M, N >= 1/2")
    _check_caps(force, C=2 * C, M=M, N=N)
    _window_check(a, M, 2 * M, "a")
    _window_check(b, N, 2 * N, "b")
    moduli = [ideal.gen for ideal in ideals_up_to_norm(2 * C) if ideal.norm > C]
    theta = complex(theta)
    total = 0.0 + 0.0j
    for m_ideal, a_m in a.entries:
        if a_m == 0:
            continue
        for n_ideal, b_n in b.entries:
            if b_n == 0:
                continue
            mn = m_ideal.gen * n_ideal.gen
            w = d * mn
            coeff = a_m * b_n.conjugate()
            twist = complex(mn) * theta
            for c in moduli:
                if not is_coprime(w, c):
                    continue
                total += (
                    coeff
                    * float(c.norm) ** gamma
                    * f_sum(w, c)
                    * e_additive(twist / complex(c))
                )
    return total


def quad_form_bound_ratio(
    d: GaussianInt,
    theta: complex,
    gamma: float,
    C: float,
    M: float,
    N: float,
    a: CoefficientSequence,
    b: CoefficientSequence,
    seed: int = 0,
    *,
    force: bool = False,
) -> ExperimentReport:
    """|quad_form| against C^(1+gamma)(K + sqrt(M) + sqrt(N) + C sqrt(MN)/K)
    K^eps |a| |b| with K = C + sqrt(CMN)|theta|, eps = EPSILON, constant 1."""
    lhs = abs(quad_form(d, theta, gamma, C, M, N, a, b, force=force))
    K = C + math.sqrt(C * M * N) * abs(theta)
    rhs = (
        C ** (1.0 + gamma)
        * (K + math.sqrt(M) + math.sqrt(N) + C * math.sqrt(M * N) / K)
        * K**EPSILON
        * a.l2_norm()
        * b.l2_norm()
    )
    params = {"d": d, "theta": complex(theta), "gamma": gamma, "C": C, "M": M, "N": N}
    return make_report("quad_form", params, lhs, rhs, 1, seed)


def quad_form_experiment(
    d: GaussianInt,
    theta: complex,
    gamma: float,
    C: float,
    M: float,
    N: float,
    trials: int = 20,
    seed: int = 1,
    *,
    force: bool = False,
) -> ExperimentReport:
    """Max ratio over random +-1 sequence pairs; reports the worst trial."""
    _check_caps(force, trials=trials)

    def one(index: int) -> ExperimentReport:
        a = random_sign_sequence((M, 2 * M), [seed, 2 * index])
        b = random_sign_sequence((N, 2 * N), [seed, 2 * index + 1])
        return quad_form_bound_ratio(d, theta, gamma, C, M, N, a, b, seed, force=force)

    worst = max(run_trials(one, trials), key=lambda rep: rep.ratio)
    params = dict(worst.parameters)
    return make_report(
        "quad_form", params, worst.lhs, worst.rhs_bound, trials, seed
    )


# ---------------------------------------------------------------------------
# Hybrid (character x Groessencharakter) sieve
# ---------------------------------------------------------------------------


def hybrid_lhs(C: float, T: float, a: CoefficientSequence, *, force: bool = False) -> float:
    """sum over N(c) <= C and primitive chi mod c of the integral over
    |t| <= T, p in Z with |p| <= floor(T), of
    |sum_n a_(n) chi(n) lambda_{it,p}(n)|^2.

    The t-integral is done in closed form: with L_j = log|n_j| the square
    expands into pairs, and each pair integrates to 2 sin(T(L_j - L_k)) /
    (L_j - L_k) (diagonal 2T).  lambda and chi are evaluated on canonical
    generators.
    """
    if C < 1 or T < 1:
        raise DomainError("hybrid_lhs requires C, T >= 1")
    _check_caps(force, C=C)
    gens = [ideal.gen for ideal, coeff in a.entries if coeff != 0]
    coeffs = np.array([coeff for _, coeff in a.entries if coeff != 0])
    if len(gens) == 0:
        return 0.0
    logs = np.array([0.5 * math.log(g.norm) for g in gens])
    args = np.array([math.atan2(g.im, g.re) for g in gens])
    delta = logs[:, None] - logs[None, :]
    safe = np.where(delta == 0.0, 1.0, delta)
    kernel = np.where(delta == 0.0, 2.0 * T, 2.0 * np.sin(T * safe) / safe)
    p_values = range(-int(T), int(T) + 1)
    phase = [np.exp(1j * p * args) for p in p_values]
    total = 0.0
    for ideal in ideals_up_to_norm(C):
        for chi in char_group(ideal.gen).characters():
            if not chi.is_primitive():
                continue
            twisted = coeffs * np.array([chi(g) for g in gens])
            if not twisted.any():
                continue
            for ph in phase:
                v = twisted * ph
                total += float(np.real(v @ kernel @ np.conj(v)))
    return total


def hybrid_ratio(
    C: float, T: float, a: CoefficientSequence, seed: int = 0, *, force: bool = False
) -> ExperimentReport:
    """hybrid_lhs against (C^2 T^2 + N)(CT)^eps sum|a|^2, N the window top."""
    lhs = hybrid_lhs(C, T, a, force=force)
    N = a.norm_window[1]
    norm_sq = sum(abs(v) ** 2 for _, v in a.entries)
    rhs = (C**2 * T**2 + N) * (C * T) ** EPSILON * norm_sq
    params = {"C": C, "T": T, "N": N}
    return make_report("hybrid", params, lhs, rhs, 1, seed)


def hybrid_experiment(
    C: float,
    T: float,
    N: float,
    trials: int = 50,
    seed: int = 2,
    *,
    force: bool = False,
) -> ExperimentReport:
    """Max hybrid ratio over random +-1 sequences supported on [1, N]."""
    _check_caps(force, trials=trials, N=N)

    def one(index: int) -> ExperimentReport:
        a = random_sign_sequence((0, N), [seed, index])
        return hybrid_ratio(C, T, a, seed, force=force)

    worst = max(run_trials(one, trials), key=lambda rep: rep.ratio)
    return make_report(
        "hybrid", dict(worst.parameters), worst.lhs, worst.rhs_bound, trials, seed
    )


# ---------------------------------------------------------------------------
# Eisenstein side
# ---------------------------------------------------------------------------


def eisenstein_ratio(
    T: float, P: float, a: CoefficientSequence, seed: int = 0
) -> ExperimentReport:
    """eisenstein_sieve_sum(a, T, P) against the square-coefficient bound
    {TP(T^2+P^2) + TPN + ((T^2+P^2)/TP)(1/T^2+1/P^2)N^2}(TPN)^eps sum|a|^2."""
    lhs = eisenstein_sieve_sum(a, T, P) if not a.is_zero() else 0.0
    N = a.norm_window[1]
    norm_sq = sum(abs(v) ** 2 for _, v in a.entries)
    rhs = (
        (
            T * P * (T**2 + P**2)
            + T * P * N
            + ((T**2 + P**2) / (T * P)) * (1.0 / T**2 + 1.0 / P**2) * N**2
        )
        * (T * P * N) ** EPSILON
        * norm_sq
    )
    params = {"T": T, "P": P, "N": N}
    return make_report("eisenstein", params, lhs, rhs, 1, seed)


def eisenstein_experiment(
    T: float,
    P: float,
    N: float,
    trials: int = 80,
    seed: int = 3,
    *,
    force: bool = False,
) -> ExperimentReport:
    """Max Eisenstein ratio over random +-1 sequences supported on [1, N]."""
    _check_caps(force, trials=trials, N=N)

    def one(index: int) -> ExperimentReport:
        a = random_sign_sequence((0, N), [seed, index])
        return eisenstein_ratio(T, P, a, seed)

    worst = max(run_trials(one, trials), key=lambda rep: rep.ratio)
    return make_report(
        "eisenstein", dict(worst.parameters), worst.lhs, worst.rhs_bound, trials, seed
    )
