"""Archimedean side: gamma, Bessel kernels, and the smoothing integrals.

Everything here is plain double-precision numerics.  The Bessel function of
complex order is evaluated by its power series only (|z| <= 12); the two
"geometric" representations of the kernel integral cover every large-|z|
need, so no asymptotic expansions are required.

The kernel integral of a test function exp(-(t/T)^2 - (p/P)^2) is computed
three independent ways:

  * spectral_  : integrate the Bessel kernel against the test function over
                 the spectral plane (line integral in t, sum over p);
  * deriv_     : integrate cos(2 Re(z tr)) against second derivatives of the
                 Gaussian smoothing kernels over (r, omega);
  * weighted_  : same, with the derivatives moved onto the cosine, leaving
                 the weight (sinh^2 r + sin^2 omega) and a |2z|^2 prefactor.

The three agree to ~1e-6 relative; the weighted form makes the quadratic
small-z bound explicit.  Oscillatory quadrature uses Gauss-Legendre panels
graded so that each panel sees a bounded amount of phase; grading follows
the local frequency 2|z| cosh(r), which dominates the phase derivative in
both the r and omega directions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .gauss import DomainError

__all__ = [
    "PoleError",
    "SeriesRangeError",
    "SpectralPoint",
    "TestFunction",
    "QuadratureConfig",
    "complex_gamma",
    "reciprocal_gamma",
    "bessel_j",
    "bessel_kernel",
    "half_trace",
    "trace_shift",
    "kernels",
    "KernelValues",
    "plancherel_integral",
    "plancherel_integral_quadrature",
    "bessel_integral_spectral",
    "bessel_integral_deriv",
    "bessel_integral_weighted",
    "small_z_bound_constant",
    "with_refinement_error",
    "SERIES_RADIUS",
    "T_EPS",
]


class PoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class SeriesRangeError(ValueError):
    """Bessel argument outside the radius where the power series is trusted."""


SERIES_RADIUS = 12.0

# Spectral parameters closer to zero than this are nudged to +-T_EPS and
# averaged; the kernel has a removable singularity at t = 0.
T_EPS = 1e-4


# ---------------------------------------------------------------------------
# gamma


# Lanczos approximation, g = 607/128, 15 coefficients (Godfrey's set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array(
    [
        0.99999999999999709182,
        57.156235665862923517,
        -59.597960355475491248,
        14.136097974741747174,
        -0.49191381609762019978,
        0.33994649984811888699e-4,
        0.46523628927048575665e-4,
        -0.98374475304879564677e-4,
        0.15808870322491248884e-3,
        -0.21026444172410488319e-3,
        0.21743961811521264320e-3,
        -0.16431810653676389022e-3,
        0.84418223983852743293e-4,
        -0.26190838401581408670e-4,
        0.36899182659531622704e-5,
    ]
)


def _lanczos_positive(z: complex) -> complex:
    # requires Re(z) >= 0.5
    acc = _LANCZOS_C[0]
    for i in range(1, 15):
        acc += _LANCZOS_C[i] / (z - 1 + i)
    w = z + _LANCZOS_G - 0.5
    return math.sqrt(2.0 * math.pi) * w ** (z - 0.5) * cmath.exp(-w) * acc


def complex_gamma(z: complex) -> complex:
    """Gamma(z) by Lanczos approximation plus reflection (~14 digits)."""
    z = complex(z)
    if z.imag == 0.0 and z.real == int(z.real) and z.real <= 0.0:
        raise PoleError(f"gamma pole at {z}")
    if z.real >= 0.5:
        return _lanczos_positive(z)
    # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return math.pi / (cmath.sin(math.pi * z) * _lanczos_positive(1.0 - z))


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z); entire, exactly zero at non-positive integers."""
    z = complex(z)
    if z.imag == 0.0 and z.real == int(z.real) and z.real <= 0.0:
        return 0.0
    if z.real >= 0.5:
        return 1.0 / _lanczos_positive(z)
    return cmath.sin(math.pi * z) * _lanczos_positive(1.0 - z) / math.pi


def _reciprocal_gamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized 1/Gamma for arrays that avoid non-positive integers."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    pos = z.real >= 0.5
    if np.any(pos):
        zp = z[pos]
        acc = np.full_like(zp, _LANCZOS_C[0])
        for i in range(1, 15):
            acc += _LANCZOS_C[i] / (zp - 1 + i)
        w = zp + _LANCZOS_G - 0.5
        out[pos] = np.exp(w - (zp - 0.5) * np.log(w)) / (
            math.sqrt(2.0 * math.pi) * acc
        )
    if np.any(~pos):
        zn = z[~pos]
        w = 1.0 - zn + _LANCZOS_G - 0.5
        acc = np.full_like(zn, _LANCZOS_C[0])
        for i in range(1, 15):
            acc += _LANCZOS_C[i] / (-zn + i)
        gam = math.sqrt(2.0 * math.pi) * np.exp((0.5 - zn) * np.log(w) - w) * acc
        out[~pos] = np.sin(math.pi * zn) * gam / math.pi
    return out


# ---------------------------------------------------------------------------
# Bessel functions of complex order, series regime


def _bessel_series(mu: complex, z: complex, log_half_z: complex) -> complex:
    """Power series sum_k (-1)^k (z/2)^(mu+2k) / (k! Gamma(mu+k+1)).

    The caller supplies log(z/2) so that branch choices (needed for the
    kernel's evenness) stay explicit.
    """
    term = cmath.exp(mu * log_half_z) * reciprocal_gamma(mu + 1)
    total = term
    ratio_num = -cmath.exp(2 * log_half_z)  # -(z/2)^2
    quarter = abs(ratio_num)
    for k in range(600):
        term = term * ratio_num / ((k + 1) * (mu + k + 1))
        total += term
        denom = (k + 2) * abs(mu + k + 2)
        if denom > 2.0 * quarter:
            # geometric tail with ratio <= 1/2 from here on
            rho = quarter / denom
            tail = abs(term) * rho / (1.0 - rho)
            if tail <= 1e-13 * max(abs(total), abs(term), 1e-290):
                return total
    raise SeriesRangeError(f"series for J_{mu}({z}) did not settle")


def bessel_j(mu: complex, z: complex) -> complex:
    """J_mu(z) by power series; principal branch of (z/2)^mu; |z| <= 12."""
    mu = complex(mu)
    z = complex(z)
    if abs(z) > SERIES_RADIUS:
        raise SeriesRangeError(f"|z| = {abs(z):.3f} beyond series radius")
    if mu.imag == 0.0 and mu.real == int(mu.real):
        m = int(mu.real)
        if m < 0:
            val = bessel_j(-m, z)
            return -val if m % 2 else val
        if z == 0:
            return 1.0 + 0.0j if m == 0 else 0.0 + 0.0j
    elif z == 0:
        if mu.real > 0:
            return 0.0 + 0.0j
        raise DomainError("J_mu(0) undefined for Re(mu) <= 0, mu not 0")
    return _bessel_series(mu, z, cmath.log(z / 2.0))


def _bessel_series_array(mu: np.ndarray, z: complex, log_half_z: complex) -> np.ndarray:
    """Series evaluation for an array of orders sharing one argument."""
    mu = np.asarray(mu, dtype=complex)
    term = np.exp(mu * log_half_z) * _reciprocal_gamma_array(mu + 1)
    total = term.copy()
    ratio_num = -cmath.exp(2 * log_half_z)
    quarter = abs(ratio_num)
    floor = np.maximum(np.abs(term), 1e-290)
    for k in range(600):
        term *= ratio_num / ((k + 1) * (mu + k + 1))
        total += term
        floor = np.maximum(floor, np.abs(total))
        denom = (k + 2) * np.abs(mu + k + 2)
        if np.all(denom > 2.0 * quarter):
            rho = quarter / denom
            tail = np.abs(term) * rho / (1.0 - rho)
            if np.all(tail <= 1e-13 * floor):
                return total
    raise SeriesRangeError("array Bessel series did not settle")


# ---------------------------------------------------------------------------
# spectral kernel


@dataclass(frozen=True)
class SpectralPoint:
    """A point (t, p) of the spectral plane: t real, p an integer weight."""

    t: float
    p: int


def _kernel_from_products(a: np.ndarray, sinh_pi_t: np.ndarray) -> np.ndarray:
    return -4.0 * math.pi**2 * a.imag / sinh_pi_t


def _bessel_kernel_grid(t: np.ndarray, p: int, z: complex) -> np.ndarray:
    """Kernel values for an array of t at fixed integer p and argument z.

    Uses J_{it+p}(z) J_{it-p}(zbar) with the zbar factor evaluated on the
    reflected branch conj(log z); this keeps the kernel exactly even in z.
    Entries with |t| < T_EPS must have been nudged by the caller.
    """
    lz = cmath.log(z / 2.0)
    mu1 = 1j * t + p
    mu2 = 1j * t - p
    a = _bessel_series_array(mu1, z, lz) * _bessel_series_array(
        mu2, z.conjugate(), lz.conjugate()
    )
    return _kernel_from_products(a, np.sinh(math.pi * t))


def bessel_kernel(pt: SpectralPoint, z: complex) -> float:
    """The real-valued Bessel kernel at spectral point (t, p), argument z.

    Equals (2 pi^2 / sin(pi it)) (J_{-it,-p}(z) - J_{it,p}(z)) written in the
    manifestly real form -4 pi^2 Im(J_{it+p}(z) J_{it-p}(zbar)) / sinh(pi t);
    the removable singularity at t = 0 is filled by offset averaging.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("kernel undefined at z = 0")
    if abs(z) > SERIES_RADIUS:
        raise SeriesRangeError(f"|z| = {abs(z):.3f} beyond series radius")
    t = float(pt.t)
    if abs(t) < T_EPS:
        ts = np.array([T_EPS, -T_EPS])
    else:
        ts = np.array([t])
    vals = _bessel_kernel_grid(ts, int(pt.p), z)
    return float(vals.mean())


def half_trace(r: float, omega: float) -> complex:
    """cosh(r) cos(omega) + i sinh(r) sin(omega) = cosh(r + i omega)."""
    return cmath.cosh(complex(r, omega))


def trace_shift(r: float, omega: float) -> complex:
    """2 (half_trace(r, omega) - 1); the phase offset left after centering."""
    return 2.0 * (half_trace(r, omega) - 1.0)


# ---------------------------------------------------------------------------
# test function and smoothing kernels


@dataclass(frozen=True)
class TestFunction:
    """Gaussian spectral test function h(t, p) = exp(-(t/T)^2 - (p/P)^2)."""

    T: float = 1.0
    P: float = 1.0

    def __post_init__(self) -> None:
        if not (self.T > 0 and self.P > 0):
            raise DomainError("test function needs T > 0 and P > 0")

    def h(self, t, p):
        return np.exp(-((np.asarray(t) / self.T) ** 2) - (np.asarray(p) / self.P) ** 2)


class KernelValues(NamedTuple):
    k: np.ndarray
    k_dd: np.ndarray
    theta: np.ndarray
    theta_dd: np.ndarray


def kernels(tf: TestFunction, r, omega, q_cut: int = 3) -> KernelValues:
    """Radial and angular smoothing kernels with exact second derivatives.

    k(r) = sqrt(pi) T exp(-(Tr)^2); theta is the same Gaussian in omega with
    scale P, periodized over omega -> omega + pi q, |q| <= q_cut.  Both
    integrate to pi over their domain.
    """
    T, P = tf.T, tf.P
    r = np.asarray(r, dtype=float)
    omega = np.asarray(omega, dtype=float)
    rt = math.sqrt(math.pi)
    k = rt * T * np.exp(-((T * r) ** 2))
    k_dd = k * (4.0 * T**4 * r**2 - 2.0 * T**2)
    theta = np.zeros_like(omega)
    theta_dd = np.zeros_like(omega)
    for q in range(-q_cut, q_cut + 1):
        x = P * (omega + math.pi * q)
        g = rt * P * np.exp(-(x**2))
        theta += g
        theta_dd += g * (4.0 * P**2 * x**2 - 2.0 * P**2)
    return KernelValues(k, k_dd, theta, theta_dd)


# ---------------------------------------------------------------------------
# quadrature configuration


@dataclass(frozen=True)
class QuadratureConfig:
    """Truncation and resolution knobs for every integral in this module.

    Cuts are in natural units: t_cut, p_cut are multiples of T and P, r_cut
    is a multiple of 1/T.  Panel counts grow automatically with the local
    oscillation 2|z| cosh(r); phase_rad_per_panel is the phase budget per
    Gauss-Legendre panel, so halving it halves every panel width.
    """

    t_cut: float = 6.0
    p_cut: float = 6.0
    r_cut: float = 6.0
    theta_q_cut: int = 3
    t_panels: int = 24
    r_base_panels: int = 1
    omega_base_panels: int = 4
    phase_rad_per_panel: float = 8.0
    gl_order: int = 16

    def __post_init__(self) -> None:
        numeric = (
            self.t_cut,
            self.p_cut,
            self.r_cut,
            self.theta_q_cut,
            self.t_panels,
            self.r_base_panels,
            self.omega_base_panels,
            self.phase_rad_per_panel,
            self.gl_order,
        )
        if any(v <= 0 for v in numeric):
            raise DomainError("quadrature config values must be positive")

    def refined(self) -> "QuadratureConfig":
        """Same truncations, every panel width halved."""
        return replace(
            self,
            t_panels=2 * self.t_panels,
            r_base_panels=2 * self.r_base_panels,
            omega_base_panels=2 * self.omega_base_panels,
            phase_rad_per_panel=self.phase_rad_per_panel / 2.0,
        )

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for f in fields(self):
                fh.write(f"{f.name} = {getattr(self, f.name)!r}\n")

    @classmethod
    def from_file(cls, path) -> "QuadratureConfig":
        kinds = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                name, _, raw = line.partition("=")
                name = name.strip()
                if name not in kinds:
                    raise DomainError(f"unknown quadrature key {name!r}")
                caster = int if kinds[name] in ("int", int) else float
                kwargs[name] = caster(raw.strip())
        return cls(**kwargs)


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=8)
def _gl_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_rule(a: float, b: float, n_panels: int, order: int):
    """Gauss-Legendre nodes/weights over [a, b] split into equal panels."""
    x, w = _gl_rule(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# Plancherel integral


def plancherel_integral(tf: TestFunction) -> float:
    """Closed form of the spectral mass sum_p int h(t,p) (t^2+p^2) dt.

    Gaussian moments give sqrt(pi) T sum_p exp(-(p/P)^2) (T^2/2 + p^2).
    """
    T, P = tf.T, tf.P
    total = T * T / 2.0
    p = 1
    while True:
        term = 2.0 * math.exp(-((p / P) ** 2)) * (T * T / 2.0 + p * p)
        total += term
        if term < 1e-18 * total:
            break
        p += 1
    return math.sqrt(math.pi) * T * total


def plancherel_integral_quadrature(
    tf: TestFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Same mass by direct quadrature, for cross-checking the closed form."""
    T, P = tf.T, tf.P
    t, wt = _panel_rule(-cfg.t_cut * T, cfg.t_cut * T, cfg.t_panels, cfg.gl_order)
    p_max = int(math.ceil(cfg.p_cut * P))
    total = 0.0
    for p in range(-p_max, p_max + 1):
        total += float(np.sum(wt * tf.h(t, p) * (t * t + p * p)))
    return total


# ---------------------------------------------------------------------------
# the three kernel-integral representations


def bessel_integral_spectral(
    z: complex, tf: TestFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Kernel integral via the spectral plane: sum_p int h J (t^2+p^2) dt."""
    z = complex(z)
    if z == 0:
        raise DomainError("kernel undefined at z = 0")
    if abs(z) > SERIES_RADIUS:
        raise SeriesRangeError("argument beyond the Bessel series radius")
    T, P = tf.T, tf.P
    t_max = cfg.t_cut * T
    osc = max(1.0, abs(cmath.log(z / 2.0)))
    n_panels = max(cfg.t_panels, int(math.ceil(2 * t_max * osc / cfg.phase_rad_per_panel)))
    t, wt = _panel_rule(-t_max, t_max, n_panels, cfg.gl_order)
    # nudge nodes inside the removable-singularity window
    t = np.where(np.abs(t) < T_EPS, T_EPS, t)
    p_max = int(math.ceil(cfg.p_cut * P))
    total = 0.0
    for p in range(-p_max, p_max + 1):
        v = _bessel_kernel_grid(t, p, z)
        total += float(np.sum(wt * tf.h(t, p) * (t * t + p * p) * v))
    return total


def _graded_r_cells(z_abs: float, tf: TestFunction, cfg: QuadratureConfig):
    """Split [0, r_cut/T] into half-unit cells with phase-sized panel counts.

    Yields (a, b, n_r_panels, n_omega_panels).  Within a cell the phase rate
    in either direction is at most 2|z| cosh(b), so panel counts proportional
    to that rate keep the phase seen per panel bounded by the budget.
    """
    r_max = cfg.r_cut / tf.T
    cell_w = 0.5 / tf.T
    n_cells = max(1, int(math.ceil(r_max / cell_w)))
    budget = cfg.phase_rad_per_panel
    for j in range(n_cells):
        a = j * cell_w
        b = min((j + 1) * cell_w, r_max)
        if b <= a:
            continue
        rate = 2.0 * z_abs * math.cosh(b) + 1.0
        n_r = max(cfg.r_base_panels, int(math.ceil((b - a) * rate / budget)))
        n_w = max(cfg.omega_base_panels, int(math.ceil(math.pi * rate / budget)))
        yield a, b, n_r, n_w


_OMEGA_CHUNK = 1 << 22  # cap grid cells per block to bound memory


def _geometric_integral(z: complex, tf: TestFunction, cfg: QuadratureConfig, weighted: bool) -> float:
    """Common engine for the two (r, omega) representations.

    weighted=True : |2z|^2 iint cos(2 Re(z tr)) (sinh^2 r + sin^2 w) k theta
    weighted=False:      - iint cos(2 Re(z tr)) (k'' theta + k theta'')
    with omega over one period [-pi/2, pi/2) and r over the full line.
    The integrand is not even in r alone, so both signs of r are
    integrated explicitly, cell by cell.
    """
    z = complex(z)
    x, y = z.real, z.imag
    total = 0.0
    for a, b, n_r, n_w in _graded_r_cells(abs(z), tf, cfg):
        w_nodes, w_wts = _panel_rule(-math.pi / 2.0, math.pi / 2.0, n_w, cfg.gl_order)
        kv_w = kernels(tf, 0.0, w_nodes, cfg.theta_q_cut)
        cos_w, sin_w = np.cos(w_nodes), np.sin(w_nodes)
        for lo, hi in ((a, b), (-b, -a)):
            r_nodes, r_wts = _panel_rule(lo, hi, n_r, cfg.gl_order)
            kv_r = kernels(tf, r_nodes, 0.0, cfg.theta_q_cut)
            cosh_r, sinh_r = np.cosh(r_nodes), np.sinh(r_nodes)
            # phase(r, w) = 2 Re(z * half_trace) = 2(x cosh r cos w - y sinh r sin w)
            n_block = max(1, _OMEGA_CHUNK // max(1, r_nodes.size))
            for s in range(0, w_nodes.size, n_block):
                sl = slice(s, s + n_block)
                phase = 2.0 * (
                    np.multiply.outer(x * cosh_r, cos_w[sl])
                    - np.multiply.outer(y * sinh_r, sin_w[sl])
                )
                integrand = np.cos(phase)
                if weighted:
                    integrand *= (
                        sinh_r[:, None] ** 2 + sin_w[None, sl] ** 2
                    ) * np.multiply.outer(kv_r.k, kv_w.theta[sl])
                else:
                    integrand *= np.multiply.outer(
                        kv_r.k_dd, kv_w.theta[sl]
                    ) + np.multiply.outer(kv_r.k, kv_w.theta_dd[sl])
                total += float(r_wts @ integrand @ w_wts[sl])
    if weighted:
        return 4.0 * abs(z) ** 2 * total
    return -total


def bessel_integral_deriv(
    z: complex, tf: TestFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Kernel integral via differentiated smoothing kernels.

    -iint cos(2 Re(z half_trace(r, w))) (k''(r) theta(w) + k(r) theta''(w));
    valid for every z, no series restriction.
    """
    return _geometric_integral(z, tf, cfg, weighted=False)


def bessel_integral_weighted(
    z: complex, tf: TestFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Kernel integral with the derivatives moved onto the cosine.

    |2z|^2 iint cos(2 Re(z half_trace)) (sinh^2 r + sin^2 w) k theta; the
    |2z|^2 prefactor exhibits the quadratic small-z bound directly.
    """
    return _geometric_integral(z, tf, cfg, weighted=True)


def small_z_bound_constant(
    tf: TestFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """B with |kernel integral(z)| <= B |z|^2 for all z (|cos| <= 1)."""
    total = 0.0
    for a, b, n_r, n_w in _graded_r_cells(0.0, tf, cfg):
        w_nodes, w_wts = _panel_rule(-math.pi / 2.0, math.pi / 2.0, n_w, cfg.gl_order)
        kv_w = kernels(tf, 0.0, w_nodes, cfg.theta_q_cut)
        sin2 = np.sin(w_nodes) ** 2
        for lo, hi in ((a, b), (-b, -a)):
            r_nodes, r_wts = _panel_rule(lo, hi, n_r, cfg.gl_order)
            kv_r = kernels(tf, r_nodes, 0.0, cfg.theta_q_cut)
            sinh2 = np.sinh(r_nodes) ** 2
            block = (sinh2[:, None] + sin2[None, :]) * np.multiply.outer(
                kv_r.k, kv_w.theta
            )
            total += float(r_wts @ block @ w_wts)
    return 4.0 * total


def with_refinement_error(fn, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """(value at cfg, |value at cfg - value at refined cfg|)."""
    coarse = fn(cfg)
    fine = fn(cfg.refined())
    return fine, abs(fine - coarse)
