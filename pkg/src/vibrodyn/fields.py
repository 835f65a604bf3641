"""Oscillatory velocity fields u(x, s, tau) and their harmonic representations.

A field is 2*pi-periodic in the fast phase tau; the slow argument s is an
arbitrary smooth dependence.  Two concrete representations are provided:
``OscillatoryField`` wraps a plain callable, ``FourierField`` stores the field
as a mean plus a finite number of cos/sin harmonics with state-dependent
coefficients, which makes tau-antiderivatives exact.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi

#: samples per fast period used by all tau quadratures unless overridden
DEFAULT_TAU_SAMPLES = 256


class FieldEvaluationError(ValueError):
    """A field produced a non-finite value."""


def tau_grid(n: int = DEFAULT_TAU_SAMPLES) -> np.ndarray:
    """Uniform grid on [0, 2*pi), the nodes of the periodic trapezoid rule."""
    return np.arange(n) * (TWO_PI / n)


def reduce_tau(tau: float) -> float:
    """Reduce tau modulo 2*pi into [0, 2*pi)."""
    t = math.fmod(tau, TWO_PI)
    return t + TWO_PI if t < 0.0 else t


# ---------------------------------------------------------------------------
# scalar harmonic series, used for oscillating model coefficients a(tau) etc.
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class HarmonicSeries:
    """Scalar trigonometric polynomial  mean + sum_k (c_k cos k tau + d_k sin k tau)."""

    mean: float = 0.0
    cos: np.ndarray = dataclasses.field(default_factory=lambda: np.zeros(0))
    sin: np.ndarray = dataclasses.field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "cos", np.atleast_1d(np.asarray(self.cos, float)))
        object.__setattr__(self, "sin", np.atleast_1d(np.asarray(self.sin, float)))

    @staticmethod
    def from_terms(mean: float = 0.0, cos: Optional[dict] = None,
                   sin: Optional[dict] = None) -> "HarmonicSeries":
        """Build from sparse {harmonic index: amplitude} mappings."""
        cos = cos or {}
        sin = sin or {}
        K = max([0] + [int(k) for k in cos] + [int(k) for k in sin])
        c = np.zeros(K)
        d = np.zeros(K)
        for k, a in cos.items():
            if k < 1:
                raise ValueError("harmonic indices start at 1")
            c[int(k) - 1] = a
        for k, a in sin.items():
            if k < 1:
                raise ValueError("harmonic indices start at 1")
            d[int(k) - 1] = a
        return HarmonicSeries(float(mean), c, d)

    @staticmethod
    def from_samples(values: np.ndarray, n_harmonics: int) -> "HarmonicSeries":
        """Discrete Fourier projection of uniform samples over one period."""
        values = np.asarray(values, float)
        n = values.size
        if 2 * n_harmonics + 1 > n:
            raise ValueError("not enough samples for the requested harmonics")
        F = np.fft.rfft(values) / n
        return HarmonicSeries(F[0].real,
                              2.0 * F[1:n_harmonics + 1].real,
                              -2.0 * F[1:n_harmonics + 1].imag)

    @property
    def n_harmonics(self) -> int:
        return max(self.cos.size, self.sin.size)

    def __call__(self, tau):
        tau = np.asarray(tau, float)
        out = np.full(tau.shape, self.mean)
        for k in range(1, self.n_harmonics + 1):
            if k <= self.cos.size and self.cos[k - 1] != 0.0:
                out = out + self.cos[k - 1] * np.cos(k * tau)
            if k <= self.sin.size and self.sin[k - 1] != 0.0:
                out = out + self.sin[k - 1] * np.sin(k * tau)
        return out if out.shape else float(out)

    def oscillating(self) -> "HarmonicSeries":
        """Zero-mean (tilde) part."""
        return HarmonicSeries(0.0, self.cos, self.sin)

    def tilde_integral(self) -> "HarmonicSeries":
        """Exact tau-antiderivative of the oscillating part, kept zero-mean.

        cos k tau -> sin k tau / k,  sin k tau -> -cos k tau / k.
        """
        K = self.n_harmonics
        c = np.zeros(K)
        d = np.zeros(K)
        for k in range(1, K + 1):
            if k <= self.cos.size:
                d[k - 1] = self.cos[k - 1] / k
            if k <= self.sin.size:
                c[k - 1] = -self.sin[k - 1] / k
        return HarmonicSeries(0.0, c, d)

    def product(self, other: "HarmonicSeries") -> "HarmonicSeries":
        """Pointwise product, exact via oversampled DFT."""
        K = self.n_harmonics + other.n_harmonics
        n = max(8, 2 * K + 2)
        g = tau_grid(n)
        return HarmonicSeries.from_samples(self(g) * other(g), K)

    def scaled(self, c: float) -> "HarmonicSeries":
        return HarmonicSeries(c * self.mean, c * self.cos, c * self.sin)


def product_mean(*series: HarmonicSeries) -> float:
    """tau-average of a product of harmonic series, exact."""
    acc = series[0]
    for s in series[1:]:
        acc = acc.product(s)
    return acc.mean


# ---------------------------------------------------------------------------
# field records
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class OscillatoryField:
    """Velocity field given as a direct callable (x, s, tau) -> real[dim]."""

    dim: int
    eval: Callable[[np.ndarray, float, float], np.ndarray]
    analytic_jacobian: Optional[Callable] = None
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")


@dataclasses.dataclass(frozen=True)
class FourierField:
    """Band-limited field: mean(x,s) + sum_k [c_k(x,s) cos k tau + d_k(x,s) sin k tau].

    Coefficient callables map (x, s) to real[dim].  The tau-average equals
    ``mean_coeff`` by construction and tilde-integration is exact per harmonic.
    ``jit_spec`` optionally carries a compiled-kernel description used by the
    full oscillatory integrator (see integrators module).
    """

    dim: int
    mean_coeff: Callable
    cos_coeffs: Sequence[Callable] = ()
    sin_coeffs: Sequence[Callable] = ()
    analytic_jacobian: Optional[Callable] = None
    jit_spec: Optional[tuple] = None
    meta: dict = dataclasses.field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "cos_coeffs", tuple(self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(self.sin_coeffs))

    @property
    def n_harmonics(self) -> int:
        return max(len(self.cos_coeffs), len(self.sin_coeffs))

    def coefficients(self, x, s):
        """(mean[dim], cos[K,dim], sin[K,dim]) at one state point."""
        x = np.asarray(x, float)
        K = self.n_harmonics
        mean = np.asarray(self.mean_coeff(x, s), float).reshape(self.dim)
        cos = np.zeros((K, self.dim))
        sin = np.zeros((K, self.dim))
        for k, fn in enumerate(self.cos_coeffs):
            cos[k] = np.asarray(fn(x, s), float).reshape(self.dim)
        for k, fn in enumerate(self.sin_coeffs):
            sin[k] = np.asarray(fn(x, s), float).reshape(self.dim)
        return mean, cos, sin

    def eval(self, x, s, tau):
        mean, cos, sin = self.coefficients(x, s)
        ks = np.arange(1, self.n_harmonics + 1)
        return mean + cos.T @ np.cos(ks * tau) + sin.T @ np.sin(ks * tau)

    def sample(self, x, s, taus: np.ndarray) -> np.ndarray:
        """Values on a tau grid, shape (dim, n)."""
        mean, cos, sin = self.coefficients(x, s)
        ks = np.arange(1, self.n_harmonics + 1)[:, None]
        out = np.repeat(mean[:, None], taus.size, axis=1)
        if self.n_harmonics:
            out = out + cos.T @ np.cos(ks * taus[None, :]) \
                      + sin.T @ np.sin(ks * taus[None, :])
        return out

    def tilde_integral_value(self, x, s, tau):
        """Exact tilde-antiderivative of the oscillating part at one phase."""
        _, cos, sin = self.coefficients(x, s)
        out = np.zeros(self.dim)
        for k in range(1, self.n_harmonics + 1):
            out += cos[k - 1] * (np.sin(k * tau) / k)
            out -= sin[k - 1] * (np.cos(k * tau) / k)
        return out


Field = object  # OscillatoryField | FourierField; duck-typed via .dim / .eval


def evaluate(field, x, s: float, tau: float) -> np.ndarray:
    """Evaluate u(x, s, tau) with tau reduced mod 2*pi and a finiteness check."""
    x = np.asarray(x, float)
    tau = reduce_tau(tau)
    u = np.asarray(field.eval(x, s, tau), float).reshape(field.dim)
    if not np.isfinite(u).all():
        bad = int(np.argmax(~np.isfinite(u)))
        raise FieldEvaluationError(
            f"field '{getattr(field, 'name', '')}' returned non-finite component "
            f"{bad} at x={x.tolist()}, s={s}, tau={tau}")
    return u


def sample_field(field, x, s, taus: np.ndarray) -> np.ndarray:
    """Field values on a tau grid, shape (dim, n); vectorized for FourierField."""
    if isinstance(field, FourierField):
        out = field.sample(np.asarray(x, float), s, taus)
    else:
        out = np.empty((field.dim, taus.size))
        x = np.asarray(x, float)
        for j, t in enumerate(taus):
            out[:, j] = np.asarray(field.eval(x, s, t), float).reshape(field.dim)
    if not np.isfinite(out).all():
        bad = np.argwhere(~np.isfinite(out))[0]
        raise FieldEvaluationError(
            f"non-finite component {int(bad[0])} at tau index {int(bad[1])}, "
            f"x={np.asarray(x).tolist()}, s={s}")
    return out


def mean_part(field, x, s: float = 0.0) -> np.ndarray:
    """tau-average of the field at fixed (x, s)."""
    if isinstance(field, FourierField):
        return np.asarray(field.mean_coeff(np.asarray(x, float), s),
                          float).reshape(field.dim)
    return sample_field(field, x, s, tau_grid()).mean(axis=1)


def osc_part(field, x, s: float, tau: float) -> np.ndarray:
    """Purely oscillating (zero tau-mean) part at one phase."""
    return evaluate(field, x, s, tau) - mean_part(field, x, s)


def fit_fourier(field, n_harmonics: int, n_samples: int = DEFAULT_TAU_SAMPLES,
                probe: Optional[tuple] = None) -> FourierField:
    """Project a field onto tau-harmonics 0..K by the discrete Fourier transform.

    Exact to round-off for band-limited fields with at most K harmonics.  An
    aliasing probe at one state point records a warning in ``meta`` when the
    top harmonic still carries significant energy.
    """
    K = int(n_harmonics)
    if K < 0:
        raise ValueError("n_harmonics must be non-negative")
    if 2 * K + 1 > n_samples:
        raise ValueError("need 2K+1 <= n_samples to resolve K harmonics")
    grid = tau_grid(n_samples)

    def coeffs(x, s):
        vals = sample_field(field, x, s, grid)           # (dim, n)
        F = np.fft.rfft(vals, axis=1) / n_samples
        mean = F[:, 0].real
        cos = 2.0 * F[:, 1:K + 1].real.T                 # (K, dim)
        sin = -2.0 * F[:, 1:K + 1].imag.T
        return mean, cos, sin

    def mean_fn(x, s):
        return coeffs(x, s)[0]

    def cos_fn(k):
        return lambda x, s: coeffs(x, s)[1][k]

    def sin_fn(k):
        return lambda x, s: coeffs(x, s)[2][k]

    meta = {}
    if K > 0:
        px, ps = probe if probe is not None else (np.zeros(field.dim), 0.0)
        try:
            vals = sample_field(field, px, ps, grid)
            F = np.abs(np.fft.rfft(vals, axis=1)) / n_samples
            total = F.max()
            if total > 0 and F.shape[1] > K + 1 \
                    and F[:, K + 1:].max() > 1e-8 * total:
                meta["aliasing_warning"] = (
                    f"energy above harmonic {K} is not negligible; the field "
                    f"may not be band-limited within K={K}")
        except FieldEvaluationError:
            pass

    return FourierField(
        dim=field.dim,
        mean_coeff=mean_fn,
        cos_coeffs=[cos_fn(k) for k in range(K)],
        sin_coeffs=[sin_fn(k) for k in range(K)],
        analytic_jacobian=getattr(field, "analytic_jacobian", None),
        meta=meta,
        name=getattr(field, "name", ""),
    )


# ---------------------------------------------------------------------------
# sampling lattice for degeneracy scans
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class SamplingDomain:
    """Rectangular state lattice plus slow-time samples used in degeneracy scans."""

    box: tuple                       # ((lo, hi), ...) per coordinate
    x_grid_points_per_axis: int = 5
    s_samples: tuple = (0.0,)
    tau_samples_per_period: int = DEFAULT_TAU_SAMPLES

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "s_samples", tuple(float(s) for s in self.s_samples))
        for lo, hi in box:
            if not lo < hi:
                raise ValueError(f"degenerate box interval [{lo}, {hi}]")
        if self.x_grid_points_per_axis < 1:
            raise ValueError("x_grid_points_per_axis must be positive")
        n = self.tau_samples_per_period
        if n < 4 or n % 2 != 0:
            raise ValueError("tau_samples_per_period must be even and >= 4")

    @property
    def dim(self) -> int:
        return len(self.box)

    def x_lattice(self) -> np.ndarray:
        """All lattice points, shape (m, dim)."""
        axes = [np.linspace(lo, hi, self.x_grid_points_per_axis)
                for lo, hi in self.box]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)
