"""Core averaging operators: tau-average, tilde-integration, Jacobians,
commutators and the drift velocities.

The quadratic drift is the tau-average <(w^tau . grad) w> of the oscillating
part w of the field, equal to half the averaged commutator <[w, w^tau]>/2;
the cubic drift is <[[w, w^tau], w^tau]>/3.  Both formula routes of the
quadratic drift are always evaluated and their difference is reported as the
``residual`` of the result.
"""

from __future__ import annotations

import dataclasses
import warnings

import numpy as np

from .fields import (
    DEFAULT_TAU_SAMPLES,
    FourierField,
    mean_part,
    sample_field,
    tau_grid,
)

#: default relative scale of the central-difference step per coordinate
FD_STEP_SCALE = 1e-6
#: outer differencing step scale for the nested gradient in the cubic drift
FD_OUTER_STEP_SCALE = 1e-4

DEFAULT_TILDE_MEAN_TOL = 1e-8
RESIDUAL_WARN_TOL = 1e-6


class TildeClassError(ValueError):
    """Input to tilde-integration is not zero-mean."""


@dataclasses.dataclass(frozen=True)
class DriftEvaluation:
    """Drift velocity at one state point with its numerical evidence."""

    value: np.ndarray
    method: str                  # "advective" or "commutator"
    quadrature_samples: int
    residual: float              # disagreement between the two formula routes


# ---------------------------------------------------------------------------
# scalar/vector periodic callables of tau
# ---------------------------------------------------------------------------

def tau_average(g, n: int = DEFAULT_TAU_SAMPLES):
    """(1/2pi) integral of g over one period, periodic trapezoid rule."""
    taus = tau_grid(n)
    vals = np.asarray([g(t) for t in taus], float)
    return vals.mean(axis=0)


def _tilde_samples(vals: np.ndarray) -> np.ndarray:
    """Tilde-antiderivative of uniform samples along the last axis (exact per
    harmonic below Nyquist); the result is zero-mean on the grid."""
    n = vals.shape[-1]
    F = np.fft.rfft(vals, axis=-1)
    k = np.arange(F.shape[-1])
    k[0] = 1                                    # avoid divide-by-zero; bin zeroed next
    F = F / (1j * k)
    F[..., 0] = 0.0
    return np.fft.irfft(F, n=n, axis=-1)


def tilde_integrate(g, n: int = DEFAULT_TAU_SAMPLES,
                    tol_mean: float = DEFAULT_TILDE_MEAN_TOL):
    """tau-antiderivative of a zero-mean periodic callable, kept zero-mean.

    Returns a callable evaluating the trigonometric interpolant of the
    antiderivative at arbitrary tau.  Raises ``TildeClassError`` when the
    input has a nonzero mean.
    """
    taus = tau_grid(n)
    vals = np.asarray([g(t) for t in taus], float)   # (n,) or (n, dim)
    mean = vals.mean(axis=0)
    if np.max(np.abs(np.atleast_1d(mean))) > tol_mean:
        raise TildeClassError(
            f"input not in tilde class: |<g>| = {np.max(np.abs(np.atleast_1d(mean))):.3e} "
            f"exceeds {tol_mean:.1e}")
    F = np.fft.rfft(vals, axis=0) / n
    k = np.arange(F.shape[0])
    k[0] = 1
    if vals.ndim == 2:
        k = k[:, None]
    G = F / (1j * k)
    G[0] = 0.0

    scalar = vals.ndim == 1
    kk = np.arange(1, G.shape[0])

    def antiderivative(tau):
        phases = np.exp(1j * kk * tau)
        # one-sided spectrum: mean is zero, Nyquist bin (if any) counted once
        w = np.full(kk.size, 2.0)
        if n % 2 == 0:
            w[-1] = 1.0
        if scalar:
            return float(np.real(np.sum(w * G[1:] * phases)))
        return np.real((w[:, None] * G[1:]).T @ phases)

    return antiderivative


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

def _fd_steps(x: np.ndarray, h_scale: float) -> np.ndarray:
    return h_scale * (1.0 + np.abs(x))


def _fd_jacobian(fn, x: np.ndarray, h_scale: float = FD_STEP_SCALE) -> np.ndarray:
    """Central-difference Jacobian of fn: R^dim -> R^m, columns j = d/dx_j."""
    x = np.asarray(x, float)
    h = _fd_steps(x, h_scale)
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h[j]
        cols.append((np.asarray(fn(x + e), float) - np.asarray(fn(x - e), float))
                    / (2.0 * h[j]))
    return np.stack(cols, axis=-1)


def jacobian(field, x, s: float = 0.0, tau="mean",
             h_scale: float = FD_STEP_SCALE) -> np.ndarray:
    """Spatial Jacobian d u_i / d x_j at fixed (s, tau), or of the tau-mean.

    Uses the field's analytic Jacobian when available, otherwise central
    finite differences with step h_scale*(1+|x_j|) per coordinate.
    """
    x = np.asarray(x, float)
    jac = getattr(field, "analytic_jacobian", None)
    if tau == "mean":
        if jac is not None:
            taus = tau_grid()
            return np.mean([np.asarray(jac(x, s, t), float) for t in taus], axis=0)
        return _fd_jacobian(lambda y: mean_part(field, y, s), x, h_scale)
    if jac is not None:
        return np.asarray(jac(x, s, float(tau)), float)
    return _fd_jacobian(lambda y: np.asarray(field.eval(y, s, float(tau)),
                                             float).reshape(field.dim), x, h_scale)


def commutator(u_eval, v_eval, x, s: float = 0.0,
               h_scale: float = FD_STEP_SCALE) -> np.ndarray:
    """[u, v] = (v . grad) u - (u . grad) v for callables (x, s) -> real[dim]."""
    x = np.asarray(x, float)
    u = np.asarray(u_eval(x, s), float)
    v = np.asarray(v_eval(x, s), float)
    Ju = _fd_jacobian(lambda y: np.asarray(u_eval(y, s), float), x, h_scale)
    Jv = _fd_jacobian(lambda y: np.asarray(v_eval(y, s), float), x, h_scale)
    return Ju @ v - Jv @ u


# ---------------------------------------------------------------------------
# drift velocities
# ---------------------------------------------------------------------------

def _osc_samples(field, x, s, taus):
    vals = sample_field(field, x, s, taus)
    return vals - vals.mean(axis=1, keepdims=True)


def _osc_jacobian_samples(field, x, s, taus, h_scale):
    """Jacobian of the oscillating part on the tau grid, shape (dim, dim, n)."""
    x = np.asarray(x, float)
    jac = getattr(field, "analytic_jacobian", None)
    if jac is not None:
        J = np.stack([np.asarray(jac(x, s, t), float) for t in taus], axis=-1)
        return J - J.mean(axis=-1, keepdims=True)
    h = _fd_steps(x, h_scale)
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h[j]
        up = _osc_samples(field, x + e, s, taus)
        dn = _osc_samples(field, x - e, s, taus)
        cols.append((up - dn) / (2.0 * h[j]))
    return np.stack(cols, axis=1)


def _drift_v2_paths(field, x, s, taus, h_scale):
    """Both formula routes of the quadratic drift: (advective, commutator)."""
    U = _osc_samples(field, x, s, taus)          # oscillating part, (dim, n)
    T = _tilde_samples(U)                        # its tilde-antiderivative
    J = _osc_jacobian_samples(field, x, s, taus, h_scale)
    Jt = _tilde_samples(J)
    advective = np.einsum("ijn,jn->i", J, T) / taus.size
    comm = 0.5 * (np.einsum("ijn,jn->i", J, T)
                  - np.einsum("ijn,jn->i", Jt, U)) / taus.size
    return advective, comm


def drift_v2(field, x, s: float = 0.0, method: str = "commutator",
             n: int = DEFAULT_TAU_SAMPLES,
             h_scale: float = FD_STEP_SCALE) -> DriftEvaluation:
    """Quadratic drift velocity <(w^tau . grad) w> at one state point.

    Both the advective and the averaged-commutator routes are evaluated;
    ``method`` selects which one is reported as the value, the max-norm of
    their difference is the residual.
    """
    if method not in ("advective", "commutator"):
        raise ValueError(f"unknown drift method {method!r}")
    x = np.asarray(x, float)
    taus = tau_grid(n)
    advective, comm = _drift_v2_paths(field, x, s, taus, h_scale)
    residual = float(np.max(np.abs(advective - comm))) if x.size else 0.0
    if residual > RESIDUAL_WARN_TOL * max(1.0, float(np.max(np.abs(comm)))):
        warnings.warn(
            f"drift quadrature under-resolved (residual {residual:.2e}); "
            f"retry with n >= {2 * n} samples", RuntimeWarning, stacklevel=2)
    value = comm if method == "commutator" else advective
    return DriftEvaluation(value=value, method=method,
                           quadrature_samples=n, residual=residual)


def _v3_from_grid(field, x, s, taus, h_scale, outer_h_scale):
    x = np.asarray(x, float)

    def w_samples(y):
        U = _osc_samples(field, y, s, taus)
        T = _tilde_samples(U)
        J = _osc_jacobian_samples(field, y, s, taus, h_scale)
        Jt = _tilde_samples(J)
        return np.einsum("ijn,jn->in", J, T) - np.einsum("ijn,jn->in", Jt, U)

    U = _osc_samples(field, x, s, taus)
    T = _tilde_samples(U)
    Jt = _tilde_samples(_osc_jacobian_samples(field, x, s, taus, h_scale))
    W = w_samples(x)

    H = _fd_steps(x, outer_h_scale)
    Jw_cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = H[j]
        Jw_cols.append((w_samples(x + e) - w_samples(x - e)) / (2.0 * H[j]))
    Jw = np.stack(Jw_cols, axis=1)               # (dim, dim, n)

    return (np.einsum("ijn,jn->i", Jw, T)
            - np.einsum("ijn,jn->i", Jt, W)) / (3.0 * taus.size)


def drift_v3(field, x, s: float = 0.0, n: int = DEFAULT_TAU_SAMPLES,
             h_scale: float = FD_STEP_SCALE,
             outer_h_scale: float = FD_OUTER_STEP_SCALE) -> DriftEvaluation:
    """Cubic drift <[[w, w^tau], w^tau]>/3 for doubly degenerate fields.

    The residual compares the full-resolution quadrature with a half-resolution
    one (exact agreement for band-limited fields).
    """
    taus = tau_grid(n)
    value = _v3_from_grid(field, x, s, taus, h_scale, outer_h_scale)
    coarse = _v3_from_grid(field, x, s, taus[::2], h_scale, outer_h_scale)
    residual = float(np.max(np.abs(value - coarse)))
    if residual > RESIDUAL_WARN_TOL * max(1.0, float(np.max(np.abs(value)))):
        warnings.warn(
            f"cubic drift quadrature under-resolved (residual {residual:.2e}); "
            f"retry with n >= {2 * n} samples", RuntimeWarning, stacklevel=2)
    return DriftEvaluation(value=value, method="commutator",
                           quadrature_samples=n, residual=residual)


def tilde_velocity_value(field, x, s: float, tau: float) -> np.ndarray:
    """w^tau(x, s, tau): tilde-antiderivative of the oscillating part at one
    phase; exact for FourierField, spectral otherwise."""
    if isinstance(field, FourierField):
        return field.tilde_integral_value(np.asarray(x, float), s, tau)
    taus = tau_grid()
    U = _osc_samples(field, x, s, taus)
    F = np.fft.rfft(U, axis=1) / taus.size
    out = np.zeros(field.dim)
    for k in range(1, F.shape[1]):
        w = 2.0 if not (taus.size % 2 == 0 and k == F.shape[1] - 1) else 1.0
        out += w * np.real(F[:, k] / (1j * k) * np.exp(1j * k * tau))
    return out
