"""Built-in oscillatory model fields with known drift coefficients: logistic
growth and predator-prey with oscillating coefficients, the 1D travelling
(Stokes) wave and separable standing waves.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional

import numpy as np

from .fields import FourierField, HarmonicSeries, product_mean
from .integrators import JIT_LOGISTIC, JIT_PREDATOR_PREY, JIT_STOKES


def series(mean: float = 0.0, cos: Optional[dict] = None,
           sin: Optional[dict] = None) -> HarmonicSeries:
    """Shorthand for a harmonic series from sparse {harmonic: amplitude} maps."""
    return HarmonicSeries.from_terms(mean, cos, sin)


def _pad(arr: np.ndarray, K: int) -> np.ndarray:
    out = np.zeros(K)
    out[:arr.size] = arr
    return out


def _series_arrays(series_list, K):
    means = np.array([s.mean for s in series_list])
    cosA = np.stack([_pad(s.cos, K) for s in series_list])
    sinA = np.stack([_pad(s.sin, K) for s in series_list])
    return means, cosA, sinA


# ---------------------------------------------------------------------------
# logistic growth with oscillating coefficients: u = a(tau) x - a(tau) b(tau) x^2
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class LogisticParams:
    a: HarmonicSeries
    b: HarmonicSeries

    @property
    def a_mean(self) -> float:
        return self.a.mean

    @property
    def b_mean(self) -> float:
        return self.b.mean


def logistic_field(params: LogisticParams) -> FourierField:
    a = params.a
    c = a.product(params.b)                    # c(tau) = a(tau) b(tau)
    K = max(a.n_harmonics, c.n_harmonics)
    ac, asn = _pad(a.cos, K), _pad(a.sin, K)
    cc, csn = _pad(c.cos, K), _pad(c.sin, K)

    def mean_fn(x, s):
        return np.array([a.mean * x[0] - c.mean * x[0] ** 2])

    def cos_fn(k):
        return lambda x, s: np.array([ac[k] * x[0] - cc[k] * x[0] ** 2])

    def sin_fn(k):
        return lambda x, s: np.array([asn[k] * x[0] - csn[k] * x[0] ** 2])

    Kj = max(a.n_harmonics, params.b.n_harmonics, 1)
    means, cosA, sinA = _series_arrays([a, params.b], Kj)
    return FourierField(
        dim=1, mean_coeff=mean_fn,
        cos_coeffs=[cos_fn(k) for k in range(K)],
        sin_coeffs=[sin_fn(k) for k in range(K)],
        jit_spec=(JIT_LOGISTIC, means, cosA, sinA, np.zeros(1)),
        name="logistic")


def logistic_drift_K(params: LogisticParams) -> float:
    """Drift coefficient K with V2 = -K x^2:
    K = <a~^tau a~ b~> - a_mean <a~ b~^tau>, exact in the harmonic algebra."""
    at = params.a.oscillating()
    bt = params.b.oscillating()
    return (product_mean(at.tilde_integral(), at, bt)
            - params.a.mean * product_mean(at, bt.tilde_integral()))


def logistic_dl1_coeff(params: LogisticParams) -> float:
    """Effective quadratic coefficient of the DL-1 zeroth system:
    c_mean = a_mean b_mean + <a~ b~>."""
    return (params.a.mean * params.b.mean
            + product_mean(params.a.oscillating(), params.b.oscillating()))


def logistic_dl2_exact(x0: float, K: float, s) -> float:
    """Closed-form DL-2 averaged solution x0 / (1 + x0 K s)."""
    denom = 1.0 + x0 * K * np.asarray(s, float)
    if np.any(denom <= 0.0):
        raise ValueError("finite-time blow-up of averaged model: "
                         "1 + x0*K*s reached zero")
    out = x0 / denom
    return float(out) if out.ndim == 0 else out


def logistic_dl1_exact(x0: float, a: float, c: float, t) -> float:
    """Closed-form solution of dx/dt = a x - c x^2."""
    t = np.asarray(t, float)
    e = np.exp(a * t)
    out = a * x0 * e / (a + c * x0 * (e - 1.0))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# predator-prey with oscillating coefficients
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class PredatorPreyParams:
    alpha: HarmonicSeries
    beta: HarmonicSeries
    gamma: HarmonicSeries
    mu: HarmonicSeries
    case: str = "dl1"           # "dl1": O(1) means; "dl2": all means zero

    def __post_init__(self):
        if self.case not in ("dl1", "dl2"):
            raise ValueError("case must be 'dl1' or 'dl2'")
        if self.case == "dl2":
            for name in ("alpha", "beta", "gamma", "mu"):
                if getattr(self, name).mean != 0.0:
                    raise ValueError(
                        f"dl2 case requires zero mean coefficients ({name})")


def predator_prey_field(params: PredatorPreyParams) -> FourierField:
    al, be, ga, mu = params.alpha, params.beta, params.gamma, params.mu
    K = max(s.n_harmonics for s in (al, be, ga, mu))
    K = max(K, 1)
    means, cosA, sinA = _series_arrays([al, be, ga, mu], K)

    def mean_fn(x, s):
        return np.array([al.mean * x[0] - be.mean * x[0] * x[1],
                         -ga.mean * x[1] + mu.mean * x[0] * x[1]])

    def cos_fn(k):
        return lambda x, s: np.array([
            cosA[0, k] * x[0] - cosA[1, k] * x[0] * x[1],
            -cosA[2, k] * x[1] + cosA[3, k] * x[0] * x[1]])

    def sin_fn(k):
        return lambda x, s: np.array([
            sinA[0, k] * x[0] - sinA[1, k] * x[0] * x[1],
            -sinA[2, k] * x[1] + sinA[3, k] * x[0] * x[1]])

    return FourierField(
        dim=2, mean_coeff=mean_fn,
        cos_coeffs=[cos_fn(k) for k in range(K)],
        sin_coeffs=[sin_fn(k) for k in range(K)],
        jit_spec=(JIT_PREDATOR_PREY, means, cosA, sinA, np.zeros(1)),
        name="predator_prey")


def pp_drift_coeffs(params: PredatorPreyParams) -> tuple:
    """(A, B, C) with V2 = (A x y - B x^2 y, -C x y + B x y^2):
    A = <beta~ gamma~^tau>, B = <beta~ mu~^tau>, C = <alpha~ mu~^tau>."""
    bt = params.beta.oscillating()
    A = product_mean(bt, params.gamma.oscillating().tilde_integral())
    B = product_mean(bt, params.mu.oscillating().tilde_integral())
    C = product_mean(params.alpha.oscillating(),
                     params.mu.oscillating().tilde_integral())
    return A, B, C


def pp_drift_value(x, A: float, B: float, C: float) -> np.ndarray:
    """Analytic DL-2 right-hand side of the predator-prey drift."""
    return np.array([A * x[0] * x[1] - B * x[0] ** 2 * x[1],
                     -C * x[0] * x[1] + B * x[0] * x[1] ** 2])


# ---------------------------------------------------------------------------
# wave fields
# ---------------------------------------------------------------------------

def stokes_field(k: float = 1.0) -> FourierField:
    """1D travelling wave u = cos(k x - tau); uniform drift k/2."""
    return FourierField(
        dim=1,
        mean_coeff=lambda x, s: np.zeros(1),
        cos_coeffs=[lambda x, s: np.array([np.cos(k * x[0])])],
        sin_coeffs=[lambda x, s: np.array([np.sin(k * x[0])])],
        jit_spec=(JIT_STOKES, np.zeros(1), np.zeros((1, 1)), np.zeros((1, 1)),
                  np.array([float(k)])),
        name="stokes")


def standing_wave_field(v: Callable, dim: int = 1,
                        v_jacobian: Optional[Callable] = None) -> FourierField:
    """Separable field u = cos(tau) v(x); every drift vanishes identically."""
    jac = None
    if v_jacobian is not None:
        jac = lambda x, s, tau: np.cos(tau) * np.asarray(v_jacobian(x), float)
    return FourierField(
        dim=dim,
        mean_coeff=lambda x, s: np.zeros(dim),
        cos_coeffs=[lambda x, s: np.asarray(v(x), float).reshape(dim)],
        analytic_jacobian=jac,
        name="standing_wave")


def linear_two_harmonic_field(A1: np.ndarray, A2: np.ndarray) -> FourierField:
    """u = cos(tau) A1 x + cos(2 tau) A2 x; mean and quadratic drift vanish,
    the cubic drift is ([[A1,A2]m A1]m x)/8 in matrix-commutator notation."""
    A1 = np.asarray(A1, float)
    A2 = np.asarray(A2, float)
    dim = A1.shape[0]
    if A1.shape != (dim, dim) or A2.shape != (dim, dim):
        raise ValueError("A1 and A2 must be square matrices of equal size")
    return FourierField(
        dim=dim,
        mean_coeff=lambda x, s: np.zeros(dim),
        cos_coeffs=[lambda x, s: A1 @ x, lambda x, s: A2 @ x],
        analytic_jacobian=lambda x, s, tau: np.cos(tau) * A1 + np.cos(2 * tau) * A2,
        name="two_harmonic")


#: default classification boxes (positive quadrant for the biology models)
MODEL_DEFAULT_BOX = {
    "logistic": ((0.5, 2.0),),
    "predator_prey": ((0.5, 2.0), (0.5, 2.0)),
    "stokes": ((0.0, 2.0),),
    "standing_wave": ((0.5, 2.0),),
    "two_harmonic": ((-1.0, 1.0), (-1.0, 1.0)),
}
