"""Fixed-step RK4 integration of averaged systems and of the full oscillatory
ODE dx/dt = u(x, s(t), omega*t), plus trajectory error metrics.

The full integrator resolves the fast phase with at least 32 steps per period.
Built-in models carry a ``jit_spec`` describing their right-hand side by
harmonic-amplitude arrays; those runs go through a compiled (numba) kernel,
everything else through a plain Python loop.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import Callable, Optional, Union

import numba
import numpy as np

from .classify import DL
from .fields import TWO_PI, evaluate

DEFAULT_N_FAST = 32
DEFAULT_MAX_STEPS = 2 * 10 ** 8
MIN_OMEGA = 10.0


class SlowTime(enum.Enum):
    """Which time variable a grid or averaged system lives on."""

    T = 0          # s = t           (DL-1)
    EPS_T = 1      # s = t / omega   (DL-2)
    EPS2_T = 2     # s = t / omega^2 (DL-3)

    @property
    def exponent(self) -> int:
        return self.value


SLOW_TIME_FOR_DL = {DL.DL1: SlowTime.T, DL.DL2: SlowTime.EPS_T, DL.DL3: SlowTime.EPS2_T}


@dataclasses.dataclass(frozen=True)
class Trajectory:
    """Sampled solution path on either the physical or the slow time grid."""

    times: np.ndarray            # (m,), strictly increasing
    states: np.ndarray           # (m, dim)
    time_variable: SlowTime = SlowTime.T

    def __post_init__(self):
        times = np.asarray(self.times, float)
        states = np.asarray(self.states, float)
        if states.ndim == 1:
            states = states[:, None]
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        if times.size != states.shape[0]:
            raise ValueError("times/states length mismatch")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def span(self) -> tuple:
        return float(self.times[0]), float(self.times[-1])

    def write_csv(self, path):
        header = "time," + ",".join(f"x{j + 1}" for j in range(self.dim))
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for t, row in zip(self.times, self.states):
                fh.write(",".join(f"{v:.17g}" for v in (t, *row)) + "\n")


class IntegrationError(RuntimeError):
    """Integration aborted; carries the partial trajectory when available."""

    def __init__(self, message, trajectory: Optional[Trajectory] = None):
        super().__init__(message)
        self.trajectory = trajectory


def integrate(rhs: Callable, x0, t_span, h: float,
              time_variable: SlowTime = SlowTime.T,
              store_every: int = 1) -> Trajectory:
    """Classical RK4 with fixed step; the final step is shortened to land
    exactly on the end of the span."""
    if h <= 0:
        raise ValueError("step h must be positive")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise ValueError("t_span must be finite with t_end > t_start")
    x = np.asarray(x0, float).copy()
    if x.ndim == 0:
        x = x[None]
    n_steps = int(math.ceil((t1 - t0) / h - 1e-12))
    times = [t0]
    states = [x.copy()]
    t = t0
    for i in range(n_steps):
        hh = min(h, t1 - t)
        k1 = np.asarray(rhs(x, t), float)
        k2 = np.asarray(rhs(x + 0.5 * hh * k1, t + 0.5 * hh), float)
        k3 = np.asarray(rhs(x + 0.5 * hh * k2, t + 0.5 * hh), float)
        k4 = np.asarray(rhs(x + hh * k3, t + hh), float)
        x = x + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t + hh
        if not np.isfinite(x).all():
            partial = Trajectory(np.asarray(times), np.asarray(states), time_variable)
            raise IntegrationError(
                f"non-finite state at t={t:.6g} (step {i + 1}/{n_steps})", partial)
        if (i + 1) % store_every == 0 or i == n_steps - 1:
            times.append(t)
            states.append(x.copy())
    return Trajectory(np.asarray(times), np.asarray(states), time_variable)


# ---------------------------------------------------------------------------
# full oscillatory integration
# ---------------------------------------------------------------------------

# jit_spec model ids
JIT_LOGISTIC = 0
JIT_PREDATOR_PREY = 1
JIT_STOKES = 2


@numba.njit(cache=True, inline="always")
def _series_val(mean, cos_amp, sin_amp, tau):
    v = mean
    for k in range(cos_amp.size):
        if cos_amp[k] != 0.0:
            v += cos_amp[k] * np.cos((k + 1) * tau)
        if sin_amp[k] != 0.0:
            v += sin_amp[k] * np.sin((k + 1) * tau)
    return v


@numba.njit(cache=True, inline="always")
def _jit_rhs(model_id, means, cosA, sinA, aux, x, s, tau, out):
    if model_id == 0:      # logistic: u = a x - a b x^2
        a = _series_val(means[0], cosA[0], sinA[0], tau)
        b = _series_val(means[1], cosA[1], sinA[1], tau)
        out[0] = a * x[0] - a * b * x[0] * x[0]
    elif model_id == 1:    # predator-prey
        al = _series_val(means[0], cosA[0], sinA[0], tau)
        be = _series_val(means[1], cosA[1], sinA[1], tau)
        ga = _series_val(means[2], cosA[2], sinA[2], tau)
        mu = _series_val(means[3], cosA[3], sinA[3], tau)
        out[0] = al * x[0] - be * x[0] * x[1]
        out[1] = -ga * x[1] + mu * x[0] * x[1]
    else:                  # stokes wave: u = cos(k x - tau)
        out[0] = np.cos(aux[0] * x[0] - tau)


@numba.njit(cache=True)
def _rk4_fast(model_id, means, cosA, sinA, aux, x0, t_end, h, omega, s_scale,
              store_every, ts, xs):
    dim = x0.size
    twopi = 2.0 * np.pi
    x = x0.copy()
    xt = np.empty(dim)
    k1 = np.empty(dim)
    k2 = np.empty(dim)
    k3 = np.empty(dim)
    k4 = np.empty(dim)
    n_steps = int(np.ceil(t_end / h - 1e-12))
    t = 0.0
    ts[0] = 0.0
    xs[0] = x
    m = 1
    for i in range(n_steps):
        hh = h
        if t + h > t_end:
            hh = t_end - t
        tm = t + 0.5 * hh
        te = t + hh
        tau1 = (omega * t) % twopi
        tau2 = (omega * tm) % twopi
        tau4 = (omega * te) % twopi
        _jit_rhs(model_id, means, cosA, sinA, aux, x, s_scale * t, tau1, k1)
        for j in range(dim):
            xt[j] = x[j] + 0.5 * hh * k1[j]
        _jit_rhs(model_id, means, cosA, sinA, aux, xt, s_scale * tm, tau2, k2)
        for j in range(dim):
            xt[j] = x[j] + 0.5 * hh * k2[j]
        _jit_rhs(model_id, means, cosA, sinA, aux, xt, s_scale * tm, tau2, k3)
        for j in range(dim):
            xt[j] = x[j] + hh * k3[j]
        _jit_rhs(model_id, means, cosA, sinA, aux, xt, s_scale * te, tau4, k4)
        ok = True
        for j in range(dim):
            x[j] = x[j] + (hh / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            if not np.isfinite(x[j]):
                ok = False
        t = te
        if not ok:
            return m, -1
        if (i + 1) % store_every == 0 or i == n_steps - 1:
            ts[m] = t
            xs[m] = x
            m += 1
    return m, 0


def integrate_full(field, omega: float, dl: DL, x0, t_span,
                   n_fast: int = DEFAULT_N_FAST,
                   store_every: Optional[int] = None,
                   max_steps: int = DEFAULT_MAX_STEPS) -> Trajectory:
    """Integrate dx/dt = u(x, s(t), omega*t) resolving the fast scale.

    The slow argument fed to the field follows the distinguished limit:
    s = t for DL-1, s = t/omega for DL-2, s = t/omega^2 for DL-3.  The step is
    (2*pi/omega)/n_fast.  The trajectory lives on the physical time grid.
    """
    if omega < MIN_OMEGA:
        raise ValueError(f"omega must be >= {MIN_OMEGA}")
    if n_fast < DEFAULT_N_FAST:
        raise ValueError(f"n_fast must be >= {DEFAULT_N_FAST}")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t0 != 0.0:
        raise ValueError("full integration starts at t = 0")
    h = (TWO_PI / omega) / n_fast
    n_steps = int(math.ceil(t1 / h - 1e-12))
    if n_steps > max_steps:
        raise IntegrationError(
            f"step budget exceeded ({n_steps:.3g} > {max_steps:.3g} steps); "
            f"use a shorter span or raise max_steps")
    if store_every is None:
        store_every = max(1, n_steps // 4096)
    s_scale = omega ** (-SLOW_TIME_FOR_DL[dl].exponent)
    x0 = np.atleast_1d(np.asarray(x0, float))

    spec = getattr(field, "jit_spec", None)
    if spec is not None:
        model_id, means, cosA, sinA, aux = spec
        n_store = n_steps // store_every + 2
        ts = np.empty(n_store)
        xs = np.empty((n_store, x0.size))
        m, status = _rk4_fast(model_id, means, cosA, sinA, aux, x0, t1, h,
                              float(omega), s_scale, store_every, ts, xs)
        traj = Trajectory(ts[:m], xs[:m], SlowTime.T)
        if status != 0:
            raise IntegrationError("non-finite state in full integration", traj)
        return traj

    def rhs(x, t):
        return evaluate(field, x, s_scale * t, omega * t)

    return integrate(rhs, x0, (0.0, t1), h, SlowTime.T, store_every)


def error_norm(a: Trajectory, b: Union[Trajectory, Callable],
               eps: Optional[float] = None) -> float:
    """Sup-norm of the componentwise difference over a's grid.

    ``b`` is either a callable of a's time variable or a trajectory; when the
    time tags differ, a's grid is mapped through s = eps^p * t (requires eps).
    """
    from scipy.interpolate import CubicSpline

    ta = a.times
    if callable(b) and not isinstance(b, Trajectory):
        vals = np.asarray([np.atleast_1d(np.asarray(b(t), float)) for t in ta])
        return float(np.max(np.abs(a.states - vals)))
    shift = b.time_variable.exponent - a.time_variable.exponent
    if shift != 0:
        if eps is None:
            raise ValueError("eps required to map between time variables")
        ta = ta * eps ** shift
    lo, hi = b.span
    mask = (ta >= lo - 1e-12) & (ta <= hi + 1e-12)
    if not mask.any():
        raise ValueError("trajectory spans are disjoint")
    spline = CubicSpline(b.times, b.states, axis=0)
    diff = a.states[mask] - spline(np.clip(ta[mask], lo, hi))
    return float(np.max(np.abs(diff)))
