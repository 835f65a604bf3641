"""Closed averaged systems for each distinguished limit and composition of
asymptotic solutions.

DL-1: zeroth order dX/dt = <u>(X, t) with a first-order linear correction
driven by the quadratic drift; DL-2: dX/ds = V2(X, s) with s = t/omega;
DL-3: dX/ds = V3(X, s) with s = t/omega^2.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .averaging import drift_v2, drift_v3, jacobian, tilde_velocity_value
from .classify import DL, DLClassification
from .fields import TWO_PI, mean_part
from .integrators import SLOW_TIME_FOR_DL, SlowTime, Trajectory


class ClassificationMismatch(ValueError):
    """Averaged system requested for a field classified differently."""


@dataclasses.dataclass(frozen=True)
class AveragedSystem:
    """Closed averaged equations for one distinguished limit."""

    dl: DL
    rhs_zeroth: Callable                 # (x, time) -> real[dim]
    time_variable: SlowTime
    rhs_first: Optional[Callable] = None  # (xi, x0, time) -> real[dim], DL-1 only
    field: object = None


def _check(classification, expected: DL, requirement: str):
    if classification is not None and classification.dl is not expected:
        raise ClassificationMismatch(
            f"{expected.value} requires {requirement}; field classified "
            f"{classification.dl.value}")


def build_dl1(field, classification: Optional[DLClassification] = None) -> AveragedSystem:
    """DL-1 system: zeroth order is the original equation with u replaced by
    its tau-mean; the first order is linear in the correction with the drift
    as an external driving term."""
    _check(classification, DL.DL1, "a nonvanishing field mean")

    def rhs_zeroth(x, t):
        return mean_part(field, x, t)

    def rhs_first(xi, x0, t):
        J = jacobian(field, x0, t, tau="mean")
        return J @ np.asarray(xi, float) + drift_v2(field, x0, t).value

    return AveragedSystem(dl=DL.DL1, rhs_zeroth=rhs_zeroth,
                          time_variable=SlowTime.T, rhs_first=rhs_first,
                          field=field)


def build_dl2(field, classification: Optional[DLClassification] = None) -> AveragedSystem:
    """DL-2 system: dX/ds = V2(X, s) on the slow time s = t/omega."""
    _check(classification, DL.DL2, "an identically vanishing field mean (<u> == 0)")

    def rhs_zeroth(x, s):
        return drift_v2(field, x, s).value

    return AveragedSystem(dl=DL.DL2, rhs_zeroth=rhs_zeroth,
                          time_variable=SlowTime.EPS_T, field=field)


def build_dl3(field, classification: Optional[DLClassification] = None) -> AveragedSystem:
    """DL-3 system: dX/ds = V3(X, s) on the slow time s = t/omega^2."""
    _check(classification, DL.DL3,
           "identically vanishing mean and quadratic drift")

    def rhs_zeroth(x, s):
        return drift_v3(field, x, s).value

    return AveragedSystem(dl=DL.DL3, rhs_zeroth=rhs_zeroth,
                          time_variable=SlowTime.EPS2_T, field=field)


def build_system(field, classification: DLClassification) -> AveragedSystem:
    builder = {DL.DL1: build_dl1, DL.DL2: build_dl2, DL.DL3: build_dl3}.get(
        classification.dl)
    if builder is None:
        raise ClassificationMismatch(
            "field is fully degenerate; no averaged system at these orders")
    return builder(field, classification)


def compose_solution(x0_traj: Trajectory, x1_traj: Optional[Trajectory],
                     field, eps: float,
                     include_oscillatory: bool = True) -> Callable:
    """Asymptotic solution in the physical time t from averaged trajectories.

    Returns t -> X0(s(t)) + eps*(X1(s(t)) + w^tau(X0, s(t), t/eps)), where
    s(t) = eps^p * t per the trajectory's time tag and the last term is the
    oscillatory first-order displacement.  At eps = 0 the composite equals the
    zeroth-order trajectory exactly.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    p = x0_traj.time_variable.exponent
    lo, hi = x0_traj.span
    sp0 = CubicSpline(x0_traj.times, x0_traj.states, axis=0)
    sp1 = None
    if x1_traj is not None:
        if x1_traj.time_variable is not x0_traj.time_variable:
            raise ValueError("x0 and x1 trajectories live on different grids")
        sp1 = CubicSpline(x1_traj.times, x1_traj.states, axis=0)

    def solution(t: float) -> np.ndarray:
        sigma = (eps ** p) * t
        if sigma < lo - 1e-9 * (1 + abs(hi)) or sigma > hi + 1e-9 * (1 + abs(hi)):
            raise ValueError(f"t={t} maps to slow time {sigma} outside "
                             f"trajectory span [{lo}, {hi}]")
        sigma = min(max(sigma, lo), hi)
        x0 = sp0(sigma)
        if eps == 0.0:
            return x0
        out = x0.copy()
        if sp1 is not None:
            out = out + eps * sp1(sigma)
        if include_oscillatory:
            tau = (t / eps) % TWO_PI
            out = out + eps * tilde_velocity_value(field, x0, sigma, tau)
        return out

    return solution
