import numpy as np
import pytest

from vibrodyn import (
    DL,
    IntegrationError,
    OscillatoryField,
    SlowTime,
    Trajectory,
    error_norm,
    integrate,
    integrate_full,
)
from vibrodyn.models import LogisticParams, logistic_field, series, stokes_field


class TestTrajectory:
    def test_promotes_1d_states(self):
        tr = Trajectory(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
        assert tr.states.shape == (2, 1)
        assert tr.dim == 1
        assert tr.span == (0.0, 1.0)

    def test_rejects_nonincreasing_times(self):
        with pytest.raises(ValueError):
            Trajectory(np.array([0.0, 0.0]), np.zeros((2, 1)))

    def test_csv(self, tmp_path):
        tr = Trajectory(np.array([0.0, 0.5]), np.array([[1.0, 2.0], [3.0, 4.0]]))
        path = tmp_path / "tr.csv"
        tr.write_csv(path)
        data = np.genfromtxt(path, delimiter=",", names=True)
        assert np.allclose(data["x2"], [2.0, 4.0])


class TestIntegrate:
    def test_rk4_fourth_order_on_exponential(self):
        rhs = lambda x, t: x
        errs = []
        for h in (0.1, 0.05):
            tr = integrate(rhs, [1.0], (0.0, 1.0), h)
            errs.append(abs(tr.states[-1, 0] - np.e))
        assert errs[0] / errs[1] > 12  # ~16 for a 4th-order method

    def test_lands_exactly_on_endpoint(self):
        tr = integrate(lambda x, t: -x, [1.0], (0.0, 1.0), 0.3)
        assert tr.times[-1] == 1.0

    def test_store_every(self):
        tr = integrate(lambda x, t: -x, [1.0], (0.0, 1.0), 0.01, store_every=10)
        assert tr.times.size == 11

    def test_nonfinite_abort_keeps_partial(self):
        # dx/dt = x^2 from x(0)=1 blows up at t = 1
        with pytest.raises(IntegrationError) as exc:
            integrate(lambda x, t: x * x, [1.0], (0.0, 2.0), 0.01)
        assert exc.value.trajectory is not None
        assert exc.value.trajectory.times[-1] < 2.0

    def test_rejects_bad_span_and_step(self):
        with pytest.raises(ValueError):
            integrate(lambda x, t: x, [1.0], (1.0, 0.0), 0.1)
        with pytest.raises(ValueError):
            integrate(lambda x, t: x, [1.0], (0.0, 1.0), 0.0)


class TestIntegrateFull:
    def test_jit_and_python_paths_agree(self):
        f = stokes_field(1.0)
        raw = OscillatoryField(
            dim=1, eval=lambda x, s, tau: np.array([np.cos(1.0 * x[0] - tau)]))
        a = integrate_full(f, 50.0, DL.DL2, [0.0], (0.0, 10.0))
        b = integrate_full(raw, 50.0, DL.DL2, [0.0], (0.0, 10.0))
        assert np.allclose(a.states, b.states, atol=1e-12)
        assert np.allclose(a.times, b.times)

    def test_slow_argument_follows_limit(self):
        # field that returns s: DL-1 sees s = t, DL-2 sees s = t/omega
        f = OscillatoryField(dim=1, eval=lambda x, s, tau: np.array([s]))
        omega = 64.0
        t_end = 2.0
        dl1 = integrate_full(f, omega, DL.DL1, [0.0], (0.0, t_end))
        dl2 = integrate_full(f, omega, DL.DL2, [0.0], (0.0, t_end))
        # integral of s ds: t^2/2 vs (t/omega) t / 2
        assert np.isclose(dl1.states[-1, 0], t_end ** 2 / 2, rtol=1e-6)
        assert np.isclose(dl2.states[-1, 0], t_end ** 2 / (2 * omega), rtol=1e-6)

    def test_rejects_low_omega_and_coarse_fast_grid(self):
        f = stokes_field()
        with pytest.raises(ValueError):
            integrate_full(f, 5.0, DL.DL2, [0.0], (0.0, 1.0))
        with pytest.raises(ValueError):
            integrate_full(f, 100.0, DL.DL2, [0.0], (0.0, 1.0), n_fast=8)

    def test_step_budget(self):
        f = stokes_field()
        with pytest.raises(IntegrationError, match="budget"):
            integrate_full(f, 1e4, DL.DL2, [0.0], (0.0, 1e6))

    def test_jit_nonfinite_abort(self):
        f = logistic_field(LogisticParams(a=series(-1.0), b=series(1.0)))
        # dx/dt = -x + x^2 from x(0)=2 blows up in finite time
        with pytest.raises(IntegrationError) as exc:
            integrate_full(f, 100.0, DL.DL1, [2.0], (0.0, 5.0))
        assert exc.value.trajectory is not None


class TestErrorNorm:
    def test_against_callable(self):
        tr = Trajectory(np.linspace(0, 1, 11), np.linspace(0, 1, 11) ** 2)
        err = error_norm(tr, lambda t: np.array([t ** 2 + 0.25]))
        assert np.isclose(err, 0.25)

    def test_between_time_variables(self):
        # full trajectory on t, reference on s = eps * t
        eps = 0.1
        t = np.linspace(0, 10, 21)
        full = Trajectory(t, np.sin(eps * t), SlowTime.T)
        s = np.linspace(0, 1, 201)
        ref = Trajectory(s, np.sin(s), SlowTime.EPS_T)
        assert error_norm(full, ref, eps=eps) < 1e-6
        with pytest.raises(ValueError, match="eps"):
            error_norm(full, ref)

    def test_disjoint_spans(self):
        a = Trajectory(np.array([0.0, 1.0]), np.zeros((2, 1)))
        b = Trajectory(np.array([5.0, 6.0]), np.zeros((2, 1)))
        with pytest.raises(ValueError, match="disjoint"):
            error_norm(a, b)
