import numpy as np
import pytest

from vibrodyn import (
    FieldEvaluationError,
    FourierField,
    HarmonicSeries,
    OscillatoryField,
    SamplingDomain,
    evaluate,
    fit_fourier,
    mean_part,
    osc_part,
    product_mean,
    sample_field,
    tau_grid,
)
from vibrodyn.fields import reduce_tau


def test_tau_grid_is_uniform_open():
    g = tau_grid(8)
    assert g.size == 8
    assert g[0] == 0.0
    assert np.allclose(np.diff(g), np.pi / 4)
    assert g[-1] < 2 * np.pi


def test_reduce_tau():
    assert reduce_tau(0.0) == 0.0
    assert np.isclose(reduce_tau(7.0), 7.0 - 2 * np.pi)
    assert 0.0 <= reduce_tau(-0.1) < 2 * np.pi
    assert np.isclose(reduce_tau(-0.1), 2 * np.pi - 0.1)


class TestHarmonicSeries:
    def test_call_matches_formula(self):
        h = HarmonicSeries.from_terms(0.5, cos={1: 2.0}, sin={3: -1.0})
        taus = np.linspace(0, 7, 50)
        expect = 0.5 + 2.0 * np.cos(taus) - np.sin(3 * taus)
        assert np.allclose(h(taus), expect)

    def test_from_samples_roundtrip(self):
        h = HarmonicSeries.from_terms(1.2, cos={1: 0.3, 4: -2.0}, sin={2: 0.7})
        g = tau_grid(32)
        h2 = HarmonicSeries.from_samples(h(g), 4)
        assert np.isclose(h2.mean, 1.2)
        assert np.allclose(h2(g), h(g))

    def test_from_samples_rejects_short_input(self):
        with pytest.raises(ValueError):
            HarmonicSeries.from_samples(np.zeros(8), 4)

    def test_harmonic_index_starts_at_one(self):
        with pytest.raises(ValueError):
            HarmonicSeries.from_terms(cos={0: 1.0})

    def test_tilde_integral_of_cos_is_sin_over_k(self):
        h = HarmonicSeries.from_terms(cos={3: 6.0})
        g = h.tilde_integral()
        taus = tau_grid(64)
        assert np.allclose(g(taus), 2.0 * np.sin(3 * taus))

    def test_tilde_integral_of_sin_is_minus_cos_over_k(self):
        h = HarmonicSeries.from_terms(sin={2: 4.0})
        g = h.tilde_integral()
        taus = tau_grid(64)
        assert np.allclose(g(taus), -2.0 * np.cos(2 * taus))

    def test_tilde_integral_discards_mean(self):
        h = HarmonicSeries.from_terms(5.0, cos={1: 1.0})
        g = h.tilde_integral()
        assert g.mean == 0.0
        assert np.isclose(np.mean(g(tau_grid(64))), 0.0)

    def test_product_is_exact(self):
        a = HarmonicSeries.from_terms(1.0, cos={1: 1.0})
        b = HarmonicSeries.from_terms(0.0, sin={2: 1.0})
        p = a.product(b)
        taus = np.linspace(0, 7, 40)
        assert np.allclose(p(taus), a(taus) * b(taus))

    def test_product_mean_known_value(self):
        # <cos^2> = 1/2
        c = HarmonicSeries.from_terms(cos={1: 1.0})
        assert np.isclose(product_mean(c, c), 0.5)
        # <cos tau * sin 2tau> = 0
        s2 = HarmonicSeries.from_terms(sin={2: 1.0})
        assert np.isclose(product_mean(c, s2), 0.0)

    def test_scaled(self):
        h = HarmonicSeries.from_terms(1.0, cos={2: 3.0})
        taus = tau_grid(16)
        assert np.allclose(h.scaled(-2.0)(taus), -2.0 * h(taus))


class TestFourierField:
    def field(self):
        return FourierField(
            dim=2,
            mean_coeff=lambda x, s: np.array([x[0], s]),
            cos_coeffs=[lambda x, s: np.array([x[1], 0.0]),
                        lambda x, s: np.array([0.0, x[0] * x[1]])],
            sin_coeffs=[lambda x, s: np.array([1.0, -1.0])],
        )

    def test_eval_matches_harmonic_sum(self):
        f = self.field()
        x = np.array([0.4, -1.1])
        s, tau = 0.7, 1.9
        expect = (np.array([0.4, 0.7])
                  + np.cos(tau) * np.array([-1.1, 0.0])
                  + np.cos(2 * tau) * np.array([0.0, -0.44])
                  + np.sin(tau) * np.array([1.0, -1.0]))
        assert np.allclose(f.eval(x, s, tau), expect)

    def test_sample_matches_pointwise_eval(self):
        f = self.field()
        x = np.array([1.0, 2.0])
        taus = tau_grid(16)
        vals = f.sample(x, 0.3, taus)
        for j, t in enumerate(taus):
            assert np.allclose(vals[:, j], f.eval(x, 0.3, t))

    def test_tilde_integral_value(self):
        f = self.field()
        x = np.array([0.5, 0.5])
        tau = 2.2
        # cos k tau -> sin k tau / k, sin k tau -> -cos k tau / k
        expect = (np.sin(tau) * np.array([0.5, 0.0])
                  + (np.sin(2 * tau) / 2) * np.array([0.0, 0.25])
                  - np.cos(tau) * np.array([1.0, -1.0]))
        assert np.allclose(f.tilde_integral_value(x, 0.0, tau), expect)

    def test_mean_part_is_mean_coeff(self):
        f = self.field()
        assert np.allclose(mean_part(f, [2.0, 3.0], 1.5), [2.0, 1.5])

    def test_requires_positive_dim(self):
        with pytest.raises(ValueError):
            FourierField(dim=0, mean_coeff=lambda x, s: np.zeros(0))


class TestEvaluate:
    def test_reduces_tau(self):
        f = OscillatoryField(dim=1, eval=lambda x, s, tau: np.array([tau]))
        v = evaluate(f, [0.0], 0.0, 2 * np.pi + 0.25)
        assert np.isclose(v[0], 0.25)

    def test_nonfinite_raises_with_location(self):
        f = OscillatoryField(
            dim=2, eval=lambda x, s, tau: np.array([1.0, np.inf]), name="bad")
        with pytest.raises(FieldEvaluationError, match="bad"):
            evaluate(f, [0.0, 0.0], 0.0, 0.0)

    def test_osc_part_has_zero_mean(self):
        f = OscillatoryField(
            dim=1, eval=lambda x, s, tau: np.array([2.0 + np.cos(tau)]))
        taus = tau_grid(64)
        vals = [osc_part(f, [0.0], 0.0, t)[0] for t in taus]
        assert np.isclose(np.mean(vals), 0.0, atol=1e-14)
        assert np.allclose(vals, np.cos(taus))


class TestFitFourier:
    def test_exact_for_band_limited(self):
        raw = OscillatoryField(
            dim=1,
            eval=lambda x, s, tau: np.array(
                [x[0] + np.cos(tau) * x[0] ** 2 - 0.5 * np.sin(3 * tau)]))
        ff = fit_fourier(raw, n_harmonics=3)
        for tau in (0.0, 1.1, 4.4):
            assert np.allclose(ff.eval(np.array([0.7]), 0.0, tau),
                               raw.eval(np.array([0.7]), 0.0, tau), atol=1e-13)
        assert "aliasing_warning" not in ff.meta

    def test_aliasing_probe_warns(self):
        raw = OscillatoryField(
            dim=1, eval=lambda x, s, tau: np.array([np.cos(3 * tau)]))
        ff = fit_fourier(raw, n_harmonics=2, probe=(np.array([1.0]), 0.0))
        assert "aliasing_warning" in ff.meta

    def test_rejects_undersampling(self):
        raw = OscillatoryField(dim=1, eval=lambda x, s, tau: np.array([0.0]))
        with pytest.raises(ValueError):
            fit_fourier(raw, n_harmonics=10, n_samples=16)


class TestSamplingDomain:
    def test_lattice_shape(self):
        d = SamplingDomain(box=((0.0, 1.0), (2.0, 3.0)), x_grid_points_per_axis=3)
        lat = d.x_lattice()
        assert lat.shape == (9, 2)
        assert lat[:, 0].min() == 0.0 and lat[:, 1].max() == 3.0

    def test_rejects_degenerate_box(self):
        with pytest.raises(ValueError):
            SamplingDomain(box=((1.0, 1.0),))

    def test_rejects_odd_tau_samples(self):
        with pytest.raises(ValueError):
            SamplingDomain(box=((0.0, 1.0),), tau_samples_per_period=7)


def test_sample_field_python_fallback_matches_eval():
    f = OscillatoryField(
        dim=2,
        eval=lambda x, s, tau: np.array([np.cos(tau) * x[0], np.sin(tau) + s]))
    taus = tau_grid(8)
    vals = sample_field(f, np.array([2.0, 0.0]), 0.5, taus)
    assert vals.shape == (2, 8)
    assert np.allclose(vals[0], 2.0 * np.cos(taus))
    assert np.allclose(vals[1], np.sin(taus) + 0.5)
