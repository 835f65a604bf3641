import numpy as np

from vibrodyn import FourierField


def random_fourier_field(rng, dim, n_harm):
    """Band-limited field whose coefficient functions are random quadratics
    (so finite-difference Jacobians are exact up to rounding)."""

    def make():
        w = rng.normal(size=dim)
        M = rng.normal(size=(dim, dim))
        v = rng.normal(size=dim)
        return lambda x, s: w + M @ x + x * (v @ x)

    return FourierField(
        dim=dim,
        mean_coeff=make(),
        cos_coeffs=[make() for _ in range(n_harm)],
        sin_coeffs=[make() for _ in range(n_harm)],
    )
