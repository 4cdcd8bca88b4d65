import numpy as np
import pytest

from bfamlab import RealField, make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid_2pi():
    return make_grid(64, 2.0 * np.pi)


@pytest.fixture
def random_field(grid_2pi, rng):
    # smooth random field: band-limited noise
    coeffs = np.zeros(grid_2pi.n_points, dtype=complex)
    for k in range(1, 12):
        c = rng.standard_normal() + 1j * rng.standard_normal()
        coeffs[k] = c
        coeffs[-k] = np.conj(c)
    samples = (np.fft.ifft(coeffs) * grid_2pi.n_points).real
    return RealField(grid_2pi, samples)
