import numpy as np

from ostrovsky.spectral import Field


def random_mean_zero(grid, rng, band_fraction=0.25):
    """Random real field supported well inside the resolved band."""
    n = grid.n_points
    top = max(2, int(n // 2 * band_fraction))
    c = np.zeros(n, dtype=complex)
    m = np.arange(1, top)
    z = rng.standard_normal(m.size) + 1j * rng.standard_normal(m.size)
    c[m] = z
    c[-m] = np.conj(z)
    return Field(grid, c)
