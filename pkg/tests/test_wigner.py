import numpy as np
import pytest

from knosim import fock, wigner


def gaussian_wigner(axis, alpha):
    """Analytic oracle: W of a coherent state |alpha> is a Gaussian,
    W(b) = (2/pi) exp(-2 |b - alpha|^2)."""
    re, im = np.meshgrid(axis, axis, indexing="xy")
    b = re + 1j * im
    return (2 / np.pi) * np.exp(-2 * np.abs(b - alpha) ** 2)


@pytest.fixture(scope="module")
def vacuum_grid():
    vac = np.zeros(10, dtype=complex)
    vac[0] = 1
    return wigner.wigner(fock.StateVector(vac), half_width=3.0, n_points=41)


class TestVacuum:
    def test_matches_analytic_gaussian(self, vacuum_grid):
        g = vacuum_grid
        expected = gaussian_wigner(g.re_axis, 0.0)
        assert np.abs(g.values - expected).max() <= 1e-8

    def test_origin_value(self, vacuum_grid):
        assert abs(vacuum_grid.at_origin() - 2 / np.pi) <= 1e-10

    def test_normalization(self, vacuum_grid):
        assert abs(vacuum_grid.integral() - 1) <= 1e-3

    def test_no_low_confidence_cells(self, vacuum_grid):
        assert not vacuum_grid.low_confidence.any()


class TestCoherent:
    def test_displaced_gaussian(self):
        psi, _ = fock.coherent_state(1.0 + 0.5j, 25)
        g = wigner.wigner(psi, half_width=3.0, n_points=41)
        expected = gaussian_wigner(g.re_axis, 1.0 + 0.5j)
        assert np.abs(g.values - expected).max() <= 1e-6

    def test_peak_location(self):
        psi, _ = fock.coherent_state(np.sqrt(2), 30)
        g = wigner.wigner(psi, half_width=3.0, n_points=41)
        i, j = np.unravel_index(np.argmax(g.values), g.values.shape)
        assert abs(g.re_axis[j] - np.sqrt(2)) <= 0.15
        assert abs(g.im_axis[i]) <= 0.15


class TestFockAndCat:
    def test_single_photon_negative_origin(self):
        amp = np.zeros(12, dtype=complex)
        amp[1] = 1
        g = wigner.wigner(fock.StateVector(amp), half_width=3.0, n_points=41)
        assert abs(g.at_origin() + 2 / np.pi) <= 1e-8

    def test_even_cat_origin_equals_parity(self):
        # W(0) = (2/pi) <parity>; the even cat has parity +1 exactly
        a0 = np.sqrt(2)
        plus, _ = fock.coherent_state(a0, 30)
        minus, _ = fock.coherent_state(-a0, 30)
        amp = plus.amplitudes + minus.amplitudes
        cat = fock.StateVector(amp).normalized()
        g = wigner.wigner(cat, half_width=3.0, n_points=41)
        assert abs(g.at_origin() - 2 / np.pi) <= 1e-6

    def test_cat_has_two_lobes_and_fringes(self):
        a0 = np.sqrt(2)
        plus, _ = fock.coherent_state(a0, 30)
        minus, _ = fock.coherent_state(-a0, 30)
        cat = fock.StateVector(plus.amplitudes + minus.amplitudes).normalized()
        g = wigner.wigner(cat, half_width=3.0, n_points=41)
        j_plus = np.argmin(np.abs(g.re_axis - a0))
        j_minus = np.argmin(np.abs(g.re_axis + a0))
        i0 = np.argmin(np.abs(g.im_axis))
        assert g.values[i0, j_plus] > 0.2
        assert g.values[i0, j_minus] > 0.2
        assert g.values.min() < -0.1  # interference fringes go negative


class TestGridMechanics:
    def test_minimum_points(self):
        vac = np.zeros(5, dtype=complex)
        vac[0] = 1
        with pytest.raises(ValueError):
            wigner.wigner(fock.StateVector(vac), n_points=11)

    def test_working_dimension_grows_with_grid(self):
        psi = fock.StateVector(np.eye(10, dtype=complex)[0])
        assert wigner.working_dimension(psi, 6.0) > wigner.working_dimension(psi, 3.0)
        assert wigner.working_dimension(psi, 3.0) >= psi.dim

    def test_values_layout(self, vacuum_grid):
        # values[i, j] = W(re_axis[j] + 1i * im_axis[i])
        g = vacuum_grid
        assert g.values.shape == (g.im_axis.size, g.re_axis.size)
