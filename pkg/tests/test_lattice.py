import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foliated_dirac.clifford import LORENTZIAN, RIEMANNIAN, build_odd_rep
from foliated_dirac.lattice import (ANTIPERIODIC, CONSTANT_DIAGONAL, DIAGONAL_FIELD, PERIODIC,
                                    InvalidMetricError, LapseBoundError, LapseFamily,
                                    MetricFamily, ResolutionError, SpatialGrid, algebra_sample,
                                    fourier_derivative_matrix, hypersurface_dirac, lapse_matrix,
                                    mean_curvature, volume_function)

TWO_PI = 2.0 * math.pi


# --- pseudospectral derivative -------------------------------------------------

@pytest.mark.parametrize("npts,anti", [(8, False), (9, False), (8, True), (16, True)])
def test_derivative_exact_on_band_limited_modes(npts, anti):
    d = fourier_derivative_matrix(npts, TWO_PI, anti)
    x = np.arange(npts) * (TWO_PI / npts)
    shift = 0.5 if anti else 0.0
    for kappa in np.arange(-(npts // 2), npts - npts // 2) + shift:
        if -kappa not in (np.arange(-(npts // 2), npts - npts // 2) + shift):
            continue
        f = np.exp(1j * kappa * x)
        assert np.allclose(d @ f, 1j * kappa * f, atol=1e-12)


@pytest.mark.parametrize("npts,anti", [(8, False), (9, False), (8, True), (17, True)])
def test_derivative_exactly_antihermitian(npts, anti):
    d = fourier_derivative_matrix(npts, TWO_PI, anti)
    assert np.max(np.abs(d + d.conj().T)) < 1e-13


def test_derivative_rejects_tiny_grid():
    with pytest.raises(ResolutionError):
        fourier_derivative_matrix(3, TWO_PI, False)


# --- volume function -----------------------------------------------------------

def test_volume_function_exponential():
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["exp(t)"])
    for t in (0.0, 0.5, 1.0, -0.7):
        assert volume_function(metric, (), t) == pytest.approx(math.exp(t / 2.0), rel=1e-14)
    assert volume_function(metric, (), 0.0) == pytest.approx(1.0, abs=0.0)


def test_volume_function_three_axis_product():
    metric = MetricFamily.from_strings(
        3, CONSTANT_DIAGONAL, ["1 + 0.5*sin(t)", "2", "1/(1 + 0.2*cos(t))"])
    t = 0.8
    a = 1 + 0.5 * math.sin(t)
    c = 1 / (1 + 0.2 * math.cos(t))
    a0 = 1.0
    c0 = 1 / 1.2
    expected = math.sqrt((a * 2 * c) / (a0 * 2 * c0))
    assert volume_function(metric, (), t) == pytest.approx(expected, rel=1e-14)


@settings(deadline=None, max_examples=25)
@given(t0=st.floats(-1, 1), t1=st.floats(-1, 1), t2=st.floats(-1, 1))
def test_volume_cocycle_property(t0, t1, t2):
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["1 + 0.4*sin(t) + 0.2*cos(2*t)"])
    direct = volume_function(metric, (), t2, base_time=t0)
    chained = (volume_function(metric, (), t1, base_time=t0)
               * volume_function(metric, (), t2, base_time=t1))
    assert direct == pytest.approx(chained, rel=1e-12)


# --- mean curvature ------------------------------------------------------------

def test_mean_curvature_exponential_riemannian():
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["exp(t)"])
    lapse = LapseFamily.constant(1.0)
    h = mean_curvature(metric, lapse, RIEMANNIAN, (), 0.3)
    assert h == pytest.approx(-1.0, rel=1e-13)


def test_mean_curvature_exponential_lorentzian_sign_flip():
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["exp(t)"])
    lapse = LapseFamily.constant(1.0)
    h = mean_curvature(metric, lapse, LORENTZIAN, (), 0.3)
    assert h == pytest.approx(+1.0, rel=1e-13)


def test_mean_curvature_static_vanishes():
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["2"])
    lapse = LapseFamily.constant(1.0)
    assert mean_curvature(metric, lapse, RIEMANNIAN, (), 0.1) == 0.0


def test_mean_curvature_numeric_matches_analytic_at_second_order():
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["1 + 0.3*sin(t)"])
    lapse = LapseFamily.constant(1.0)
    exact = mean_curvature(metric, lapse, RIEMANNIAN, (), 0.5, analytic=True)
    err = [abs(mean_curvature(metric, lapse, RIEMANNIAN, (), 0.5, h_t=h, analytic=False) - exact)
           for h in (1e-2, 5e-3)]
    assert err[0] / err[1] == pytest.approx(4.0, rel=0.05)


# --- hypersurface Dirac ---------------------------------------------------------

def fourier_mode_spectrum_1d(npts, scale, antiperiodic):
    """Independent oracle: eigenvalues of -i a^-1 d/dx on the 2*pi circle."""
    shift = 0.5 if antiperiodic else 0.0
    kappa = np.arange(-(npts // 2), npts - npts // 2) + shift
    kappa = np.where(np.isin(-kappa, kappa), kappa, 0.0)
    return np.sort(kappa / scale)


def test_flat_circle_spectrum_half_integers():
    grid = SpatialGrid.make(1, 16, spin_structure=ANTIPERIODIC)
    rep = build_odd_rep(1)
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["1"])
    d = hypersurface_dirac(metric, grid, rep, 0.0).toarray()
    vals = np.sort(np.linalg.eigvalsh(d))
    assert np.allclose(vals, fourier_mode_spectrum_1d(16, 1.0, True), atol=1e-12)
    # each half-integer appears exactly once
    assert len(np.unique(np.round(vals, 8))) == 16


def test_constant_scale_divides_spectrum():
    grid = SpatialGrid.make(1, 16, spin_structure=ANTIPERIODIC)
    rep = build_odd_rep(1)
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["2"])
    d = hypersurface_dirac(metric, grid, rep, 0.0).toarray()
    assert np.allclose(np.sort(np.linalg.eigvalsh(d)),
                       fourier_mode_spectrum_1d(16, 2.0, True), atol=1e-12)


def test_periodic_zero_modes_have_spinor_multiplicity():
    # odd point count keeps the integer mode window symmetric
    grid = SpatialGrid.make(3, 5, spin_structure=PERIODIC)
    rep = build_odd_rep(3)
    metric = MetricFamily.from_strings(3, CONSTANT_DIAGONAL, ["1", "1", "1"])
    d = hypersurface_dirac(metric, grid, rep, 0.0).toarray()
    vals = np.linalg.eigvalsh(d)
    assert np.sum(np.abs(vals) < 1e-10) == grid.spinor_dim


def test_static_family_time_independent():
    grid = SpatialGrid.make(1, 8)
    rep = build_odd_rep(1)
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["1.5"])
    d1 = hypersurface_dirac(metric, grid, rep, 0.0)
    d2 = hypersurface_dirac(metric, grid, rep, 2.0)
    assert (d1 - d2).nnz == 0


def test_constant_diagonal_hermitian_to_machine_precision():
    grid = SpatialGrid.make(3, 4)
    rep = build_odd_rep(3)
    metric = MetricFamily.from_strings(
        3, CONSTANT_DIAGONAL, ["1 + 0.2*sin(t)", "1.3", "1/(1 + 0.1*cos(t))"])
    d = hypersurface_dirac(metric, grid, rep, 0.7).toarray()
    assert np.max(np.abs(d - d.conj().T)) < 1e-12


def test_diagonal_field_hermiticity_defect_decays():
    rep = build_odd_rep(1)
    metric = MetricFamily.from_strings(1, DIAGONAL_FIELD, ["1 + 0.3*cos(x1)"])
    resid = []
    for npts in (8, 16, 32):
        grid = SpatialGrid.make(1, npts)
        d = hypersurface_dirac(metric, grid, rep, 0.0).toarray()
        resid.append(np.max(np.abs(d - d.conj().T)))
    assert resid[1] < resid[0] / 4.0
    assert resid[2] < max(resid[1] / 4.0, 1e-13)


def test_diagonal_field_n3_connection_term_keeps_hermiticity_trend():
    rep = build_odd_rep(3)
    metric = MetricFamily.from_strings(
        3, DIAGONAL_FIELD, ["1 + 0.2*cos(x2)", "1 + 0.2*cos(x3)", "1 + 0.2*cos(x1)"])
    resid = []
    for npts in (4, 8):
        grid = SpatialGrid.make(3, npts)
        d = hypersurface_dirac(metric, grid, rep, 0.0).toarray()
        resid.append(np.max(np.abs(d - d.conj().T)))
    assert resid[1] < resid[0] / 4.0


def test_diagonal_field_commutator_with_algebra_is_stable():
    rep = build_odd_rep(1)
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["1"])
    norms = []
    for npts in (16, 32):
        grid = SpatialGrid.make(1, npts)
        d = hypersurface_dirac(metric, grid, rep, 0.0).toarray()
        a = algebra_sample(grid, ["cos(x1)"])[0].toarray()
        norms.append(np.linalg.norm(d @ a - a @ d, 2))
    assert abs(norms[1] - norms[0]) < 0.1 * norms[0]


def test_metric_positivity_enforced():
    metric = MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["sin(t)"])
    with pytest.raises(InvalidMetricError):
        volume_function(metric, (), 0.0)  # sin(0) = 0 is not a metric
    with pytest.raises(InvalidMetricError):
        MetricFamily.from_strings(1, CONSTANT_DIAGONAL, ["cos(x1)"])  # x-dependence
    with pytest.raises(InvalidMetricError):
        MetricFamily.from_strings(1, "off_diagonal", ["1"])


def test_resolution_guard():
    with pytest.raises(ResolutionError):
        SpatialGrid.make(1, 3)


# --- lapse and algebra ----------------------------------------------------------

def test_lapse_identity_matrix():
    grid = SpatialGrid.make(1, 8)
    n = lapse_matrix(LapseFamily.constant(1.0), grid, 0.0)
    assert (n - np.eye(8)).nnz == 0


def test_lapse_scalar_sample():
    grid = SpatialGrid.make(1, 8)
    lapse = LapseFamily(kind="time_only",
                        expr=__import__("foliated_dirac.expressions",
                                        fromlist=["Expression"]).Expression.parse("2 + sin(t)"))
    n = lapse_matrix(lapse, grid, math.pi / 2.0)
    assert np.allclose(n.diagonal(), 3.0)


def test_lapse_spatial_sampling():
    from foliated_dirac.expressions import Expression
    grid = SpatialGrid.make(1, 8)
    lapse = LapseFamily(kind="spacetime", expr=Expression.parse("2 + 0.5*cos(x1)"))
    n = lapse_matrix(lapse, grid, 0.0)
    x = grid.axis_points(0)
    assert np.allclose(n.diagonal(), 2 + 0.5 * np.cos(x))


def test_lapse_bounds_enforced():
    from foliated_dirac.expressions import Expression
    grid = SpatialGrid.make(1, 8)
    lapse = LapseFamily(kind="time_only", expr=Expression.parse("2 + sin(t)"),
                        bounds=(0.5, 2.5))
    with pytest.raises(LapseBoundError):
        lapse_matrix(lapse, grid, math.pi / 2.0)  # N = 3 > 2.5
    with pytest.raises(LapseBoundError):
        LapseFamily(kind="time_only", expr=Expression.parse("sin(t)")).value((), -1.0)


def test_algebra_sample_cosine_frozen_values():
    grid = SpatialGrid.make(1, 4)
    a = algebra_sample(grid, ["cos(x1)"])[0]
    assert np.allclose(a.diagonal(), [1.0, 0.0, -1.0, 0.0], atol=1e-15)


def test_algebra_sampling_is_multiplicative():
    grid = SpatialGrid.make(1, 8)
    f, g, fg = algebra_sample(grid, ["cos(x1)", "sin(x1)", "cos(x1)*sin(x1)"])
    assert np.allclose((f @ g).toarray(), fg.toarray(), atol=1e-15)


def test_identity_algebra_element():
    grid = SpatialGrid.make(1, 8)
    one = algebra_sample(grid, ["1"])[0]
    assert (one - np.eye(8)).nnz == 0
