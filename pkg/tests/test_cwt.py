import math
import os

import numpy as np
import pytest

from wcnet.api import make_scale_grid, fourier_factor, period_to_scale, scale_to_period, morlet_fourier, \
    cone_of_influence, cwt, power, dump_power, MorletParams


def test_default_grid():
    grid = make_scale_grid(300)
    assert grid.s0 == 2.0
    assert grid.voices_per_octave == 12
    assert grid.num_scales == 68
    scales = grid.scales
    assert scales[0] == 2.0
    assert scales[-1] <= 100.0
    assert np.allclose(np.diff(np.log2(scales)), 1.0 / 12)
    assert np.allclose(grid.log_scales, np.log2(scales))


def test_grid_bounds():
    with pytest.raises(ValueError):
        make_scale_grid(300, s0=1.0)
    with pytest.raises(ValueError):
        make_scale_grid(300, s_max=200.0)
    with pytest.raises(ValueError):
        make_scale_grid(300, s0=50.0, s_max=20.0)
    with pytest.raises(ValueError):
        make_scale_grid(300, voices=0)


def test_fourier_factor():
    params = MorletParams()
    assert fourier_factor(params) == pytest.approx(1.0330, abs=1e-4)
    assert scale_to_period(period_to_scale(32.0, params), params) == pytest.approx(32.0)
    with pytest.raises(ValueError):
        MorletParams(omega0=0.0)


def test_morlet_fourier_is_analytic():
    w = np.linspace(-3, 3, 61)
    values = morlet_fourier(w, 4.0)
    assert np.all(values[w <= 0] == 0.0)
    assert np.all(values[w > 0] > 0.0)
    peak = w[np.argmax(values)]
    assert peak == pytest.approx(6.0 / 4.0, abs=0.1)


def test_cone_of_influence():
    coi = cone_of_influence(101)
    assert coi[0] == 0.0
    assert coi[-1] == 0.0
    assert np.allclose(coi, coi[::-1])
    assert coi[50] == pytest.approx(50.0 / math.sqrt(2.0))
    with pytest.raises(ValueError):
        cone_of_influence(1)


def test_power_peaks_at_period():
    n = 1024
    t = np.arange(n)
    x = np.sin(2.0 * math.pi * t / 32.0)
    grid = make_scale_grid(n)
    field = cwt(x, grid)
    assert field.coefficients.shape == (n, grid.num_scales)
    p = power(field)
    assert np.all(p >= 0)
    mean_power = p[n // 4:3 * n // 4, :].mean(axis=0)
    peak = grid.scales[int(np.argmax(mean_power))]
    assert abs(math.log2(peak / period_to_scale(32.0, MorletParams()))) < 0.1


def test_cwt_preconditions():
    grid = make_scale_grid(64)
    with pytest.raises(ValueError):
        cwt(np.zeros(5), grid)
    with pytest.raises(ValueError):
        cwt(np.zeros((8, 2)), grid)
    x = np.ones(64)
    x[3] = np.nan
    with pytest.raises(ValueError):
        cwt(x, grid)


def test_dump_power(tmp_path, rng):
    grid = make_scale_grid(64)
    field = cwt(rng.normal(size=64), grid)
    path = os.path.join(str(tmp_path), "power.csv")
    dump_power(field, path)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == (64, grid.num_scales)
    assert np.allclose(data, power(field), rtol=1e-8)


def test_cwt_ignores_constants():
    grid = make_scale_grid(256)
    field = cwt(np.full(256, 3.7), grid)
    assert np.max(np.abs(field.coefficients)) < 1e-8 * 3.7
    shifted = cwt(np.sin(np.arange(256) / 5.0) + 100.0, grid)
    plain = cwt(np.sin(np.arange(256) / 5.0), grid)
    assert np.allclose(shifted.coefficients, plain.coefficients, atol=1e-9)


def test_cwt_is_linear(rng):
    n = 512
    grid = make_scale_grid(n)
    x = rng.normal(size=n)
    y = rng.normal(size=n)
    combined = cwt(x + y, grid).coefficients
    separate = cwt(x, grid).coefficients + cwt(y, grid).coefficients
    assert np.max(np.abs(combined - separate)) <= 1e-8 * np.max(np.abs(combined))
    assert np.allclose(cwt(-2.5 * x, grid).coefficients, -2.5 * cwt(x, grid).coefficients)


def test_cwt_translation_covariance(rng):
    n = 1024
    m = 10
    base = rng.normal(size=n + m)
    later = base[m:]
    earlier = base[:n]
    grid = make_scale_grid(n, s_max=16.0)
    a = cwt(later, grid).coefficients
    b = cwt(earlier, grid).coefficients
    interior = np.arange(150, n - 150)
    assert np.max(np.abs(b[interior + m, :] - a[interior, :])) <= 1e-6 * np.max(np.abs(a))
