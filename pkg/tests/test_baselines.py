import math

import numpy as np
import pytest

from ndlomb.baselines import (GriddedField, dft_frequencies, emax_factor, emax_scan,
                              omd_error_budget, quadrature_demod, truncation_bound,
                              zero_padded_dft_psd)
from ndlomb.errors import AllMissing, BadInput, BadN, DimensionMismatch
from ndlomb.experiments import SINUS_WINDOW, SinusSetup
from ndlomb.lsm import analyze
from ndlomb.synth import gaussians
from ndlomb.types import FrequencyGrid, NoiseSpec, SampleSet


def test_demod_exact_on_full_period():
    n = 64
    t = np.arange(n) * 2 * math.pi / n
    a, b = quadrature_demod(SampleSet(t, np.cos(t)), [1.0])
    assert abs(a - 1) < 1e-12 and abs(b) < 1e-12


def test_demod_truncation_error_is_n_independent():
    setup = SinusSetup()
    e23 = quadrature_demod(setup.samples(23), [1.0])[0] - 1
    e46 = quadrature_demod(setup.samples(46), [1.0])[0] - 1
    assert abs(e23) > 0.01
    assert abs(e46 - e23) < 0.1 * abs(e23)


def test_demod_n_independence_invariant():
    setup = SinusSetup()
    a = {n: quadrature_demod(setup.samples(n), [1.0])[0] for n in (50, 100, 200, 400, 800)}
    eps = a[50] - 1.0
    assert max(abs(v - a[50]) for v in a.values()) < 0.1 * abs(eps)


def test_budget_examples():
    noise = NoiseSpec(1.0, 0.05)
    b = omd_error_budget(3 * math.pi, 1.0, 100, noise)
    assert b.eps_T == 0.0
    assert b.eps_FS == pytest.approx(0.39199, abs=1e-5)
    assert b.eps_LS == pytest.approx(0.24955, abs=1e-5)
    assert b.eps_LS < b.eps_FS


@pytest.mark.parametrize("frac", [1.25, 1.4, 1.5, 1.6, 1.66])
def test_budget_cap(frac):
    assert truncation_bound(frac * math.pi, 1.0) == 0.2


def test_budget_just_over_half_period_is_small():
    # distance to pi/omega is tiny there, so the bound is far below the cap
    assert truncation_bound(math.pi * 1.01, 1.0) == pytest.approx(0.01 / 1.01)
    assert truncation_bound(0.5 * math.pi, 1.0) == 0.2


def test_budget_sinus_setup():
    assert truncation_bound(SINUS_WINDOW, 1.0) == pytest.approx(0.2 / 2.2)


@pytest.mark.parametrize("args", [(0.0, 1.0, 10), (1.0, -1.0, 10), (1.0, 1.0, 0)])
def test_budget_bad_input(args):
    with pytest.raises((BadInput, BadN)):
        omd_error_budget(*args, NoiseSpec(1.0))


def test_budget_holds_in_monte_carlo():
    setup = SinusSetup()
    n, reps = 100, 2000
    noise = NoiseSpec(1.0, 0.05)
    budget = omd_error_budget(setup.window, setup.omega, n, noise)
    t = setup.times(n)
    y = setup.clean(n) + gaussians(np.random.PCG64(7), reps * n).reshape(reps, n)
    a_hat = y @ ((2.0 / n) * np.cos(t))
    covered = np.abs(a_hat - 1.0) <= budget.eps_T * 1.0 + budget.eps_FS
    assert covered.mean() >= 1 - noise.alpha


def test_emax_closed_forms():
    assert emax_factor(math.pi / 2) == pytest.approx(4 / math.pi, rel=1e-15)
    assert abs(emax_factor(2 * math.pi)) < 1e-15


def test_emax_scan_refinement():
    b4, e4 = emax_scan(10_000)
    b5, e5 = emax_scan(100_000)
    assert abs(e4 - e5) < 1e-9 and abs(b4 - b5) < 1e-5
    assert abs(e4 - 4 / math.pi) < 1e-9
    with pytest.raises(BadInput):
        emax_scan(999)


def test_field_validation():
    with pytest.raises(DimensionMismatch):
        GriddedField(np.zeros((3, 3)), [0.0], [1.0, 1.0])
    with pytest.raises(BadInput):
        GriddedField(np.zeros(3), [0.0], [0.0])
    f = GriddedField(np.array([1.0, np.nan, np.inf, 2.0]), [0.0], [0.5])
    assert f.n_zero == 2


def test_field_round_trip_through_samples(rng):
    values = rng.normal(size=(6, 4))
    values[1, 2] = np.nan
    f = GriddedField(values, [-1.0, 2.0], [0.5, 0.25])
    back = GriddedField.from_samples(f.to_samples(), f.origin, f.spacing, f.shape)
    np.testing.assert_array_equal(back.values, f.values)


def test_dft_all_missing():
    with pytest.raises(AllMissing):
        zero_padded_dft_psd(GriddedField(np.full((3, 3), np.nan), [0, 0], [1, 1]))


def test_dft_frequencies_layout():
    np.testing.assert_allclose(dft_frequencies(4, 0.5), [-1.0, -0.5, 0.0, 0.5])


def test_dft_matches_lsm_on_complete_integer_grid():
    nx, ny, h = 32, 24, 0.1
    x = np.arange(nx) * h
    y = np.arange(ny) * h
    fx, fy = 5 / (nx * h), 3 / (ny * h)
    X, Y = np.meshgrid(x, y, indexing="ij")
    field = GriddedField(np.cos(2 * math.pi * (fx * X + fy * Y) + 0.4), [0, 0], [h, h])
    dft = zero_padded_dft_psd(field)
    i = dft.argmax()
    assert np.allclose(np.abs(dft.freqs[i]), [fx, fy])
    lsm = analyze(field.to_samples(), FrequencyGrid(dft.freqs[i:i + 1]))
    assert dft.psd[i] == pytest.approx(lsm.psd[0], rel=1e-6)
    assert dft.amplitude[i] == pytest.approx(1.0, rel=1e-9)


def test_dft_rescale_for_missing_cells():
    n = 40
    x = np.arange(n) * 0.25
    vals = np.cos(2 * math.pi * (4 / (n * 0.25)) * x)
    vals[::4] = np.nan
    dft = zero_padded_dft_psd(GriddedField(vals, [0.0], [0.25]))
    assert dft.n_samples == n - 10
    assert dft.method == "dft"
    assert np.all((dft.psd >= 0) & (dft.psd <= 1))
