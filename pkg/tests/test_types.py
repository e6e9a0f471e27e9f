import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ndlomb.errors import BadInput, BadRange, DimensionMismatch, EmptyAfterFilter
from ndlomb.types import (ErrorBudget, FrequencyGrid, NoiseSpec, SampleSet, Spectrum,
                          build_regular_grid, validate_samples, wrap_phase)


def test_validate_drops_missing_rows():
    s = validate_samples([((0, 0), 1.0), ((0, 1), float("nan")), ((1, 0), -1.0)])
    assert s.n == 2 and s.dims == 2
    np.testing.assert_array_equal(s.values, [1.0, -1.0])


@pytest.mark.parametrize("raw", [[], [((0,), float("nan"))]])
def test_validate_empty(raw):
    with pytest.raises(EmptyAfterFilter):
        validate_samples(raw)


def test_validate_ragged_coordinates():
    with pytest.raises(DimensionMismatch):
        validate_samples([((0, 0), 1.0), ((1,), 2.0)])


def test_non_finite_coordinate_rejected():
    with pytest.raises(BadInput):
        validate_samples([((0, float("inf")), 1.0)])


def test_sample_set_is_read_only():
    s = SampleSet(np.arange(3.0), np.ones(3))
    with pytest.raises(ValueError):
        s.values[0] = 2.0
    with pytest.raises(AttributeError):
        s.label = "x"


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(allow_nan=True, allow_infinity=True,
                                                           width=64)),
                min_size=1, max_size=40))
def test_validate_never_stores_non_finite(rows):
    raw = [((t,), y) for t, y in rows]
    n_finite = sum(math.isfinite(y) for _, y in rows)
    if n_finite == 0:
        with pytest.raises(EmptyAfterFilter):
            validate_samples(raw)
        return
    s = validate_samples(raw)
    assert s.n == n_finite
    assert np.all(np.isfinite(s.values))


def test_regular_grid_simple_wave_size():
    g = build_regular_grid([(-10, 10)] * 2, [0.025, 0.025])
    assert len(g) == 801 ** 2
    assert g.shape == (801, 801)
    np.testing.assert_array_equal(g.spacing, [0.025, 0.025])


def test_regular_grid_small():
    g = build_regular_grid([(0, 1)], [0.5])
    np.testing.assert_array_equal(g.freqs[:, 0], [0.0, 0.5, 1.0])


@pytest.mark.parametrize("ranges,steps", [([(0, -1)], [0.1]), ([(0, 1)], [0.0]),
                                          ([(0, 1)], [-0.1]), ([(1, 1)], [0.1])])
def test_regular_grid_bad_range(ranges, steps):
    with pytest.raises(BadRange):
        build_regular_grid(ranges, steps)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-50, 50), st.floats(0.01, 20), st.floats(0.01, 3)),
                min_size=1, max_size=3))
def test_regular_grid_count(axes):
    expected = math.prod(math.floor(w / s + 0.5) + 1 for _, w, s in axes)
    assume(expected <= 10**6)
    ranges = [(lo, lo + width) for lo, width, _ in axes]
    steps = [step for _, _, step in axes]
    g = build_regular_grid(ranges, steps)
    assert len(g) == expected


def test_grid_convention_applied_once():
    g = FrequencyGrid(np.array([[1.0, 2.0]]), "ordinary")
    np.testing.assert_allclose(g.omegas, [[2 * math.pi, 4 * math.pi]], rtol=0, atol=0)
    a = FrequencyGrid(np.array([[1.0, 2.0]]), "angular")
    np.testing.assert_array_equal(a.omegas, [[1.0, 2.0]])
    with pytest.raises(BadInput):
        FrequencyGrid(np.array([[1.0]]), "hertz")


def test_noise_spec_quantile():
    assert NoiseSpec(1.0, 0.05).quantile == pytest.approx(1.959964, abs=1e-6)
    with pytest.raises(BadInput):
        NoiseSpec(-1.0)
    with pytest.raises(BadInput):
        NoiseSpec(1.0, 1.0)


def test_error_budget_validation():
    ErrorBudget(0.2, 0.1, 0.05)
    with pytest.raises(BadInput):
        ErrorBudget(0.3, 0.1, 0.05)
    with pytest.raises(BadInput):
        ErrorBudget(0.1, -0.1, 0.05)


def test_wrap_phase_range():
    x = np.array([-math.pi, math.pi, 3 * math.pi, -3 * math.pi + 1e-3, 0.0])
    y = wrap_phase(x)
    assert np.all(y > -math.pi) and np.all(y <= math.pi)
    assert wrap_phase(-math.pi) == math.pi


def _spectrum(amplitude):
    f = len(amplitude)
    grid = FrequencyGrid(np.arange(f, dtype=float))
    z = np.zeros(f)
    return Spectrum(grid, z, np.asarray(amplitude), z, np.asarray(amplitude), z, z, z, z,
                    np.zeros(f, np.int8), 10)


def test_spectrum_argmax_and_top_peaks():
    s = _spectrum([0.1, 0.7, float("nan"), 0.7, 0.3])
    assert s.argmax() == 1
    assert [p.freq[0] for p in s.top_peaks(3)] == [1.0, 3.0, 4.0]


def test_spectrum_column_shape_checked():
    grid = FrequencyGrid(np.arange(3.0))
    z = np.zeros(3)
    with pytest.raises(DimensionMismatch):
        Spectrum(grid, z, z, z, z, z, z, z, np.zeros(2), np.zeros(3, np.int8), 5)
