import numpy as np
import pytest

from ndlomb import _backend, _kernels_py
from ndlomb.lsm import analyze
from ndlomb.types import SampleSet, build_regular_grid


def _data(rng, n=500, m=2):
    return rng.uniform(-2, 2, size=(n, m)), rng.normal(size=n)


def _axes(rng):
    return (np.linspace(-6, 6, 13), np.linspace(-3, 5, 9))


def _oracle_sums(coords, values, omegas):
    theta = omegas @ coords.T
    c, s = np.cos(theta), np.sin(theta)
    return np.column_stack([(c * c).sum(1), (s * s).sum(1), (c * s).sum(1), c @ values,
                            s @ values])


def test_direct_matches_oracle(rng, backend):
    coords, values = _data(rng)
    omegas = rng.normal(0, 4, size=(37, 2))
    got = _backend.trig_sums(coords, values, omegas=omegas, backend=backend)
    np.testing.assert_allclose(got, _oracle_sums(coords, values, omegas), rtol=1e-11, atol=1e-9)


def test_product_matches_direct(rng, backend):
    coords, values = _data(rng)
    axes = _axes(rng)
    mesh = np.meshgrid(*axes, indexing="ij")
    omegas = np.stack([m.ravel() for m in mesh], axis=1)
    direct = _backend.trig_sums(coords, values, omegas=omegas, backend=backend)
    product = _backend.trig_sums(coords, values, axis_omegas=axes, backend=backend)
    np.testing.assert_allclose(product, direct, rtol=1e-10, atol=1e-9)


@pytest.mark.parametrize("path", ["direct", "product"])
def test_thread_count_does_not_change_bits(rng, backend, path):
    coords, values = _data(rng, n=1500)
    axes = _axes(rng)
    kwargs = {"axis_omegas": axes} if path == "product" else {
        "omegas": rng.normal(0, 4, size=(200, 2))}
    ref = _backend.trig_sums(coords, values, threads=1, backend=backend, **kwargs)
    for threads in (2, 4, 7):
        again = _backend.trig_sums(coords, values, threads=threads, backend=backend, **kwargs)
        assert np.array_equal(ref, again)


def test_python_chunk_size_does_not_change_bits(rng, monkeypatch):
    coords, values = _data(rng, n=300)
    omegas = rng.normal(0, 4, size=(90, 2))
    ref = _kernels_py.direct_sums(coords, values, omegas)
    for chunk in (300, 301, 3000, 7 * 300):
        monkeypatch.setattr(_kernels_py, "_CHUNK_ELEMS", chunk)
        assert np.array_equal(_kernels_py.direct_sums(coords, values, omegas), ref)


@pytest.mark.skipif("compiled" not in _backend.BACKENDS, reason="extension not built")
def test_backends_agree_on_spectrum(rng):
    coords, values = _data(rng, n=800, m=3)
    s = SampleSet(coords, values)
    grid = build_regular_grid([(-1, 1), (-1, 1), (0, 2)], [0.2, 0.25, 0.5])
    py = analyze(s, grid, backend="python")
    cc = analyze(s, grid, backend="compiled")
    for name in ("tau_star", "a", "b", "amplitude", "psd"):
        np.testing.assert_allclose(getattr(cc, name), getattr(py, name), rtol=1e-9, atol=1e-11)


def test_default_backend_is_known():
    assert _backend.DEFAULT in _backend.BACKENDS
    assert _backend.get() is _backend.BACKENDS[_backend.DEFAULT]
