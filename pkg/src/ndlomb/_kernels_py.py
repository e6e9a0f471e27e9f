"""Pure numpy implementation of the per-frequency sums.

Mirrors ``_kernels.pyx`` column for column. Frequencies are processed in
chunks; each row is reduced with numpy's pairwise summation along the
sample axis, which does not depend on the chunk size.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

# elements per chunk, roughly 8 MB per temporary
_CHUNK_ELEMS = 1 << 20


def _chunks(n_freq, n_samples):
    size = max(1, _CHUNK_ELEMS // max(n_samples, 1))
    return [(lo, min(lo + size, n_freq)) for lo in range(0, n_freq, size)]


def _reduce(c, s, values, out):
    out[:, 0] = np.sum(c * c, axis=1)
    out[:, 1] = np.sum(s * s, axis=1)
    out[:, 2] = np.sum(c * s, axis=1)
    out[:, 3] = np.sum(c * values, axis=1)
    out[:, 4] = np.sum(s * values, axis=1)


def _run(jobs, work, threads):
    if threads <= 1 or len(jobs) == 1:
        for job in jobs:
            work(job)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, jobs))


def direct_sums(coords, values, omegas, threads=1):
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    omegas = np.ascontiguousarray(omegas, dtype=np.float64)
    n_freq, dims = omegas.shape
    out = np.zeros((n_freq, 5))

    def work(span):
        lo, hi = span
        theta = omegas[lo:hi, 0, None] * coords[None, :, 0]
        for d in range(1, dims):
            theta = theta + omegas[lo:hi, d, None] * coords[None, :, d]
        _reduce(np.cos(theta), np.sin(theta), values, out[lo:hi])

    _run(_chunks(n_freq, coords.shape[0]), work, threads)
    return out


def product_sums(tab_cos, tab_sin, offsets, sizes, values, threads=1):
    values = np.ascontiguousarray(values, dtype=np.float64)
    sizes = [int(s) for s in sizes]
    offsets = [int(o) for o in offsets]
    n_freq = int(np.prod(sizes))
    out = np.zeros((n_freq, 5))

    def work(span):
        lo, hi = span
        flat = np.arange(lo, hi)
        idx = np.unravel_index(flat, sizes)
        c = tab_cos[offsets[0] + idx[0]]
        s = tab_sin[offsets[0] + idx[0]]
        for d in range(1, len(sizes)):
            cd = tab_cos[offsets[d] + idx[d]]
            sd = tab_sin[offsets[d] + idx[d]]
            c, s = c * cd - s * sd, s * cd + c * sd
        _reduce(c, s, values, out[lo:hi])

    _run(_chunks(n_freq, values.shape[0]), work, threads)
    return out
