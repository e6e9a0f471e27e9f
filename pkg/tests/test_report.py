import io
import math
import os
from pathlib import Path

import numpy as np
import pytest

from ndlomb.cli import main
from ndlomb.report import cosine_phase, local_maxima, render, write_columns
from ndlomb.types import FrequencyGrid, NoiseSpec, Spectrum, build_regular_grid

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("NDLOMB_REGEN_GOLDEN") == "1"


@pytest.mark.parametrize("preset", ["noise-only", "traveling-wave", "simple-wave"])
def test_preset_report_matches_golden(preset, tmp_path, capsys):
    out = tmp_path / f"{preset}.md"
    assert main(["report", "--preset", preset, "-o", str(out)]) == 0
    text = out.read_text()
    golden = GOLDEN / f"{preset}.md"
    if REGEN:
        golden.write_text(text)
    assert text == golden.read_text()
    assert "FAIL" not in text


def _spectrum_from(amplitude, grid):
    z = np.zeros(len(grid))
    amp = np.asarray(amplitude, dtype=float)
    return Spectrum(grid, z, amp, z, amp, z, np.clip(amp, 0, 1), z, z,
                    np.zeros(len(grid), np.int8), 50, noise=NoiseSpec(1.0))


def test_local_maxima_on_product_grid():
    grid = build_regular_grid([(0, 4), (0, 4)], [1, 1])
    amp = np.zeros((5, 5))
    amp[1, 1] = 0.9
    amp[1, 2] = 0.8  # shoulder of the first peak, not a maximum
    amp[3, 3] = 0.5
    peaks = local_maxima(_spectrum_from(amp.ravel(), grid), 5)
    assert peaks[:2] == [6, 18]
    assert 7 not in peaks


def test_local_maxima_on_scattered_1d_grid():
    grid = FrequencyGrid(np.array([3.0, 0.0, 2.0, 1.0, 4.0]))
    # amplitudes in frequency order 0..4: 0.1, 0.6, 0.2, 0.4, 0.3
    spec = _spectrum_from([0.4, 0.1, 0.2, 0.6, 0.3], grid)
    assert local_maxima(spec, 3) == [3, 0]


def test_cosine_phase_convention():
    grid = FrequencyGrid(np.array([1.0]))
    one = np.ones(1)
    z = np.zeros(1)
    # a = cos(0.3), b = -sin(0.3), tau = 0 describes cos(x + 0.3)
    spec = Spectrum(grid, z, np.cos(0.3) * one, -np.sin(0.3) * one, one,
                    np.arctan2(-np.sin(0.3), np.cos(0.3)) * one, z, z, z, np.zeros(1, np.int8), 10)
    assert cosine_phase(spec)[0] == pytest.approx(0.3)


def test_render_sections():
    grid = build_regular_grid([(0, 4)], [0.5])
    spec = _spectrum_from(np.linspace(0.1, 0.9, len(grid)), grid)
    text = render(spec, "demo", window=2 * math.pi + 0.5, checks=[("x", "1", "1", "pass")])
    for heading in ("# demo", "## Peaks", "## Confidence intervals", "## Error budget",
                    "## Checks"):
        assert heading in text
    assert "eps_T (OMD truncation, relative)" in text


def test_columns_layout():
    grid = build_regular_grid([(0, 2), (0, 3)], [1, 1])
    buf = io.StringIO()
    write_columns(_spectrum_from(np.full(len(grid), 0.5), grid), buf)
    blocks = buf.getvalue().strip().split("\n\n")
    assert len(blocks) == 3
    assert blocks[0].splitlines()[0].startswith("# f1 f2 amplitude")
