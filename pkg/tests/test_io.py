import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from PIL import Image

from tpictm.grid import GridError
from tpictm.io import (
    ImageFormatError,
    boundary,
    load_image,
    load_mask,
    read_energy_csv,
    save_mask,
    save_overlay,
    write_energy_csv,
)
from tpictm.solver import CSV_FIELDS, EnergyTrace, IterationRecord


def test_white_pgm_loads_as_ones(tmp_path):
    p = tmp_path / "white.pgm"
    p.write_bytes(b"P5 3 3 255\n" + bytes([255] * 9))
    g = load_image(p)
    assert g.shape == (3, 3) and g.channels == 1
    assert np.all(g.values == 1.0)


def test_tiny_image_rejected(tmp_path):
    p = tmp_path / "tiny.png"
    Image.fromarray(np.zeros((2, 2), np.uint8)).save(p)
    with pytest.raises(GridError):
        load_image(p)


def test_rgb_rescale(tmp_path):
    p = tmp_path / "rgb.png"
    a = np.zeros((4, 4, 3), np.uint8)
    a[1, 2] = (26, 51, 77)
    Image.fromarray(a).save(p)
    g = load_image(p)
    np.testing.assert_allclose(g.values[1, 2], [0.102, 0.2, 0.302], atol=1 / 510)


def test_unsupported_and_corrupt_files(tmp_path):
    jpg = tmp_path / "x.jpg"
    Image.fromarray(np.zeros((4, 4), np.uint8)).save(jpg)
    with pytest.raises(ImageFormatError):
        load_image(jpg)
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"not an image")
    with pytest.raises(ImageFormatError):
        load_image(bad)


def test_mask_file_contents(tmp_path):
    p = tmp_path / "m.png"
    save_mask(np.ones((5, 4), np.uint8), p)
    assert np.all(np.asarray(Image.open(p)) == 255)
    m = np.zeros((5, 4), np.uint8)
    m[3, 1] = 1
    save_mask(m, p)
    raw = np.asarray(Image.open(p))
    assert raw.dtype == np.uint8 and np.count_nonzero(raw == 255) == 1 and np.count_nonzero(raw) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 12), st.integers(3, 12))
def test_mask_round_trip(tmp_path_factory, seed, r, c):
    m = (np.random.default_rng(seed).random((r, c)) < 0.5).astype(np.uint8)
    p = tmp_path_factory.mktemp("rt") / "m.png"
    save_mask(m, p)
    np.testing.assert_array_equal(load_mask(p), m)


def test_boundary_of_square():
    m = np.zeros((6, 6), np.uint8)
    m[1:5, 1:5] = 1
    b = boundary(m)
    assert b.sum() == 12 and not b[2:4, 2:4].any()


def test_overlay_marks_boundary(tmp_path):
    from tpictm.grid import ImageGrid
    m = np.zeros((6, 6), np.uint8)
    m[1:5, 1:5] = 1
    p = tmp_path / "o.png"
    save_overlay(ImageGrid(np.full((6, 6), 0.5)), m, p)
    rgb = np.asarray(Image.open(p))
    assert tuple(rgb[1, 1]) == (255, 0, 0)
    assert tuple(rgb[2, 2]) == (128, 128, 128)


def test_energy_csv_round_trip(tmp_path):
    tr = EnergyTrace()
    tr.append(IterationRecord(0, 0.1 + 0.2, 0.1, 0.2, 5, 4, 1, 1, 1))
    p = tmp_path / "e.csv"
    write_energy_csv(tr, p, CSV_FIELDS)
    assert p.read_text().splitlines()[0] == ",".join(CSV_FIELDS)
    row = read_energy_csv(p)[0]
    assert float(row["total"]) == 0.1 + 0.2
    assert int(row["rejected_flips"]) == 1
