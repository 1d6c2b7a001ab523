import numpy as np
import pytest

from tpictm.scenes import SCENES, TWO_DISCS, SyntheticSpec, generate, initial_mask, solid_truth
from tpictm.topology import component_counts, hole_count, label_components


def test_two_discs_truth_is_one_component():
    _, truth = generate(SyntheticSpec("two-discs-line", size=128))
    assert label_components(truth, 4).count == 1
    for cx, cy in TWO_DISCS:
        assert truth[int(cy * 128), int(cx * 128)] == 1


@pytest.mark.parametrize("scene", SCENES)
def test_noiseless_image_equals_truth(scene):
    img, truth = generate(SyntheticSpec(scene, size=64))
    np.testing.assert_array_equal(img.values[:, :, 0], truth)


def test_pattern_interior_holes_lie_inside_outline():
    spec = SyntheticSpec("pattern-interior", size=64, density=0.1)
    _, truth = generate(spec)
    solid = solid_truth(spec)
    assert np.all(truth <= solid)
    assert hole_count(truth) > 0 and hole_count(solid) == 0


@pytest.mark.parametrize("scene", SCENES)
def test_generate_is_deterministic_and_clamped(scene):
    spec = SyntheticSpec(scene, size=48, sigma=0.5, seed=7)
    a, _ = generate(spec)
    b, _ = generate(spec)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.values.min() >= 0 and a.values.max() <= 1
    c, _ = generate(SyntheticSpec(scene, size=48, sigma=0.5, seed=8))
    assert not np.array_equal(a.values, c.values)


def test_unknown_scene_rejected():
    with pytest.raises(ValueError):
        SyntheticSpec("teapot")
    with pytest.raises(ValueError):
        SyntheticSpec("star-noise", sigma=-1)


@pytest.mark.parametrize(
    "text, signature",
    [
        ("circle:0.5,0.5,0.3", (1, 0)),
        ("ring:0.5,0.5,0.35,0.15", (1, 1)),
        ("rectangle:0.2,0.3,0.8,0.6", (1, 0)),
        ("two-circles:0.3,0.5,0.1,0.7,0.5,0.1", (2, 0)),
        ("checkerboard-seeds:3,0.1", (9, 0)),
    ],
)
def test_initializer_signatures(text, signature):
    m = initial_mask(text, (64, 64))
    assert (component_counts(m)[0], hole_count(m)) == signature


@pytest.mark.parametrize("text", ["blob:1", "circle:0.5,0.5", "circle:0.5,0.5,0.0", "circle:0.5,0.5,5"])
def test_bad_initializers(text):
    with pytest.raises(ValueError):
        initial_mask(text, (32, 32))
