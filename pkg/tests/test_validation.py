import numpy as np

from contact_cwc import ContactPatch
from contact_cwc.closed_form import contains_many
from contact_cwc.validation import (ValidationConfig, run_validation, sample_wrenches,
                                    validate_patch, worst_unit_margin)


def test_sampler_mix(rng):
    p = ContactPatch(0.1, 0.3, 0.5)
    W, conic = sample_wrenches(p, 10_000, rng)
    assert W.shape == (10_000, 6) and conic.sum() == 5000
    assert contains_many(p, W[conic]).all()
    ambient_members = contains_many(p, W[~conic]).mean()
    assert 0.1 < ambient_members < 0.9


def test_worst_margin_scale_free():
    p = ContactPatch(0.1, 0.1, 0.5)
    w = np.array([[0.1, 0, 1, 0.02, 0, 0.01]])
    assert np.allclose(worst_unit_margin(p, w), worst_unit_margin(p, 1000 * w))
    assert worst_unit_margin(p, np.zeros((1, 6)))[0] == 0


def test_small_grid_passes():
    cfg = ValidationConfig(X=(0.05, 0.3), Y=(0.1,), mu=(0.1, 1.0), samples=2000,
                           reconstruct_samples=200)
    report = run_validation(cfg)
    assert len(report.results) == 4 and report.passed
    assert all(r.members > 0 for r in report.results)


def test_deterministic():
    cfg = ValidationConfig(X=(0.1,), Y=(0.1,), mu=(0.5,), samples=1000, reconstruct_samples=50)
    p = cfg.patches()[0]
    a, b = validate_patch(p, cfg, 3), validate_patch(p, cfg, 3)
    assert (a.members, a.excluded, a.disagreements) == (b.members, b.excluded, b.disagreements)


def test_zero_band_needs_flag():
    strict = ValidationConfig(X=(0.1,), Y=(0.1,), mu=(0.5,), samples=500, epsilon=0.0,
                              reconstruct_samples=0)
    assert validate_patch(strict.patches()[0], strict).excluded == 0
    lenient = ValidationConfig(X=(0.1,), Y=(0.1,), mu=(0.5,), samples=500, epsilon=0.0,
                               reconstruct_samples=0, allow_boundary=True)
    assert run_validation(lenient).passed
