import math

import numpy as np
import pytest

import maxstable as ms


def test_sequence_theta():
    m = ms.sequence([3.0, 1.0])
    assert m.dim == 1 and m.alpha == 1.0
    r = ms.theta_ratio(m, "-20..20", 5000, seed=1)
    assert r["estimate"] == pytest.approx(0.75)
    e = ms.theta_exceed(m, "-20..20", 20000, seed=2)
    assert abs(e["estimate"] - 0.75) <= 3 * e["stderr"]
    a = ms.theta_anchor(m, "-20..20", "first_exceed", 20000, seed=3)
    assert abs(a["estimate"] - 0.75) <= 3 * a["stderr"]


def test_independent_exact():
    r = ms.theta_difference(ms.independent(), "-10..10", 1000, seed=4)
    assert r["estimate"] == 1.0 and r["stderr"] == 0.0


def test_theta_sample_shape_and_origin():
    t = ms.sample_theta(ms.brown_resnick(), "-5..5", seed=5)
    assert isinstance(t, np.ndarray) and t.shape == (11,)
    assert t[5] == 1.0
    t2 = ms.sample_theta(ms.product(ms.independent(), ms.independent()), "-2..2,-2..2", seed=6)
    assert t2.shape == (5, 5) and t2.sum() == 1.0
    y = ms.sample_y(ms.brown_resnick(), "-3..3", seed=7)
    assert y[3] > 1.0


def test_simulation_is_deterministic():
    a = ms.simulate(ms.brown_resnick(), "0..9", seed=8)
    b = ms.simulate(ms.brown_resnick(), "0..9", seed=8)
    assert np.array_equal(a, b) and (a > 0).all()


def test_lower_bound_and_fidi():
    b = ms.br_lower_bound(1.0, 1.0, "-50..50")
    assert b["tail_known"] and not b["divergent"]
    assert b["value"] == pytest.approx(0.1224738, rel=1e-6)
    r = ms.fidi_neglog_anchored(ms.independent(), [[0], [1]], [1.0, 1.0], 1000, seed=9)
    assert r["estimate"] == 2.0
    f = ms.fidi_neglog(ms.brown_resnick(), [[0], [1]], [1.0, 1.0], 50000, seed=10)
    hr = 2 * 0.5 * math.erfc(-0.5 / math.sqrt(2))
    assert abs(f["estimate"] - hr) <= 3 * f["stderr"]


def test_identity_suite():
    reps = ms.identity_suite("tsf_theta", ms.brown_resnick(), 5, 5000, seed=11)
    assert len(reps) == 5
    assert sum(r["pass"] for r in reps) >= 4


def test_errors():
    with pytest.raises(ValueError):
        ms.theta_ratio(ms.sequence([1.0]), "3..1", 100, seed=1)
    with pytest.raises(ValueError):
        ms.run_config("replicates = 1000\n[model.i]\nfamily = independent\n")


def test_run_config():
    out = ms.run_config("methods = ratio,exceed\n[model.s]\nfamily = sequence\ncoeffs = 1,1\n", seed=3)
    assert out["exit_code"] == 0
    assert [r["method"] for r in out["results"]] == ["ratio", "exceed"]
    assert out["results"][0]["estimate"] == pytest.approx(0.5)
