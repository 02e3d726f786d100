import json
import math

import numpy as np
import pytest

import mfa

WEIGHTS = (0.4, 0.3, 0.2, 0.1)


def test_carpet_fixture():
    carpet = mfa.sierpinski_carpet(3)
    assert carpet.shape == (27, 27)
    assert carpet.dtype == np.uint8
    assert int((carpet > 0).sum()) == 8**3
    assert np.array_equal(mfa.extract_fragment(carpet, 0, 0, 9, 9), mfa.sierpinski_carpet(2))


def test_png_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, size=(13, 21), dtype=np.uint8)
    assert np.array_equal(mfa.decode_image(mfa.encode_png(img)), img)
    mfa.save_png(img, tmp_path / "x.png")
    assert np.array_equal(mfa.load_image(tmp_path / "x.png"), img)


def test_box_measures_and_partition_sum():
    p = mfa.box_measures(mfa.sierpinski_carpet(2), 3, mode=mfa.MeasureMode.binary)
    assert len(p) == 8
    assert math.isclose(p.sum(), 1.0)
    assert math.isclose(mfa.partition_sum(np.array(WEIGHTS), 2), 0.30)
    assert mfa.plan_scales(729, 729, 3, 6)["sizes"] == [3, 9, 27, 81, 243, 729]


def test_exact_cascade_matches_closed_form():
    spec = mfa.analyze_field(mfa.binomial_cascade(8, WEIGHTS))
    ref = mfa.cascade_spectrum(WEIGHTS)
    for key in ("tau", "d_q", "alpha", "f_alpha"):
        assert np.max(np.abs(getattr(spec, key) - ref[key])) < 1e-6
    assert abs(spec.d_f - 2.0) < 1e-9
    alpha, f = spec.left_side()
    assert len(alpha) == 41


def test_analyze_uniform_and_carpet():
    spec = mfa.analyze(mfa.uniform_square(512))
    assert np.all(np.abs(spec.d_q - 2.0) <= 0.02)
    assert len(spec.offsets) == 4

    cfg = mfa.RunConfig()
    cfg.min_box = 3
    cfg.num_scales = 6
    cfg.measure_mode = mfa.MeasureMode.binary
    carpet = mfa.analyze(mfa.sierpinski_carpet(6), cfg)
    assert abs(carpet.d_f - mfa.carpet_dimension()) <= 0.03
    cmp = mfa.compare(carpet, carpet)
    assert cmp["delta_df"] == 0.0 and cmp["linf_f"] == 0.0


def test_fragments_and_order_report():
    rows = mfa.fragment_scaling(mfa.uniform_square(512), 3)
    assert [r[0] for r in rows] == [1.0, 0.5, 0.25]
    assert all(abs(r[1] - 2.0) <= 0.03 for r in rows)
    report = mfa.order_report([("a", "1948", 1.80), ("b", "1948", 1.88), ("c", "1950", None)])
    assert [r["tag"] for r in report] == ["disordered", "ordered", "error"]


def test_errors_are_typed():
    with pytest.raises(mfa.Error, match="ImageTooSmall"):
        mfa.analyze(mfa.uniform_square(40))
    with pytest.raises(mfa.Error, match="OutOfBounds"):
        mfa.extract_fragment(mfa.uniform_square(4), 2, 2, 4, 4)


def test_cli_in_process(tmp_path):
    code, out, _ = mfa.run(["synth", "square", "--size", "256", "--out", str(tmp_path)])
    assert code == 0
    code, out, err = mfa.run(["analyze", str(tmp_path / "square.png"), "--out", str(tmp_path / "o")])
    assert code == 0, err
    assert out.startswith("D_f 2")
    data = json.loads((tmp_path / "o" / "spectrum.json").read_text())
    assert len(data["points"]) == 81
    code, _, err = mfa.run(["analyze", str(tmp_path / "missing.png")])
    assert code == 1
