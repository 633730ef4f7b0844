import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossdm.evaluation import (
    CSV_HEADER,
    PatternSample,
    circular_std,
    constellation_at,
    pattern_csv,
    pattern_rows,
    pattern_sweep,
    plot_direction,
    read_pattern_csv,
    response,
    scrambling_report,
    wrap_phase,
)
from crossdm.synthesis import WeightSet, synthesize_bank
from crossdm.steering import ArrayGeometry, Direction, PolarizationState, full_steering

QPSK = np.array([45.0, 135.0, -45.0, -135.0])


def rand_c(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


class TestResponse:
    def test_matched_filter(self):
        g = ArrayGeometry.uniform(4)
        d, p = Direction(37, 120), PolarizationState(30, 60)
        s = full_steering(g, d, p)
        assert response(s / np.vdot(s, s).real, g, d, p) == pytest.approx(1.0, abs=1e-14)

    def test_zero_weights(self):
        g = ArrayGeometry.uniform(3)
        assert response(np.zeros(6), g, Direction(10, 90), PolarizationState(0, 0)) == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            response(np.zeros(5), ArrayGeometry.uniform(3), Direction(0, 0),
                     PolarizationState(0, 0))

    @settings(max_examples=50)
    @given(st.integers(0, 2**32 - 1))
    def test_linear_and_conjugate_linear(self, seed):
        rng = np.random.default_rng(seed)
        g = ArrayGeometry.uniform(5)
        d = Direction(rng.uniform(0, 180), rng.uniform(0, 360))
        p = PolarizationState(rng.uniform(0, 90), rng.uniform(-180, 180))
        w1, w2 = rand_c(rng, 10), rand_c(rng, 10)
        alpha = complex(*rng.normal(size=2))
        assert response(w1 + w2, g, d, p) == pytest.approx(
            response(w1, g, d, p) + response(w2, g, d, p), abs=1e-12)
        assert response(alpha * w1, g, d, p) == pytest.approx(
            np.conj(alpha) * response(w1, g, d, p), abs=1e-12)

    def test_example_00_11_second_channel(self, demo_spec, demo_bank):
        r = response(demo_bank.weights[2], demo_spec.geometry, demo_spec.mainlobe_dirs[0],
                     demo_spec.pol2)
        assert abs(r - np.exp(-1j * np.pi / 4)) < 1e-8


class TestHelpers:
    def test_wrap_phase(self):
        np.testing.assert_allclose(wrap_phase([180, -180, 190, 359, 0, -181]),
                                   [-180, -180, -170, -1, 0, 179])

    def test_plot_direction(self):
        assert plot_direction(-30) == Direction(30, 270)
        assert plot_direction(0) == Direction(0, 90)
        assert plot_direction(45) == Direction(45, 90)

    def test_pattern_sample_fields(self):
        s = PatternSample(0.0, (1j, -1.0))
        assert s.magnitudes_db == (0.0, 0.0)
        assert s.phases_deg == (90.0, -180.0)
        assert s.composite_db == pytest.approx(10 * np.log10(2))

    @given(st.complex_numbers(max_magnitude=1e6, allow_nan=False),
           st.complex_numbers(max_magnitude=1e6, allow_nan=False))
    def test_composite_floor(self, a, b):
        s = PatternSample(0.0, (a, b))
        for mag in s.magnitudes_db:
            assert s.composite_db >= mag - 1e-12
        for ph in s.phases_deg:
            assert -180 <= ph < 180

    def test_circular_std(self):
        r, sd = circular_std(np.deg2rad(QPSK))
        assert r == 0.0 and sd == float("inf")
        r, sd = circular_std(np.zeros(5))
        assert r == pytest.approx(1.0) and sd == pytest.approx(0.0, abs=1e-7)
        # two points 90 deg apart: R = cos(45 deg)
        r, sd = circular_std(np.deg2rad([0, 90]))
        assert r == pytest.approx(np.sqrt(0.5))
        assert sd == pytest.approx(np.sqrt(-2 * np.log(np.sqrt(0.5))))


class TestSweep:
    def test_count(self, demo_spec, demo_bank):
        assert len(pattern_sweep(demo_bank.weights[0], demo_spec, 1.0)) == 181
        assert len(pattern_sweep(demo_bank.weights[0], demo_spec, 0.5)) == 361

    def test_bad_step(self, demo_spec, demo_bank):
        with pytest.raises(ValueError):
            pattern_sweep(demo_bank.weights[0], demo_spec, 0)

    @pytest.mark.parametrize("m", range(16))
    def test_mainlobe_levels(self, demo_spec, demo_bank, m):
        samples = pattern_sweep(demo_bank.weights[m], demo_spec, 1.0)
        (centre,) = [s for s in samples if s.plot_angle == 0]
        assert centre.composite_db == pytest.approx(3.01, abs=0.01)
        assert centre.composite_db == pytest.approx(10 * np.log10(2), abs=1e-3)
        for mag in centre.magnitudes_db:
            assert mag == pytest.approx(0.0, abs=1e-3)


class TestConstellation:
    def test_mainlobe_grid(self, demo_spec, demo_bank):
        pts = constellation_at(demo_bank, demo_spec, demo_spec.mainlobe_dirs[0])
        assert pts.shape == (16, 2)
        np.testing.assert_allclose(np.abs(pts), 1.0, atol=1e-8)
        ph = np.round(wrap_phase(np.degrees(np.angle(pts))), 6)
        assert {tuple(row) for row in ph} == {(a, b) for a in QPSK for b in QPSK}

    def test_far_sidelobe(self, demo_spec, demo_bank):
        d = Direction(60, 270)
        pts = constellation_at(demo_bank, demo_spec, d)
        # near the 0.1 design level, not on the unit grid
        assert np.all(np.abs(pts) < 0.5)
        ph = wrap_phase(np.degrees(np.angle(pts)))
        off = np.min(np.abs(ph[..., None] - QPSK), axis=-1) > 0.1
        assert off.any(axis=0).all()

    def test_zero_bank(self, demo_spec):
        zero = WeightSet(demo_spec, np.zeros((16, 38), complex), np.zeros(16), np.zeros(16))
        assert np.all(constellation_at(zero, demo_spec, Direction(20, 90)) == 0)


class TestScrambling:
    def test_mainlobe_matches_ideal_grid(self, demo_spec, demo_bank):
        rows = scrambling_report(demo_bank, demo_spec)
        assert len(rows) == 1 + 172
        ml = rows[0]
        assert ml.region == "mainlobe"
        ideal = circular_std(np.deg2rad(np.repeat(QPSK, 4)))
        assert ml.circular_std[0] == ideal[1]
        assert ml.circular_std[1] == ideal[1]

    def test_deterministic(self, demo_spec, demo_bank):
        a = scrambling_report(demo_bank, demo_spec)
        b = scrambling_report(demo_bank, demo_spec)
        assert [(r.circular_std, r.max_magnitude) for r in a] == \
               [(r.circular_std, r.max_magnitude) for r in b]

    def test_seed_changes_report(self, demo_spec, demo_bank):
        other_spec = demo_spec.with_seed(demo_spec.seed + 1)
        other = scrambling_report(synthesize_bank(other_spec), other_spec)
        base = scrambling_report(demo_bank, demo_spec)
        assert any(not np.array_equal(x.phases_deg, y.phases_deg)
                   for x, y in zip(base[1:], other[1:]))
        assert [r.circular_std for r in base] != [r.circular_std for r in other]


class TestCsv:
    def test_rows_and_order(self, demo_spec, demo_bank):
        rows = pattern_rows(demo_bank, demo_spec, 1.0, [3, 0])
        assert len(rows) == 181 * 2 * 2
        keys = [(r[0], r[1], r[2]) for r in rows]
        assert keys == sorted(keys)

    def test_single_symbol_format(self, demo_spec, demo_bank):
        text = pattern_csv(demo_bank, demo_spec, 1.0, [0])
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 1 + 181 * 2
        assert lines[1].startswith("-90.000000,0,1,")
        assert all(len(field.split(".")[1]) == 6
                   for line in lines[1:] for i, field in enumerate(line.split(","))
                   if i not in (1, 2) and "inf" not in field)

    def test_round_trip(self, demo_spec, demo_bank):
        rows = read_pattern_csv(io.StringIO(pattern_csv(demo_bank, demo_spec, 2.0, [3])))
        (ch1, ch2) = [r for r in rows if r["plot_angle_deg"] == 0]
        assert ch1["phase_deg"] == pytest.approx(45, abs=1e-4)
        assert ch2["phase_deg"] == pytest.approx(-135, abs=1e-4)

    def test_bad_symbol(self, demo_spec, demo_bank):
        with pytest.raises(ValueError):
            pattern_rows(demo_bank, demo_spec, 1.0, [16])
