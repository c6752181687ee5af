"""Differential-leveling arithmetic and grading tests."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from survey_bench.errors import (
    NotLevel,
    RodOutOfRange,
    WrongTarget,
    ZeroTrueElevation,
)
from survey_bench.geodesy import Benchmark, WorldPoint
from survey_bench.leveling import (
    BACKSIGHT,
    FORESIGHT,
    LevelingExercise,
    SightReading,
    elevation_error,
    elevation_from_foresight,
    grade_exercise,
    height_of_instrument,
    simulated_rod_reading,
)


def bench(bid, x, z, known):
    return Benchmark(id=bid, position=WorldPoint(x, 0.0, z), elevation_known=known)


def exercise(elev_a=100.0, elev_b=100.5):
    return LevelingExercise(
        benchmark_a=bench("A", 20.0, elev_a, True),
        benchmark_b=bench("B", -20.0, elev_b, False),
        instrument_station=(0.0, 0.0),
    )


def reading(kind, value, target, t=0.0):
    return SightReading(kind=kind, value=value, target=target, taken_at=t)


class TestRodReading:
    def test_exact_geometry(self):
        assert simulated_rod_reading(101.25, 100.0) == 1.25

    def test_zero_at_equal_height(self):
        assert simulated_rod_reading(100.0, 100.0) == 0.0

    def test_negative_geometric_out_of_range(self):
        with pytest.raises(RodOutOfRange):
            simulated_rod_reading(99.0, 100.0)

    def test_above_rod_out_of_range(self):
        with pytest.raises(RodOutOfRange):
            simulated_rod_reading(104.5, 100.0, rod_height_max=4.0)

    def test_not_level_refused(self):
        with pytest.raises(NotLevel):
            simulated_rod_reading(101.0, 100.0, instrument_level=False)

    def test_noise_is_seeded_and_clamped(self):
        rng = np.random.default_rng(7)
        a = simulated_rod_reading(101.0, 100.0, noise_sd=0.01, rng=rng)
        rng = np.random.default_rng(7)
        b = simulated_rod_reading(101.0, 100.0, noise_sd=0.01, rng=rng)
        assert a == b
        rng = np.random.default_rng(7)
        clamped = simulated_rod_reading(100.001, 100.0, noise_sd=5.0, rng=rng)
        assert 0.0 <= clamped <= 4.0

    def test_noise_needs_generator(self):
        with pytest.raises(ValueError):
            simulated_rod_reading(101.0, 100.0, noise_sd=0.01)


class TestHeightOfInstrument:
    def test_zero_backsight(self):
        assert height_of_instrument(100.0, 0.0) == 100.0

    def test_arithmetic(self):
        assert height_of_instrument(100.00, 1.25) == 101.25

    @given(st.floats(-100, 100), st.floats(0, 4), st.floats(-50, 50))
    def test_additivity(self, e, bs, c):
        assert height_of_instrument(e + c, bs) == pytest.approx(
            height_of_instrument(e, bs) + c, abs=1e-9
        )


class TestElevationFromForesight:
    def test_arithmetic(self):
        assert elevation_from_foresight(101.25, 0.75) == 100.50

    def test_zero_foresight(self):
        assert elevation_from_foresight(101.25, 0.0) == 101.25

    @given(st.floats(50, 150), st.floats(0, 4))
    def test_equal_sights_cancel(self, elev_a, s):
        hi = height_of_instrument(elev_a, s)
        assert elevation_from_foresight(hi, s) == pytest.approx(elev_a, abs=1e-9)


class TestElevationError:
    def test_exact_zero(self):
        assert elevation_error(100.0, 100.0) == 0.0

    def test_fig_scale(self):
        assert elevation_error(100.4, 100.0) == pytest.approx(0.004, abs=1e-12)

    def test_sign_symmetry(self):
        assert elevation_error(100.0 + 0.3, 100.0) == pytest.approx(
            elevation_error(100.0 - 0.3, 100.0), abs=1e-15
        )

    def test_zero_true_elevation(self):
        with pytest.raises(ZeroTrueElevation):
            elevation_error(1.0, 0.0)

    @given(st.floats(0.1, 10), st.floats(50, 150), st.floats(-1, 1))
    def test_homogeneity(self, k, h, d):
        assert elevation_error(k * (h + d), k * h) == pytest.approx(
            elevation_error(h + d, h), rel=1e-9, abs=1e-12
        )


class TestGradeExercise:
    def test_noiseless_closed_loop_zero_error(self):
        ex = exercise(elev_a=100.0, elev_b=100.5)
        hi = 101.4
        bs = reading(BACKSIGHT, hi - 100.0, "A")
        fs = reading(FORESIGHT, hi - 100.5, "B")
        result = grade_exercise(ex, bs, fs)
        assert result.error == pytest.approx(0.0, abs=1e-12)
        assert result.hi == pytest.approx(hi, abs=1e-12)

    def test_first_attempt_magnitude(self):
        # computed elevation 0.4% high, the scale seen on early attempts
        ex = exercise(elev_a=100.0, elev_b=100.0)
        bs = reading(BACKSIGHT, 1.4, "A")
        fs = reading(FORESIGHT, 1.4 - 0.4, "B")
        result = grade_exercise(ex, bs, fs)
        assert result.computed_elevation_b == pytest.approx(100.4, abs=1e-12)
        assert result.error == pytest.approx(0.004, abs=1e-12)

    def test_final_attempt_magnitude(self):
        ex = exercise(elev_a=100.0, elev_b=100.0)
        bs = reading(BACKSIGHT, 1.4, "A")
        fs = reading(FORESIGHT, 1.4 + 0.05, "B")
        result = grade_exercise(ex, bs, fs)
        assert result.error == pytest.approx(0.0005, abs=1e-12)

    def test_wrong_targets(self):
        ex = exercise()
        with pytest.raises(WrongTarget):
            grade_exercise(
                ex, reading(BACKSIGHT, 1.0, "B"), reading(FORESIGHT, 1.0, "B")
            )
        with pytest.raises(WrongTarget):
            grade_exercise(
                ex, reading(BACKSIGHT, 1.0, "A"), reading(FORESIGHT, 1.0, "A")
            )
        with pytest.raises(WrongTarget):
            grade_exercise(
                ex, reading(FORESIGHT, 1.0, "A"), reading(FORESIGHT, 1.0, "B")
            )

    def test_zero_true_elevation(self):
        ex = LevelingExercise(
            benchmark_a=bench("A", 20.0, 1.0, True),
            benchmark_b=bench("B", -20.0, 0.0, False),
            instrument_station=(0.0, 0.0),
        )
        with pytest.raises(ZeroTrueElevation):
            grade_exercise(
                ex, reading(BACKSIGHT, 1.0, "A"), reading(FORESIGHT, 1.0, "B")
            )

    def test_rod_limit_checked(self):
        ex = exercise()
        with pytest.raises(RodOutOfRange):
            grade_exercise(
                ex, reading(BACKSIGHT, 4.5, "A"), reading(FORESIGHT, 1.0, "B")
            )

    def test_error_strictly_increasing_in_bias(self):
        ex = exercise(elev_a=100.0, elev_b=100.5)
        hi = 101.4
        errors = []
        for bias in [0.0, 0.05, 0.1, 0.2, 0.4]:
            fs = reading(FORESIGHT, hi - 100.5 - bias, "B")
            errors.append(
                grade_exercise(ex, reading(BACKSIGHT, hi - 100.0, "A"), fs).error
            )
        assert all(b > a for a, b in zip(errors, errors[1:]))

    def test_common_bias_cancels(self):
        ex = exercise(elev_a=100.0, elev_b=100.5)
        hi = 101.4
        for delta in [-0.2, 0.1, 0.3]:
            bs = reading(BACKSIGHT, hi - 100.0 + delta, "A")
            fs = reading(FORESIGHT, hi - 100.5 + delta, "B")
            result = grade_exercise(ex, bs, fs)
            assert result.computed_elevation_b == pytest.approx(100.5, abs=1e-12)

    def test_reading_validation(self):
        with pytest.raises(ValueError):
            reading("sideways", 1.0, "A")
        with pytest.raises(ValueError):
            reading(BACKSIGHT, -0.5, "A")

    def test_exercise_validation(self):
        with pytest.raises(ValueError):
            LevelingExercise(
                benchmark_a=bench("A", 20.0, 100.0, False),  # A must be known
                benchmark_b=bench("B", -20.0, 100.0, False),
                instrument_station=(0.0, 0.0),
            )
        with pytest.raises(ValueError):
            LevelingExercise(
                benchmark_a=bench("X", 20.0, 100.0, True),
                benchmark_b=bench("X", -20.0, 100.0, False),
                instrument_station=(0.0, 0.0),
            )
