"""Exponential smoothing filter and deadzone tests.

The closed-form summation is the independent oracle for the recursive
step: the expected values in the hand-unroll cases were computed by hand
first, then frozen here.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from survey_bench.errors import EmptyHistory, NonMonotoneTime
from survey_bench.smoothing import (
    DEFAULT_ALPHA,
    DEFAULT_DEADZONE,
    FilterState,
    RawSample,
    apply_deadzone,
    ses_closed_form,
    ses_step,
    smooth_stream,
)


def test_tuned_defaults():
    # smoothing factor for typical users; deadzone ~1% of hand speed
    assert DEFAULT_ALPHA == 0.2
    assert DEFAULT_DEADZONE == 0.01


def make_stream(values, t0=0.0, dt=0.1):
    return [
        RawSample(t=t0 + i * dt, position=np.full(3, v), velocity=np.full(3, v))
        for i, v in enumerate(values)
    ]


def iterate(samples, alpha):
    state = FilterState(alpha=alpha)
    outs = []
    for s in samples:
        state, pos, _ = ses_step(state, s)
        outs.append(pos)
    return state, np.array(outs)


class TestSesStep:
    def test_alpha_one_is_identity(self):
        rng = np.random.default_rng(0)
        samples = make_stream(rng.normal(size=50))
        _, outs = iterate(samples, alpha=1.0)
        raw = np.stack([s.position for s in samples])
        assert np.array_equal(outs, raw)

    def test_constant_input_fixed_point(self):
        samples = make_stream([3.25] * 40)
        _, outs = iterate(samples, alpha=0.2)
        assert np.all(outs == 3.25)

    def test_hand_unroll(self):
        # seeded at 0, raws [1, 1] with alpha 0.2: 0.2 then 0.36
        state = FilterState(
            alpha=0.2,
            last_smoothed_position=np.zeros(3),
            last_smoothed_velocity=np.zeros(3),
            last_t=-1.0,
        )
        state, p1, _ = ses_step(
            state, RawSample(t=0.0, position=np.ones(3), velocity=np.ones(3))
        )
        assert p1 == pytest.approx([0.2] * 3, abs=1e-15)
        _, p2, _ = ses_step(
            state, RawSample(t=1.0, position=np.ones(3), velocity=np.ones(3))
        )
        assert p2 == pytest.approx([0.36] * 3, abs=1e-15)

    def test_first_sample_seeds(self):
        state = FilterState(alpha=0.2)
        _, pos, vel = ses_step(
            state,
            RawSample(t=0.0, position=[1.0, 2.0, 3.0], velocity=[4.0, 5.0, 6.0]),
        )
        assert pos.tolist() == [1.0, 2.0, 3.0]
        assert vel.tolist() == [4.0, 5.0, 6.0]

    def test_non_monotone_time(self):
        state = FilterState(alpha=0.2)
        state, _, _ = ses_step(
            state, RawSample(t=1.0, position=np.zeros(3), velocity=np.zeros(3))
        )
        with pytest.raises(NonMonotoneTime):
            ses_step(
                state, RawSample(t=1.0, position=np.ones(3), velocity=np.ones(3))
            )

    def test_alpha_validated(self):
        with pytest.raises(ValueError):
            FilterState(alpha=0.0)
        with pytest.raises(ValueError):
            FilterState(alpha=1.5)


class TestClosedForm:
    def test_single_sample_seeded_at_raw(self):
        assert ses_closed_form([4.0], initial=4.0, alpha=0.2) == pytest.approx(4.0)

    def test_two_ones_from_zero(self):
        assert ses_closed_form([1.0, 1.0], initial=0.0, alpha=0.2) == pytest.approx(
            0.36, abs=1e-15
        )

    def test_alpha_one_returns_newest(self):
        assert ses_closed_form([3.0, 7.0, -2.0], initial=99.0, alpha=1.0) == -2.0

    def test_empty_history(self):
        with pytest.raises(EmptyHistory):
            ses_closed_form([], initial=0.0, alpha=0.2)

    @pytest.mark.parametrize("alpha", [0.1, 0.2, 0.5, 0.9])
    def test_oracle_equivalence_random_streams(self, alpha):
        rng = np.random.default_rng(42)
        values = rng.normal(size=(1000, 3))
        samples = [
            RawSample(t=float(i), position=v, velocity=v)
            for i, v in enumerate(values)
        ]
        _, outs = iterate(samples, alpha)
        oracle = ses_closed_form(values, initial=values[0], alpha=alpha)
        assert np.max(np.abs(outs[-1] - oracle)) < 1e-9

    @given(
        st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=60),
        st.sampled_from([0.1, 0.2, 0.5, 0.9]),
    )
    def test_oracle_equivalence_property(self, values, alpha):
        samples = make_stream(values)
        _, outs = iterate(samples, alpha)
        oracle = ses_closed_form(
            [s.position for s in samples], initial=samples[0].position, alpha=alpha
        )
        assert np.max(np.abs(outs[-1] - oracle)) < 1e-9


class TestSmoothStream:
    def test_matches_iterated_step_exactly(self):
        rng = np.random.default_rng(9)
        values = rng.normal(size=120)
        samples = make_stream(values)
        state_a, outs = iterate(samples, 0.2)
        state_b, pos_sm, _ = smooth_stream(FilterState(alpha=0.2), samples)
        assert np.array_equal(outs, pos_sm)
        assert np.array_equal(
            state_a.last_smoothed_position, state_b.last_smoothed_position
        )

    def test_resumes_from_state(self):
        samples = make_stream([1.0, 2.0, 3.0, 4.0])
        state = FilterState(alpha=0.5)
        state, p1, _ = ses_step(state, samples[0])
        state, p2, _ = ses_step(state, samples[1])
        _, tail, _ = smooth_stream(state, samples[2:])
        _, all_at_once = iterate(samples, 0.5)[0], iterate(samples, 0.5)[1]
        assert np.array_equal(tail[-1], all_at_once[-1])

    def test_non_monotone_rejected(self):
        samples = make_stream([1.0, 2.0])
        bad = [samples[1], samples[0]]
        with pytest.raises(NonMonotoneTime):
            smooth_stream(FilterState(alpha=0.2), bad)

    def test_boundedness(self):
        rng = np.random.default_rng(21)
        values = rng.uniform(-5, 5, size=200)
        samples = make_stream(values)
        _, outs = iterate(samples, 0.3)
        assert outs.max() <= values.max() + 1e-12
        assert outs.min() >= values.min() - 1e-12

    def test_variance_reduction_white_noise(self):
        # smoothing must damp white noise at alpha = 0.2
        for seed in range(5):
            rng = np.random.default_rng(seed)
            values = rng.standard_normal(10_000)
            samples = make_stream(values)
            _, pos_sm, _ = smooth_stream(FilterState(alpha=0.2), samples)
            assert np.var(pos_sm[:, 0]) < np.var(values)


class TestDeadzone:
    def test_zero_threshold_passthrough(self):
        v = np.array([0.001, -0.002, 0.0005])
        assert np.array_equal(apply_deadzone(v, 0.0), v)

    def test_small_vector_zeroed(self):
        # |(0, 0.004, 0)| = 0.004 < 0.01
        out = apply_deadzone([0.0, 0.004, 0.0], 0.01)
        assert np.array_equal(out, np.zeros(3))

    def test_large_vector_unchanged(self):
        v = np.array([0.3, -0.4, 0.0])  # norm 0.5
        assert np.array_equal(apply_deadzone(v, 0.01), v)

    def test_no_rescaling(self):
        v = np.array([0.02, 0.0, 0.0])
        out = apply_deadzone(v, 0.01)
        assert out.tolist() == v.tolist()

    @given(
        st.lists(st.floats(-10, 10), min_size=3, max_size=3),
        st.floats(0, 5),
    )
    def test_idempotence(self, vec, threshold):
        once = apply_deadzone(vec, threshold)
        twice = apply_deadzone(once, threshold)
        assert np.array_equal(once, twice)

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            apply_deadzone([1.0, 0, 0], -0.1)
