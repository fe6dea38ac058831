"""Peak selection, per-peak vote reads, and the vote-based detector."""

import numpy as np
import pytest

from speechpolarity import (EnvelopeSeries, EpochList, HpConfig, InvalidInputError,
                            PhaseSeries, Polarity, Signal, SynthSpec, ZffConfig,
                            analytic_signal, detect_polarity_hp, extract_epochs,
                            generate_utterance, generate_utterance_with_instants,
                            hilbert_envelope, phase_sign_at_peak, select_he_peaks,
                            slope_sign_at_peak, zff_filter)

FS = 16000


def utterance(pitch=120.0, seed=0, jitter=1.0, duration=1.0, polarity=Polarity.POSITIVE):
    return generate_utterance(SynthSpec(pitch_hz=pitch, duration_s=duration,
                                        sample_rate_hz=FS, jitter_pct=jitter,
                                        polarity=polarity, seed=seed))


class TestSelectHePeaks:
    def test_peaks_near_true_instants(self):
        spec = SynthSpec(pitch_hz=100.0, duration_s=1.0, sample_rate_hz=FS,
                         jitter_pct=1.0, seed=21)
        s, instants = generate_utterance_with_instants(spec)
        env = hilbert_envelope(analytic_signal(s))
        epochs = extract_epochs(zff_filter(s))
        peaks = select_he_peaks(env, epochs)
        assert peaks.size > 50
        tol = int(0.001 * FS)
        for p in peaks:
            assert np.min(np.abs(instants - p)) <= tol

    def test_negation_invariance(self):
        s = utterance(seed=22)
        env_p = hilbert_envelope(analytic_signal(s))
        env_n = hilbert_envelope(analytic_signal(s.negated()))
        e_p = extract_epochs(zff_filter(s))
        e_n = extract_epochs(zff_filter(s.negated()))
        assert np.array_equal(select_he_peaks(env_p, e_p), select_he_peaks(env_n, e_n))

    def test_empty_epochs_give_empty(self):
        env = EnvelopeSeries(np.ones(1000), FS)
        epochs = EpochList(np.empty(0, dtype=np.int64), FS)
        assert select_he_peaks(env, epochs).size == 0

    def test_prominence_floor_suppresses_quiet_peaks(self):
        values = np.full(4000, 0.01)
        values[1000] = 1.0  # single loud peak; the rest sit below the floor
        env = EnvelopeSeries(values, FS)
        epochs = EpochList(np.array([1000, 3000]), FS)
        peaks = select_he_peaks(env, epochs, HpConfig(peak_search_ms=5.0))
        assert peaks.tolist() == [1000]

    def test_rate_mismatch_rejected(self):
        env = EnvelopeSeries(np.ones(100), FS)
        epochs = EpochList(np.array([10]), 8000)
        with pytest.raises(InvalidInputError):
            select_he_peaks(env, epochs)


class TestVoteReads:
    def test_falling_crossing(self):
        values = np.zeros(64)
        values[:30] = 0.4
        values[30] = 0.1
        values[31:] = -0.2
        phase = PhaseSeries(values, FS)
        assert slope_sign_at_peak(phase, 30) == -1

    def test_negation_flips_slope(self):
        rng = np.random.default_rng(23)
        values = np.clip(rng.standard_normal(512) * 0.4, -1, 1)
        phase = PhaseSeries(values, FS)
        flipped = PhaseSeries(-values, FS)
        for idx in (100, 200, 300, 400):
            a = slope_sign_at_peak(phase, idx)
            b = slope_sign_at_peak(flipped, idx)
            assert b == -a

    def test_no_crossing_gives_zero(self):
        phase = PhaseSeries(np.full(128, 0.8), FS)
        assert slope_sign_at_peak(phase, 64) == 0

    def test_phase_sign_read(self):
        # plateaus wider than the averaging window around each read point
        values = np.zeros(200)
        values[30:91] = -0.9
        values[100:161] = 0.9
        values[170:200] = 0.1  # below the default magnitude threshold
        phase = PhaseSeries(values, FS)
        assert phase_sign_at_peak(phase, 60) == -1
        assert phase_sign_at_peak(phase, 130) == 1
        assert phase_sign_at_peak(phase, 185) == 0

    def test_phase_sign_antisymmetric(self):
        rng = np.random.default_rng(77)
        values = np.clip(rng.standard_normal(400), -1, 1)
        phase = PhaseSeries(values, FS)
        flipped = PhaseSeries(-values, FS)
        for idx in (50, 150, 250, 350):
            assert phase_sign_at_peak(flipped, idx) == -phase_sign_at_peak(phase, idx)

    def test_out_of_range_peak(self):
        phase = PhaseSeries(np.zeros(16), FS)
        with pytest.raises(InvalidInputError):
            slope_sign_at_peak(phase, 99)


class TestDetector:
    def test_positive_synthetic(self):
        d = detect_polarity_hp(utterance(seed=24))
        assert d.polarity is Polarity.POSITIVE

    def test_negative_synthetic(self):
        d = detect_polarity_hp(utterance(seed=24, polarity=Polarity.NEGATIVE))
        assert d.polarity is Polarity.NEGATIVE

    def test_negation_flips_with_swapped_votes(self):
        for seed in (25, 26, 27):
            s = utterance(pitch=100.0 + 30 * (seed - 25), seed=seed)
            d_pos = detect_polarity_hp(s)
            d_neg = detect_polarity_hp(s.negated())
            assert d_pos.polarity is d_neg.polarity.flipped()
            assert d_pos.positive_slope_votes == d_neg.negative_slope_votes
            assert d_pos.negative_slope_votes == d_neg.positive_slope_votes
            assert d_pos.anchors_used == d_neg.anchors_used

    def test_scale_invariance(self):
        s = utterance(seed=28)
        base = detect_polarity_hp(s)
        for alpha in (1e-3, 0.5, 10.0):
            d = detect_polarity_hp(s.scaled(alpha))
            assert d.polarity is base.polarity
            assert d.positive_slope_votes == base.positive_slope_votes
            assert d.negative_slope_votes == base.negative_slope_votes

    def test_vote_accounting(self):
        d = detect_polarity_hp(utterance(seed=29))
        assert d.positive_slope_votes + d.negative_slope_votes <= d.anchors_used
        assert d.anchors_used > 0

    def test_silence_is_indeterminate(self):
        d = detect_polarity_hp(Signal(np.zeros(FS), FS))
        assert d.polarity is Polarity.INDETERMINATE
        assert d.anchors_used == 0

    def test_short_signal_rejected(self):
        with pytest.raises(InvalidInputError):
            detect_polarity_hp(Signal(np.ones(800), FS))

    def test_low_rate_rejected(self):
        with pytest.raises(InvalidInputError):
            detect_polarity_hp(Signal(np.ones(200), 500))

    def test_slope_vote_rule_runs(self):
        d = detect_polarity_hp(utterance(seed=30), hcfg=HpConfig(vote_rule="slope"))
        assert d.polarity in (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.INDETERMINATE)

    def test_determinism(self):
        s = utterance(seed=31)
        a = detect_polarity_hp(s)
        b = detect_polarity_hp(s)
        assert a == b

    def test_config_validation(self):
        with pytest.raises(InvalidInputError):
            HpConfig(peak_search_ms=100.0)
        with pytest.raises(InvalidInputError):
            HpConfig(slope_sign_for_positive=0)
        with pytest.raises(InvalidInputError):
            HpConfig(vote_rule="nearest")
