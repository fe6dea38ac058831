"""Polarity detection from analytic-signal phase at excitation-anchored peaks.

Per utterance: zero-frequency filtering provides polarity-invariant anchor
instants; Hilbert-envelope peaks of the band-limited signal are selected
near those anchors; each peak contributes a vote read from the cosine phase
of the glottal-flow approximation at the peak.  The flow sits at its
minimum right at glottal closure, so for a positive-polarity recording the
phase at the selected peaks is negative; the calibrated sign constant maps
the majority vote onto a polarity.

The band-limited front end (default 60-1600 Hz) and the tract-removing
flow approximation are what make the votes indifferent to the formant
configuration and to broadband noise; the vote logic itself follows the
envelope-peak/phase-crossing scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, filtfilt

from .dsp import analytic_signal, cosine_phase, hilbert_envelope
from .epochs import ZffConfig, estimate_mean_pitch, extract_epochs, zff_filter
from .reskew import LpConfig, glottal_flow_estimate
from .types import (EnvelopeSeries, EpochList, InvalidInputError, PhaseSeries, Polarity,
                    PolarityDecision, Signal)

# LP order for the band-limited detector path: enough poles for the first
# formant plus band edges, few enough that none are left to chase single
# harmonics at high pitch.
HP_RESIDUAL_ORDER = 8

VOTE_RULES = ("phase", "slope")


@dataclass(frozen=True)
class HpConfig:
    """Detector parameters.

    ``slope_sign_for_positive`` is the calibrated vote sign whose majority
    indicates positive polarity (see ``calibrate``); with the default
    ``phase`` vote rule a vote is the sign of the cosine phase of the flow
    approximation at the selected peak, and votes weaker than
    ``min_phase_magnitude`` abstain.  The ``slope`` rule votes with the
    slope of the phase zero crossing nearest the peak instead.
    """

    peak_search_ms: float = 10.0
    zc_search_ms: float = 2.0
    min_votes: int = 3
    prominence_floor: float = 0.05
    slope_sign_for_positive: int = -1
    vote_rule: str = "phase"
    min_phase_magnitude: float = 0.25
    phase_avg_ms: float = 1.0
    band_low_hz: float = 60.0
    band_high_hz: float = 1600.0

    def __post_init__(self):
        if not (0.5 <= self.peak_search_ms <= 20.0):
            raise InvalidInputError(f"peak_search_ms must lie in [0.5, 20], got {self.peak_search_ms}")
        if not (0.5 <= self.zc_search_ms <= 10.0):
            raise InvalidInputError(f"zc_search_ms must lie in [0.5, 10], got {self.zc_search_ms}")
        if self.min_votes < 1:
            raise InvalidInputError("min_votes must be positive")
        if not (0.0 <= self.prominence_floor <= 1.0):
            raise InvalidInputError("prominence_floor must lie in [0, 1]")
        if self.slope_sign_for_positive not in (-1, 1):
            raise InvalidInputError("slope_sign_for_positive must be +1 or -1")
        if self.vote_rule not in VOTE_RULES:
            raise InvalidInputError(f"vote_rule must be one of {VOTE_RULES}")
        if not (0.0 <= self.min_phase_magnitude < 1.0):
            raise InvalidInputError("min_phase_magnitude must lie in [0, 1)")
        if not (0.0 <= self.phase_avg_ms <= 5.0):
            raise InvalidInputError("phase_avg_ms must lie in [0, 5] ms")
        if not (0.0 < self.band_low_hz < self.band_high_hz):
            raise InvalidInputError("band edges must satisfy 0 < low < high")


def select_he_peaks(env: EnvelopeSeries, epochs: EpochList, cfg: HpConfig | None = None) -> np.ndarray:
    """Envelope maxima near the anchor instants.

    For each epoch the envelope argmax within +-peak_search_ms is taken,
    kept only if it reaches ``prominence_floor`` times the global envelope
    maximum; duplicates collapse to one index and the result is ascending.
    """
    cfg = cfg or HpConfig()
    if env.sample_rate_hz != epochs.sample_rate_hz:
        raise InvalidInputError("envelope and epochs must share a sample rate")
    values = env.values
    if values.size == 0 or len(epochs) == 0:
        return np.empty(0, dtype=np.int64)
    half = int(round(cfg.peak_search_ms * env.sample_rate_hz / 1000.0))
    floor = cfg.prominence_floor * float(values.max())
    picked = set()
    for e in epochs.indices:
        lo = max(0, int(e) - half)
        hi = min(values.size, int(e) + half + 1)
        k = lo + int(np.argmax(values[lo:hi]))
        if values[k] >= floor:
            picked.add(k)
    return np.asarray(sorted(picked), dtype=np.int64)


def slope_sign_at_peak(phase: PhaseSeries, peak_idx: int, cfg: HpConfig | None = None) -> int:
    """Sign of the phase slope across the zero crossing nearest the peak.

    Returns +1 for a rising crossing, -1 for a falling one, 0 when no
    crossing lies within +-zc_search_ms of the peak.
    """
    cfg = cfg or HpConfig()
    v = phase.values
    if not (0 <= peak_idx < v.size):
        raise InvalidInputError(f"peak index {peak_idx} out of range")
    half = int(round(cfg.zc_search_ms * phase.sample_rate_hz / 1000.0))
    lo = max(0, peak_idx - half)
    hi = min(v.size - 1, peak_idx + half)
    seg = v[lo:hi + 1]
    crossings = np.nonzero(seg[:-1] * seg[1:] < 0.0)[0]
    if crossings.size == 0:
        return 0
    mids = lo + crossings + 0.5
    k = crossings[int(np.argmin(np.abs(mids - peak_idx)))]
    return int(np.sign(seg[k + 1] - seg[k]))


def phase_sign_at_peak(phase: PhaseSeries, peak_idx: int, cfg: HpConfig | None = None) -> int:
    """Sign of the cosine phase around the peak; 0 when too weak to trust.

    The phase is averaged over +-phase_avg_ms (sub-cycle smoothing that
    suppresses sample-level noise); averages weaker than
    ``min_phase_magnitude`` abstain.
    """
    cfg = cfg or HpConfig()
    v = phase.values
    if not (0 <= peak_idx < v.size):
        raise InvalidInputError(f"peak index {peak_idx} out of range")
    half = int(round(cfg.phase_avg_ms * phase.sample_rate_hz / 1000.0))
    lo = max(0, peak_idx - half)
    hi = min(v.size, peak_idx + half + 1)
    value = float(np.mean(v[lo:hi]))
    if abs(value) < cfg.min_phase_magnitude:
        return 0
    return int(np.sign(value))


def _band_limit(s: Signal, cfg: HpConfig) -> Signal:
    nyq = s.sample_rate_hz / 2.0
    high = min(cfg.band_high_hz, 0.95 * nyq)
    low = cfg.band_low_hz
    if low >= high:
        return s
    b, a = butter(2, [low / nyq, high / nyq], btype="band")
    return Signal(filtfilt(b, a, s.samples), s.sample_rate_hz)


def detect_polarity_hp(s: Signal, zcfg: ZffConfig | None = None, hcfg: HpConfig | None = None,
                       lcfg: LpConfig | None = None) -> PolarityDecision:
    """Vote-based polarity decision; see the module docstring for the pipeline."""
    zcfg = zcfg or ZffConfig()
    hcfg = hcfg or HpConfig()
    lcfg = lcfg or LpConfig(order=HP_RESIDUAL_ORDER)
    if s.duration_s < 0.1:
        raise InvalidInputError("polarity detection needs at least 100 ms of audio")
    if s.sample_rate_hz < 1000:
        raise InvalidInputError("polarity detection needs a sample rate of at least 1 kHz")

    band = _band_limit(s, hcfg)
    pitch = estimate_mean_pitch(band, zcfg)
    epochs = extract_epochs(zff_filter(band, zcfg), zcfg)
    env = hilbert_envelope(analytic_signal(band))
    peaks = select_he_peaks(env, epochs, hcfg)

    positive = negative = 0
    if peaks.size:
        flow = glottal_flow_estimate(band, lcfg, mean_pitch_hz=pitch)
        phase = cosine_phase(analytic_signal(flow))
        for p in peaks:
            if hcfg.vote_rule == "phase":
                vote = phase_sign_at_peak(phase, int(p), hcfg)
            else:
                vote = slope_sign_at_peak(phase, int(p), hcfg)
            if vote > 0:
                positive += 1
            elif vote < 0:
                negative += 1

    total = positive + negative
    if total < hcfg.min_votes or positive == negative:
        polarity = Polarity.INDETERMINATE
    else:
        majority = 1 if positive > negative else -1
        polarity = Polarity.POSITIVE if majority == hcfg.slope_sign_for_positive else Polarity.NEGATIVE
    return PolarityDecision(polarity, positive_slope_votes=positive,
                            negative_slope_votes=negative, anchors_used=int(peaks.size))
