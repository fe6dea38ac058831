"""Polarity detection for speech and electro-glottogram recordings.

Two detectors share one toolbox: the phase-vote method reads the cosine
phase of a glottal-flow approximation at Hilbert-envelope peaks anchored on
zero-frequency-filtered excitation instants, and the reskew baseline uses
the skewness of the same flow approximation.  A synthetic generator with
known ground truth, calibrated-SNR noise mixing, and a corpus-evaluation
harness round out the package.
"""

from .calibrate import CalibrationResult, calibrate
from .dsp import analytic_signal, cosine_phase, default_phase_eps, hilbert_envelope, hilbert_transform
from .epochs import ZffConfig, estimate_mean_pitch, extract_epochs, zff_filter
from .harness import (CorpusManifest, EvalReport, ManifestEntry, MethodTally, TrialRecord,
                      evaluate_corpus, load_wav, parse_manifest, render_report, save_wav)
from .hilbert_phase import (HpConfig, detect_polarity_hp, phase_sign_at_peak, select_he_peaks,
                            slope_sign_at_peak)
from .reskew import (LpConfig, detect_polarity_reskew, glottal_flow_estimate, levinson,
                     lp_residual, reskew_statistic, skewness)
from .synth import (NoiseSpec, SynthSpec, generate_utterance, generate_utterance_with_instants,
                    mix_noise)
from .types import (AnalyticSignal, EnvelopeSeries, EpochList, InvalidInputError, PhaseSeries,
                    Polarity, PolarityDecision, Signal, UndefinedStatisticError)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSignal", "CalibrationResult", "CorpusManifest", "EnvelopeSeries", "EpochList",
    "EvalReport", "HpConfig", "InvalidInputError", "LpConfig", "ManifestEntry", "MethodTally",
    "NoiseSpec", "PhaseSeries", "Polarity", "PolarityDecision", "Signal", "SynthSpec",
    "TrialRecord", "UndefinedStatisticError", "ZffConfig", "analytic_signal", "calibrate",
    "cosine_phase", "default_phase_eps", "detect_polarity_hp", "detect_polarity_reskew",
    "estimate_mean_pitch", "evaluate_corpus", "extract_epochs", "generate_utterance",
    "generate_utterance_with_instants", "glottal_flow_estimate", "hilbert_envelope",
    "hilbert_transform", "levinson", "load_wav", "lp_residual", "mix_noise", "parse_manifest",
    "phase_sign_at_peak", "render_report", "reskew_statistic", "save_wav", "select_he_peaks",
    "skewness", "slope_sign_at_peak", "zff_filter",
]
