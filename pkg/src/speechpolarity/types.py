"""Shared domain types: signals, series, epoch lists, and polarity decisions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an input signal or parameter violates a precondition."""


class UndefinedStatisticError(ValueError):
    """Raised when a statistic is undefined for the given data (constant or too short)."""


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    INDETERMINATE = "indeterminate"

    def flipped(self) -> "Polarity":
        if self is Polarity.POSITIVE:
            return Polarity.NEGATIVE
        if self is Polarity.NEGATIVE:
            return Polarity.POSITIVE
        return Polarity.INDETERMINATE

    @classmethod
    def parse(cls, text: str) -> "Polarity":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidInputError(f"unknown polarity {text!r}") from None


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Signal:
    """A uniformly sampled real-valued waveform.

    Samples must be finite and non-empty; mutating the array after
    construction is not supported.
    """

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        arr = _as_float_array(self.samples, "samples")
        if arr.size < 1:
            raise InvalidInputError("signal must contain at least one sample")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("signal contains non-finite samples")
        if int(self.sample_rate_hz) < 1:
            raise InvalidInputError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def negated(self) -> "Signal":
        return Signal(-self.samples, self.sample_rate_hz)

    def scaled(self, factor: float) -> "Signal":
        return Signal(factor * self.samples, self.sample_rate_hz)


@dataclass(frozen=True)
class AnalyticSignal:
    """Real/imaginary pair; the real part is the source signal verbatim."""

    real: np.ndarray
    imag: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        re = _as_float_array(self.real, "real")
        im = _as_float_array(self.imag, "imag")
        if re.size != im.size:
            raise InvalidInputError("real and imaginary parts must have identical length")
        object.__setattr__(self, "real", re)
        object.__setattr__(self, "imag", im)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.real.size


@dataclass(frozen=True)
class EnvelopeSeries:
    """Magnitude of an analytic signal; values are non-negative."""

    values: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        arr = _as_float_array(self.values, "values")
        if arr.size and float(arr.min()) < 0.0:
            raise InvalidInputError("envelope values must be non-negative")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class PhaseSeries:
    """Cosine of the analytic-signal phase; values lie in [-1, 1]."""

    values: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        arr = _as_float_array(self.values, "values")
        if arr.size and (float(arr.min()) < -1.0 or float(arr.max()) > 1.0):
            raise InvalidInputError("phase values must lie in [-1, 1]")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class EpochList:
    """Strictly ascending sample indices of excitation anchor instants."""

    indices: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        arr = np.asarray(self.indices, dtype=np.int64)
        if arr.ndim != 1:
            raise InvalidInputError("epoch indices must be one-dimensional")
        if arr.size and (np.any(np.diff(arr) <= 0) or int(arr[0]) < 0):
            raise InvalidInputError("epoch indices must be non-negative and strictly ascending")
        object.__setattr__(self, "indices", arr)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.indices.size


@dataclass(frozen=True)
class PolarityDecision:
    """Outcome of a polarity detector with its vote or statistic evidence.

    The vote counters are filled by the phase-vote detector; the skewness
    baseline reports its scalar statistic instead and leaves the counters
    at zero.
    """

    polarity: Polarity
    positive_slope_votes: int = 0
    negative_slope_votes: int = 0
    anchors_used: int = 0
    statistic: float | None = None

    def __post_init__(self):
        if self.positive_slope_votes < 0 or self.negative_slope_votes < 0 or self.anchors_used < 0:
            raise InvalidInputError("vote counts must be non-negative")
        if self.positive_slope_votes + self.negative_slope_votes > self.anchors_used and self.statistic is None:
            raise InvalidInputError("vote counts cannot exceed the number of anchors")

    def evidence(self) -> str:
        if self.statistic is not None:
            return f"statistic={self.statistic:+.6g}"
        return (f"votes +{self.positive_slope_votes}/-{self.negative_slope_votes}"
                f" anchors={self.anchors_used}")
