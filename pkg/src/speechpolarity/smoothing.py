"""Centered moving-average helpers shared by the filtering stages."""

from __future__ import annotations

import numpy as np


def centered_moving_average(x: np.ndarray, width_samples: int) -> np.ndarray:
    """Mean over a centered window, truncated at the signal boundaries.

    The window is forced to an odd number of samples (minimum 3).  Edge
    samples average over whatever part of the window is in range, so the
    output has the same length as the input.
    """
    w = int(width_samples)
    if w % 2 == 0:
        w += 1
    w = max(w, 3)
    n = x.size
    csum = np.cumsum(np.concatenate((x[:1] * 0, x)))
    idx = np.arange(n)
    hi = np.minimum(idx + w // 2 + 1, n)
    lo = np.maximum(idx - w // 2, 0)
    return (csum[hi] - csum[lo]) / (hi - lo)
