"""Synthetic ECG-like records for demos and tests.

Beats are sums of Gaussian bumps (P, Q, R, S, T deflections) on a slowly
wandering baseline, emitted as 11-bit ADC-style values at 360 Hz.  Not a
physiological model; just realistic enough to exercise the codec.
"""

from __future__ import annotations

import numpy as np

__all__ = ["synthetic_ecg", "with_noise_burst"]

# (centre s, width s, relative amplitude) per deflection
_BEAT_SHAPE = (
    (-0.200, 0.040, 0.12),
    (-0.035, 0.012, -0.14),
    (0.000, 0.016, 1.00),
    (0.037, 0.014, -0.22),
    (0.220, 0.055, 0.30),
)


def synthetic_ecg(
    n_samples: int,
    sample_rate: float = 360.0,
    bpm: float = 72.0,
    amplitude: float = 550.0,
    baseline: float = 1000.0,
    wander: float = 30.0,
    noise_std: float = 2.0,
    seed: int = 0,
) -> np.ndarray:
    """Generate an integer-valued ECG-like trace in ADC units."""
    rng = np.random.default_rng(seed)
    t = np.arange(n_samples) / sample_rate
    x = np.zeros(n_samples)
    period = 60.0 / bpm
    beat_t = 0.5 * period
    while beat_t < t[-1] + period:
        for c, w, a in _BEAT_SHAPE:
            x += a * np.exp(-0.5 * ((t - beat_t - c) / w) ** 2)
        beat_t += period * (1.0 + 0.03 * rng.standard_normal())
    x = baseline + amplitude * x
    x += wander * np.sin(2 * np.pi * 0.25 * t + rng.uniform(0, 2 * np.pi))
    x += wander * 0.4 * np.sin(2 * np.pi * 0.07 * t + rng.uniform(0, 2 * np.pi))
    x += noise_std * rng.standard_normal(n_samples)
    return np.clip(np.round(x), 0, 2047).astype(float)


def with_noise_burst(
    samples: np.ndarray, n_b: int, burst_segment: int, gain: float = 10.0, seed: int = 1
) -> np.ndarray:
    """Overlay white noise on one segment, scaled to the segment's own spread."""
    rng = np.random.default_rng(seed)
    out = samples.copy()
    lo, hi = burst_segment * n_b, min((burst_segment + 1) * n_b, len(samples))
    local = out[lo:hi]
    scale = gain * max(local.std(), 1.0)
    out[lo:hi] = np.clip(np.round(local + scale * rng.standard_normal(hi - lo)), 0, 2047)
    return out
