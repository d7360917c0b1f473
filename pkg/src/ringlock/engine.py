"""Shared numerical infrastructure: reproducible random streams, a fixed-step
RK4 stepper, and Welch-averaged power spectral density estimation.

All stochastic simulations in this package draw their noise through
:class:`RngStream`, which is counter-based: the pair ``(seed, counter)``
fully determines every draw, on every platform, so parallel parameter
sweeps can derive independent substreams without coordination.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal as _signal


class IntegrationError(RuntimeError):
    """State or derivative became non-finite during integration."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class InsufficientDataError(ValueError):
    """Signal too short for the requested spectral estimate."""


@dataclass
class RngStream:
    """Counter-based random stream.

    Each call to :func:`normal_draws` keys a fresh Philox generator with
    ``(seed, counter)`` and then increments ``counter``, so the stream is a
    reproducible sequence of independent blocks.  Substreams for parallel
    work are derived by offsetting the counter (see :func:`substream`).
    """

    seed: int
    counter: int = 0


def substream(stream: RngStream, run_index: int) -> RngStream:
    """Derive an independent substream for a parallel run.

    Substreams are spaced 2**32 counter values apart, so they never collide
    as long as no single run makes more than 2**32 draw calls.
    """
    if run_index < 0:
        raise ValueError("run_index must be nonnegative")
    return RngStream(seed=stream.seed, counter=(run_index + 1) << 32)


def normal_draws(stream: RngStream, n: int) -> np.ndarray:
    """Return ``n`` independent standard normal draws and advance the stream.

    Identical ``(seed, counter)`` gives an identical vector on all platforms
    (Philox is a pure counter-based generator with no platform-dependent
    state).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    key = np.array([stream.seed & 0xFFFFFFFFFFFFFFFF,
                    stream.counter & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    stream.counter += 1
    return gen.standard_normal(n)


def rk4_step(state: np.ndarray, derivative, t: float, dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step.

    ``derivative(t, state)`` must return an array of the same shape as
    ``state``.  Raises :class:`IntegrationError` if the result is not finite.
    """
    k1 = derivative(t, state)
    k2 = derivative(t + 0.5 * dt, state + (0.5 * dt) * k1)
    k3 = derivative(t + 0.5 * dt, state + (0.5 * dt) * k2)
    k4 = derivative(t + dt, state + dt * k3)
    out = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise IntegrationError("non-finite state after RK4 step", t=t)
    return out


@dataclass(frozen=True)
class SpectrumResult:
    """One-sided power spectral density estimate.

    Normalized as a density: the integral of ``psd`` over ``freqs``
    approximates the signal variance (Parseval, up to window correction).
    """

    freqs: np.ndarray
    psd: np.ndarray
    resolution: float  # Hz per bin
    segments: int


def welch_psd(signal: np.ndarray, sample_rate: float, segment_len: int,
              overlap: float = 0.5) -> SpectrumResult:
    """Hann-windowed, overlap-averaged one-sided PSD of a real signal.

    ``segment_len`` must be a power of two no longer than the signal;
    ``overlap`` is the fractional segment overlap (default 50%).
    """
    signal = np.asarray(signal, dtype=float)
    n = signal.size
    if segment_len < 2 or (segment_len & (segment_len - 1)) != 0:
        raise ValueError("segment_len must be a power of two")
    if segment_len > n:
        raise InsufficientDataError(
            f"signal length {n} shorter than segment length {segment_len}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError("overlap must be in [0, 1)")
    noverlap = int(overlap * segment_len)
    freqs, psd = _signal.welch(
        signal, fs=sample_rate, window="hann", nperseg=segment_len,
        noverlap=noverlap, detrend=False, return_onesided=True,
        scaling="density")
    segments = 1 + (n - segment_len) // (segment_len - noverlap)
    return SpectrumResult(freqs=freqs, psd=psd,
                          resolution=sample_rate / segment_len,
                          segments=segments)
