"""Correlation, spectrum and phase-grid analysis of unimodular sequences.

Functions taking a "sequence" accept either a complex vector (unit energy)
or a :class:`~gscseq.seqcore.RationalPhaseSequence`, which is rendered first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .rational import lcm_denominators
from .seqcore import ChirpModel, MowParams, RationalPhaseSequence, mow_phases, render
from .serialize import write_table


def as_vector(seq) -> np.ndarray:
    if isinstance(seq, RationalPhaseSequence):
        return render(seq)
    return np.asarray(seq, dtype=complex)


@dataclass(frozen=True)
class AutocorrProfile:
    """Autocorrelation values with their integer lags.

    Aperiodic profiles cover lags ``1-N .. N-1``; periodic ones ``0 .. N-1``.
    """

    N: int
    lags: np.ndarray
    values: np.ndarray
    periodic: bool = False

    def at(self, tau: int) -> complex:
        if self.periodic:
            return complex(self.values[tau % self.N])
        if not -self.N < tau < self.N:
            return 0j
        return complex(self.values[tau + self.N - 1])

    def sidelobes(self) -> np.ndarray:
        return self.values[self.lags != 0]

    def to_csv(self, path=None) -> str:
        rows = ((int(t), v.real, v.imag) for t, v in zip(self.lags, self.values))
        return write_table(path, ["tau", "re", "im"], rows)


@dataclass(frozen=True)
class SpectrumGrid:
    """Power pattern ``y(u)`` sampled at ``u_i = -1 + 2i/grid_size``."""

    grid_size: int
    u: np.ndarray
    y: np.ndarray
    passband_idx: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    stopband_idx: np.ndarray | None = None

    def __post_init__(self):
        if self.stopband_idx is None:
            rest = np.setdiff1d(np.arange(self.grid_size), self.passband_idx)
            object.__setattr__(self, "stopband_idx", rest)

    def to_csv(self, path=None) -> str:
        return write_table(path, ["u", "y"], zip(self.u, self.y))


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform phase grid of ``levels`` points; resolution ``resolution_turns = 1/levels``."""

    resolution_turns: Fraction
    levels: int

    @property
    def radians(self) -> float:
        return 2 * math.pi * float(self.resolution_turns)

    @classmethod
    def from_levels(cls, levels: int) -> "PhaseGrid":
        return cls(Fraction(1, levels), levels)


def _fft_len(n: int) -> int:
    return 1 << max(0, (2 * n - 2).bit_length())


def aperiodic_autocorr(seq, method: str = "fft") -> AutocorrProfile:
    """Aperiodic autocorrelation ``R(tau) = sum_n a_n conj(a_{n-tau})``.

    ``method="fft"`` uses zero-padded fast convolution; ``"direct"`` is the
    quadratic-time sum kept as a reference.
    """
    a = as_vector(seq)
    N = a.size
    lags = np.arange(1 - N, N)
    if method == "direct":
        values = np.empty(2 * N - 1, dtype=complex)
        for i, tau in enumerate(lags):
            if tau >= 0:
                values[i] = np.sum(a[tau:] * np.conj(a[: N - tau]))
            else:
                values[i] = np.sum(a[: N + tau] * np.conj(a[-tau:]))
    elif method == "fft":
        M = _fft_len(N)
        spec = np.fft.fft(a, M)
        r = np.fft.ifft(spec * np.conj(spec))
        values = np.concatenate([r[M - N + 1 :], r[:N]])
    else:
        raise ValueError(f"unknown method {method!r}")
    return AutocorrProfile(N, lags, values)


def periodic_autocorr(seq) -> AutocorrProfile:
    """Circular autocorrelation ``sum_n a_n conj(a_{(n-tau) mod N})`` for ``tau`` in ``0..N-1``."""
    a = as_vector(seq)
    spec = np.fft.fft(a)
    values = np.fft.ifft(spec * np.conj(spec))
    return AutocorrProfile(a.size, np.arange(a.size), values, periodic=True)


def isl(profile: AutocorrProfile) -> float:
    """Integrated sidelobe level: sum of ``|R(tau)|**2`` over nonzero lags."""
    side = profile.sidelobes()
    return float(np.sum(side.real**2 + side.imag**2))


def isl_batch(rows: np.ndarray) -> np.ndarray:
    """ISL of each row of a 2-D array of unit-energy sequences.

    Uses Parseval on the zero-padded power spectrum: ``sum |R|^2 = mean(y^2)``.
    """
    rows = np.atleast_2d(rows)
    M = _fft_len(rows.shape[1])
    y = np.abs(np.fft.fft(rows, M, axis=1)) ** 2
    energy = np.sum(np.abs(rows) ** 2, axis=1)
    return np.mean(y * y, axis=1) - energy**2


def _folded_dft(x: np.ndarray, size: int) -> np.ndarray:
    # size-point DFT of x even when len(x) > size (wrap the time axis)
    if x.size > size:
        pad = (-x.size) % size
        x = np.concatenate([x, np.zeros(pad, dtype=x.dtype)]).reshape(-1, size).sum(axis=0)
    return np.fft.fft(x, size)


def dft_power(seq, dft_len: int) -> np.ndarray:
    """``|sum_n a_n exp(-2j*pi*i*n/dft_len)|**2`` for ``i`` in ``0..dft_len-1``."""
    return np.abs(_folded_dft(as_vector(seq), dft_len)) ** 2


def beampattern(seq, u) -> np.ndarray:
    """Radiated power ``y(u) = |sum_n a_n exp(-j*pi*n*u)|**2`` at arbitrary points."""
    a = as_vector(seq)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    n = np.arange(a.size)
    out = np.empty(u.size)
    for start in range(0, u.size, 4096):
        chunk = u[start : start + 4096]
        out[start : start + chunk.size] = np.abs(np.exp(-1j * np.pi * np.outer(chunk, n)) @ a) ** 2
    return out


def power_spectrum(seq, grid_size: int) -> SpectrumGrid:
    """Sample ``y(u)`` on ``u_i = -1 + 2i/grid_size``.

    The passband set starts empty; :func:`gscseq.planner.label_spectrum`
    assigns it.
    """
    a = as_vector(seq)
    # exp(-j*pi*n*(-1 + 2i/M)) = (-1)^n * exp(-2j*pi*n*i/M)
    flipped = a * np.where(np.arange(a.size) % 2, -1.0, 1.0)
    y = np.abs(_folded_dft(flipped, grid_size)) ** 2
    u = -1 + 2 * np.arange(grid_size) / grid_size
    return SpectrumGrid(grid_size, u, y)


def spectrum_variance(seq) -> float:
    """Mean of ``(y(u) - 1)**2`` over ``[-1, 1)``.

    ``(y - 1)**2`` is a trigonometric polynomial of degree ``2(N-1)`` in
    ``pi*u``, so a uniform grid of ``4N`` points gives the integral exactly.
    """
    a = as_vector(seq)
    grid = power_spectrum(a, 4 * max(a.size, 1))
    return float(np.mean((grid.y - 1.0) ** 2))


def passband_nrmse(seq, gamma, passband_idx, dft_len: int | None = None) -> float:
    """Passband NRMSE ``sqrt(mean_{i in I_p} (gamma*|DFT[i]|^2 - 1)^2)``; DFT length defaults to 4N."""
    a = as_vector(seq)
    idx = np.asarray(passband_idx, dtype=int)
    if idx.size == 0:
        raise ValueError("passband index set is empty")
    dft_len = dft_len or 4 * a.size
    power = dft_power(a, dft_len)[idx]
    return float(np.sqrt(np.mean((float(gamma) * power - 1.0) ** 2)))


def stopband_leakage(seq, stopband_idx, dft_len: int | None = None) -> float:
    """Fraction of energy ``(1/N') * sum_{i in I_s} |DFT[i]|^2`` landing in the stopband."""
    a = as_vector(seq)
    dft_len = dft_len or 4 * a.size
    idx = np.asarray(stopband_idx, dtype=int)
    if idx.size == 0:
        return 0.0
    return float(np.sum(dft_power(a, dft_len)[idx]) / dft_len)


def phase_resolution(seq: RationalPhaseSequence) -> PhaseGrid:
    """Coarsest uniform grid ``1/P`` turns containing every phase of ``seq``."""
    if not isinstance(seq, RationalPhaseSequence):
        raise TypeError("phase resolution needs exact rational phases; float-rendered sequences are not accepted")
    return PhaseGrid.from_levels(lcm_denominators(seq.phases))


def gsc_resolution_formula(N: int, m: int, gamma: Fraction) -> PhaseGrid:
    """Closed-form grid for GSC with integer ``b``: ``P = Nq / gcd(Nq, m*p)`` for ``gamma = p/q``.

    Exact whenever ``N/m >= 2`` and ``N >= 3``. In the degenerate cases
    (e.g. ``m = N``) the phase set is too small to span the grid and the
    actual resolution can be coarser.
    """
    p, q = gamma.numerator, gamma.denominator
    return PhaseGrid.from_levels(N * q // math.gcd(N * q, m * p))


def gc_resolution_formula(N: int, gamma: Fraction) -> PhaseGrid:
    return gsc_resolution_formula(N, 1, gamma)


def mow_phase_resolution(params: MowParams) -> PhaseGrid:
    """Family-level phase grid of a Mow sequence.

    With integer ``f0`` it is half a step of ``2*pi/(N/m)`` when ``s`` is even
    and ``m`` odd, a full step otherwise. A particular member may use a
    coarser sub-grid. Non-integer ``f0`` falls back to the exact phases.
    """
    if any(f.denominator != 1 for f in params.f0):
        return phase_resolution(mow_phases(params))
    base = params.N // params.m
    if params.s % 2 == 0 and params.m % 2 == 1:
        return PhaseGrid.from_levels(2 * base)
    return PhaseGrid.from_levels(base)


def continuous_spectrum_model(model: ChirpModel, f):
    """Fourier transform of the step chirp ``c(t)`` as ``T`` weighted sincs.

    ``C(f) = sum_i exp(j*pi*[a*i^2 + 2(ab - f)i + ab - f]) * sinc(f - a(i + b))``
    with ``sinc(x) = sin(pi x)/(pi x)``. Scalar ``f`` gives a complex scalar.
    """
    a, b = float(model.a), float(model.b)
    f = np.asarray(f, dtype=float)
    i = np.arange(model.T).reshape((-1,) + (1,) * f.ndim)
    ab = a * b
    phase = np.pi * (a * i * i + 2 * (ab - f) * i + ab - f)
    out = np.sum(np.exp(1j * phase) * np.sinc(f - a * (i + b)), axis=0)
    return out if out.ndim else complex(out)
