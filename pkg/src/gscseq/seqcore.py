"""Sequence constructions: GSC, GC, DFT codeword and Mow.

Every constructor returns a :class:`RationalPhaseSequence` whose phases are
exact fractions of a turn in ``[0, 1)``; :func:`render` turns one into a
unit-energy complex vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .rational import RationalLike, as_rational, is_square_free, mod1

FAMILIES = ("gsc", "gc", "dft", "mow")


@dataclass(frozen=True)
class GscParams:
    """Parameters of a generalized step-chirp sequence.

    ``N`` is the length, ``m`` the step length (must divide ``N``), ``gamma``
    the normalized bandwidth in ``[1/N, 1]`` and ``b`` the frequency offset.
    """

    N: int
    m: int
    gamma: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_rational(self.gamma))
        object.__setattr__(self, "b", as_rational(self.b))
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if self.N % self.m:
            raise ValueError(f"m must divide N (m={self.m}, N={self.N})")
        _check_gamma(self.N, self.gamma)

    def as_dict(self) -> dict[str, Any]:
        return {"N": self.N, "m": self.m, "gamma": self.gamma, "b": self.b}


@dataclass(frozen=True)
class MowParams:
    """Parameters of a Mow sequence of length ``s * m**2``.

    ``beta`` is reduced modulo ``s*m`` and ``f0`` modulo ``s*m`` (i.e. ``N/m``)
    on construction, so equal sequences have equal parameter records.
    """

    s: int
    m: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    f0: tuple[Fraction, ...]

    def __post_init__(self):
        s, m = self.s, self.m
        if not isinstance(s, int) or s < 1 or not is_square_free(s):
            raise ValueError(f"s must be a positive square-free integer, got {s!r}")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"m must be a positive integer, got {m!r}")
        alpha = tuple(int(a) for a in self.alpha)
        beta = tuple(int(x) % (s * m) for x in self.beta)
        f0 = tuple(mod_period(as_rational(x), s * m) for x in self.f0)
        for name, table in (("alpha", alpha), ("beta", beta), ("f0", f0)):
            if len(table) != m:
                raise ValueError(f"{name} must have m={m} entries, got {len(table)}")
        top = max(s - 1, 1)
        for l, a in enumerate(alpha):
            if not 1 <= a <= top or math.gcd(a, s) != 1:
                raise ValueError(
                    f"alpha[{l}]={a} must lie in 1..{top} and be coprime to s={s}"
                )
        if sorted(x % m for x in beta) != list(range(m)):
            raise ValueError("beta mod m must be a permutation of 0..m-1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "f0", f0)

    @property
    def N(self) -> int:
        return self.s * self.m * self.m

    @property
    def c(self) -> Fraction:
        return Fraction(1, 2) if self.s % 2 == 0 else Fraction(1)

    def as_dict(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "m": self.m,
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "f0": list(self.f0),
        }


@dataclass(frozen=True)
class ChirpModel:
    """Step-frequency chirp ``f(t) = a(floor(t) + b)`` on ``0 <= t <= T``."""

    a: Fraction
    b: Fraction
    T: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if self.a <= 0:
            raise ValueError("chirp slope a must be positive")
        if not isinstance(self.T, int) or self.T < 1:
            raise ValueError("T must be a positive integer")
        if self.a * self.T**2 < 1:
            raise ValueError("Nyquist sampling number a*T^2 must be >= 1")

    @property
    def f_low(self) -> Fraction:
        return self.a * (self.b - Fraction(1, 2))

    @property
    def f_high(self) -> Fraction:
        return self.a * (self.b - Fraction(1, 2) + self.T)

    def frequency(self, t: float) -> float:
        return float(self.a) * (math.floor(t) + float(self.b))


@dataclass(frozen=True)
class RationalPhaseSequence:
    """Unimodular sequence with entry ``n`` equal to ``exp(2j*pi*phases[n]) / sqrt(N)``."""

    phases: tuple[Fraction, ...]
    label: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.label not in FAMILIES:
            raise ValueError(f"unknown family label {self.label!r}")
        if not self.phases:
            raise ValueError("a sequence needs at least one entry")
        object.__setattr__(self, "phases", tuple(mod1(as_rational(p)) for p in self.phases))

    @property
    def N(self) -> int:
        return len(self.phases)

    def __len__(self) -> int:
        return len(self.phases)


def mod_period(x: Fraction, period: int) -> Fraction:
    return x - period * math.floor(x / period)


def _check_gamma(N: int, gamma: Fraction) -> None:
    if not Fraction(1, N) <= gamma <= 1:
        raise ValueError(f"gamma must lie in [1/N, 1] = [1/{N}, 1], got {gamma}")


def _gsc_phase_list(N: int, m: int, gamma: Fraction, b: Fraction) -> list[Fraction]:
    # phase = m*gamma*(k(k-1)m/2 + k*l + b*n) / N, evaluated over one common
    # denominator so only one Fraction is built per entry
    p, q = gamma.numerator, gamma.denominator
    r, t = b.numerator, b.denominator
    den = 2 * t * q * N
    out = []
    for n in range(N):
        k, l = divmod(n, m)
        twice_x = k * (k - 1) * m * t + 2 * k * l * t + 2 * r * n
        out.append(Fraction((m * p * twice_x) % den, den))
    return out


def gsc_phases(params: GscParams) -> RationalPhaseSequence:
    """Exact phases of the GSC sequence described by ``params``.

    With ``k = n // m`` and ``l = n % m`` the phase of entry ``n`` in turns is
    ``(m/N) * gamma * (k(k-1)m/2 + k*l + b*n) mod 1``.
    """
    phases = _gsc_phase_list(params.N, params.m, params.gamma, params.b)
    return RationalPhaseSequence(tuple(phases), "gsc", params.as_dict())


def gsc(N: int, m: int, gamma: RationalLike, b: RationalLike) -> RationalPhaseSequence:
    return gsc_phases(GscParams(N, m, gamma, b))


def gc_phases(N: int, gamma: RationalLike, b: RationalLike) -> RationalPhaseSequence:
    """Generalized chirp: phase ``gamma * n(n + 2b - 1) / (2N) mod 1``."""
    gamma, b = as_rational(gamma), as_rational(b)
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer")
    _check_gamma(N, gamma)
    p, q = gamma.numerator, gamma.denominator
    r, t = b.numerator, b.denominator
    den = 2 * N * q * t
    phases = tuple(Fraction((p * n * (n * t + 2 * r - t)) % den, den) for n in range(N))
    return RationalPhaseSequence(phases, "gc", {"N": N, "gamma": gamma, "b": b})


def dft_codeword(N: int, u0: RationalLike) -> RationalPhaseSequence:
    """Linear-phase beamformer pointing at ``u0``; entry n is ``exp(j*pi*n*u0)/sqrt(N)``."""
    u0 = as_rational(u0)
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer")
    if not -1 <= u0 < 1:
        raise ValueError(f"u0 must lie in [-1, 1), got {u0}")
    phases = tuple(mod1(u0 * n / 2) for n in range(N))
    return RationalPhaseSequence(phases, "dft", {"N": N, "u0": u0})


def mow_phases(params: MowParams) -> RationalPhaseSequence:
    """Exact phases of a Mow sequence.

    For ``n = k*m + l`` the phase in turns is
    ``(m/N) * (m*c(s)*alpha[l]*k**2 + beta[l]*k + f0[l]) mod 1``, with
    ``c(s) = 1/2`` for even ``s`` and 1 for odd ``s``.
    """
    s, m, N = params.s, params.m, params.N
    twice_c = 1 if s % 2 == 0 else 2
    f_den = math.lcm(*(f.denominator for f in params.f0))
    den = 2 * N * f_den
    f_num = [2 * f_den * f.numerator // f.denominator for f in params.f0]
    phases = []
    for n in range(N):
        k, l = divmod(n, m)
        x = (m * twice_c * params.alpha[l] * k * k + 2 * params.beta[l] * k) * f_den + f_num[l]
        phases.append(Fraction((m * x) % den, den))
    return RationalPhaseSequence(tuple(phases), "mow", params.as_dict())


def render(seq: RationalPhaseSequence) -> np.ndarray:
    """Complex rendering ``exp(2j*pi*phase) / sqrt(N)`` as a numpy vector."""
    turns = np.array([float(p) for p in seq.phases])
    return np.exp(2j * np.pi * turns) / np.sqrt(seq.N)


def gsc_float(N: int, m: int, gamma: float, b: float) -> np.ndarray:
    """Floating-point GSC rendering for real-valued (possibly irrational) ``b``.

    This path has no exact phases, so phase-resolution queries do not apply.
    """
    if N % m:
        raise ValueError(f"m must divide N (m={m}, N={N})")
    if not 1.0 / N <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [1/N, 1], got {gamma}")
    n = np.arange(N)
    k, l = np.divmod(n, m)
    turns = m * gamma * (k * (k - 1) * m / 2 + k * l + b * n) / N
    return np.exp(2j * np.pi * np.mod(turns, 1.0)) / np.sqrt(N)


def sample_step_chirp(model: ChirpModel, gamma: RationalLike) -> RationalPhaseSequence:
    """Sample the step chirp at rate ``m = a*T/gamma`` and return the exact phases.

    Phases are computed from the sampled-signal form
    ``a*k*(k-1+2b)/2 + a*(k+b)*l/m`` (turns), independently of
    :func:`gsc_phases`; the result carries the induced GSC parameters.
    """
    gamma = as_rational(gamma)
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    rate = model.a * model.T / gamma
    if rate.denominator != 1:
        raise ValueError(f"sampling rate m = a*T/gamma = {rate} is not an integer")
    m = int(rate)
    N = m * model.T
    a, b = model.a, model.b
    phases = []
    for n in range(N):
        k, l = divmod(n, m)
        phases.append(mod1(a * k * (k - 1 + 2 * b) / 2 + a * (k + b) * l / m))
    params = GscParams(N, m, gamma, b)
    return RationalPhaseSequence(tuple(phases), "gsc", params.as_dict())


def from_params(family: str, params: dict) -> RationalPhaseSequence:
    """Rebuild a sequence from its family tag and parameter record."""
    if family == "gsc":
        return gsc_phases(GscParams(int(params["N"]), int(params["m"]), params["gamma"], params["b"]))
    if family == "gc":
        return gc_phases(int(params["N"]), params["gamma"], params["b"])
    if family == "dft":
        return dft_codeword(int(params["N"]), params["u0"])
    if family == "mow":
        return mow_phases(
            MowParams(
                int(params["s"]),
                int(params["m"]),
                tuple(params["alpha"]),
                tuple(params["beta"]),
                tuple(params["f0"]),
            )
        )
    raise ValueError(f"unknown family {family!r}")
