"""Passbands, beam directions and beam-sweep plans for GSC codebooks.

Everything public speaks u-units (``u = omega/pi``) and exact rationals.
Passbands are half-open: ``[left, right)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import SpectrumGrid, beampattern, dft_power, power_spectrum
from .rational import RationalLike, as_rational, wrap_u
from .seqcore import GscParams, gsc_phases, render

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PassbandInterval:
    """Passband of width ``2*gamma`` in u, wrapped into [-1, 1).

    ``omega0`` is the left edge of the digital-frequency passband in turns
    (radians / 2pi), before wrapping.
    """

    segments: tuple[tuple[Fraction, Fraction], ...]
    omega0: Fraction
    width_turns: Fraction

    @property
    def left(self) -> Fraction:
        return wrap_u(2 * self.omega0)

    @property
    def center(self) -> Fraction:
        return wrap_u(2 * self.omega0 + self.width_turns)

    def contains(self, u: Fraction) -> bool:
        u = wrap_u(u)
        return any(lo <= u < hi for lo, hi in self.segments)

    def contains_float(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        u = u - 2 * np.floor((u + 1) / 2)
        mask = np.zeros(u.shape, dtype=bool)
        for lo, hi in self.segments:
            mask |= (u >= float(lo)) & (u < float(hi))
        return mask


@dataclass(frozen=True)
class Beam:
    b: Fraction
    u0: Fraction
    passband: PassbandInterval


@dataclass(frozen=True)
class SweepPlan:
    N: int
    m: int
    gamma: Fraction
    beams: tuple[Beam, ...]

    def params(self, i: int) -> GscParams:
        return GscParams(self.N, self.m, self.gamma, self.beams[i].b)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "m": self.m,
            "gamma": self.gamma,
            "beams": [
                {"b": beam.b, "u0": beam.u0, "segments": [list(s) for s in beam.passband.segments]}
                for beam in self.beams
            ],
        }


def wrap_interval(left: Fraction, width: Fraction) -> tuple[tuple[Fraction, Fraction], ...]:
    """Split ``[left, left + width)`` (u-units, ``width <= 2``) into pieces inside [-1, 1)."""
    if width >= 2:
        return ((Fraction(-1), Fraction(1)),)
    lo = wrap_u(left)
    hi = lo + width
    if hi <= 1:
        return ((lo, hi),)
    return ((lo, Fraction(1)), (Fraction(-1), hi - 2))


def beam_direction(params: GscParams) -> Fraction:
    """Beam centre ``u0 = (2/N)*m*gamma*(b - 1/2) + gamma`` reduced into [-1, 1)."""
    N, m, g, b = params.N, params.m, params.gamma, params.b
    return wrap_u(Fraction(2, N) * m * g * (b - HALF) + g)


def passband(params: GscParams) -> PassbandInterval:
    N, m, g, b = params.N, params.m, params.gamma, params.b
    omega0 = Fraction(m, N) * g * (b - HALF)
    return PassbandInterval(wrap_interval(2 * omega0, 2 * g), omega0, g)


def solve_b(N: int, m: int, gamma: RationalLike, target_u0: RationalLike) -> Fraction:
    """Smallest-magnitude ``b`` steering the beam to ``target_u0``.

    Candidates are ``1/2 + N*(target - gamma + 2t)/(2*m*gamma)`` for integer
    ``t``; ties go to the positive ``b``.
    """
    gamma, target = as_rational(gamma), as_rational(target_u0)
    if not -1 <= target < 1:
        raise ValueError(f"target u0 must lie in [-1, 1), got {target}")
    base = HALF + N * (target - gamma) / (2 * m * gamma)
    step = Fraction(N) / (m * gamma)
    t0 = math.floor(-base / step)
    candidates = [base + t * step for t in (t0, t0 + 1)]
    return min(candidates, key=lambda b: (abs(b), -b))


def beam_centers(gamma: Fraction) -> list[Fraction]:
    count = _beam_count(gamma)
    return [(2 * i - 1) * gamma - 1 for i in range(1, count + 1)]


def _beam_count(gamma: Fraction) -> int:
    if gamma <= 0 or gamma.numerator != 1:
        raise ValueError(f"gamma must be 1/integer for a full sweep, got {gamma}")
    return gamma.denominator


def make_sweep_plan(N: int, m: int, gamma: RationalLike) -> SweepPlan:
    """Contiguous sweep of [-1, 1) with ``1/gamma`` beams of width ``2*gamma``."""
    gamma = as_rational(gamma)
    _beam_count(gamma)
    beams = []
    for u0 in beam_centers(gamma):
        params = GscParams(N, m, gamma, solve_b(N, m, gamma, u0))
        beams.append(Beam(params.b, beam_direction(params), passband(params)))
    return SweepPlan(N, m, gamma, tuple(beams))


def classify_bins(band: PassbandInterval, dft_len: int) -> tuple[np.ndarray, np.ndarray]:
    """Split DFT bins into passband and stopband index arrays.

    Bin ``i`` sits at ``u_i = 2i/dft_len`` reduced into [-1, 1); membership is
    decided in exact arithmetic with half-open segments.
    """
    if dft_len < 1:
        raise ValueError("dft_len must be positive")
    inside = [band.contains(Fraction(2 * i, dft_len)) for i in range(dft_len)]
    idx = np.arange(dft_len)
    mask = np.array(inside, dtype=bool)
    return idx[mask], idx[~mask]


def label_spectrum(grid: SpectrumGrid, band: PassbandInterval) -> SpectrumGrid:
    """Copy of ``grid`` with passband/stopband sets assigned from ``band``."""
    inside = [band.contains(Fraction(-1) + Fraction(2 * i, grid.grid_size)) for i in range(grid.grid_size)]
    mask = np.array(inside, dtype=bool)
    idx = np.arange(grid.grid_size)
    return SpectrumGrid(grid.grid_size, grid.u, grid.y, idx[mask], idx[~mask])


def guarded_band(band: PassbandInterval, guard: Fraction) -> PassbandInterval | None:
    """Shrink ``band`` by ``guard`` (u-units) at both edges; None if nothing is left."""
    width = 2 * band.width_turns - 2 * guard
    if width <= 0:
        return None
    left = 2 * band.omega0 + guard
    return PassbandInterval(wrap_interval(left, width), band.omega0 + guard / 2, width / 2)


def passband_fluctuation_db(params: GscParams, grid_size: int = 2048, guard: Fraction | None = None) -> dict:
    """Peak-to-trough ripple (dB) of ``y(u)`` inside the guard-banded passband.

    The guard defaults to ``2/N`` at each edge. Also reports the largest
    deviation from the nominal level ``1/gamma`` in dB.
    """
    guard = Fraction(2, params.N) if guard is None else guard
    band = guarded_band(passband(params), guard)
    if band is None:
        raise ValueError("guard band swallows the whole passband")
    grid = power_spectrum(gsc_phases(params), grid_size)
    y = grid.y[band.contains_float(grid.u)]
    nominal = float(params.gamma) * y
    return {
        "peak_to_trough_db": float(10 * np.log10(y.max() / y.min())),
        "max_dev_from_nominal_db": float(np.max(np.abs(10 * np.log10(nominal)))),
        "min": float(y.min()),
        "max": float(y.max()),
    }


def passband_energy_fraction(params: GscParams, dft_len: int | None = None) -> float:
    dft_len = dft_len or 8 * params.N
    power = dft_power(render(gsc_phases(params)), dft_len)
    inside, _ = classify_bins(passband(params), dft_len)
    return float(power[inside].sum() / power.sum())


def coverage_tiles(plan: SweepPlan) -> bool:
    """Exact check that the beams' segments tile [-1, 1) with no gaps or overlaps."""
    pieces = sorted(seg for beam in plan.beams for seg in beam.passband.segments)
    cursor = Fraction(-1)
    for lo, hi in pieces:
        if lo != cursor or hi <= lo:
            return False
        cursor = hi
    return cursor == 1


def sweep_beampatterns(plan: SweepPlan, u: np.ndarray) -> np.ndarray:
    """``y(u)`` for every beam of ``plan``; shape ``(len(plan.beams), len(u))``."""
    return np.vstack([beampattern(gsc_phases(plan.params(i)), u) for i in range(len(plan.beams))])
