"""Exact checks of the identities linking GSC, GC, DFT and Mow sequences,
plus exhaustive Mow-family enumeration ranked by ISL.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

import numpy as np

from .analysis import aperiodic_autocorr, isl, isl_batch
from .rational import divisors, is_square_free, mod1, square_free_split, units, wrap_u
from .seqcore import (
    GscParams,
    MowParams,
    RationalPhaseSequence,
    dft_codeword,
    gc_phases,
    gsc_phases,
    mow_phases,
    render,
)

F0_POLICIES = ("fixed-zero", "half-integers")
# beyond this length, only m = 1 Mow families are enumerated
MAX_N_FOR_M_GT_1 = 30


class ConstraintError(ValueError):
    """A GSC parameter set is outside the Mow-embeddable subfamily.

    ``constraint`` is ``"square-part"`` or ``"parity"``.
    """

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint} constraint violated: {message}")
        self.constraint = constraint


@dataclass(frozen=True)
class EquivalenceReport:
    kind: str
    lhs_params: dict
    rhs_params: dict
    max_phase_gap: Fraction
    verdict: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "lhs_params": self.lhs_params,
            "rhs_params": self.rhs_params,
            "max_phase_gap": self.max_phase_gap,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class MowFamilyQuery:
    N: int
    restrict_m_to_1: bool = True
    f0_policy: str = "fixed-zero"

    def __post_init__(self):
        if self.f0_policy not in F0_POLICIES:
            raise ValueError(f"f0_policy must be one of {F0_POLICIES}")
        if self.restrict_m_to_1:
            if not is_square_free(self.N):
                raise ValueError(f"N={self.N} is not square-free, so no m = 1 Mow family exists")
        else:
            _, m = square_free_split(self.N)
            if m > 1 and self.N > MAX_N_FOR_M_GT_1:
                raise ValueError(f"m > 1 families are only enumerated for N <= {MAX_N_FOR_M_GT_1}")

    @property
    def shape(self) -> tuple[int, int]:
        if self.restrict_m_to_1:
            return self.N, 1
        return square_free_split(self.N)


def phase_gap(lhs: RationalPhaseSequence, rhs: RationalPhaseSequence) -> Fraction:
    """Largest deviation (turns) of ``lhs - rhs`` from one global constant."""
    if lhs.N != rhs.N:
        return Fraction(1, 2)
    offset = mod1(lhs.phases[0] - rhs.phases[0])
    gap = Fraction(0)
    for x, y in zip(lhs.phases, rhs.phases):
        d = mod1(x - y - offset)
        gap = max(gap, min(d, 1 - d))
    return gap


def compare(kind: str, lhs: RationalPhaseSequence, rhs: RationalPhaseSequence) -> EquivalenceReport:
    gap = phase_gap(lhs, rhs)
    return EquivalenceReport(kind, lhs.params, rhs.params, gap, gap == 0)


def degenerate_gsc(params: GscParams) -> RationalPhaseSequence:
    """Full-band (``gamma = 1``) GSC sequence."""
    if params.gamma != 1:
        raise ValueError(f"degenerate GSC needs gamma = 1, got {params.gamma}")
    return gsc_phases(params)


def mow_params_for_gsc(params: GscParams) -> MowParams:
    """Mow parameters reproducing the full-band GSC sequence ``params``.

    Requires ``m`` to be the square part of ``N`` and ``b`` to be a
    half-odd integer (even ``s``) or an integer (odd ``s``).
    """
    if params.gamma != 1:
        raise ValueError("only gamma = 1 GSC sequences embed in the Mow family")
    N, m, b = params.N, params.m, params.b
    s, square_part = square_free_split(N)
    if m != square_part:
        raise ConstraintError(
            "square-part", f"m={m} must equal the square part {square_part} of N={N} (N = {s}*{square_part}^2)"
        )
    ls = range(m)
    if s % 2 == 0:
        if (2 * b).denominator != 1 or (2 * b).numerator % 2 == 0:
            raise ConstraintError("parity", f"s={s} is even so 2b must be an odd integer, got b={b}")
        shift = int((2 * b - 1) / 2)
        alpha = [1] * m
        beta = [shift * m + l for l in ls]
    else:
        if b.denominator != 1:
            raise ConstraintError("parity", f"s={s} is odd so b must be an integer, got b={b}")
        d = (s + 1) // 2
        alpha = [d] * m
        beta = [(2 * int(b) - 1) * d * m + l for l in ls]
    f0 = [b * l for l in ls]
    return MowParams(s, m, tuple(alpha), tuple(beta), tuple(f0))


def _b_grid_half(limit: int) -> list[Fraction]:
    return [Fraction(k, 2) for k in range(-2 * limit, 2 * limit + 1)]


def _admissible_bs(s: int, limit: int = 5) -> list[Fraction]:
    if s % 2 == 0:
        return [Fraction(k, 2) for k in range(-2 * limit + 1, 2 * limit, 2)]
    return [Fraction(k) for k in range(-limit, limit + 1)]


def iter_equivalence_checks(n_max: int) -> Iterator[EquivalenceReport]:
    """Yield one report per checked parameter tuple with ``N <= n_max``.

    Tuples covered, per length ``N``:

    * GSC with ``m = 1`` against GC, for ``gamma`` in ``{j/N}`` and
      ``N/(N+1)`` (for ``N > 1``) and ``b`` in ``{-3/2, 0, 1/2, 1, 7/3}``;
    * GSC with ``m = N, gamma = 1/N`` against the DFT codeword at
      ``2b/N mod [-1, 1)``, for ``b`` in ``{k/2 : |k| <= 2N}`` plus ``1/3``;
    * full-band GSC with ``m`` the square part of ``N`` against its Mow
      parameters, for every admissible ``b`` with ``|b| <= 5``.
    """
    gc_bs = [Fraction(-3, 2), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7, 3)]
    for N in range(1, n_max + 1):
        gammas = [Fraction(j, N) for j in range(1, N + 1)]
        if N > 1:
            gammas.append(Fraction(N, N + 1))
        for g in gammas:
            for b in gc_bs:
                yield compare("gsc<->gc", gsc_phases(GscParams(N, 1, g, b)), gc_phases(N, g, b))
        for b in _b_grid_half(N) + [Fraction(1, 3)]:
            lhs = gsc_phases(GscParams(N, N, Fraction(1, N), b))
            yield compare("gsc<->dft", lhs, dft_codeword(N, wrap_u(2 * b / N)))
        s, m = square_free_split(N)
        kind = "gsc<->mow-even-s" if s % 2 == 0 else "gsc<->mow-odd-s"
        for b in _admissible_bs(s):
            params = GscParams(N, m, 1, b)
            yield compare(kind, degenerate_gsc(params), mow_phases(mow_params_for_gsc(params)))


def verify_equivalences(n_max: int) -> list[EquivalenceReport]:
    return list(iter_equivalence_checks(n_max))


def corrupted_control(N: int = 50) -> EquivalenceReport:
    """Negative control: a Mow record whose beta table has two entries swapped."""
    s, m = square_free_split(N)
    b = Fraction(1, 2) if s % 2 == 0 else Fraction(1)
    params = GscParams(N, m, 1, b)
    good = mow_params_for_gsc(params)
    beta = list(good.beta)
    if m > 1:
        beta[0], beta[1] = beta[1], beta[0]
    else:
        beta[0] += 1
    bad = MowParams(good.s, good.m, good.alpha, tuple(beta), good.f0)
    return compare("gsc<->mow-corrupted", degenerate_gsc(params), mow_phases(bad))


def _permutation_lifts(s: int, m: int) -> list[tuple[int, ...]]:
    # beta tables l -> Z_{sm} with beta mod m a permutation of Z_m
    out = []
    for perm in itertools.permutations(range(m)):
        for lifts in itertools.product(range(s), repeat=m):
            out.append(tuple(p + m * t for p, t in zip(perm, lifts)))
    return out


def _f0_choices(query: MowFamilyQuery) -> list[Fraction]:
    s, m = query.shape
    if query.f0_policy == "fixed-zero":
        return [Fraction(0)]
    return [Fraction(j, 2) for j in range(2 * s * m)]


def family_size(query: MowFamilyQuery) -> int:
    """Closed-form member count: ``phi(s)^m * m! * s^m * (#f0)^m``."""
    s, m = query.shape
    n_units = len(units(s))
    n_f0 = len(_f0_choices(query))
    return n_units**m * math.factorial(m) * s**m * n_f0**m


def iter_mow_family(query: MowFamilyQuery) -> Iterator[MowParams]:
    s, m = query.shape
    alphas = list(itertools.product(units(s), repeat=m))
    betas = _permutation_lifts(s, m)
    f0s = list(itertools.product(_f0_choices(query), repeat=m))
    for alpha in alphas:
        for beta in betas:
            for f0 in f0s:
                yield MowParams(s, m, alpha, beta, f0)


def _mow_block_isl(block: list[MowParams]) -> np.ndarray:
    s, m = block[0].s, block[0].m
    N = s * m * m
    twice_c = 1 if s % 2 == 0 else 2
    n = np.arange(N)
    k, l = np.divmod(n, m)
    alpha = np.array([p.alpha for p in block], dtype=np.int64)[:, l]
    beta = np.array([p.beta for p in block], dtype=np.int64)[:, l]
    f0 = [[f for f in p.f0] for p in block]
    den = 2 * N * math.lcm(*(f.denominator for row in f0 for f in row))
    scale = den // (2 * N)
    twice_f0 = np.array([[int(2 * f * scale) for f in row] for row in f0], dtype=np.int64)[:, l]
    ksq = (k * k) % den
    num = (m * twice_c * alpha * ksq + 2 * beta * k) % den
    num = (m * ((num * scale) % den) + m * twice_f0) % den
    rows = np.exp(2j * np.pi * num / den) / np.sqrt(N)
    return isl_batch(rows)


def thread_count() -> int:
    raw = os.environ.get("GSC_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def enumerate_mow_isl(query: MowFamilyQuery, workers: int | None = None, block: int = 2048) -> list[tuple[MowParams, float]]:
    """All members of the Mow family for ``query`` with their ISL, best first.

    Blocks of members are evaluated concurrently; the final order is fixed by
    sorting on (ISL rounded to 12 decimals, alpha, beta, f0).
    """
    members = list(iter_mow_family(query))
    expected = family_size(query)
    if len(members) != expected:
        raise RuntimeError(f"enumerated {len(members)} members, expected {expected}")
    chunks = [members[i : i + block] for i in range(0, len(members), block)]
    workers = workers or thread_count()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_mow_block_isl, chunks))
    else:
        parts = [_mow_block_isl(c) for c in chunks]
    isls = np.concatenate(parts)
    results = [(p, float(v)) for p, v in zip(members, isls)]
    results.sort(key=lambda r: (round(r[1], 12), r[0].alpha, r[0].beta, r[0].f0))
    return results


def isl_vs_m_sweep(N: int, gamma, b) -> list[tuple[int, float]]:
    """ISL of the GSC sequence for every divisor ``m`` of ``N``, ordered by ``m``."""
    out = []
    for m in divisors(N):
        seq = render(gsc_phases(GscParams(N, m, gamma, b)))
        out.append((m, isl(aperiodic_autocorr(seq))))
    return out
