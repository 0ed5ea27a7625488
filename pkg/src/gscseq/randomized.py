"""Seeded random draws of valid parameter records, for invariant suites."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .rational import divisors, is_square_free, units
from .seqcore import GscParams, MowParams


def random_gsc_params(rng: np.random.Generator, max_n: int = 512) -> GscParams:
    N = int(rng.integers(1, max_n + 1))
    m = int(rng.choice(divisors(N)))
    q = int(rng.integers(1, N + 1))
    p = int(rng.integers(1, q + 1))
    gamma = max(Fraction(p, q), Fraction(1, N))
    b = Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 7)))
    return GscParams(N, m, gamma, b)


def random_mow_params(rng: np.random.Generator, max_n: int = 200) -> MowParams:
    shapes = [
        (s, m)
        for m in range(1, int(max_n**0.5) + 1)
        for s in range(1, max_n // (m * m) + 1)
        if is_square_free(s)
    ]
    s, m = shapes[int(rng.integers(len(shapes)))]
    alpha = tuple(int(rng.choice(units(s))) for _ in range(m))
    perm = rng.permutation(m)
    beta = tuple(int(p) + m * int(rng.integers(s)) for p in perm)
    f0 = tuple(Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 5))) for _ in range(m))
    return MowParams(s, m, alpha, beta, f0)


def random_resolution_case(rng: np.random.Generator, max_n: int = 300) -> GscParams:
    """GSC draw with integer ``b`` where the closed-form phase grid applies (``N/m >= 2``, ``N >= 3``)."""
    while True:
        N = int(rng.integers(3, max_n + 1))
        choices = [d for d in divisors(N) if N // d >= 2]
        m = int(rng.choice(choices))
        q = int(rng.integers(1, 13))
        p = int(rng.integers(1, q + 1))
        gamma = Fraction(p, q)
        if gamma < Fraction(1, N):
            continue
        return GscParams(N, m, gamma, int(rng.integers(-30, 31)))
