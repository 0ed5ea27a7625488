import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from gscseq.analysis import aperiodic_autocorr, isl
from gscseq.equivalence import (
    ConstraintError,
    MowFamilyQuery,
    compare,
    corrupted_control,
    degenerate_gsc,
    enumerate_mow_isl,
    family_size,
    isl_vs_m_sweep,
    iter_mow_family,
    mow_params_for_gsc,
    phase_gap,
    verify_equivalences,
)
from gscseq.rational import is_square_free, square_free_split
from gscseq.seqcore import GscParams, MowParams, RationalPhaseSequence, dft_codeword, gsc, mow_phases, render
from gscseq.serialize import write_table

F = Fraction


def brute_family(s: int, m: int, f0s) -> set:
    """Independent generator: filter every (alpha, beta, f0) table by the Mow rules."""
    out = set()
    alphas = [a for a in range(1, max(s, 2)) if math.gcd(a, s) == 1]
    for alpha in itertools.product(alphas, repeat=m):
        for beta in itertools.product(range(s * m), repeat=m):
            if sorted(x % m for x in beta) != list(range(m)):
                continue
            for f0 in itertools.product(f0s, repeat=m):
                out.add((alpha, beta, f0))
    return out


class TestPhaseGap:
    def test_global_offset_ignored(self):
        a = RationalPhaseSequence((F(0), F(1, 4), F(1, 2)), "gsc")
        b = RationalPhaseSequence((F(1, 3), F(7, 12), F(5, 6)), "gc")
        assert phase_gap(a, b) == 0

    def test_gap_is_centred(self):
        a = RationalPhaseSequence((F(0), F(0)), "gsc")
        b = RationalPhaseSequence((F(0), F(9, 10)), "gc")
        assert phase_gap(a, b) == F(1, 10)

    def test_length_mismatch(self):
        a = RationalPhaseSequence((F(0),), "gsc")
        b = RationalPhaseSequence((F(0), F(0)), "gc")
        assert not compare("x", a, b).verdict


class TestMowParamsForGsc:
    def test_even_branch_example(self):
        mp = mow_params_for_gsc(GscParams(50, 5, 1, F(1, 2)))
        assert (mp.s, mp.m, mp.c) == (2, 5, F(1, 2))
        assert mp.alpha == (1,) * 5
        assert mp.beta == tuple(range(5))
        assert mp.f0 == tuple(F(l, 2) for l in range(5))
        assert phase_gap(degenerate_gsc(GscParams(50, 5, 1, F(1, 2))), mow_phases(mp)) == 0

    def test_odd_branch_example(self):
        params = GscParams(12, 2, 1, 1)
        mp = mow_params_for_gsc(params)
        # d = 2, beta(l) = (2b - 1) d m + l = 4 + l
        assert mp.alpha == (2, 2)
        assert mp.beta == (4, 5)
        assert mp.f0 == (0, 1)
        assert phase_gap(degenerate_gsc(params), mow_phases(mp)) == 0

    def test_square_part_constraint(self):
        with pytest.raises(ConstraintError) as info:
            mow_params_for_gsc(GscParams(462, 21, 1, F(1, 2)))
        assert info.value.constraint == "square-part"

    @pytest.mark.parametrize("N,m,b", [(50, 5, F(1)), (12, 2, F(1, 2)), (3, 1, F(1, 3))])
    def test_parity_constraint(self, N, m, b):
        with pytest.raises(ConstraintError) as info:
            mow_params_for_gsc(GscParams(N, m, 1, b))
        assert info.value.constraint == "parity"

    def test_rejects_narrow_band(self):
        with pytest.raises(ValueError):
            degenerate_gsc(GscParams(8, 2, F(1, 2), 0))

    def test_degenerate_is_gsc(self):
        params = GscParams(462, 1, 1, F(1, 2))
        assert degenerate_gsc(params) == gsc(462, 1, 1, "1/2")

    def test_exact_over_small_grid(self):
        for s in [k for k in range(1, 13) if is_square_free(k)]:
            for m in range(1, 5):
                N = s * m * m
                bs = [F(k, 2) for k in range(-9, 10, 2)] if s % 2 == 0 else [F(k) for k in range(-5, 6)]
                for b in bs:
                    params = GscParams(N, m, 1, b)
                    assert phase_gap(degenerate_gsc(params), mow_phases(mow_params_for_gsc(params))) == 0


class TestVerify:
    def test_small_run_covers_every_kind(self):
        reports = verify_equivalences(12)
        assert all(r.verdict for r in reports)
        assert {r.kind for r in reports} == {"gsc<->gc", "gsc<->dft", "gsc<->mow-even-s", "gsc<->mow-odd-s"}

    def test_dft_example(self):
        lhs = gsc(50, 50, "1/50", "25/2")
        assert compare("gsc<->dft", lhs, dft_codeword(50, F(1, 2))).verdict

    def test_corrupted_control(self):
        report = corrupted_control()
        assert not report.verdict and report.max_phase_gap > 0

    def test_report_dict(self):
        doc = corrupted_control().as_dict()
        assert set(doc) == {"kind", "lhs_params", "rhs_params", "max_phase_gap", "verdict"}


class TestFamily:
    def test_n6_count(self):
        query = MowFamilyQuery(6)
        assert family_size(query) == 2 * 6
        assert len(enumerate_mow_isl(query)) == 12

    def test_not_square_free(self):
        with pytest.raises(ValueError, match="square-free"):
            MowFamilyQuery(4)

    def test_large_m_gt_1_refused(self):
        with pytest.raises(ValueError):
            MowFamilyQuery(50, restrict_m_to_1=False)

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            MowFamilyQuery(6, f0_policy="all")

    @pytest.mark.parametrize("N", [k for k in range(1, 31) if is_square_free(k)])
    def test_completeness_square_free(self, N):
        query = MowFamilyQuery(N)
        members = {(p.alpha, p.beta, p.f0) for p in iter_mow_family(query)}
        assert len(members) == family_size(query)
        assert members == brute_family(N, 1, [F(0)])

    @pytest.mark.parametrize("N", [4, 8, 9, 12, 18])
    def test_completeness_with_square_part(self, N):
        query = MowFamilyQuery(N, restrict_m_to_1=False)
        s, m = square_free_split(N)
        members = {(p.alpha, p.beta, p.f0) for p in iter_mow_family(query)}
        assert len(members) == family_size(query)
        assert members == brute_family(s, m, [F(0)])

    def test_completeness_half_integers(self):
        query = MowFamilyQuery(6, f0_policy="half-integers")
        members = {(p.alpha, p.beta, p.f0) for p in iter_mow_family(query)}
        assert len(members) == family_size(query) == 2 * 6 * 12
        assert members == brute_family(6, 1, [F(j, 2) for j in range(12)])

    def test_f0_shift_leaves_isl_unchanged(self):
        rng = np.random.default_rng(3)
        for p in list(iter_mow_family(MowFamilyQuery(8, restrict_m_to_1=False)))[:20]:
            c = F(int(rng.integers(0, 7)), 7)
            shifted = MowParams(p.s, p.m, p.alpha, p.beta, tuple(f + c for f in p.f0))
            base = isl(aperiodic_autocorr(render(mow_phases(p))))
            assert abs(isl(aperiodic_autocorr(render(mow_phases(shifted)))) - base) < 1e-12

    def test_fast_kernel_against_direct(self):
        results = enumerate_mow_isl(MowFamilyQuery(210))
        rng = np.random.default_rng(0)
        picks = rng.choice(len(results), size=max(1, len(results) // 100), replace=False)
        for i in picks:
            p, value = results[i]
            direct = isl(aperiodic_autocorr(render(mow_phases(p)), method="direct"))
            assert abs(value - direct) < 1e-10

    def test_mixed_f0_block(self):
        results = enumerate_mow_isl(MowFamilyQuery(12, restrict_m_to_1=False, f0_policy="half-integers"), block=97)
        rng = np.random.default_rng(1)
        for i in rng.choice(len(results), size=40, replace=False):
            p, value = results[i]
            assert abs(value - isl(aperiodic_autocorr(render(mow_phases(p)), method="direct"))) < 1e-10

    def test_sorted_and_deterministic(self):
        query = MowFamilyQuery(30)
        serial = enumerate_mow_isl(query, workers=1, block=7)
        parallel = enumerate_mow_isl(query, workers=4, block=7)

        def table(res):
            return write_table(None, ["alpha", "beta", "isl"], ((p.alpha[0], p.beta[0], v) for p, v in res))

        assert table(serial) == table(parallel)
        values = [v for _, v in serial]
        assert all(round(x, 12) <= round(y, 12) for x, y in zip(values, values[1:]))

    def test_n30_minimum_is_m1_gsc(self):
        best = enumerate_mow_isl(MowFamilyQuery(30))[0][1]
        ref = isl(aperiodic_autocorr(render(gsc(30, 1, 1, "1/2"))))
        assert best <= ref + 1e-12


class TestIslSweep:
    def test_ordered_by_divisor(self):
        sweep = isl_vs_m_sweep(12, 1, F(1, 2))
        assert [m for m, _ in sweep] == [1, 2, 3, 4, 6, 12]

    @pytest.mark.parametrize("N", [5, 12, 40])
    def test_full_step_is_constant_sequence(self, N):
        value = dict(isl_vs_m_sweep(N, 1, F(1, 2)))[N]
        expected = 2 * sum((1 - t / N) ** 2 for t in range(1, N))
        assert abs(value - expected) < 1e-9
