import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gscseq.rational import divisors, wrap_u
from gscseq.seqcore import (
    ChirpModel,
    GscParams,
    MowParams,
    RationalPhaseSequence,
    dft_codeword,
    gc_phases,
    gsc,
    gsc_float,
    gsc_phases,
    mow_phases,
    render,
    sample_step_chirp,
)

F = Fraction


def step_chirp_samples(a: float, b: float, T: int, m: int) -> np.ndarray:
    """Brute-force sampler: integrate the piecewise-constant frequency step by step."""
    out = []
    for n in range(m * T):
        t = n / m
        phase = 0.0
        whole = math.floor(t)
        for i in range(whole):
            phase += a * (i + b)
        phase += a * (whole + b) * (t - whole)
        out.append(np.exp(2j * np.pi * phase))
    return np.array(out)


@st.composite
def gsc_params(draw, max_n=64):
    N = draw(st.integers(1, max_n))
    m = draw(st.sampled_from(divisors(N)))
    q = draw(st.integers(1, N))
    p = draw(st.integers(1, q))
    gamma = max(F(p, q), F(1, N))
    b = F(draw(st.integers(-30, 30)), draw(st.integers(1, 6)))
    return GscParams(N, m, gamma, b)


class TestGsc:
    def test_worked_example(self):
        seq = gsc(4, 2, 1, "1/2")
        assert seq.phases == (F(0), F(1, 4), F(1, 2), F(1, 4))
        np.testing.assert_allclose(render(seq), 0.5 * np.array([1, 1j, -1, 1j]), atol=1e-15)

    def test_worked_example_matches_brute_force_sampler(self):
        # a = m^2 gamma / N = 1, T = N/m = 2
        samples = step_chirp_samples(1.0, 0.5, 2, 2) / 2
        np.testing.assert_allclose(render(gsc(4, 2, 1, "1/2")), samples, atol=1e-12)

    @pytest.mark.parametrize("N,b", [(7, F(3)), (12, F(-5, 2)), (30, F(1, 3))])
    def test_full_step_is_linear_ramp(self, N, b):
        seq = gsc(N, N, F(1, N), b)
        assert seq.phases == tuple((b * n / N) % 1 for n in range(N))

    def test_m1_equals_gc_fig5_pair(self):
        assert gsc(50, 1, "1/2", 1).phases == gc_phases(50, "1/2", 1).phases

    @pytest.mark.parametrize(
        "kwargs,msg",
        [
            (dict(N=10, m=3, gamma=1, b=0), "divide"),
            (dict(N=10, m=2, gamma=F(1, 20), b=0), "gamma"),
            (dict(N=10, m=2, gamma=F(3, 2), b=0), "gamma"),
        ],
    )
    def test_rejects_invalid(self, kwargs, msg):
        with pytest.raises(ValueError, match=msg):
            GscParams(**kwargs)

    def test_rejects_float_parameters(self):
        with pytest.raises(TypeError):
            GscParams(8, 2, 0.5, 0)

    @given(gsc_params())
    def test_unimodular_and_reduced(self, params):
        seq = gsc_phases(params)
        assert all(0 <= p < 1 for p in seq.phases)
        a = render(seq)
        np.testing.assert_allclose(np.abs(a), 1 / math.sqrt(params.N), atol=1e-12)
        assert abs(np.sum(np.abs(a) ** 2) - 1) < 1e-12

    @given(gsc_params())
    def test_exact_and_repeatable(self, params):
        assert gsc_phases(params) == gsc_phases(params)

    @given(gsc_params())
    def test_closed_form_against_fraction_evaluation(self, params):
        N, m, g, b = params.N, params.m, params.gamma, params.b
        expected = []
        for n in range(N):
            k = n // m
            l = n - k * m
            expected.append((F(m, N) * g * (F(k * (k - 1), 2) * m + k * l + b * n)) % 1)
        assert gsc_phases(params).phases == tuple(expected)

    def test_float_path_matches_exact_for_rational_b(self):
        exact = render(gsc(60, 6, "1/3", "5/2"))
        np.testing.assert_allclose(gsc_float(60, 6, 1 / 3, 2.5), exact, atol=1e-10)

    def test_float_path_accepts_irrational_b(self):
        a = gsc_float(32, 4, 0.5, math.sqrt(2))
        np.testing.assert_allclose(np.abs(a), 1 / math.sqrt(32), atol=1e-12)


class TestGc:
    def test_hand_values(self):
        # gamma*n(n+2b-1)/(2N) with N=4, gamma=1, b=1/2 -> n^2/8
        assert gc_phases(4, 1, "1/2").phases == (F(0), F(1, 8), F(1, 2), F(1, 8))

    def test_length_two(self):
        assert gc_phases(2, 1, "1/2").phases == (F(0), F(1, 4))

    def test_rejects_gamma(self):
        with pytest.raises(ValueError):
            gc_phases(4, F(1, 8), 0)

    @given(gsc_params())
    def test_is_gsc_with_unit_step(self, params):
        lhs = gsc_phases(GscParams(params.N, 1, params.gamma, params.b))
        assert lhs.phases == gc_phases(params.N, params.gamma, params.b).phases


class TestDft:
    def test_broadside(self):
        np.testing.assert_allclose(render(dft_codeword(2, 0)), [2**-0.5, 2**-0.5])

    def test_quarter_turn_steps(self):
        assert dft_codeword(4, "1/2").phases == (F(0), F(1, 4), F(1, 2), F(3, 4))

    @pytest.mark.parametrize("u0", [F(1), F(-3, 2)])
    def test_range(self, u0):
        with pytest.raises(ValueError):
            dft_codeword(8, u0)

    @given(gsc_params())
    def test_degenerate_gsc_is_dft(self, params):
        N, b = params.N, params.b
        lhs = gsc_phases(GscParams(N, N, F(1, N), b))
        rhs = dft_codeword(N, wrap_u(2 * b / N))
        offsets = {(x - y) % 1 for x, y in zip(lhs.phases, rhs.phases)}
        assert len(offsets) == 1


class TestMow:
    def test_fig1_parameters_reduce(self):
        params = MowParams(2, 5, (1,) * 5, tuple(l - 25 for l in range(5)), tuple(F(-19, 2) * l for l in range(5)))
        assert params.beta == (5, 6, 7, 8, 9)
        assert all(0 <= f < 10 for f in params.f0)
        assert params.N == 50 and params.c == F(1, 2)
        assert mow_phases(params).N == 50

    def test_single_entry(self):
        seq = mow_phases(MowParams(1, 1, (1,), (0,), (F(1, 3),)))
        # phase = (m/N) * f0 = 1/3 with N = 1
        assert seq.phases == (F(1, 3),)

    def test_length_two_direct(self):
        seq = mow_phases(MowParams(2, 1, (1,), (1,), (0,)))
        # (1/2) * (k^2/2 + k): k=1 -> 3/4
        assert seq.phases == (F(0), F(3, 4))

    @pytest.mark.parametrize(
        "args,msg",
        [
            ((4, 1, (1,), (0,), (0,)), "square-free"),
            ((6, 1, (2,), (0,), (0,)), "coprime"),
            ((2, 2, (1, 1), (0, 2), (0, 0)), "permutation"),
            ((3, 2, (1,), (0, 1), (0, 0)), "entries"),
        ],
    )
    def test_rejects(self, args, msg):
        with pytest.raises(ValueError, match=msg):
            MowParams(*args)

    def test_matches_fraction_formula(self):
        params = MowParams(3, 2, (1, 2), (1, 4), (F(1, 2), F(-2, 3)))
        s, m, N = 3, 2, 12
        expected = []
        for n in range(N):
            k, l = divmod(n, m)
            xi = m * 1 * params.alpha[l] * k * k + params.beta[l] * k + params.f0[l]
            expected.append((F(m, N) * xi) % 1)
        assert mow_phases(params).phases == tuple(expected)


class TestRender:
    def test_quarter_turns(self):
        seq = RationalPhaseSequence((F(0), F(1, 4), F(1, 2), F(1, 4)), "gsc")
        np.testing.assert_allclose(render(seq), [0.5, 0.5j, -0.5, 0.5j], atol=1e-15)

    def test_zero_phases(self):
        seq = RationalPhaseSequence((F(0),) * 9, "dft")
        np.testing.assert_allclose(render(seq), np.full(9, 1 / 3))

    def test_phases_stored_reduced(self):
        seq = RationalPhaseSequence((F(5, 4), F(-1, 3)), "gc")
        assert seq.phases == (F(1, 4), F(2, 3))


class TestStepChirp:
    def test_fig2_model(self):
        seq = sample_step_chirp(ChirpModel(1, "1/2", 10), 1)
        assert seq.N == 100 and seq.params["m"] == 10
        assert seq.phases == gsc(100, 10, 1, "1/2").phases

    def test_quarter_slope(self):
        seq = sample_step_chirp(ChirpModel("1/4", 0, 2), "1/4")
        assert (seq.N, seq.params["m"]) == (4, 2)
        assert seq.phases == gsc(4, 2, "1/4", 0).phases

    def test_rejects_fractional_rate(self):
        # m = a*T/gamma = 1/2
        with pytest.raises(ValueError, match="not an integer"):
            sample_step_chirp(ChirpModel("1/4", 0, 2), 1)

    def test_nyquist_condition(self):
        with pytest.raises(ValueError, match="Nyquist"):
            ChirpModel("1/8", 0, 2)

    def test_against_brute_force_sampler(self):
        model = ChirpModel("3/4", "-1/3", 6)
        seq = sample_step_chirp(model, "1/2")
        m = seq.params["m"]
        expected = step_chirp_samples(0.75, -1 / 3, 6, m) / math.sqrt(seq.N)
        np.testing.assert_allclose(render(seq), expected, atol=1e-10)

    @given(
        st.integers(1, 12),
        st.integers(1, 8),
        st.integers(1, 6),
        st.fractions(min_value=-5, max_value=5, max_denominator=6),
    )
    def test_agrees_with_gsc(self, T, m, q, b):
        # choose gamma = 1/q and a = m*gamma/T so that a*T/gamma = m
        gamma = F(1, q)
        a = m * gamma / T
        if a * T * T < 1:
            return
        seq = sample_step_chirp(ChirpModel(a, b, T), gamma)
        assert seq.N == m * T
        assert seq.phases == gsc(m * T, m, gamma, b).phases
