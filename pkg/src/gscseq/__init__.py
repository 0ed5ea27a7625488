"""Generalized step-chirp sequence toolkit.

Exact constructions of GSC, GC, DFT-codeword and Mow sequences, spectral and
correlation analysis, beam-sweep planning, and mechanical equivalence checks.
"""

from .analysis import (
    AutocorrProfile,
    PhaseGrid,
    SpectrumGrid,
    aperiodic_autocorr,
    continuous_spectrum_model,
    isl,
    mow_phase_resolution,
    passband_nrmse,
    periodic_autocorr,
    phase_resolution,
    power_spectrum,
    spectrum_variance,
    stopband_leakage,
)
from .equivalence import (
    EquivalenceReport,
    MowFamilyQuery,
    degenerate_gsc,
    enumerate_mow_isl,
    isl_vs_m_sweep,
    mow_params_for_gsc,
    verify_equivalences,
)
from .planner import (
    PassbandInterval,
    SweepPlan,
    beam_direction,
    classify_bins,
    make_sweep_plan,
    passband,
    solve_b,
)
from .seqcore import (
    ChirpModel,
    GscParams,
    MowParams,
    RationalPhaseSequence,
    dft_codeword,
    gc_phases,
    gsc,
    gsc_phases,
    mow_phases,
    render,
    sample_step_chirp,
)

__version__ = "0.1.0"
