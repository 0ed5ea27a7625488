"""Reproduction recipes and result bundles.

A recipe maps an :class:`ExperimentConfig` to a :class:`ResultBundle` of CSV
tables and a JSON summary. Table contents depend only on the config, so the
same config hash always gives byte-identical tables.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .analysis import (
    aperiodic_autocorr,
    isl,
    passband_nrmse,
    periodic_autocorr,
    phase_resolution,
    power_spectrum,
    spectrum_variance,
    stopband_leakage,
)
from .equivalence import (
    MowFamilyQuery,
    corrupted_control,
    enumerate_mow_isl,
    family_size,
    isl_vs_m_sweep,
    iter_equivalence_checks,
)
from .planner import (
    PassbandInterval,
    beam_direction,
    classify_bins,
    coverage_tiles,
    make_sweep_plan,
    passband,
    passband_energy_fraction,
    passband_fluctuation_db,
    solve_b,
    sweep_beampatterns,
    wrap_interval,
)
from .randomized import random_gsc_params, random_mow_params
from .rational import as_rational, divisors, fmt, wrap_u
from .seqcore import (
    GscParams,
    MowParams,
    RationalPhaseSequence,
    dft_codeword,
    from_params,
    gsc_phases,
    mow_phases,
    render,
)
from .serialize import dumps_json, write_table

EXPERIMENTS = ("fig1", "fig4", "fig5", "fig6", "custom")
FIG4_CONFIGS = ((Fraction(1, 2), 15), (Fraction(1, 5), 24), (Fraction(1, 7), 30), (Fraction(1, 13), 40))
FIG1_MOW = MowParams(2, 5, (1,) * 5, tuple(l - 25 for l in range(5)), tuple(Fraction(-19, 2) * l for l in range(5)))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    overrides: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.experiment_id not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment_id!r}; choose from {', '.join(EXPERIMENTS)}")

    def get(self, key: str, default=None):
        return self.overrides.get(key, default)

    def hash(self) -> str:
        doc = json.dumps(
            {"experiment_id": self.experiment_id, "overrides": self.overrides, "seed": self.seed},
            sort_keys=True,
            default=str,
        )
        return hashlib.sha256(doc.encode()).hexdigest()[:16]


@dataclass
class ResultBundle:
    tables: dict[str, str]
    summary: dict[str, Any]
    provenance: dict[str, Any] = field(default_factory=dict)

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in sorted(self.tables.items()):
            path = out / f"{name}.csv"
            path.write_text(text, newline="")
            written.append(path)
        for name, doc in (("summary", self.summary), ("provenance", self.provenance)):
            path = out / f"{name}.json"
            path.write_text(dumps_json(doc), newline="")
            written.append(path)
        return written


def _provenance(config: ExperimentConfig) -> dict:
    return {
        "toolkit_version": __version__,
        "config_hash": config.hash(),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def sequence_band(seq: RationalPhaseSequence) -> tuple[Fraction, PassbandInterval]:
    """Nominal ``(gamma, passband)`` for a sequence, from its parameter record.

    Sequences without a usable record are treated as full-band.
    """
    p = seq.params
    try:
        if seq.label == "gsc":
            params = GscParams(int(p["N"]), int(p["m"]), p["gamma"], p["b"])
            return params.gamma, passband(params)
        if seq.label == "gc":
            params = GscParams(int(p["N"]), 1, p["gamma"], p["b"])
            return params.gamma, passband(params)
        if seq.label == "dft":
            g = Fraction(1, seq.N)
            u0 = as_rational(p["u0"])
            return g, PassbandInterval(wrap_interval(u0 - g, 2 * g), (u0 - g) / 2, g)
    except (KeyError, TypeError, ValueError):
        pass
    one = Fraction(1)
    return one, PassbandInterval(wrap_interval(Fraction(-1), Fraction(2)), Fraction(-1, 2), one)


def analyze_sequence(seq: RationalPhaseSequence, dft_len: int | None = None, grid: int = 2048) -> ResultBundle:
    """Metric bundle for one sequence: ISL, NRMSE, leakage, phase grid, plus tables."""
    a = render(seq)
    dft_len = dft_len or 4 * seq.N
    gamma, band = sequence_band(seq)
    inside, outside = classify_bins(band, dft_len)
    profile = aperiodic_autocorr(a)
    periodic = periodic_autocorr(a)
    res = phase_resolution(seq)
    summary = {
        "family": seq.label,
        "N": seq.N,
        "gamma": gamma,
        "isl": isl(profile),
        "spectrum_variance": spectrum_variance(a),
        "nrmse": passband_nrmse(a, gamma, inside, dft_len) if inside.size else None,
        "leakage": stopband_leakage(a, outside, dft_len),
        "dft_len": dft_len,
        "resolution_turns": res.resolution_turns,
        "resolution_levels": res.levels,
        "max_periodic_sidelobe": float(np.max(np.abs(periodic.sidelobes()))) if seq.N > 1 else 0.0,
        "passband_segments": [list(s) for s in band.segments],
    }
    tables = {
        "autocorrelation": profile.to_csv(),
        "spectrum": power_spectrum(a, grid).to_csv(),
    }
    return ResultBundle(tables, summary)


def _fig1(config: ExperimentConfig) -> ResultBundle:
    grid = int(config.get("grid", 2048))
    N = int(config.get("dft_n", 10))
    centers = [Fraction(2 * i + 1, N) - 1 for i in range(N)]
    u = -1 + 2 * np.arange(grid) / grid
    dft_y = [power_spectrum(dft_codeword(N, u0), grid).y for u0 in centers]
    dft_table = write_table(None, ["u"] + [f"u0={fmt(c)}" for c in centers], zip(u, *dft_y))
    mow = mow_phases(FIG1_MOW)
    mow_y = power_spectrum(mow, grid).y
    periodic = periodic_autocorr(render(mow))
    summary = {
        "dft_n": N,
        "dft_beam_centers": centers,
        "dft_peak_gain": [float(np.max(y)) for y in dft_y],
        "mow_params": FIG1_MOW.as_dict(),
        "mow_isl": isl(aperiodic_autocorr(render(mow))),
        "mow_max_periodic_sidelobe": float(np.max(np.abs(periodic.sidelobes()))),
        "mow_mean_power": float(np.mean(mow_y)),
    }
    tables = {
        "fig1_dft_spectra": dft_table,
        "fig1_mow_spectrum": write_table(None, ["u", "y"], zip(u, mow_y)),
    }
    return ResultBundle(tables, summary)


def _fig4(config: ExperimentConfig) -> ResultBundle:
    N = int(config.get("n", 120))
    grid = int(config.get("grid", 2048))
    guard = as_rational(config.get("guard", f"2/{N}"))
    u = -1 + 2 * np.arange(grid) / grid
    tables, stats_rows, per_config = {}, [], []
    for gamma, m in FIG4_CONFIGS:
        plan = make_sweep_plan(N, m, gamma)
        ys = sweep_beampatterns(plan, u)
        name = f"fig4_gamma_1_{gamma.denominator}_beampattern"
        header = ["u"] + [f"beam_{i + 1}" for i in range(len(plan.beams))]
        tables[name] = write_table(None, header, zip(u, *ys))
        worst_p2t = worst_dev = 0.0
        min_energy = 1.0
        for i, beam in enumerate(plan.beams):
            params = plan.params(i)
            fl = passband_fluctuation_db(params, grid, guard)
            energy = passband_energy_fraction(params)
            worst_p2t = max(worst_p2t, fl["peak_to_trough_db"])
            worst_dev = max(worst_dev, fl["max_dev_from_nominal_db"])
            min_energy = min(min_energy, energy)
            stats_rows.append(
                (gamma, m, i + 1, beam.b, beam.u0, fl["peak_to_trough_db"], fl["max_dev_from_nominal_db"], energy)
            )
        per_config.append(
            {
                "gamma": gamma,
                "m": m,
                "beams": len(plan.beams),
                "tiles": coverage_tiles(plan),
                "max_peak_to_trough_db": worst_p2t,
                "max_dev_from_nominal_db": worst_dev,
                "min_energy_fraction": min_energy,
                "below_3db": worst_p2t < 3.0,
            }
        )
    tables["fig4_passband_stats"] = write_table(
        None,
        ["gamma", "m", "beam", "b", "u0", "peak_to_trough_db", "max_dev_from_nominal_db", "energy_fraction"],
        stats_rows,
    )
    summary = {"N": N, "guard": guard, "grid": grid, "configs": per_config}
    return ResultBundle(tables, summary)


def _fig5(config: ExperimentConfig) -> ResultBundle:
    N = int(config.get("n", 50))
    gamma = as_rational(config.get("gamma", "1/2"))
    b = as_rational(config.get("b", "1"))
    dft_len = int(config.get("dft_len", 4 * N))
    rows, metrics = [], {}
    for m in divisors(N):
        params = GscParams(N, m, gamma, b)
        seq = gsc_phases(params)
        a = render(seq)
        inside, outside = classify_bins(passband(params), dft_len)
        nrmse = passband_nrmse(a, gamma, inside, dft_len)
        leak = stopband_leakage(a, outside, dft_len)
        levels = phase_resolution(seq).levels
        rows.append((m, nrmse, leak, levels))
        metrics[m] = {"nrmse": nrmse, "leakage": leak, "resolution_levels": levels}
    tables = {"fig5_metrics": write_table(None, ["m", "nrmse", "leakage", "resolution_levels"], rows)}
    for m in (1, 10):
        if N % m == 0:
            seq = gsc_phases(GscParams(N, m, gamma, b))
            tables[f"fig5_phases_m{m}"] = write_table(
                None,
                ["n", "phase_num", "phase_den", "phase_rad"],
                ((n, p.numerator, p.denominator, 2 * np.pi * float(p)) for n, p in enumerate(seq.phases)),
            )
    summary = {"N": N, "gamma": gamma, "b": b, "dft_len": dft_len, "metrics": {str(k): v for k, v in metrics.items()}}
    if 1 in metrics and 10 in metrics:
        summary["m10_beats_m1"] = {
            "nrmse": metrics[10]["nrmse"] < metrics[1]["nrmse"],
            "leakage": metrics[10]["leakage"] < metrics[1]["leakage"],
            "resolution_ratio": Fraction(metrics[1]["resolution_levels"], metrics[10]["resolution_levels"]),
        }
    return ResultBundle(tables, summary)


def _fig6(config: ExperimentConfig) -> ResultBundle:
    N = int(config.get("n", 462))
    b = as_rational(config.get("b", "1/2"))
    sweep = isl_vs_m_sweep(N, 1, b)
    tables = {"fig6_isl_vs_m": write_table(None, ["m", "isl"], sweep)}
    summary: dict[str, Any] = {"N": N, "b": b, "isl_by_m": {str(m): v for m, v in sweep}}
    if str(config.get("family", "true")).lower() != "false":
        query = MowFamilyQuery(N)
        results = enumerate_mow_isl(query)
        tables["fig6_mow_family"] = write_table(
            None,
            ["alpha", "beta", "isl"],
            ((p.alpha[0], p.beta[0], v) for p, v in results),
        )
        best, best_isl = results[0]
        summary["family"] = {
            "count": len(results),
            "expected_count": family_size(query),
            "min_isl": best_isl,
            "argmin": best.as_dict(),
            "min_equals_m1_gsc": abs(best_isl - dict(sweep)[1]) < 1e-9,
        }
    return ResultBundle(tables, summary)


def _custom(config: ExperimentConfig) -> ResultBundle:
    family = config.get("family", "gsc")
    params = {k: v for k, v in config.overrides.items() if k not in ("family", "dft_len", "grid")}
    for key in ("alpha", "beta", "f0"):
        if isinstance(params.get(key), str):
            params[key] = params[key].split(",")
    if family == "mow":
        params["alpha"] = [int(x) for x in params["alpha"]]
        params["beta"] = [int(x) for x in params["beta"]]
    seq = from_params(family, params)
    dft_len = config.get("dft_len")
    return analyze_sequence(seq, int(dft_len) if dft_len else None, int(config.get("grid", 2048)))


RECIPES: dict[str, Callable[[ExperimentConfig], ResultBundle]] = {
    "fig1": _fig1,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "custom": _custom,
}


def reproduce(config: ExperimentConfig) -> ResultBundle:
    bundle = RECIPES[config.experiment_id](config)
    bundle.provenance = _provenance(config)
    return bundle


def invariant_checks(seed: int = 0, draws: int = 25) -> dict[str, bool]:
    """Quick randomized invariant suite used by the ``verify`` command."""
    rng = np.random.default_rng(seed)
    out = {}
    ok = True
    for _ in range(draws):
        a = render(gsc_phases(random_gsc_params(rng, 128)))
        ok &= bool(np.allclose(np.abs(a), 1 / np.sqrt(a.size), atol=1e-12))
        ok &= abs(spectrum_variance(a) - isl(aperiodic_autocorr(a))) < 1e-9
    out["unimodular_and_isl_variance"] = ok
    ok = True
    for _ in range(draws):
        a = render(mow_phases(random_mow_params(rng, 200)))
        side = periodic_autocorr(a).sidelobes()
        ok &= side.size == 0 or float(np.max(np.abs(side))) < 1e-9
    out["mow_perfect_periodic"] = ok
    ok = True
    for _ in range(draws):
        params = random_gsc_params(rng, 128)
        target = wrap_u(Fraction(int(rng.integers(-1000, 1000)), int(rng.integers(1, 50))))
        b = solve_b(params.N, params.m, params.gamma, target)
        ok &= beam_direction(GscParams(params.N, params.m, params.gamma, b)) == target
    out["solve_b_round_trip"] = ok
    return out


def verification_report(n_max: int, seed: int = 0, inject_fault: bool = False) -> dict:
    reports = list(iter_equivalence_checks(n_max))
    if inject_fault:
        reports.append(corrupted_control())
    failures = [r.as_dict() for r in reports if not r.verdict]
    by_kind: dict[str, int] = {}
    for r in reports:
        by_kind[r.kind] = by_kind.get(r.kind, 0) + 1
    invariants = invariant_checks(seed)
    return {
        "n_max": n_max,
        "checked": len(reports),
        "by_kind": dict(sorted(by_kind.items())),
        "failures": failures,
        "invariants": invariants,
        "passed": not failures and all(invariants.values()),
    }
