"""Invariant battery comparing the closed forms, the linear solves and the
first-order oracle. Every check reports its worst deviation and tolerance."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bound import find_bound_states, parity_split_cp0, r0_bound_check
from .core import DeltaConvention, ModelParams, charge_conjugate, chiral_transform
from .figures import FIG2_CP, FIG3_SETS, fig2_rows
from .oracle import (
    bound_normalization,
    bound_spinor,
    oracle_bound_states,
    oracle_transmission,
    scattering_spinor,
)
from .scattering import resonance_energies, solve_amplitudes, transmission_closed_form

HALF = DeltaConvention.PAPER_HALF
FULL = DeltaConvention.DIRAC_FULL
DEFAULT_SEED = 20160101


@dataclass(frozen=True)
class CheckRecord:
    name: str
    max_dev: float
    tol: float
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "max_dev": self.max_dev, "tol": self.tol, "pass": self.passed}


@dataclass(frozen=True)
class CrosscheckReport:
    checks: tuple[CheckRecord, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        return json.dumps({"checks": [c.to_json() for c in self.checks], "pass": self.passed}, indent=2)


def _below(name, dev, tol) -> CheckRecord:
    dev = float(dev)
    return CheckRecord(name, dev, tol, bool(dev < tol))


def _count(name, violations) -> CheckRecord:
    return CheckRecord(name, float(violations), 0.0, violations == 0)


def fig3_params(convention):
    return [ModelParams(c_sigma=cs, c_p=cp, delta_convention=convention) for _, cp, cs in FIG3_SETS]


def scattering_grid(mass: float = 1.0, n: int = 200, e_max: float = 10.0) -> np.ndarray:
    """n energies split evenly between (m, e_max] and [-e_max, -m)."""
    half = n // 2
    pos = np.linspace(mass, e_max, half + 1)[1:]
    return np.concatenate([-pos[::-1], pos])


def random_draws(rng: np.random.Generator, n: int):
    for _ in range(n):
        m = rng.uniform(0.5, 2.0)
        p = ModelParams(
            mass=m,
            half_width=rng.uniform(0.5, 2.0),
            c_sigma=rng.uniform(-2.0, 2.0),
            c_p=rng.uniform(-2.0, 2.0),
            delta_convention=HALF if rng.random() < 0.5 else FULL,
        )
        e = rng.uniform(m, 10 * m)
        if e == m:
            e = 10 * m
        yield p, (e if rng.random() < 0.5 else -e)


def check_unitarity(seed: int, n: int = 1000) -> CheckRecord:
    rng = np.random.default_rng(seed)
    dev = max(abs(r.R + r.T - 1) for r in (solve_amplitudes(p, e) for p, e in random_draws(rng, n)))
    return _below("unitarity", dev, 1e-10)


def check_closed_form() -> CheckRecord:
    grid = scattering_grid()
    dev = max(
        abs(transmission_closed_form(p, e) - solve_amplitudes(p, e).T) for p in fig3_params(HALF) for e in grid
    )
    return _below("closed_form_agreement", dev, 1e-10)


def check_oracle_transmission(lam_scale: float = 1.0) -> CheckRecord:
    grid = scattering_grid()
    dev = max(
        abs(oracle_transmission(p, e) - solve_amplitudes(p, e, lam=lam_scale * p.delta_strength).T)
        for p in fig3_params(FULL)
        for e in grid
    )
    return _below("oracle_transmission_agreement", dev, 1e-8)


def _spectrum_dev(a, b) -> float:
    if len(a) != len(b):
        return math.inf
    return max((abs(x - y) for x, y in zip(a, b)), default=0.0)


def check_oracle_bound(lam_scale: float = 1.0) -> CheckRecord:
    dev = 0.0
    for cp in (0.0, 1.0, 1.9):
        p = ModelParams(c_sigma=2.0, c_p=cp, delta_convention=FULL)
        mine = find_bound_states(p, lam=lam_scale * p.delta_strength).energies
        dev = max(dev, _spectrum_dev(mine, oracle_bound_states(p)))
    return _below("oracle_bound_agreement", dev, 1e-9)


def check_resonances() -> list[CheckRecord]:
    p = ModelParams(c_sigma=1.0)
    table = resonance_energies(p, 5)
    dev = max(abs(t - 1) for row in table.entries[1:] for t in row.transmissions)
    far = resonance_energies(p, 20).entries
    spacing = far[20].energies[0] - far[19].energies[0]
    return [
        _below("resonance_exactness", dev, 1e-9),
        _below("resonance_spacing", abs(spacing / (math.pi / 2) - 1), 0.02),
    ]


def check_free_particle() -> CheckRecord:
    p = ModelParams()
    grid = scattering_grid(n=100)
    return _below("free_particle", max(abs(solve_amplitudes(p, e).T - 1) for e in grid), 1e-14)


def check_sign_symmetry() -> list[CheckRecord]:
    grid = scattering_grid()
    t_dev, spec_viol = 0.0, 0
    for conv in (HALF, FULL):
        for p in fig3_params(conv):
            q = p.with_(c_p=-p.c_p)
            t_dev = max(t_dev, max(abs(solve_amplitudes(p, e).T - solve_amplitudes(q, e).T) for e in grid))
        for cs, cp in ((2.0, 1.0), (2.0, 1.9), (1.0, 0.5), (3.0, 2.0)):
            p = ModelParams(c_sigma=cs, c_p=cp, delta_convention=conv)
            if find_bound_states(p).energies != find_bound_states(p.with_(c_p=-cp)).energies:
                spec_viol += 1
    return [_below("cp_sign_symmetry_transmission", t_dev, 1e-14), _count("cp_sign_symmetry_spectrum", spec_viol)]


def check_threshold() -> list[CheckRecord]:
    sharp = 0
    for conv in (HALF, FULL):
        if not find_bound_states(ModelParams(c_sigma=2.0, c_p=1.99, delta_convention=conv)).energies:
            sharp += 1
        sharp += len(find_bound_states(ModelParams(c_sigma=2.0, c_p=2.01, delta_convention=conv)).energies)
    negative = sum(
        len(find_bound_states(ModelParams(c_sigma=-1.0, c_p=cp, delta_convention=conv)).energies)
        for conv in (HALF, FULL)
        for cp in (0.0, 0.5, 1.0, 2.0, 3.0)
    )
    return [_count("threshold_sharpness", sharp), _count("no_binding_negative_c_sigma", negative)]


def parity_oracle_roots(params: ModelParams) -> list[float]:
    """Finite-well even/odd conditions, bisected independently of the solver."""
    m, a, cs = params.mass, params.a, params.c_sigma

    def eta_kappa(e):
        return math.sqrt(max((e + m) * (e - m + cs), 0.0)), math.sqrt(m * m - e * e)

    def even(e):
        eta, kap = eta_kappa(e)
        return eta * math.sin(eta * a) - kap * math.cos(eta * a)

    def odd(e):
        eta, kap = eta_kappa(e)
        return eta * math.cos(eta * a) + kap * math.sin(eta * a)

    lo = max(-m, m - cs)
    grid = np.linspace(lo, m, 20001)[1:-1]
    roots = []
    for f in (even, odd):
        vals = [f(e) for e in grid]
        for i in range(len(grid) - 1):
            if vals[i] * vals[i + 1] < 0:
                x0, x1, f0 = grid[i], grid[i + 1], vals[i]
                for _ in range(200):
                    mid = 0.5 * (x0 + x1)
                    fm = f(mid)
                    if fm * f0 <= 0:
                        x1 = mid
                    else:
                        x0, f0 = mid, fm
                    if x1 - x0 < 1e-14:
                        break
                roots.append(0.5 * (x0 + x1))
    return sorted(roots)


def check_spinless() -> CheckRecord:
    dev = 0.0
    for cs in (0.5, 1.0, 2.0, 3.0):
        p = ModelParams(c_sigma=cs)
        dev = max(dev, _spectrum_dev(find_bound_states(p).energies, parity_oracle_roots(p)))
        even, odd = parity_split_cp0(p)
        dev = max(dev, _spectrum_dev(sorted(even + odd), find_bound_states(p).energies))
    return _below("cp0_spinless_equivalence", dev, 1e-10)


def check_r0() -> CheckRecord:
    violations = 0
    for conv in (HALF, FULL):
        verdict = r0_bound_check(ModelParams(c_sigma=2.0, c_p=2.0, delta_convention=conv))
        violations += 0 if verdict.certified else 1
    return _count("r0_no_binding", violations)


def check_currents() -> list[CheckRecord]:
    x = np.linspace(-3.0, 3.0, 61)
    scat = 0.0
    for p in fig3_params(FULL):
        for e in (-4.3, -1.7, 1.3, 2.9, 7.1):
            j1 = scattering_spinor(p, e, x).j1
            scat = max(scat, float(np.ptp(j1)))
    norm_dev, j1_dev = 0.0, 0.0
    for cs, cp in ((2.0, 0.0), (2.0, 1.0), (1.0, 0.5)):
        p = ModelParams(c_sigma=cs, c_p=cp)
        levels = oracle_bound_states(p)
        for i, e in enumerate(levels):
            norm_dev = max(norm_dev, abs(bound_normalization(p, e) - 1))
            sample = bound_spinor(p, i, np.linspace(-8, 8, 161), energies=levels)
            j1_dev = max(j1_dev, float(np.max(np.abs(sample.j1))))
    return [
        _below("scattering_current_constant", scat, 1e-8),
        _below("bound_normalization", norm_dev, 1e-8),
        _below("bound_current_zero", j1_dev, 1e-10),
    ]


def check_symmetry_maps() -> list[CheckRecord]:
    cc_dev, ch_dev = 0.0, 0.0
    # the sigma-zero well binds only for negative couplings
    for cs, cp in ((2.0, 0.0), (2.0, 1.0), (1.0, 0.5), (3.0, 1.5), (-2.0, 1.0), (-3.0, 0.5)):
        p = ModelParams(c_sigma=cs, c_p=cp, delta_convention=FULL)
        base = oracle_bound_states(p)
        image, energy_map = charge_conjugate(p)
        cc_dev = max(cc_dev, _spectrum_dev(sorted(energy_map(e) for e in base), oracle_bound_states(image)))
        # sigma-zero problem solved directly vs the delta-zero solver with m, c_p negated
        sz = p.with_(coupling_case="sigma_zero")
        substituted = find_bound_states(p.with_(mass=-p.mass, c_p=-p.c_p)).energies
        ch_dev = max(ch_dev, _spectrum_dev(oracle_bound_states(sz), substituted))
        ch_dev = max(ch_dev, _spectrum_dev(oracle_bound_states(chiral_transform(p)), base))
    return [_below("charge_conjugation_spectrum", cc_dev, 1e-9), _below("chiral_spectrum", ch_dev, 1e-9)]


def check_no_total_reflection() -> list[CheckRecord]:
    grid = scattering_grid()
    t_min = min(solve_amplitudes(p, e).T for p in fig3_params(HALF) for e in grid)
    t_min = min(t_min, min(t for _, _, t in fig2_rows(HALF, FIG2_CP) if t is not None))
    t_high = min(solve_amplitudes(p, 100.0).T for p in fig3_params(HALF))
    return [
        _below("no_total_reflection", 1 - t_min, 1.0),
        _below("high_energy_transmission", 1 - t_high, 1e-3),
    ]


def run_crosscheck(seed: int = DEFAULT_SEED, lam_perturbation: float = 0.0) -> CrosscheckReport:
    scale = 1.0 + lam_perturbation
    checks = [check_unitarity(seed), check_closed_form(), check_oracle_transmission(scale), check_oracle_bound(scale)]
    checks += check_resonances()
    checks.append(check_free_particle())
    checks += check_sign_symmetry()
    checks += check_threshold()
    checks.append(check_spinless())
    checks.append(check_r0())
    checks += check_currents()
    checks += check_symmetry_maps()
    checks += check_no_total_reflection()
    return CrosscheckReport(tuple(checks))
