import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracsquare.bound import (
    Parity,
    critical_pseudoscalar,
    find_bound_states,
    ground_state_trend,
    parity_split_cp0,
    quantization_residual,
    r0_bound_check,
    reduced_residual,
    spectrum_csv,
    spectrum_sweep,
    sweep_csv,
)
from diracsquare.core import DomainError, ModelParams
from diracsquare.oracle import oracle_bound_states

FULL = "dirac_full"


@pytest.mark.parametrize(
    "c_sigma, levels",
    [
        (0.1, [0.984202502687136]),
        (0.5, [0.7855525528236568]),
        (1.0, [0.4627274223878625]),
        (2.0, [-0.14290425293100775, 0.8490768364385078]),
        (3.0, [-0.5537780775329824, 0.5368969108893135]),
    ],
)
def test_scalar_well_levels(c_sigma, levels):
    # frozen from independent even/odd bisection
    spectrum = find_bound_states(ModelParams(c_sigma=c_sigma))
    assert spectrum.energies == pytest.approx(levels, abs=1e-11)


def test_parities_alternate_from_even():
    spectrum = find_bound_states(ModelParams(c_sigma=3.0))
    assert spectrum.parities == (Parity.EVEN, Parity.ODD)
    even, odd = parity_split_cp0(ModelParams(c_sigma=3.0))
    assert even == pytest.approx([spectrum.energies[0]], abs=1e-11)
    assert odd == pytest.approx([spectrum.energies[1]], abs=1e-11)


def test_no_parity_label_with_pseudoscalar():
    assert find_bound_states(ModelParams(c_sigma=2.0, c_p=1.0)).parities is None
    with pytest.raises(ValueError):
        parity_split_cp0(ModelParams(c_sigma=2.0, c_p=1.0))


@pytest.mark.parametrize(
    "convention, c_p, levels",
    [
        ("paper_half", 1.0, [0.27894578928, 0.97138500798]),
        (FULL, 1.0, [0.177136808991, 0.962915036553]),
        ("paper_half", 1.9, [0.8719292013596]),
        (FULL, 1.9, [0.5722527213055]),
    ],
)
def test_levels_with_pseudoscalar(convention, c_p, levels):
    spectrum = find_bound_states(ModelParams(c_sigma=2.0, c_p=c_p, delta_convention=convention))
    assert spectrum.energies == pytest.approx(levels, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.floats(-1.0, 4.0), st.floats(-3.0, 3.0))
def test_spectrum_matches_first_order_oracle(m, a, cs, cp):
    p = ModelParams(mass=m, half_width=a, c_sigma=cs, c_p=cp, delta_convention=FULL)
    mine = find_bound_states(p).energies
    ref = oracle_bound_states(p)
    assert len(mine) == len(ref)
    assert mine == pytest.approx(ref, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.0, 4.0), st.floats(0.0, 3.0), st.sampled_from(["paper_half", FULL]))
def test_spectrum_even_in_cp(cs, cp, conv):
    p = ModelParams(c_sigma=cs, c_p=cp, delta_convention=conv)
    assert find_bound_states(p).energies == find_bound_states(p.with_(c_p=-cp)).energies


@pytest.mark.parametrize("cp", [0.0, 1.0, 3.0])
def test_repulsive_scalar_does_not_bind(cp):
    for conv in ("paper_half", FULL):
        assert find_bound_states(ModelParams(c_sigma=-1.0, c_p=cp, delta_convention=conv)).energies == ()


def test_binding_survives_past_the_interior_barrier_coupling():
    # beyond sqrt(2 m c_sigma) the interior is a barrier throughout the gap,
    # yet the attractive edge delta still binds
    crit = critical_pseudoscalar(ModelParams(c_sigma=2.0)).c_p_critical
    assert crit == pytest.approx(2.0)
    half = find_bound_states(ModelParams(c_sigma=2.0, c_p=2.01))
    full = find_bound_states(ModelParams(c_sigma=2.0, c_p=2.01, delta_convention=FULL))
    assert half.energies == pytest.approx([0.9254], abs=1e-4)
    assert full.energies == pytest.approx([0.6069], abs=1e-4)
    assert full.energies == pytest.approx(oracle_bound_states(full.params_snapshot), abs=1e-9)


def test_paper_half_binding_ends_between_2_2_and_2_3():
    assert find_bound_states(ModelParams(c_sigma=2.0, c_p=2.2)).energies
    assert not find_bound_states(ModelParams(c_sigma=2.0, c_p=2.3)).energies


def test_critical_coupling_absent_for_repulsion():
    assert critical_pseudoscalar(ModelParams(c_sigma=-1.0)).c_p_critical is None


def test_residual_vanishes_at_roots():
    p = ModelParams(c_sigma=2.0, c_p=1.0)
    for e in find_bound_states(p).energies:
        assert abs(reduced_residual(p, e)) < 1e-10
        assert abs(quantization_residual(p, e)) < 1e-10


def test_reduced_residual_continuous_through_eta_zero():
    # eta = 0 at E = 0 for c_sigma = 2, c_p = 1; the residual has no root there
    p = ModelParams(c_sigma=2.0, c_p=1.0)
    vals = reduced_residual(p, np.array([-1e-9, 0.0, 1e-9]))
    assert np.ptp(vals) < 1e-7
    assert abs(vals[1]) > 0.1


def test_residual_rejects_outside_gap():
    with pytest.raises(DomainError):
        quantization_residual(ModelParams(c_sigma=1.0), 1.5)


def test_massless_has_no_gap():
    assert find_bound_states(ModelParams(mass=0.0, c_sigma=2.0)).energies == ()


def test_r0_residual_has_roots():
    for conv, root in (("paper_half", 0.4583), (FULL, 0.9904)):
        verdict = r0_bound_check(ModelParams(c_sigma=2.0, c_p=2.0, delta_convention=conv))
        assert not verdict.certified
        assert verdict.fixed_energy == pytest.approx(1.0)
        assert any(abs(r - root) < 1e-3 for r in verdict.roots)


def test_r0_even_weak_coupling_binds():
    verdict = r0_bound_check(ModelParams(c_sigma=2.0, c_p=0.5))
    assert not verdict.certified
    assert len(verdict.roots) == 1 and verdict.roots[0] < verdict.pole


def test_r0_without_deltas_is_certified():
    verdict = r0_bound_check(ModelParams(c_sigma=2.0))
    assert verdict.certified
    assert verdict.roots == () and verdict.pole is None


def test_ground_state_rises_with_cp():
    rows = spectrum_sweep(ModelParams(c_sigma=2.0), "c_p", np.linspace(0, 1.9, 20))
    trend = ground_state_trend(rows)
    energies = [e for _, e in trend]
    assert all(b > a for a, b in zip(energies, energies[1:]))


def test_ground_state_falls_with_c_sigma():
    rows = spectrum_sweep(ModelParams(), "c_sigma", np.linspace(0.1, 4, 30))
    energies = [e for _, e in ground_state_trend(rows)]
    assert all(b < a for a, b in zip(energies, energies[1:]))


def test_sweep_rejects_empty_grid():
    with pytest.raises(ValueError):
        spectrum_sweep(ModelParams(), "c_p", [])


def test_csv_layouts():
    spectrum = find_bound_states(ModelParams(c_sigma=2.0))
    lines = spectrum_csv(spectrum).splitlines()
    assert lines[0] == "level_index,energy,parity"
    assert lines[1] == "0,-0.14290425293100775,even"
    rows = spectrum_sweep(ModelParams(c_sigma=2.0), "c_p", [0.0, 1.0])
    lines = sweep_csv(rows).splitlines()
    assert lines[0] == "sweep_value,level_index,energy"
    assert len(lines) == 5
    assert find_bound_states(ModelParams(c_sigma=2.0, c_p=1.0)).parities is None
    assert spectrum_csv(find_bound_states(ModelParams(c_sigma=2.0, c_p=1.0))).splitlines()[1].endswith(",")


def test_sigma_zero_case_matches_chiral_partner():
    p = ModelParams(c_sigma=2.0, c_p=1.0, coupling_case="sigma_zero", mass=-1.0)
    q = ModelParams(c_sigma=2.0, c_p=-1.0)
    assert find_bound_states(p).energies == find_bound_states(q).energies


def test_grid_refinement_is_stable():
    p = ModelParams(c_sigma=3.0, half_width=3.0)
    coarse = find_bound_states(p, n_grid=101)
    fine = find_bound_states(p, n_grid=20001)
    assert coarse.energies == pytest.approx(fine.energies, abs=1e-12)
    assert not math.isnan(sum(fine.energies))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(-4.0, 0.0), st.floats(-6.0, 6.0),
       st.sampled_from(["paper_half", FULL]))
def test_no_binding_without_attractive_scalar(m, a, cs, cp, conv):
    p = ModelParams(mass=m, half_width=a, c_sigma=cs, c_p=cp, delta_convention=conv)
    grid = np.linspace(-m, m, 10_002)[1:-1]
    vals = reduced_residual(p, grid)
    assert not np.any(vals[:-1] * vals[1:] < 0)
    assert find_bound_states(p).energies == ()


def test_critical_coupling_scales_with_mass():
    assert critical_pseudoscalar(ModelParams(mass=2.0, c_sigma=1.0)).c_p_critical == pytest.approx(2.0)
    assert critical_pseudoscalar(ModelParams(c_sigma=0.0)).c_p_critical is None


def test_shallow_well_keeps_only_even_ground_state():
    even, odd = parity_split_cp0(ModelParams(c_sigma=0.5))
    assert len(even) == 1 and odd == ()
