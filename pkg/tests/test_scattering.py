import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from diracsquare.core import DomainError, ModelParams, kinematics
from diracsquare.scattering import (
    amplitude_ratio_discrepancy,
    matching_system,
    printed_resonance_energies,
    printed_transmission,
    reconstructed_spinor,
    resonance_csv,
    resonance_energies,
    scan_csv,
    solve_amplitudes,
    transmission_closed_form,
    transmission_denominator,
    transmission_scan,
)

conventions = st.sampled_from(["paper_half", "dirac_full"])


@st.composite
def scattering_cases(draw):
    m = draw(st.floats(0.3, 2.0))
    p = ModelParams(
        mass=m,
        half_width=draw(st.floats(0.2, 3.0)),
        c_sigma=draw(st.floats(-3.0, 3.0)),
        c_p=draw(st.floats(-3.0, 3.0)),
        delta_convention=draw(conventions),
    )
    e = draw(st.floats(1.001, 12.0)) * m * draw(st.sampled_from([1, -1]))
    return p, e


@settings(max_examples=300, deadline=None)
@given(scattering_cases())
def test_unitarity(case):
    p, e = case
    r = solve_amplitudes(p, e)
    assert r.R + r.T == pytest.approx(1.0, abs=1e-10)
    assert r.j_inc == pytest.approx(r.j_ref + r.j_trans, rel=1e-10)


@settings(max_examples=300, deadline=None)
@given(scattering_cases())
def test_closed_form_matches_linear_solve(case):
    p, e = case
    assert transmission_closed_form(p, e) == pytest.approx(solve_amplitudes(p, e).T, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(scattering_cases())
def test_transmission_even_in_cp(case):
    p, e = case
    flipped = p.with_(c_p=-p.c_p)
    assert solve_amplitudes(p, e).T == pytest.approx(solve_amplitudes(flipped, e).T, abs=1e-13)


@settings(max_examples=100, deadline=None)
@given(scattering_cases())
def test_sigma_zero_case_scatters_like_its_chiral_partner(case):
    p, e = case
    sz = p.with_(coupling_case="sigma_zero", mass=-p.mass, c_p=-p.c_p)
    assert solve_amplitudes(sz, e).T == pytest.approx(solve_amplitudes(p, e).T, abs=1e-12)


def test_matching_system_solution_satisfies_conditions():
    p = ModelParams(c_sigma=0.7, c_p=1.3)
    m, rhs = matching_system(p, 2.2)
    x = np.linalg.solve(m, rhs)
    assert np.allclose(m @ x, rhs, atol=1e-13)


def test_derivative_jumps_at_edges():
    p = ModelParams(c_sigma=0.5, c_p=1.0, delta_convention="dirac_full")
    res = solve_amplitudes(p, 2.0)
    from diracsquare.scattering import upper_component

    a, eps = p.a, 1e-12
    lam = p.delta_strength
    for edge, sign in ((-a, -1), (a, 1)):
        (lo, hi), (dlo, dhi) = upper_component(p, res, [edge - eps, edge + eps])
        assert hi == pytest.approx(lo, abs=1e-9)
        assert dhi - dlo == pytest.approx(sign * lam * lo, abs=1e-9)


@pytest.mark.parametrize("energy, expected", [(1.8, 0.9946626371961564), (-1.8, 0.46941737035176)])
def test_frozen_oracle_values(energy, expected):
    # reference values from the first-order transfer-matrix oracle
    p = ModelParams(c_sigma=0.5, c_p=1.0, delta_convention="dirac_full")
    assert solve_amplitudes(p, energy).T == pytest.approx(expected, abs=1e-12)


def test_free_particle_is_transparent():
    for e in np.linspace(1.01, 10, 50):
        for s in (1, -1):
            r = solve_amplitudes(ModelParams(), s * e)
            assert abs(r.T - 1) < 1e-14
            assert abs(r.refl_amp) < 1e-7


def test_scattering_rejects_gap_energy():
    with pytest.raises(DomainError):
        solve_amplitudes(ModelParams(), 0.5)
    with pytest.raises(DomainError):
        transmission_closed_form(ModelParams(), -1.0)


def test_denominator_vanishes_at_bound_state():
    # C_sigma = 2, C_p = 1 under the first-order convention binds at 0.1771...
    p = ModelParams(c_sigma=2.0, c_p=1.0, delta_convention="dirac_full")
    assert abs(transmission_denominator(p, 0.177136808991)) < 1e-9
    assert abs(transmission_denominator(p, 0.5)) > 1e-2


def test_printed_transmission_agrees_only_for_real_eta():
    p = ModelParams(c_sigma=1.0, c_p=1.0)
    e = 3.0
    assert kinematics(p, e).eta.imag == 0
    assert printed_transmission(p, e) == pytest.approx(transmission_closed_form(p, e), abs=1e-12)
    barrier = ModelParams(c_sigma=-2.0, c_p=1.0)
    e = 1.5
    assert kinematics(barrier, e).eta.real == 0
    ratio = printed_transmission(barrier, e) / transmission_closed_form(barrier, e)
    assert abs(ratio - 1) > 0.5


def test_printed_amplitudes_only_transmission_is_right():
    dev = amplitude_ratio_discrepancy(ModelParams(c_sigma=0.5, c_p=1.0), 2.5)
    assert dev["trans_amp"] < 1e-12
    assert dev["b_plus"] > 1e-3 and dev["refl_amp"] > 1e-3


def test_resonances_have_unit_transmission():
    table = resonance_energies(ModelParams(c_sigma=1.0), 5)
    assert table.entries[0].energies[0] == pytest.approx((-1 + math.sqrt(1 + math.pi**2)) / 2)
    assert table.entries[1].energies[0] == pytest.approx(2.681132565783664, abs=1e-12)
    for row in table.entries:
        assert row.eta_res == pytest.approx((row.n + 1) * math.pi / 2)
        for t in row.transmissions:
            assert abs(t - 1) < 1e-9


def test_resonances_skip_gap_roots():
    # a deep well puts the lower N = 0 root inside the gap
    table = resonance_energies(ModelParams(c_sigma=6.0, half_width=2.0), 0)
    for e in table.entries[0].energies:
        assert abs(e) > 1
    assert len(table.entries[0].energies) == 1


def test_printed_resonance_formula_misses():
    p = ModelParams(c_sigma=1.0)
    printed = printed_resonance_energies(p, 1)[0]
    assert abs(solve_amplitudes(p, printed).T - 1) > 1e-3


def test_resonance_spacing_tends_to_half_pi():
    e = resonance_energies(ModelParams(c_sigma=1.0), 20).entries
    assert (e[20].energies[0] - e[19].energies[0]) == pytest.approx(math.pi / 2, rel=0.02)


@pytest.mark.parametrize("convention", ["paper_half", "dirac_full"])
def test_lower_component_current_is_uniform(convention):
    p = ModelParams(c_sigma=0.5, c_p=1.0, delta_convention=convention)
    for e in (-3.3, 1.7, 4.0):
        res = solve_amplitudes(p, e)
        x = np.linspace(-3, 3, 121)
        up, low = reconstructed_spinor(p, res, x)
        j1 = 2 * np.real(np.conj(up) * low)
        assert np.ptp(j1) < 1e-10
        assert j1[0] == pytest.approx(res.j_trans, rel=1e-10)


def test_scan_marks_gap_points():
    rows = transmission_scan(ModelParams(c_sigma=1.0), [-2.0, 0.0, 2.0])
    assert rows[1].T is None and rows[1].R is None
    text = scan_csv(rows)
    assert text.splitlines()[0] == "energy,transmission,reflection"
    assert text.splitlines()[2] == "0,,"


def test_resonance_csv_header():
    text = resonance_csv(resonance_energies(ModelParams(c_sigma=1.0), 1))
    assert text.splitlines()[0] == "N,eta_res,energy,transmission"
    assert len(text.splitlines()) == 5
