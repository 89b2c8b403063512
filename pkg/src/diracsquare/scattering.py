"""Scattering states for |E| > m: amplitudes, R and T, currents, resonances.

The upper spinor component is matched as

    psi_+ = exp(iqx) + rho exp(-iqx)          x < -a
          = B_+ exp(i eta x) + B_- exp(-i eta x)   |x| < a
          = tau exp(iqx)                       x > a

with q = k when E + m > 0 and q = -k when E + m < 0, so the incident wave
always carries probability current to the right.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._csv import format_csv
from .core import DomainError, ModelParams, as_delta_zero, kinematics, profile_g


class SingularSystemError(RuntimeError):
    """The matching system has no unique solution at this energy."""


@dataclass(frozen=True)
class ScatteringResult:
    energy: float
    b_plus: complex
    b_minus: complex
    refl_amp: complex
    trans_amp: complex
    R: float
    T: float
    j_inc: float
    j_ref: float
    j_trans: float


@dataclass(frozen=True)
class ResonanceEntry:
    n: int
    eta_res: float
    energies: tuple[float, ...]
    transmissions: tuple[float, ...]


@dataclass(frozen=True)
class ResonanceTable:
    entries: tuple[ResonanceEntry, ...]

    def kept_energies(self, sign: int = 1) -> list[float]:
        return [e for row in self.entries for e in row.energies if e * sign > 0]


@dataclass(frozen=True)
class ScanRow:
    energy: float
    T: float | None
    R: float | None


def _check_scattering_energy(p: ModelParams, energy: float) -> None:
    if not abs(energy) > abs(p.mass):
        raise DomainError(f"scattering needs |E| > |m|; got E={energy}, m={p.mass}")


def _lam(p: ModelParams, lam: float | None) -> float:
    return p.delta_strength if lam is None else lam


def matching_system(params: ModelParams, energy: float, *, lam: float | None = None):
    """Continuity and derivative-jump conditions at x = -a and x = +a.

    Returns ``(matrix, rhs)`` for the unknowns ``[B_+, B_-, rho, tau]``.
    ``lam`` overrides the delta strength of the selected convention.
    """
    p = as_delta_zero(params)
    _check_scattering_energy(p, energy)
    kin = kinematics(p, energy)
    lam = _lam(p, lam)
    a = p.a
    q = kin.k.real if energy + p.mass > 0 else -kin.k.real
    eta = kin.eta
    ep, em = cmath.exp(1j * eta * a), cmath.exp(-1j * eta * a)
    qp, qm = cmath.exp(1j * q * a), cmath.exp(-1j * q * a)
    m = np.array(
        [
            # psi continuous at -a
            [em, ep, -qp, 0.0],
            # psi continuous at +a
            [ep, em, 0.0, -qp],
            # psi'(a+) - psi'(a-) = +lam psi(a)
            [-(1j * eta + lam) * ep, (1j * eta - lam) * em, 0.0, 1j * q * qp],
            # psi'(-a+) - psi'(-a-) = -lam psi(-a)
            [(1j * eta + lam) * em, (lam - 1j * eta) * ep, 1j * q * qp, 0.0],
        ],
        dtype=complex,
    )
    rhs = np.array([qm, 0.0, 0.0, 1j * q * qm], dtype=complex)
    return m, rhs


def solve_amplitudes(params: ModelParams, energy: float, *, lam: float | None = None) -> ScatteringResult:
    m, rhs = matching_system(params, energy, lam=lam)
    try:
        b_plus, b_minus, rho, tau = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"matching system singular at E={energy}") from exc
    if not np.all(np.isfinite([b_plus, b_minus, rho, tau])):
        raise SingularSystemError(f"matching system singular at E={energy}")
    p = as_delta_zero(params)
    k = math.sqrt(energy * energy - p.mass * p.mass)
    flux = 2.0 * k / abs(energy + p.mass)
    R = abs(rho) ** 2
    T = abs(tau) ** 2
    return ScatteringResult(
        energy=energy,
        b_plus=complex(b_plus),
        b_minus=complex(b_minus),
        refl_amp=complex(rho),
        trans_amp=complex(tau),
        R=float(R),
        T=float(T),
        j_inc=flux,
        j_ref=flux * float(R),
        j_trans=flux * float(T),
    )


def _sin_over(eta: complex, length: float) -> complex:
    """sin(eta*length)/eta, continuous through eta = 0."""
    z = eta * length
    if abs(z) < 1e-6:
        return length * (1.0 - z * z / 6.0)
    return cmath.sin(z) / eta


def transmission_denominator(params: ModelParams, energy: float, *, lam: float | None = None) -> complex:
    """d = cos(2 eta a) - sin(2 eta a) f(k), with t = exp(-2ika)/d.

    f(k) = i(k**2 + lam**2 + eta**2)/(2 eta k). Inside the gap k = +i|k|, so
    zeros of d are the bound states.
    """
    p = as_delta_zero(params)
    kin = kinematics(p, energy)
    lam = _lam(p, lam)
    k, eta, a = kin.k, kin.eta, p.a
    if k == 0:
        raise DomainError("d is singular at k = 0 (E = +-m)")
    return cmath.cos(2 * eta * a) - _sin_over(eta, 2 * a) * 1j * (k * k + lam * lam + eta * eta) / (2 * k)


def transmission_closed_form(params: ModelParams, energy: float, *, lam: float | None = None) -> float:
    _check_scattering_energy(as_delta_zero(params), energy)
    return 1.0 / abs(transmission_denominator(params, energy, lam=lam)) ** 2


def printed_transmission(params: ModelParams, energy: float) -> float:
    """Diagnostic: the expanded real-form T with its 2 sin(4 eta a) Re f term.

    Agrees with 1/|d|**2 wherever eta is real (Re f = 0 there); kept only to
    expose the mismatch for imaginary eta.
    """
    p = as_delta_zero(params)
    _check_scattering_energy(p, energy)
    kin = kinematics(p, energy)
    k, eta, a, lam = kin.k, kin.eta, p.a, p.delta_strength
    f = 1j * (k * k + lam * lam + eta * eta) / (2 * eta * k)
    s2 = cmath.sin(2 * eta * a)
    denom = 1 + s2 * s2 * (abs(f) ** 2 - 1) - 2 * cmath.sin(4 * eta * a) * f.real
    return float((1.0 / denom).real)


def printed_amplitude_ratios(params: ModelParams, energy: float) -> dict[str, complex]:
    """Diagnostic: the amplitude ratios in the form they were printed.

    Only D/A = exp(-2ika)/d is dimensionally consistent; the others carry
    stray powers of energy and are reported against :func:`solve_amplitudes`
    by :func:`amplitude_ratio_discrepancy`.
    """
    p = as_delta_zero(params)
    kin = kinematics(p, energy)
    k, eta, a, cp = kin.k, kin.eta, p.a, p.c_p
    d = transmission_denominator(p, energy, lam=0.5 * cp)
    return {
        "b_plus": 1j * eta * k * (eta + k + 0.5j * cp) * cmath.exp(-1j * (k + eta) * a) / (2 * d),
        "b_minus": k * k * eta * (eta - k - 0.5j * cp) * cmath.exp(1j * (eta - k) * a) / (2 * d),
        "refl_amp": 1j * eta * k * (eta * eta - (k + 0.5j * cp) ** 2) * cmath.sin(4 * eta * a)
        * cmath.exp(-2j * k * a) / (2 * d),
        "trans_amp": cmath.exp(-2j * k * a) / d,
    }


def amplitude_ratio_discrepancy(params: ModelParams, energy: float) -> dict[str, float]:
    """|printed - solved| for each amplitude ratio, with lambda = c_p/2."""
    p = as_delta_zero(params)
    solved = solve_amplitudes(p, energy, lam=0.5 * p.c_p)
    printed = printed_amplitude_ratios(p, energy)
    return {name: abs(value - getattr(solved, name)) for name, value in printed.items()}


def resonance_energies(params: ModelParams, n_max: int) -> ResonanceTable:
    """Energies where eta = (N+1) pi / (2a), i.e. sin(2 eta a) = 0 and T = 1.

    eta**2(E) = E**2 - m**2 - c_p**2 + c_sigma (E + m) is quadratic in E, so
    each N gives E = -c_sigma/2 +- sqrt((m - c_sigma/2)**2 + c_p**2 + eta**2);
    only roots with |E| > |m| are scattering energies.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    p = as_delta_zero(params)
    m, cs, cp = p.mass, p.c_sigma, p.c_p
    entries = []
    for n in range(n_max + 1):
        eta_res = (n + 1) * math.pi / (2 * p.a)
        root = math.sqrt((m - 0.5 * cs) ** 2 + cp * cp + eta_res * eta_res)
        kept = tuple(e for e in (-0.5 * cs + root, -0.5 * cs - root) if abs(e) > abs(m))
        ts = tuple(solve_amplitudes(p, e).T for e in kept)
        entries.append(ResonanceEntry(n, eta_res, kept, ts))
    return ResonanceTable(tuple(entries))


def printed_resonance_energies(params: ModelParams, n: int) -> tuple[float, float]:
    """Diagnostic: +-sqrt((N+1)**2 pi**2/(4a**2) + (m - c_sigma)**2 + c_p**2/4) - c_sigma."""
    p = as_delta_zero(params)
    root = math.sqrt(((n + 1) * math.pi / (2 * p.a)) ** 2 + (p.mass - p.c_sigma) ** 2 + p.c_p**2 / 4)
    return root - p.c_sigma, -root - p.c_sigma


def transmission_scan(params: ModelParams, grid: Iterable[float]) -> list[ScanRow]:
    """T and R on an energy grid; gap points come back as ``None``."""
    p = as_delta_zero(params)
    rows = []
    for e in grid:
        e = float(e)
        if abs(e) <= abs(p.mass):
            rows.append(ScanRow(e, None, None))
            continue
        res = solve_amplitudes(p, e)
        rows.append(ScanRow(e, res.T, res.R))
    return rows


def scan_csv(rows: Sequence[ScanRow]) -> str:
    return format_csv(["energy", "transmission", "reflection"], ((r.energy, r.T, r.R) for r in rows))


def resonance_csv(table: ResonanceTable) -> str:
    out = []
    for row in table.entries:
        for e, t in zip(row.energies, row.transmissions):
            out.append((row.n, row.eta_res, e, t))
    return format_csv(["N", "eta_res", "energy", "transmission"], out)


def upper_component(params: ModelParams, result: ScatteringResult, x, *, lam: float | None = None):
    """psi_+ and d psi_+/dx of a solved scattering state at positions ``x``."""
    p = as_delta_zero(params)
    kin = kinematics(p, result.energy)
    q = kin.k.real if result.energy + p.mass > 0 else -kin.k.real
    eta = kin.eta
    x = np.asarray(x, dtype=float)
    left, right = x < -p.a, x > p.a
    inside = ~(left | right)
    psi = np.empty(x.shape, complex)
    dpsi = np.empty(x.shape, complex)
    xl = x[left]
    psi[left] = np.exp(1j * q * xl) + result.refl_amp * np.exp(-1j * q * xl)
    dpsi[left] = 1j * q * (np.exp(1j * q * xl) - result.refl_amp * np.exp(-1j * q * xl))
    xi = x[inside]
    psi[inside] = result.b_plus * np.exp(1j * eta * xi) + result.b_minus * np.exp(-1j * eta * xi)
    dpsi[inside] = 1j * eta * (result.b_plus * np.exp(1j * eta * xi) - result.b_minus * np.exp(-1j * eta * xi))
    xr = x[right]
    psi[right] = result.trans_amp * np.exp(1j * q * xr)
    dpsi[right] = 1j * q * result.trans_amp * np.exp(1j * q * xr)
    return psi, dpsi


def reconstructed_spinor(params: ModelParams, result: ScatteringResult, x):
    """(psi_+, psi_-) with psi_- = -i (psi_+' - V_p psi_+)/(E + m)."""
    p = as_delta_zero(params)
    psi, dpsi = upper_component(p, result, x)
    vp = p.c_p * np.asarray(profile_g(x, p.a))
    lower = -1j * (dpsi - vp * psi) / (result.energy + p.mass)
    return psi, lower
