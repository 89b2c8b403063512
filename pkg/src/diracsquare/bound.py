"""Bound states in the gap |E| < m from the quantization condition.

With k = +i kappa the poles of the transmission amplitude satisfy

    2 eta kappa / (eta**2 + lam**2 - kappa**2) = tan(2 eta a)

Roots are located on the multiplied-through form divided by eta, which has
no poles, is continuous through eta = 0 and is real on both sides of it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ._csv import format_csv
from .core import DomainError, ModelParams, as_delta_zero, r0_fixed_energy

DEFAULT_GRID = 4001
ROOT_XTOL = 1e-13
_MAX_GRID = 4 * 65536


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


class SweepVariable(str, enum.Enum):
    C_SIGMA = "c_sigma"
    C_P = "c_p"


@dataclass(frozen=True)
class BoundSpectrum:
    params_snapshot: ModelParams
    energies: tuple[float, ...]
    parities: tuple[Parity, ...] | None
    bracket_count: int
    grid_points: int

    def __len__(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class CriticalCoupling:
    c_p_critical: float | None


@dataclass(frozen=True)
class R0Verdict:
    certified: bool
    roots: tuple[float, ...]
    pole: float | None
    residual_min: float
    residual_max: float
    fixed_energy: float | None


@dataclass(frozen=True)
class SweepRow:
    value: float
    spectrum: BoundSpectrum


def _gap_kinematics(p: ModelParams, energy):
    """kappa and eta**2 for energies inside the gap (vectorised)."""
    e = np.asarray(energy, dtype=float)
    kappa = np.sqrt(p.mass * p.mass - e * e)
    r = p.c_p**2 - p.c_sigma * (e + p.mass)
    return kappa, -kappa * kappa - r


def _check_gap(p: ModelParams, energy: float) -> None:
    if not abs(energy) < abs(p.mass):
        raise DomainError(f"bound states live in |E| < |m|; got E={energy}, m={p.mass}")
    if energy == -p.mass:
        raise DomainError("E = -m is excluded")


def quantization_residual(params: ModelParams, energy: float) -> float:
    """2 eta kappa cos(2 eta a) - (eta**2 + lam**2 - kappa**2) sin(2 eta a).

    For eta**2 < 0 (eta = iq) the hyperbolic continuation
    2 q kappa cosh(2qa) + (q**2 + kappa**2 - lam**2) sinh(2qa) is returned,
    i.e. the residual divided by i.
    """
    p = as_delta_zero(params)
    _check_gap(p, energy)
    kappa, eta2 = _gap_kinematics(p, energy)
    kappa, eta2 = float(kappa), float(eta2)
    lam2 = p.delta_strength**2
    a = p.a
    if eta2 >= 0:
        eta = math.sqrt(eta2)
        return 2 * eta * kappa * math.cos(2 * eta * a) - (eta2 + lam2 - kappa**2) * math.sin(2 * eta * a)
    q = math.sqrt(-eta2)
    return 2 * q * kappa * math.cosh(2 * q * a) + (q * q + kappa**2 - lam2) * math.sinh(2 * q * a)


def residual_scale(params: ModelParams, energy: float) -> float:
    p = as_delta_zero(params)
    kappa, eta2 = _gap_kinematics(p, energy)
    eta = math.sqrt(abs(float(eta2)))
    growth = math.cosh(2 * eta * p.a) if eta2 < 0 else 1.0
    return (2 * eta * float(kappa) + abs(float(eta2)) + p.delta_strength**2 + float(kappa) ** 2) * growth


def _cos_and_sinc(eta2, length):
    """cos(eta L) and sin(eta L)/eta as real functions of eta**2."""
    eta2 = np.asarray(eta2, dtype=float)
    eta = np.sqrt(np.abs(eta2))
    z = eta * length
    pos = eta2 >= 0
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(pos, np.cos(z), np.cosh(z))
        s = np.where(pos, np.sin(z), np.sinh(z)) / eta
    small = z < 1e-6
    s = np.where(small, length * (1 - np.sign(eta2) * z * z / 6), s)
    return c, s


def reduced_residual(params: ModelParams, energy, *, lam: float | None = None):
    """Quantization residual divided by eta; vectorised, pole free."""
    p = as_delta_zero(params)
    lam = p.delta_strength if lam is None else lam
    kappa, eta2 = _gap_kinematics(p, energy)
    c, s = _cos_and_sinc(eta2, 2 * p.a)
    out = 2 * kappa * c - (eta2 + lam * lam - kappa * kappa) * s
    return out if np.ndim(out) else float(out)


def _open_gap_grid(mass: float, n: int) -> np.ndarray:
    m = abs(mass)
    return np.linspace(-m, m, n)[1:-1]


def scan_roots(func: Callable, grid: np.ndarray, values: np.ndarray, xtol: float = ROOT_XTOL) -> list[float]:
    """Refine every sign change of ``values`` on ``grid`` with Brent's method."""
    roots = []
    for i in range(len(grid) - 1):
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            roots.append(float(grid[i]))
        elif fa * fb < 0:
            roots.append(brentq(func, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))
    if len(values) and values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def adaptive_gap_roots(func: Callable, mass: float, n_grid: int = DEFAULT_GRID) -> tuple[list[float], int]:
    """Roots of a residual in the open gap, doubling the grid until the
    count has been stable for two consecutive doublings."""
    n = n_grid
    history = []
    while True:
        grid = _open_gap_grid(mass, n)
        roots = scan_roots(func, grid, np.asarray(func(grid)))
        history.append(len(roots))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return roots, n
        if n >= _MAX_GRID:
            return roots, n
        n = 2 * n - 1


def find_bound_states(params: ModelParams, n_grid: int = DEFAULT_GRID, *, lam: float | None = None) -> BoundSpectrum:
    p = as_delta_zero(params)
    if p.mass == 0:
        return BoundSpectrum(params, (), None, 0, 0)

    def f(e):
        return reduced_residual(p, e, lam=lam)

    roots, used = adaptive_gap_roots(f, p.mass, n_grid)
    parities = tuple(_parity(p, e) for e in roots) if p.c_p == 0 else None
    return BoundSpectrum(params, tuple(roots), parities, len(roots), used)


def _parity(p: ModelParams, energy: float) -> Parity:
    kappa, eta2 = _gap_kinematics(p, energy)
    eta = math.sqrt(max(float(eta2), 0.0))
    th = eta * p.a
    even = abs(eta * math.sin(th) - kappa * math.cos(th))
    odd = abs(eta * math.cos(th) + kappa * math.sin(th))
    return Parity.EVEN if even < odd else Parity.ODD


def critical_pseudoscalar(params: ModelParams) -> CriticalCoupling:
    """|c_p| above which r > 0 at every gap energy: sqrt(2 m c_sigma) for m, c_sigma > 0.

    Beyond it the interior is a barrier for all |E| < m. This is not a
    binding threshold: the attractive delta at x = -a can still bind.
    """
    p = as_delta_zero(params)
    m = abs(p.mass)
    depth = max(p.c_sigma * (m + p.mass), p.c_sigma * (-m + p.mass))
    if depth <= 0:
        return CriticalCoupling(None)
    return CriticalCoupling(math.sqrt(depth))


def _branch_plus(p: ModelParams, energy):
    """sqrt(1 + f**2) - f with f = (eta**2 - kappa**2)/(2 eta kappa)."""
    kappa, eta2 = _gap_kinematics(p, energy)
    eta = np.sqrt(eta2)
    f = (eta2 - kappa * kappa) / (2 * eta * kappa)
    root = np.sqrt(1 + f * f)
    # avoid cancellation for large positive f
    return np.where(f > 0, 1 / (f + root), root - f), eta


def parity_split_cp0(params: ModelParams, n_grid: int = DEFAULT_GRID) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Solve tan(eta a) = +-sqrt(1 + f**2) - f branch by branch.

    The '+' branch gives the even states and the '-' branch the odd ones;
    since the two branch values multiply to -1 the odd condition is written
    as cos(eta a) + b_+ sin(eta a) = 0.
    """
    p = as_delta_zero(params)
    if p.c_p != 0:
        raise ValueError("parity is only defined for c_p = 0")
    # a plain square well binds only where eta is real
    grid = _open_gap_grid(p.mass, n_grid)
    _, eta2 = _gap_kinematics(p, grid)
    grid = grid[eta2 > 0]
    if len(grid) < 2:
        return (), ()

    def even(e):
        b, eta = _branch_plus(p, e)
        return np.sin(eta * p.a) - b * np.cos(eta * p.a)

    def odd(e):
        b, eta = _branch_plus(p, e)
        return np.cos(eta * p.a) + b * np.sin(eta * p.a)

    evens = scan_roots(lambda e: float(even(e)), grid, even(grid))
    odds = scan_roots(lambda e: float(odd(e)), grid, odd(grid))
    return tuple(evens), tuple(odds)


def r0_bound_check(params: ModelParams, k_max: float | None = None, n_points: int = 10_000) -> R0Verdict:
    """Scan 2k**2/(lam**2 - 2k**2) - tanh(2ka) for |k| in (0, k_max].

    Certified means the function keeps one sign on the whole scan. Sign
    changes away from the pole at k = lam/sqrt(2) are refined into roots.
    """
    p = as_delta_zero(params)
    lam2 = p.delta_strength**2
    a = p.a
    k_max = abs(p.mass) if k_max is None else k_max
    ks = np.linspace(0, k_max, n_points + 1)[1:]
    with np.errstate(divide="ignore"):
        h = 2 * ks**2 / (lam2 - 2 * ks**2) - np.tanh(2 * ks * a)
    finite = np.isfinite(h)
    signs = np.sign(h[finite])
    single = bool(np.all(signs > 0) or np.all(signs < 0))

    def smooth(k):
        return 2 * k * k * np.cosh(2 * k * a) - (lam2 - 2 * k * k) * np.sinh(2 * k * a)

    pole = math.sqrt(lam2 / 2) if lam2 > 0 else None
    roots = tuple(scan_roots(smooth, ks, smooth(ks)))
    e0 = r0_fixed_energy(p)
    return R0Verdict(
        certified=single,
        roots=roots,
        pole=pole if pole is not None and pole <= k_max else None,
        residual_min=float(np.min(h[finite])),
        residual_max=float(np.max(h[finite])),
        fixed_energy=e0 if isinstance(e0, float) else None,
    )


def spectrum_sweep(params: ModelParams, vary: SweepVariable | str, grid: Sequence[float], n_grid: int = DEFAULT_GRID) -> list[SweepRow]:
    vary = SweepVariable(vary)
    if len(grid) == 0:
        raise ValueError("sweep grid is empty")
    return [SweepRow(float(v), find_bound_states(params.with_(**{vary.value: float(v)}), n_grid)) for v in grid]


def ground_state_trend(rows: Sequence[SweepRow]) -> list[tuple[float, float]]:
    """(sweep value, lowest level) for every row with at least one level."""
    return [(row.value, row.spectrum.energies[0]) for row in rows if row.spectrum.energies]


def spectrum_csv(spectrum: BoundSpectrum) -> str:
    parities = spectrum.parities or (None,) * len(spectrum.energies)
    return format_csv(
        ["level_index", "energy", "parity"],
        ((i, e, par.value if par else None) for i, (e, par) in enumerate(zip(spectrum.energies, parities))),
    )


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return format_csv(
        ["sweep_value", "level_index", "energy"],
        ((row.value, i, e) for row in rows for i, e in enumerate(row.spectrum.energies)),
    )
