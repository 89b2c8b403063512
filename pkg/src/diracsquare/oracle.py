"""Reference solutions of the first-order Dirac system.

In a region where Sigma, Delta and V_p are constant the pair
(psi_+, psi_-) obeys Psi' = K Psi with

    K = [[ V_p,           i(E + m - Delta)],
         [ i(E - m - Sigma), -V_p          ]]

K is traceless, so exp(K L) = cosh(mu L) I + sinh(mu L)/mu K with
mu**2 = -det K. Both spinor components are continuous at x = +-a because
every potential is bounded, so the transfer matrix across the well is a
plain product of region propagators. Nothing here depends on the delta
strength convention of the second-order route.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from ._csv import format_csv
from .bound import DEFAULT_GRID, adaptive_gap_roots
from .core import CouplingCase, DomainError, ModelParams, potentials, wavenumber


class Region(str, enum.Enum):
    LEFT = "left"
    INSIDE = "inside"
    RIGHT = "right"


class DegenerateBasisError(ValueError):
    pass


@dataclass(frozen=True)
class RegionSolutionBasis:
    """Two independent exact solutions in one constant-potential region.

    When the momenta are distinct element j is spinor_coeffs[j] * exp(i p_j x).
    When they coincide (p = 0) the solutions are the columns of I + x K.
    """

    region: Region
    sigma_const: float
    delta_const: float
    vp_const: float
    momenta: tuple[complex, complex]
    spinor_coeffs: tuple[tuple[complex, complex], tuple[complex, complex]] | None
    generator: np.ndarray

    @property
    def degenerate(self) -> bool:
        return self.spinor_coeffs is None

    def evaluate(self, j: int, x):
        """(psi_+, psi_-) and their x-derivatives for basis element ``j``."""
        x = np.asarray(x, dtype=float)
        if self.degenerate:
            col = np.eye(2, dtype=complex)[:, j]
            kc = self.generator @ col
            psi = col[:, None] + np.outer(kc, x.ravel())
            dpsi = np.repeat(kc[:, None], x.size, axis=1)
            return psi.reshape((2,) + x.shape), dpsi.reshape((2,) + x.shape)
        p = self.momenta[j]
        up, lo = self.spinor_coeffs[j]
        phase = np.exp(1j * p * x)
        psi = np.array([up * phase, lo * phase])
        return psi, 1j * p * psi


def generator(mass: float, sigma: float, delta: float, vp: float, energy: float) -> np.ndarray:
    return np.array(
        [[vp, 1j * (energy + mass - delta)], [1j * (energy - mass - sigma), -vp]],
        dtype=complex,
    )


def propagator(kmat: np.ndarray, length: float) -> np.ndarray:
    """exp(K L) for a traceless 2x2 K."""
    mu = cmath.sqrt(-np.linalg.det(kmat))
    z = mu * length
    ch = cmath.cosh(z)
    sh = length * (1 + z * z / 6) if abs(z) < 1e-8 else cmath.sinh(z) / mu
    return ch * np.eye(2, dtype=complex) + sh * kmat


def _region_values(params: ModelParams, region: Region):
    x = {Region.LEFT: -2 * params.a, Region.INSIDE: 0.0, Region.RIGHT: 2 * params.a}[region]
    sigma, delta, vp = potentials(params, x)
    return float(sigma), float(delta), float(vp)


def region_basis(params: ModelParams, region: Region | str, energy: float) -> RegionSolutionBasis:
    region = Region(region)
    sigma, delta, vp = _region_values(params, region)
    m = params.mass
    kmat = generator(m, sigma, delta, vp, energy)
    p2 = (energy + m - delta) * (energy - m - sigma) - vp * vp
    p = cmath.sqrt(p2)
    if p2 == 0:
        return RegionSolutionBasis(region, sigma, delta, vp, (0j, 0j), None, kmat)
    upper_coupling = energy + m - delta
    lower_coupling = energy - m - sigma
    coeffs = []
    for mom in (p, -p):
        if abs(upper_coupling) >= abs(lower_coupling):
            coeffs.append((1.0 + 0j, (mom + 1j * vp) / upper_coupling))
        else:
            coeffs.append(((mom - 1j * vp) / lower_coupling, 1.0 + 0j))
    return RegionSolutionBasis(region, sigma, delta, vp, (p, -p), tuple(coeffs), kmat)


def _segments(params: ModelParams, x0: float, x1: float) -> list[tuple[float, float]]:
    cuts = sorted({x0, x1, *[c for c in (-params.a, params.a) if min(x0, x1) < c < max(x0, x1)]})
    if x1 < x0:
        cuts = cuts[::-1]
    return list(zip(cuts[:-1], cuts[1:]))


def transfer_matrix(params: ModelParams, energy: float, x0: float | None = None, x1: float | None = None) -> np.ndarray:
    """Matrix carrying (psi_+, psi_-) from ``x0`` to ``x1`` (default -a to +a)."""
    x0 = -params.a if x0 is None else x0
    x1 = params.a if x1 is None else x1
    out = np.eye(2, dtype=complex)
    for lo, hi in _segments(params, x0, x1):
        sigma, delta, vp = potentials(params, 0.5 * (lo + hi))
        kmat = generator(params.mass, float(sigma), float(delta), float(vp), energy)
        out = propagator(kmat, hi - lo) @ out
    return out


def _free_spinor(energy: float, mass: float, q: float) -> np.ndarray:
    return np.array([1.0, q / (energy + mass)], dtype=complex)


def oracle_scattering(params: ModelParams, energy: float) -> tuple[complex, complex]:
    """Reflection and transmission amplitudes from the first-order system."""
    m, a = params.mass, params.a
    if not abs(energy) > abs(m):
        raise DomainError(f"scattering needs |E| > |m|; got E={energy}")
    k = wavenumber(energy, m).real
    q = k if energy + m > 0 else -k
    u_in, u_back = _free_spinor(energy, m, q), _free_spinor(energy, m, -q)
    mat = transfer_matrix(params, energy)
    # tau u_in e^{iqa} - rho M u_back e^{-iq(-a)} = M u_in e^{-iqa}
    lhs = np.column_stack([-(mat @ u_back) * cmath.exp(1j * q * a), u_in * cmath.exp(1j * q * a)])
    rhs = (mat @ u_in) * cmath.exp(-1j * q * a)
    rho, tau = np.linalg.solve(lhs, rhs)
    return complex(rho), complex(tau)


def oracle_transmission(params: ModelParams, energy: float) -> float:
    return abs(oracle_scattering(params, energy)[1]) ** 2


# Bound states. With psi_- = i phi the system is real:
#   psi_+' = V psi_+ - (E + m - Delta) phi,  phi' = (E - m - Sigma) psi_+ - V phi


def _real_generator(mass, sigma, delta, vp, energy) -> np.ndarray:
    return np.array([[vp, -(energy + mass - delta)], [energy - mass - sigma, -vp]], dtype=float)


def _real_propagator(kmat: np.ndarray, length: float) -> np.ndarray:
    mu2 = -np.linalg.det(kmat)
    mu = math.sqrt(abs(mu2))
    z = mu * length
    if abs(z) < 1e-8:
        ch, sh = 1.0, length
    elif mu2 > 0:
        ch, sh = math.cosh(z), math.sinh(z) / mu
    else:
        ch, sh = math.cos(z), math.sin(z) / mu
    return ch * np.eye(2) + sh * kmat


def _real_transfer(params: ModelParams, energy: float, x0: float, x1: float) -> np.ndarray:
    out = np.eye(2)
    for lo, hi in _segments(params, x0, x1):
        sigma, delta, vp = potentials(params, 0.5 * (lo + hi))
        kmat = _real_generator(params.mass, float(sigma), float(delta), float(vp), energy)
        out = _real_propagator(kmat, hi - lo) @ out
    return out


def _tails(params: ModelParams, energy):
    """Decaying (psi_+, phi) directions: left ~ e^{kappa x}, right ~ e^{-kappa x}."""
    e = np.asarray(energy, dtype=float)
    m = params.mass
    kappa = np.sqrt(m * m - e * e)
    left = np.array([e + m, -kappa])
    right = np.array([e + m, kappa])
    return kappa, left / np.linalg.norm(left, axis=0), right / np.linalg.norm(right, axis=0)


def _propagate_real(params: ModelParams, energy, x0: float, x1: float, vec):
    """Carry real (psi_+, phi) columns from x0 to x1, one energy per column."""
    e = np.asarray(energy, dtype=float)
    v = np.array(vec, dtype=float)
    for lo, hi in _segments(params, x0, x1):
        sigma, delta, vp = (float(u) for u in potentials(params, 0.5 * (lo + hi)))
        up = e + params.mass - delta
        dn = e - params.mass - sigma
        mu2 = vp * vp - up * dn
        mu = np.sqrt(np.abs(mu2))
        z = mu * (hi - lo)
        with np.errstate(invalid="ignore", divide="ignore"):
            ch = np.where(mu2 > 0, np.cosh(z), np.cos(z))
            sh = np.where(mu2 > 0, np.sinh(z), np.sin(z)) / mu
        sh = np.where(np.abs(z) < 1e-8, hi - lo, sh)
        kv0 = vp * v[0] - up * v[1]
        kv1 = dn * v[0] - vp * v[1]
        v = np.array([ch * v[0] + sh * kv0, ch * v[1] + sh * kv1])
    return v


def matching_determinant(params: ModelParams, energy):
    """Wronskian at x = 0 of the left- and right-decaying solutions (vectorised)."""
    _, vl, vr = _tails(params, energy)
    ul = _propagate_real(params, energy, -params.a, 0.0, vl)
    ur = _propagate_real(params, energy, params.a, 0.0, vr)
    ul = ul / np.linalg.norm(ul, axis=0)
    ur = ur / np.linalg.norm(ur, axis=0)
    out = ul[0] * ur[1] - ul[1] * ur[0]
    return out if np.ndim(out) else float(out)


def oracle_bound_states(params: ModelParams, n_grid: int = DEFAULT_GRID) -> list[float]:
    if params.mass == 0:
        return []
    roots, _ = adaptive_gap_roots(lambda e: matching_determinant(params, e), params.mass, n_grid)
    return roots


def lower_from_upper(params: ModelParams, energy: float, psi_plus, dpsi_plus, x, vp=None):
    """psi_- = -i (psi_+' - V_p psi_+)/(E + m) for a DELTA_ZERO problem.

    ``vp`` overrides V_p(x), e.g. to pick a one-sided value at x = +-a.
    """
    if params.coupling_case is not CouplingCase.DELTA_ZERO:
        raise ValueError("lower_from_upper applies to the DELTA_ZERO case")
    if energy == -params.mass:
        raise DomainError("E = -m: psi_- is not determined by psi_+")
    if vp is None:
        vp = potentials(params, x)[2]
    return -1j * (np.asarray(dpsi_plus) - np.asarray(vp) * np.asarray(psi_plus)) / (energy + params.mass)


@dataclass(frozen=True)
class SpinorSample:
    energy: float
    grid: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    j0: np.ndarray
    j1: np.ndarray


def _sample(energy, grid, psi):
    up, lo = psi
    j0 = np.abs(up) ** 2 + np.abs(lo) ** 2
    j1 = 2 * np.real(np.conj(up) * lo)
    return SpinorSample(energy, grid, up, lo, j0, j1)


def _propagate_points(params: ModelParams, energy: float, start: float, state: np.ndarray, xs) -> np.ndarray:
    out = np.empty((2, len(xs)), dtype=state.dtype)
    for i, x in enumerate(xs):
        mat = transfer_matrix(params, energy, start, x) if np.iscomplexobj(state) else _real_transfer(params, energy, start, x)
        out[:, i] = mat @ state
    return out


def scattering_spinor(params: ModelParams, energy: float, grid) -> SpinorSample:
    grid = np.asarray(grid, dtype=float)
    m, a = params.mass, params.a
    rho, tau = oracle_scattering(params, energy)
    k = wavenumber(energy, m).real
    q = k if energy + m > 0 else -k
    u_in, u_back = _free_spinor(energy, m, q), _free_spinor(energy, m, -q)
    psi = np.empty((2, grid.size), dtype=complex)
    left, right = grid < -a, grid > a
    inside = ~(left | right)
    xl = grid[left]
    psi[:, left] = np.outer(u_in, np.exp(1j * q * xl)) + rho * np.outer(u_back, np.exp(-1j * q * xl))
    xr = grid[right]
    psi[:, right] = tau * np.outer(u_in, np.exp(1j * q * xr))
    start = u_in * cmath.exp(-1j * q * a) + rho * u_back * cmath.exp(1j * q * a)
    psi[:, inside] = _propagate_points(params, energy, -a, start, grid[inside])
    return _sample(energy, grid, psi)


class _BoundState:
    """Real (psi_+, phi) bound solution, matched at x = 0 and normalised."""

    def __init__(self, params: ModelParams, energy: float):
        self.params, self.energy = params, energy
        a = params.a
        kappa, vl, vr = _tails(params, energy)
        self.kappa = float(kappa)
        self.vl = vl
        ul = _real_transfer(params, energy, -a, 0.0) @ vl
        ur = _real_transfer(params, energy, a, 0.0) @ vr
        self.vr = vr * (ul @ ur) / (ur @ ur)
        self.scale = 1.0
        self.scale = 1.0 / math.sqrt(self.norm2())

    def _inside(self, x: float) -> np.ndarray:
        a = self.params.a
        if x <= 0:
            return _real_transfer(self.params, self.energy, -a, x) @ self.vl
        return _real_transfer(self.params, self.energy, a, x) @ self.vr

    def state(self, x: float) -> np.ndarray:
        a = self.params.a
        if x < -a:
            v = self.vl * math.exp(self.kappa * (x + a))
        elif x > a:
            v = self.vr * math.exp(-self.kappa * (x - a))
        else:
            v = self._inside(x)
        return self.scale * v

    def norm2(self) -> float:
        """Integral of J0: tails in closed form, interior by adaptive quadrature."""
        a = self.params.a
        tails = (self.vl @ self.vl + self.vr @ self.vr) / (2 * self.kappa)

        def density(x):
            v = self._inside(x)
            return float(v @ v)

        inner = quad(density, -a, 0.0, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        inner += quad(density, 0.0, a, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        return float(tails + inner) * self.scale**2


def bound_spinor(params: ModelParams, level: int, grid, energies: Sequence[float] | None = None) -> SpinorSample:
    energies = oracle_bound_states(params) if energies is None else list(energies)
    if not 0 <= level < len(energies):
        raise IndexError(f"no bound level {level}; {len(energies)} level(s) found")
    state = _BoundState(params, energies[level])
    grid = np.asarray(grid, dtype=float)
    vals = np.array([state.state(float(x)) for x in grid]).T.reshape(2, grid.size)
    psi = (vals[0].astype(complex), 1j * vals[1])
    return _sample(energies[level], grid, psi)


def spinor_eval(params: ModelParams, grid, *, energy: float | None = None, level: int | None = None) -> SpinorSample:
    """Spinor on ``grid`` for a scattering energy or a bound level index.

    Bound states are normalised so that the integral of J0 over the real
    line is one.
    """
    if (energy is None) == (level is None):
        raise ValueError("give exactly one of energy or level")
    if energy is not None:
        return scattering_spinor(params, energy, grid)
    return bound_spinor(params, level, grid)


def bound_normalization(params: ModelParams, energy: float) -> float:
    return _BoundState(params, energy).norm2()


def spinor_csv(sample: SpinorSample) -> str:
    rows = zip(
        sample.grid.tolist(),
        sample.psi_plus.real.tolist(),
        sample.psi_plus.imag.tolist(),
        sample.psi_minus.real.tolist(),
        sample.psi_minus.imag.tolist(),
        sample.j0.tolist(),
        sample.j1.tolist(),
    )
    return format_csv(["x", "re_psi_plus", "im_psi_plus", "re_psi_minus", "im_psi_minus", "j0", "j1"], rows)


# Isolated solutions at E = -m (DELTA_ZERO): psi_+ = N_+ e^{v},
# psi_- = (N_- - i N_+ I(x)) e^{-v}, v = int V_p, I = int (Sigma + 2m) e^{2v}.


@dataclass(frozen=True)
class IsolatedVerdict:
    exists: bool
    reason: str
    v_left: float
    v_right: float


def v_integral(vp, x: float, x0: float = 0.0, breakpoints: Sequence[float] = ()) -> float:
    """int_{x0}^{x} V_p(y) dy for an arbitrary profile by adaptive quadrature."""
    pts = [p for p in breakpoints if min(x0, x) < p < max(x0, x)]
    return quad(vp, x0, x, points=pts or None, limit=200)[0]


def i_integral(sigma, vp, mass: float, x: float, x0: float = 0.0, breakpoints: Sequence[float] = ()) -> float:
    pts = [p for p in breakpoints if min(x0, x) < p < max(x0, x)]

    def integrand(y):
        return (sigma(y) + 2 * mass) * math.exp(2 * v_integral(vp, y, x0, breakpoints))

    return quad(integrand, x0, x, points=pts or None, limit=200)[0]


def v_integral_square(params: ModelParams, x: float) -> float:
    """v(x) for the square profile, referenced to v = 0 for x < -a."""
    a, cp = params.a, params.c_p
    return -cp * (min(max(x, -a), a) + a)


def i_integral_square(params: ModelParams, x: float) -> float:
    """I(x) for the square profile, referenced to I(-a) = 0 (DELTA_ZERO)."""
    a, m, cs, cp = params.a, params.mass, params.c_sigma, params.c_p
    if x <= -a:
        return 2 * m * (x + a)
    inner_end = min(x, a)
    s = inner_end + a
    inner = (2 * m - cs) * (s if cp == 0 else -math.expm1(-2 * cp * s) / (2 * cp))
    if x <= a:
        return inner
    return inner + 2 * m * math.exp(-4 * a * cp) * (x - a)


def isolated_solution_check(params: ModelParams) -> IsolatedVerdict:
    """Decide whether a normalisable isolated solution exists.

    Both components are e^{+-v} times bounded factors, so they can decay
    only where V_p does not vanish. For the square profile v is flat outside
    [-a, a] and any nonzero N_+ or N_- leaves a constant tail.
    """
    a = params.a
    far = 3 * a
    v_left = v_integral_square(params, -far)
    v_right = v_integral_square(params, far)
    slope_left = v_integral_square(params, -far) - v_integral_square(params, -2 * a)
    slope_right = v_integral_square(params, far) - v_integral_square(params, 2 * a)
    if slope_left == 0 and slope_right == 0:
        reason = "V_p vanishes for |x| > a, so e^{+-v} tends to constants and the tails do not decay"
        return IsolatedVerdict(False, reason, v_left, v_right)
    return IsolatedVerdict(True, "v grows linearly outside the well", v_left, v_right)
