"""Parameter model, square profiles, kinematics and discrete symmetries.

Units are natural (hbar = c = 1): energies and couplings share a unit and
lengths carry inverse-energy units. A ``DELTA_ZERO`` problem has

    Sigma(x) = c_sigma * g(x),   Delta(x) = 0,   V_p(x) = c_p * g(x)

and a ``SIGMA_ZERO`` problem swaps the roles of Sigma and Delta. Every
second-order formula in this package is written for ``DELTA_ZERO``; the
``SIGMA_ZERO`` sector is reached through :func:`chiral_transform`, which
flips the signs of the mass and of ``c_p``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable

import numpy as np


class DomainError(ValueError):
    """An energy or parameter lies outside the domain of an operation."""


class CouplingCase(str, enum.Enum):
    DELTA_ZERO = "delta_zero"
    SIGMA_ZERO = "sigma_zero"


class DeltaConvention(str, enum.Enum):
    """Strength of the boundary deltas in the effective potential.

    ``PAPER_HALF`` uses c_p/2, ``DIRAC_FULL`` uses c_p. Only the latter is
    consistent with continuity of both spinor components.
    """

    PAPER_HALF = "paper_half"
    DIRAC_FULL = "dirac_full"


class RegimeKind(str, enum.Enum):
    WELL_LIKE = "well_like"
    DOUBLE_DELTA = "double_delta"
    BARRIER_LIKE = "barrier_like"


class R0Locus(str, enum.Enum):
    """Non-numeric outcomes of :func:`r0_fixed_energy`."""

    NEVER = "never"
    EVERYWHERE = "everywhere"


_JSON_KEYS = ("mass", "half_width", "c_sigma", "c_p", "coupling_case", "delta_convention")


@dataclass(frozen=True)
class ModelParams:
    mass: float = 1.0
    half_width: float = 1.0
    c_sigma: float = 0.0
    c_p: float = 0.0
    coupling_case: CouplingCase = CouplingCase.DELTA_ZERO
    delta_convention: DeltaConvention = DeltaConvention.PAPER_HALF

    def __post_init__(self) -> None:
        for name in ("mass", "half_width", "c_sigma", "c_p"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.half_width <= 0:
            raise ValueError(f"half_width must be > 0, got {self.half_width}")
        object.__setattr__(self, "coupling_case", CouplingCase(self.coupling_case))
        object.__setattr__(self, "delta_convention", DeltaConvention(self.delta_convention))

    @property
    def a(self) -> float:
        return self.half_width

    @property
    def delta_strength(self) -> float:
        """Boundary delta strength lambda under the selected convention."""
        if self.delta_convention is DeltaConvention.PAPER_HALF:
            return 0.5 * self.c_p
        return self.c_p

    def with_(self, **changes: Any) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["coupling_case"] = self.coupling_case.value
        d["delta_convention"] = self.delta_convention.value
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelParams":
        unknown = sorted(set(data) - set(_JSON_KEYS))
        if unknown:
            raise KeyError(f"unknown parameter key(s): {', '.join(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    r_value: float


@dataclass(frozen=True)
class Kinematics:
    energy: float
    k: complex
    eta: complex
    r: float
    regime: Regime


def as_delta_zero(params: ModelParams) -> ModelParams:
    """Return an equivalent DELTA_ZERO problem (identity for DELTA_ZERO input)."""
    if params.coupling_case is CouplingCase.SIGMA_ZERO:
        return chiral_transform(params)
    return params


def profile_g(x, a: float):
    """Square profile: -1 inside (-a, a), 0 outside, -1/2 at the edges."""
    x = np.asarray(x, dtype=float)
    g = 0.5 * (np.sign(x - a) - np.sign(x + a))
    return g.item() if g.ndim == 0 else g


def potentials(params: ModelParams, x):
    """Return (Sigma, Delta, V_p) evaluated at ``x``."""
    g = profile_g(x, params.a)
    vp = params.c_p * g
    coupled = params.c_sigma * g
    zero = 0.0 * g
    if params.coupling_case is CouplingCase.DELTA_ZERO:
        return coupled, zero, vp
    return zero, coupled, vp


def r_parameter(params: ModelParams, energy: float) -> float:
    """Interior value of the effective potential, c_p**2 - c_sigma*(E + m)."""
    p = as_delta_zero(params)
    return p.c_p**2 - p.c_sigma * (energy + p.mass)


def classify_regime(params: ModelParams, energy: float) -> Regime:
    r = r_parameter(params, energy)
    if r < 0:
        kind = RegimeKind.WELL_LIKE
    elif r > 0:
        kind = RegimeKind.BARRIER_LIKE
    else:
        kind = RegimeKind.DOUBLE_DELTA
    return Regime(kind, r)


def wavenumber(energy: float, mass: float) -> complex:
    """k with k**2 = E**2 - m**2; real >= 0 outside the gap, +i|k| inside."""
    k2 = energy * energy - mass * mass
    if k2 >= 0:
        return complex(math.sqrt(k2), 0.0)
    return complex(0.0, math.sqrt(-k2))


def kinematics(params: ModelParams, energy: float) -> Kinematics:
    p = as_delta_zero(params)
    if energy == -p.mass:
        raise DomainError(
            f"E = -m = {energy} is the isolated-solution point; the second-order "
            "reduction does not apply there"
        )
    k = wavenumber(energy, p.mass)
    regime = classify_regime(p, energy)
    eta = complex(np.sqrt(complex(k * k - regime.r_value)))
    return Kinematics(energy=energy, k=k, eta=eta, r=regime.r_value, regime=regime)


def effective_potential(params: ModelParams, energy: float) -> tuple[float, tuple[float, float]]:
    """Flat interior value and the delta strengths at x = -a and x = +a."""
    p = as_delta_zero(params)
    lam = p.delta_strength
    return r_parameter(p, energy), (-lam, lam)


def r0_fixed_energy(params: ModelParams) -> float | R0Locus:
    """Energy at which r = 0, or an :class:`R0Locus` when there is no single one."""
    p = as_delta_zero(params)
    if p.c_sigma == 0:
        return R0Locus.EVERYWHERE if p.c_p == 0 else R0Locus.NEVER
    return p.c_p**2 / p.c_sigma - p.mass


def chiral_transform(params: ModelParams) -> ModelParams:
    """Image under psi -> sigma_1 psi: swaps Sigma and Delta, negates m and V_p.

    The spectrum and the transmission coefficient are unchanged.
    """
    case = (
        CouplingCase.SIGMA_ZERO
        if params.coupling_case is CouplingCase.DELTA_ZERO
        else CouplingCase.DELTA_ZERO
    )
    return replace(params, coupling_case=case, mass=-params.mass, c_p=-params.c_p)


def charge_conjugate(params: ModelParams) -> tuple[ModelParams, Callable[[float], float]]:
    """Image under psi -> sigma_1 psi*, plus the energy map E -> -E.

    Sigma -> -Delta, Delta -> -Sigma and V_p -> -V_p, so a DELTA_ZERO problem
    becomes a SIGMA_ZERO one with both couplings negated.
    """
    case = (
        CouplingCase.SIGMA_ZERO
        if params.coupling_case is CouplingCase.DELTA_ZERO
        else CouplingCase.DELTA_ZERO
    )
    image = replace(params, coupling_case=case, c_sigma=-params.c_sigma, c_p=-params.c_p)
    return image, _negate


def _negate(energy: float) -> float:
    return -energy


def chiral_potentials(mass, sigma, delta, vp):
    """(m, Sigma, Delta, V_p) of the chirally transformed Hamiltonian."""
    return -mass, delta, sigma, -vp


def charge_conjugate_potentials(mass, sigma, delta, vp):
    """(m, Sigma, Delta, V_p) of H_c; its eigenvalues are the negated ones of H."""
    return mass, -delta, -sigma, -vp


def group_velocity(energy: float, mass: float, direction: int = 1) -> float:
    """dE/dk = k/|E| with the sign of the propagation direction."""
    if abs(energy) <= abs(mass):
        raise DomainError(f"group velocity needs |E| > |m|, got E={energy}, m={mass}")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    k = math.sqrt(energy * energy - mass * mass)
    return direction * k / math.sqrt(k * k + mass * mass)
