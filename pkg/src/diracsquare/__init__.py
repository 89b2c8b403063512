"""Dirac fermions in 1+1 dimensions scattering off and binding in square
vector, scalar and pseudoscalar potentials."""
from .bound import BoundSpectrum, find_bound_states
from .core import CouplingCase, DeltaConvention, DomainError, ModelParams
from .oracle import oracle_bound_states, oracle_transmission
from .scattering import resonance_energies, solve_amplitudes, transmission_closed_form

__all__ = [
    "BoundSpectrum",
    "CouplingCase",
    "DeltaConvention",
    "DomainError",
    "ModelParams",
    "find_bound_states",
    "oracle_bound_states",
    "oracle_transmission",
    "resonance_energies",
    "solve_amplitudes",
    "transmission_closed_form",
]
